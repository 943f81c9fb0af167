#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "weillab/errors.hpp"

namespace weillab {

/// Canonical residue of a in [0, p).
inline int64_t mod_reduce(int64_t a, int64_t p) {
    int64_t r = a % p;
    return r < 0 ? r + p : r;
}

inline int64_t add_mod(int64_t a, int64_t b, int64_t p) { return mod_reduce(a + b, p); }
inline int64_t sub_mod(int64_t a, int64_t b, int64_t p) { return mod_reduce(a - b, p); }

inline int64_t mul_mod(int64_t a, int64_t b, int64_t p) {
    return static_cast<int64_t>(static_cast<__int128>(a) * b % p);
}

int64_t pow_mod(int64_t base, int64_t exp, int64_t p);

/// Inverse mod p (p prime); throws DivisionByZero on a ≡ 0.
int64_t inv_mod(int64_t a, int64_t p);

bool is_prime(int64_t n);

/// All primes <= n, by sieve.
std::vector<int64_t> primes_up_to(int64_t n);

/// Deterministic RNG wrapper; all sampled verification paths go through this
/// so that runs are reproducible for a given seed.
class Rng {
public:
    explicit Rng(uint64_t seed = 0) : eng_(seed) {}

    /// Uniform integer in [0, n), n > 0. Rejection sampling, portable across
    /// standard library implementations.
    uint64_t below(uint64_t n) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace weillab
