#include "weillab/modular.hpp"

namespace weillab {

int64_t pow_mod(int64_t base, int64_t exp, int64_t p) {
    base = mod_reduce(base, p);
    int64_t acc = 1 % p;
    while (exp > 0) {
        if (exp & 1) acc = mul_mod(acc, base, p);
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    return acc;
}

int64_t inv_mod(int64_t a, int64_t p) {
    a = mod_reduce(a, p);
    if (a == 0) throw DivisionByZero("inverse of zero mod " + std::to_string(p));
    // Extended Euclid; p need not be huge so this is plenty fast.
    int64_t r0 = p, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
        int64_t q = r0 / r1;
        int64_t r2 = r0 - q * r1;
        int64_t s2 = s0 - q * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if (r0 != 1) throw DivisionByZero("non-invertible element mod " + std::to_string(p));
    return mod_reduce(s0, p);
}

bool is_prime(int64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    if (n % 3 == 0) return n == 3;
    for (int64_t d = 5; d * d <= n; d += 6) {
        if (n % d == 0 || n % (d + 2) == 0) return false;
    }
    return true;
}

std::vector<int64_t> primes_up_to(int64_t n) {
    std::vector<int64_t> out;
    if (n < 2) return out;
    std::vector<bool> composite(static_cast<size_t>(n) + 1, false);
    for (int64_t i = 2; i <= n; ++i) {
        if (composite[static_cast<size_t>(i)]) continue;
        out.push_back(i);
        for (int64_t j = i * i; j <= n; j += i) composite[static_cast<size_t>(j)] = true;
    }
    return out;
}

}  // namespace weillab
