#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "weillab/modular.hpp"

namespace weillab {

/// Univariate polynomial over F_p. Coefficients ascending (c[0] is the
/// constant term), always reduced mod p, no trailing zeros. The zero
/// polynomial has an empty coefficient vector and degree -1.
struct PolyP {
    int64_t p = 0;
    std::vector<int64_t> c;

    PolyP() = default;
    PolyP(int64_t prime, std::vector<int64_t> coeffs);

    int deg() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    int64_t lead() const { return c.back(); }
    int64_t coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c.size())) ? c[static_cast<size_t>(i)] : 0;
    }
    bool is_monic() const { return !c.empty() && c.back() == 1; }
    bool operator==(const PolyP& o) const { return p == o.p && c == o.c; }
    std::string str(const std::string& var = "x") const;
};

PolyP poly_x(int64_t p);
PolyP poly_const(int64_t p, int64_t a);

PolyP operator+(const PolyP& a, const PolyP& b);
PolyP operator-(const PolyP& a, const PolyP& b);
PolyP operator*(const PolyP& a, const PolyP& b);
PolyP scale(const PolyP& a, int64_t s);

/// Quotient and remainder; b must be nonzero.
std::pair<PolyP, PolyP> divmod(const PolyP& a, const PolyP& b);
PolyP poly_mod(const PolyP& a, const PolyP& b);

PolyP monic(const PolyP& a);
PolyP gcd(const PolyP& a, const PolyP& b);  // monic gcd
/// Extended Euclid: returns (g, s, t), g monic, with s*a + t*b = g.
std::tuple<PolyP, PolyP, PolyP> ext_gcd(const PolyP& a, const PolyP& b);
PolyP derivative(const PolyP& a);
int64_t eval(const PolyP& a, int64_t x);

/// base^e mod f.
PolyP pow_mod(const PolyP& base, int64_t e, const PolyP& f);
/// x^(p^k) mod f via repeated Frobenius.
PolyP frobenius_power(const PolyP& f, int k);

bool is_irreducible_modp(const PolyP& f);

/// Lexicographically smallest monic irreducible of degree d over F_p,
/// ordering coefficient tuples (c_{d-1},...,c_0) ascending.
PolyP canonical_irreducible(int64_t p, int d);

/// Full factorization into monic irreducibles with multiplicities, leading
/// unit returned separately by normalizing the input. Squarefree split +
/// distinct-degree + equal-degree (Cantor-Zassenhaus) stages; EDF draws from
/// a deterministic seeded RNG. Throws DomainError on the zero polynomial.
std::vector<std::pair<PolyP, int>> factor_modp(const PolyP& f, uint64_t seed = 0);

/// Reference factorizer: trial division by every monic polynomial of degree
/// <= deg(f)/2, in lexicographic order. Exponentially slower but independent
/// of the production path; used as the test oracle.
std::vector<std::pair<PolyP, int>> factor_modp_trial(const PolyP& f);

/// x^deg * f(1/x), normalized monic. Requires f(0) != 0.
PolyP reciprocal(const PolyP& f);

// ---------------------------------------------------------------------------

/// Univariate polynomial over Z, same coefficient layout as PolyP.
struct PolyZ {
    std::vector<int64_t> c;

    PolyZ() = default;
    explicit PolyZ(std::vector<int64_t> coeffs);

    int deg() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    int64_t coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c.size())) ? c[static_cast<size_t>(i)] : 0;
    }
    bool is_monic() const { return !c.empty() && c.back() == 1; }
    bool operator==(const PolyZ& o) const { return c == o.c; }
    std::string str(const std::string& var = "x") const;
};

PolyZ operator*(const PolyZ& a, const PolyZ& b);
int64_t eval(const PolyZ& a, int64_t x);
PolyZ derivative(const PolyZ& a);
PolyP reduce_modp(const PolyZ& a, int64_t p);

/// Exact division; returns false if b does not divide a over Z.
bool divide_exact(const PolyZ& a, const PolyZ& b, PolyZ& quotient);

/// True iff x^deg * f(1/x) == f (self-reciprocal / palindromic).
bool is_self_reciprocal(const PolyZ& f);

bool is_squarefree_modp(const PolyZ& f, int64_t p);

/// Irreducibility over Q for monic integer polynomials, deg <= 8 (throws
/// Unsupported above the cap). Rational-root test plus bounded integer
/// coefficient search for factors of degree <= deg/2, pruned by divisibility
/// of g(0) | f(0), g(1) | f(1), g(-1) | f(-1) and Mignotte-style bounds.
bool is_irreducible_Q(const PolyZ& f);

/// Factorization of a monic integer polynomial into monic irreducibles over
/// Q (all factors are integral by Gauss's lemma). Same cap as above.
std::vector<PolyZ> factor_Q(const PolyZ& f);

}  // namespace weillab
