#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "weillab/poly.hpp"

namespace weillab {

using cplx = std::complex<double>;

class Fq;

/// Element of a finite field F_{p^d}: coefficient vector over F_p in the
/// power basis of the field's modulus, always reduced. Elements carry the id
/// of their field so that cross-field operations are rejected.
struct Fe {
    int32_t fid = -1;
    std::array<int64_t, 8> c{};

    bool operator==(const Fe& o) const { return fid == o.fid && c == o.c; }
    bool operator!=(const Fe& o) const { return !(*this == o); }
};

/// The field F_q, q = p^d, p an odd prime. d = 1 is the prime field; for
/// d > 1 arithmetic is polynomial arithmetic modulo a stored monic
/// irreducible. All operations are pure; a constructed Fq is immutable and
/// safe to share across threads.
class Fq {
public:
    static constexpr int kMaxDegree = 8;

    /// Prime field F_p.
    explicit Fq(int64_t p);
    /// Extension field with an explicit monic irreducible modulus over F_p.
    Fq(int64_t p, const PolyP& modulus);
    /// F_{p^d} with the canonical (lexicographically smallest) modulus.
    static Fq extension(int64_t p, int d);

    int64_t p() const { return p_; }
    int degree() const { return d_; }
    int64_t q() const { return q_; }
    const PolyP& modulus() const { return modulus_; }
    int32_t id() const { return id_; }
    std::string name() const;

    // -- element construction ------------------------------------------------
    Fe zero() const;
    Fe one() const;
    /// Embedding of the prime field (canonical residue scalars).
    Fe scalar(int64_t a) const;
    Fe from_coeffs(const std::vector<int64_t>& coeffs) const;
    /// The power-basis generator x (requires d > 1).
    Fe gen() const;

    /// Enumeration: index = sum c_i p^i in [0, q).
    Fe elem(int64_t index) const;
    int64_t index(const Fe& a) const;

    // -- arithmetic ------------------------------------------------------------
    Fe add(const Fe& a, const Fe& b) const;
    Fe sub(const Fe& a, const Fe& b) const;
    Fe neg(const Fe& a) const;
    Fe mul(const Fe& a, const Fe& b) const;
    Fe inv(const Fe& a) const;  // throws DivisionByZero on 0
    Fe pow(const Fe& a, int64_t e) const;
    bool is_zero(const Fe& a) const;
    Fe mul_scalar(const Fe& a, int64_t s) const;

    Fe half() const { return scalar(inv_mod(2, p_)); }
    Fe quarter() const { return scalar(inv_mod(4, p_)); }

    /// Constant-coefficient extraction; requires the element to lie in the
    /// prime subfield.
    int64_t to_int(const Fe& a) const;

    // -- Galois machinery -------------------------------------------------------
    Fe frobenius(const Fe& a, int times = 1) const;  // a^(p^times)

    /// Trace of multiplication-by-a as an F_p-linear map, i.e. sum of the d
    /// Galois conjugates. Result lies in F_p.
    int64_t trace_to_prime(const Fe& a) const;
    /// Product of the d Galois conjugates.
    int64_t norm_to_prime(const Fe& a) const;

    /// Relative trace/norm down to a subfield F_{p^e}, e | d. The result is
    /// expressed in `sub` through the canonical embedding (the lex-smallest
    /// root of sub's modulus in this field). Throws FieldMismatch if sub is
    /// not a subfield.
    Fe trace_to(const Fq& sub, const Fe& a) const;
    Fe norm_to(const Fq& sub, const Fe& a) const;

    /// Quadratic character: +1 iff a is a nonzero square. Throws DomainError
    /// on a = 0.
    int quad_char(const Fe& a) const;

    /// Canonical additive character psi(a) = exp(2*pi*i*Tr(a)/p).
    std::complex<double> psi(const Fe& a) const;
    std::complex<double> psi_int(int64_t t) const;  // exp(2*pi*i*t/p)

    /// Quadratic Gauss sum sum_z psi(c * z^2); c /= 0 for the non-trivial
    /// character requirement.
    std::complex<double> gauss_sum(const Fe& c) const;
    std::complex<double> gauss_sum() const { return gauss_sum(one()); }

    bool eq(const Fe& a, const Fe& b) const { return a == b; }

private:
    void init();
    void check(const Fe& a) const;
    const Fq* subfield_embedding(const Fq& sub, Fe& root) const;
    Fe express_in_subfield(const Fq& sub, const Fe& a) const;

    int64_t p_ = 0;
    int d_ = 1;
    int64_t q_ = 0;
    PolyP modulus_;  // monic irreducible of degree d over F_p (d > 1)
    int32_t id_ = -1;
    std::vector<std::complex<double>> psi_p_;  // p-th roots of unity
};

}  // namespace weillab
