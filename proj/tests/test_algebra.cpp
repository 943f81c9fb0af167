#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "weillab/fq.hpp"
#include "weillab/poly.hpp"

using namespace weillab;

namespace {

// Independent oracle for the relative trace/norm: the matrix of
// multiplication by x in the power basis over F_p, reduced mod p, then the
// honest matrix trace / determinant.
int64_t trace_oracle(const Fq& F, const Fe& x) {
    const int d = F.degree();
    // column j = coefficients of x * basis_j
    std::vector<std::vector<int64_t>> m(static_cast<size_t>(d), std::vector<int64_t>(static_cast<size_t>(d), 0));
    for (int j = 0; j < d; ++j) {
        std::vector<int64_t> ej(static_cast<size_t>(d), 0);
        ej[static_cast<size_t>(j)] = 1;
        Fe bj = F.from_coeffs(ej);
        Fe xb = F.mul(x, bj);
        for (int i = 0; i < d; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(j)] = xb.c[static_cast<size_t>(i)];
    }
    int64_t tr = 0;
    for (int i = 0; i < d; ++i) tr = mod_reduce(tr + m[static_cast<size_t>(i)][static_cast<size_t>(i)], F.p());
    return tr;
}

int64_t det_mod_p(std::vector<std::vector<int64_t>> m, int64_t p) {
    const int n = static_cast<int>(m.size());
    int64_t det = 1;
    for (int c = 0, r = 0; c < n && r < n; ++c) {
        int piv = -1;
        for (int i = r; i < n; ++i)
            if (m[static_cast<size_t>(i)][static_cast<size_t>(c)] % p != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return 0;
        if (piv != r) {
            std::swap(m[static_cast<size_t>(piv)], m[static_cast<size_t>(r)]);
            det = mod_reduce(-det, p);
        }
        det = mul_mod(det, m[static_cast<size_t>(r)][static_cast<size_t>(c)], p);
        int64_t ipv = inv_mod(m[static_cast<size_t>(r)][static_cast<size_t>(c)], p);
        for (int i = r + 1; i < n; ++i) {
            int64_t f = mul_mod(m[static_cast<size_t>(i)][static_cast<size_t>(c)], ipv, p);
            for (int j = c; j < n; ++j)
                m[static_cast<size_t>(i)][static_cast<size_t>(j)] = mod_reduce(
                    m[static_cast<size_t>(i)][static_cast<size_t>(j)] - f * m[static_cast<size_t>(r)][static_cast<size_t>(j)], p);
        }
        ++r;
    }
    return det;
}

int64_t norm_oracle(const Fq& F, const Fe& x) {
    const int d = F.degree();
    std::vector<std::vector<int64_t>> m(static_cast<size_t>(d), std::vector<int64_t>(static_cast<size_t>(d), 0));
    for (int j = 0; j < d; ++j) {
        std::vector<int64_t> ej(static_cast<size_t>(d), 0);
        ej[static_cast<size_t>(j)] = 1;
        Fe xb = F.mul(x, F.from_coeffs(ej));
        for (int i = 0; i < d; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(j)] = xb.c[static_cast<size_t>(i)];
    }
    return det_mod_p(m, F.p());
}

PolyP product_of_factors(int64_t p, const std::vector<std::pair<PolyP, int>>& fs) {
    PolyP acc = poly_const(p, 1);
    for (const auto& [f, m] : fs)
        for (int i = 0; i < m; ++i) acc = acc * f;
    return acc;
}

}  // namespace

TEST_CASE("prime field basics") {
    Fq F(5);
    CHECK(F.q() == 5);
    CHECK(F.to_int(F.mul(F.scalar(2), F.scalar(3))) == 1);
    CHECK(F.to_int(F.inv(F.scalar(2))) == 3);
    CHECK_THROWS_AS((void)F.inv(F.zero()), DivisionByZero);
    Fq F7(7);
    CHECK_THROWS_AS((void)F.add(F.one(), F7.one()), FieldMismatch);
    CHECK_THROWS_AS(Fq(4), DomainError);
    CHECK_THROWS_AS(Fq(2), Unsupported);
}

TEST_CASE("extension field with explicit modulus x^2 - 2 over F_5") {
    Fq F(5, PolyP(5, {-2, 0, 1}));
    CHECK(F.q() == 25);
    Fe x = F.gen();
    CHECK(F.to_int(F.mul(x, x)) == 2);
    // trace and norm frozen values
    CHECK(F.trace_to_prime(F.one()) == 2);
    CHECK(F.trace_to_prime(x) == 0);
    CHECK(F.trace_to_prime(F.add(F.scalar(3), x)) == 1);
    CHECK(F.norm_to_prime(F.one()) == 1);
    CHECK(F.norm_to_prime(x) == 3);  // x * x^5 = 4 x^2 = 8 = 3
    CHECK(F.norm_to_prime(F.scalar(2)) == 4);
}

TEST_CASE("trace/norm against multiplication-operator oracle, exhaustive") {
    for (int64_t p : {5, 7}) {
        Fq F = Fq::extension(p, 2);
        for (int64_t i = 0; i < F.q(); ++i) {
            Fe x = F.elem(i);
            CHECK(F.trace_to_prime(x) == trace_oracle(F, x));
            CHECK(F.norm_to_prime(x) == norm_oracle(F, x));
        }
        // additivity of trace, multiplicativity of norm on a few pairs
        for (int64_t i = 1; i < 6; ++i)
            for (int64_t j = 1; j < 6; ++j) {
                Fe a = F.elem(i), b = F.elem(j);
                CHECK(F.trace_to_prime(F.add(a, b)) == mod_reduce(F.trace_to_prime(a) + F.trace_to_prime(b), p));
                CHECK(F.norm_to_prime(F.mul(a, b)) == mul_mod(F.norm_to_prime(a), F.norm_to_prime(b), p));
            }
    }
}

TEST_CASE("relative trace to an intermediate field") {
    Fq F625 = Fq::extension(5, 4);
    Fq F25 = Fq::extension(5, 2);
    // Tr_{F_625/F_25}(1) = 2 (degree of the extension)
    Fe t = F625.trace_to(F25, F625.one());
    CHECK(t == F25.scalar(2));
    // transitivity: Tr_{F625/F5} = Tr_{F25/F5} o Tr_{F625/F25}
    for (int64_t i : {1, 2, 7, 23, 124, 333}) {
        Fe x = F625.elem(i);
        int64_t direct = F625.trace_to_prime(x);
        int64_t via = F25.trace_to_prime(F625.trace_to(F25, x));
        CHECK(direct == via);
    }
    Fq F9 = Fq::extension(3, 2);
    CHECK_THROWS_AS((void)F625.trace_to(F9, F625.one()), FieldMismatch);
}

TEST_CASE("quadratic character") {
    Fq F5(5);
    CHECK(F5.quad_char(F5.scalar(4)) == +1);
    CHECK(F5.quad_char(F5.scalar(2)) == -1);
    Fq F7(7);
    CHECK(F7.quad_char(F7.scalar(3)) == -1);
    CHECK_THROWS_AS((void)F5.quad_char(F5.zero()), DomainError);
    // multiplicativity, all nonzero pairs, p <= 13
    for (int64_t p : {5, 7, 11, 13}) {
        Fq F(p);
        for (int64_t a = 1; a < p; ++a)
            for (int64_t b = 1; b < p; ++b)
                CHECK(F.quad_char(F.scalar(a)) * F.quad_char(F.scalar(b)) ==
                      F.quad_char(F.scalar(a * b)));
    }
    // square-set oracle for p = 13
    Fq F13(13);
    std::vector<bool> is_sq(13, false);
    for (int64_t a = 1; a < 13; ++a) is_sq[static_cast<size_t>(mul_mod(a, a, 13))] = true;
    for (int64_t a = 1; a < 13; ++a) CHECK((F13.quad_char(F13.scalar(a)) == 1) == is_sq[static_cast<size_t>(a)]);
}

TEST_CASE("gauss sums") {
    Fq F5(5);
    cplx g5 = F5.gauss_sum();
    CHECK(std::abs(g5 - cplx(std::sqrt(5.0), 0)) < 1e-9);
    CHECK(std::abs(std::abs(g5) - 2.2360680) < 1e-6);
    Fq F7(7);
    cplx g7 = F7.gauss_sum();
    CHECK(std::abs(g7 - cplx(0, std::sqrt(7.0))) < 1e-9);
    // |G| = sqrt(q) for q in {5,7,9,11,13,25,49}
    for (auto [p, d] : std::vector<std::pair<int64_t, int>>{{5, 1}, {7, 1}, {3, 2}, {11, 1}, {13, 1}, {5, 2}, {7, 2}}) {
        Fq F = Fq::extension(p, d);
        CHECK(std::abs(std::abs(F.gauss_sum()) - std::sqrt(double(F.q()))) < 1e-9);
        // non-trivial multiplier keeps the magnitude
        CHECK(std::abs(std::abs(F.gauss_sum(F.elem(F.q() - 1))) - std::sqrt(double(F.q()))) < 1e-9);
    }
}

TEST_CASE("polynomial factorization mod p, frozen examples") {
    PolyP f1(5, {-1, 0, 1});  // x^2 - 1
    auto fs1 = factor_modp(f1);
    REQUIRE(fs1.size() == 2);
    CHECK(fs1[0].first == PolyP(5, {1, 1}));   // x + 1
    CHECK(fs1[1].first == PolyP(5, {-1, 1}));  // x - 1 = x + 4
    PolyP f2(5, {-2, 0, 1});                   // x^2 - 2 irreducible
    auto fs2 = factor_modp(f2);
    REQUIRE(fs2.size() == 1);
    CHECK(fs2[0].first == monic(f2));
    CHECK(fs2[0].second == 1);
    CHECK(is_irreducible_modp(f2));
    PolyP f3(5, {1, -1, -1, -1, 1});  // x^4 - x^3 - x^2 - x + 1
    auto fs3 = factor_modp(f3);
    int degsum = 0;
    for (const auto& [g, m] : fs3) degsum += g.deg() * m;
    CHECK(degsum == 4);
    CHECK_THROWS_AS((void)factor_modp(PolyP(5, {})), DomainError);
}

TEST_CASE("factor_modp round-trip against the trial-division oracle") {
    Rng rng(2024);
    for (int64_t p : {3, 5, 7}) {
        for (int iter = 0; iter < 60; ++iter) {
            int deg = 1 + static_cast<int>(rng.below(6));
            std::vector<int64_t> c(static_cast<size_t>(deg) + 1);
            for (auto& x : c) x = static_cast<int64_t>(rng.below(static_cast<uint64_t>(p)));
            c[static_cast<size_t>(deg)] = 1 + static_cast<int64_t>(rng.below(static_cast<uint64_t>(p - 1)));
            PolyP f(p, c);
            auto fast = factor_modp(f, iter);
            auto slow = factor_modp_trial(f);
            CHECK(fast == slow);
            CHECK(scale(product_of_factors(p, fast), f.lead()) == f);
            for (const auto& [g, m] : fast) CHECK(is_irreducible_modp(g));
        }
    }
}

TEST_CASE("canonical irreducible modulus is lexicographically smallest") {
    CHECK(canonical_irreducible(5, 2) == PolyP(5, {2, 0, 1}));  // x^2 + 2
    CHECK(canonical_irreducible(3, 2) == PolyP(3, {1, 0, 1}));  // x^2 + 1
    CHECK(canonical_irreducible(7, 2) == PolyP(7, {1, 0, 1}));  // x^2 + 1
}

TEST_CASE("irreducibility over Q") {
    CHECK(is_irreducible_Q(PolyZ({-1, -1, 1})));          // x^2 - x - 1
    CHECK(is_irreducible_Q(PolyZ({1, -1, -1, -1, 1})));   // x^4 - x^3 - x^2 - x + 1
    CHECK_FALSE(is_irreducible_Q(PolyZ({-1, 0, 0, 0, 1})));  // x^4 - 1
    CHECK_FALSE(is_irreducible_Q(PolyZ({1, 2, 1})));
    CHECK(is_irreducible_Q(PolyZ({1, 0, 0, 0, 1})));  // x^4 + 1
    // Phi_30(x), degree 8, irreducible
    CHECK(is_irreducible_Q(PolyZ({1, 1, 0, -1, -1, -1, 0, 1, 1})));
    CHECK_THROWS_AS((void)is_irreducible_Q(PolyZ({1, 0, 0, 0, 0, 0, 0, 0, 0, 1})), Unsupported);
    // factor_Q round trip
    auto fs = factor_Q(PolyZ({-1, 0, 0, 0, 1}));
    REQUIRE(fs.size() == 3);
    PolyZ prod({1});
    for (const auto& g : fs) prod = prod * g;
    CHECK(prod == PolyZ({-1, 0, 0, 0, 1}));
}

TEST_CASE("field axioms under random sampling") {
    Rng rng(616);
    for (auto [p, d] : std::vector<std::pair<int64_t, int>>{{5, 2}, {7, 2}, {13, 1}, {5, 4}}) {
        Fq F = Fq::extension(p, d);
        for (int it = 0; it < 200; ++it) {
            Fe a = F.elem(static_cast<int64_t>(rng.below(static_cast<uint64_t>(F.q()))));
            Fe b = F.elem(static_cast<int64_t>(rng.below(static_cast<uint64_t>(F.q()))));
            Fe c = F.elem(static_cast<int64_t>(rng.below(static_cast<uint64_t>(F.q()))));
            CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
            CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
            CHECK(F.mul(a, b) == F.mul(b, a));
            CHECK(F.add(a, F.neg(a)) == F.zero());
            if (!F.is_zero(a)) {
                CHECK(F.mul(a, F.inv(a)) == F.one());
                // Fermat: a^(q-1) = 1
                CHECK(F.pow(a, F.q() - 1) == F.one());
            }
        }
        // index round trip is a bijection
        for (int64_t i = 0; i < F.q(); ++i) CHECK(F.index(F.elem(i)) == i);
    }
}

TEST_CASE("self-reciprocal detection") {
    CHECK(is_self_reciprocal(PolyZ({1, -3, 1})));
    CHECK(is_self_reciprocal(PolyZ({1, -1, -1, -1, 1})));
    CHECK_FALSE(is_self_reciprocal(PolyZ({2, -3, 1})));
}
