#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "weillab/chaos.hpp"
#include "weillab/reports.hpp"

using namespace weillab;

namespace {

const std::vector<std::vector<int64_t>> kArnold{{2, 1}, {1, 1}};
// strongly generic, irreducible charpoly x^4 - x^3 - x^2 - x + 1
const std::vector<std::vector<int64_t>> kSg4{{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 2, 1}, {0, -1, 1, -1}};
// strongly generic with good reduction at 5, 7, 13 (charpoly x^4-x^3-2x^2-x+1)
const std::vector<std::vector<int64_t>> kSg4b{{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 2}, {0, -1, 2, 1}};

}  // namespace

TEST_CASE("cat map validation and genericity classes") {
    CatMap arnold = make_catmap(kArnold);
    CHECK(arnold.N == 1);
    CHECK(arnold.charpoly == PolyZ({1, -3, 1}));
    CHECK(arnold.gclass == Genericity::StronglyGeneric);

    CatMap big = make_catmap(kSg4);
    CHECK(big.charpoly == PolyZ({1, -1, -1, -1, 1}));
    CHECK(big.gclass == Genericity::StronglyGeneric);

    CatMap b1 = make_catmap({{2, 1}, {1, 1}});
    CatMap b2 = make_catmap({{2, 3}, {1, 2}});
    CatMap gen = catmap_block_diag(b1, b2);
    CHECK(gen.gclass == Genericity::Generic);
    CHECK(gen.charpoly == PolyZ({1, -3, 1}) * PolyZ({1, -4, 1}));

    // the Weyl element is generic (strongly, here) but not hyperbolic
    CHECK(make_catmap({{0, 1}, {-1, 0}}).gclass == Genericity::StronglyGeneric);

    // genuinely non-generic: charpoly (x^2-x-1)(x^2+x-1), an invariant
    // isotropic plane (the factors swap under reciprocal)
    CatMap ng = make_catmap({{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 1, 2}, {0, -1, 2, -1}});
    CHECK(ng.charpoly == PolyZ({1, 0, -3, 0, 1}));
    CHECK(ng.gclass == Genericity::NonGeneric);
    CHECK_THROWS_AS((void)rank_sweep(ng, 200), DomainError);
    CHECK_THROWS_AS((void)bound_check(ng, 7), DomainError);

    CHECK_THROWS_AS((void)make_catmap({{1, 1}, {1, 1}}), DomainError);   // not symplectic
    CHECK_THROWS_AS((void)make_catmap({{1, 0}, {0, 1}}), NotRegular);    // (x-1)^2
    // non-generic: invariant isotropic plane (paired non-self-reciprocal factors)
    CatMap rot = make_catmap({{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 3, 0}, {0, -1, 0, 1}});
    // charpoly (x^2-3x+1)(x^2-x+1): x^2-x+1 is self-reciprocal; pick a real
    // non-generic one instead: block with factor pair f != f*
    CHECK(rot.gclass != Genericity::NonGeneric);  // both factors self-reciprocal here
    std::vector<std::vector<int64_t>> shear{{1, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    CHECK_THROWS_AS((void)make_catmap(shear), NotRegular);  // (x-1)^4
}

TEST_CASE("rank of prime from the factorization pattern") {
    CatMap arnold = make_catmap(kArnold);
    for (int64_t p : {3, 7, 11, 13, 97}) {
        RankInfo ri = rank_of_prime(arnold, p);
        CHECK(ri.r == 1);
    }
    CHECK_THROWS_AS((void)rank_of_prime(arnold, 5), BadPrime);  // disc = 5

    CatMap big = make_catmap(kSg4);
    CHECK(rank_of_prime(big, 5).r == 1);   // irreducible quartic mod 5
    {
        RankInfo ri = rank_of_prime(big, 7);  // two paired quadratics
        CHECK(ri.r == 1);
        CHECK(ri.block_degrees == std::vector<int>{2});
        CHECK(ri.block_split == std::vector<bool>{true});
    }
    CHECK_THROWS_AS((void)rank_of_prime(big, 13), BadPrime);

    CatMap bigb = make_catmap(kSg4b);
    CHECK(rank_of_prime(bigb, 5).r == 1);
    CHECK(rank_of_prime(bigb, 7).r == 1);
    CHECK(rank_of_prime(bigb, 13).r == 2);
}

TEST_CASE("rank_of_prime agrees with the explicit decomposition, p <= 13") {
    for (const auto& entries : {kArnold, kSg4, kSg4b}) {
        CatMap A = make_catmap(entries);
        for (int64_t p : {5, 7, 11, 13}) {
            RankInfo ri;
            try {
                ri = rank_of_prime(A, p);
            } catch (const BadPrime&) {
                continue;
            }
            Fq F(p);
            SympSpace sp = SympSpace::standard(&F, A.N);
            TorusData T = centralizer_torus(reduce_catmap(A, F), sp);
            ModuleStructure ms = symplectic_decomposition(T);
            CHECK(ms.rank() == ri.r);
            std::vector<int> da = ri.block_degrees, db;
            std::vector<bool> sa, sb;
            for (const auto& blk : ms.blocks) db.push_back(blk.ext_degree());
            std::sort(da.begin(), da.end());
            std::sort(db.begin(), db.end());
            CHECK(da == db);
            // expected torus order from the pattern
            int64_t expected = 1;
            for (size_t i = 0; i < ri.block_degrees.size(); ++i) {
                int64_t qa = 1;
                for (int k = 0; k < ri.block_degrees[i]; ++k) qa *= p;
                expected *= ri.block_split[i] ? qa - 1 : qa + 1;
            }
            CHECK(T.order() == expected);
        }
    }
}

TEST_CASE("wigner distribution: normalization and route agreement") {
    Fq F(7);
    SympSpace sp = SympSpace::standard(&F, 1);
    CatMap arnold = make_catmap(kArnold);
    TorusData T = centralizer_torus(reduce_catmap(arnold, F), sp);
    WeilRep rep(sp);
    // xi = 0: Tr(P_chi pi(0)) = m_chi
    for (int64_t c = 0; c < T.num_chars(); ++c) {
        cplx w0 = wigner(T, c, sp.zero_vec(), rep);
        cplx m = multiplicity_measured(projector(T, c, rep));
        CHECK(std::abs(w0 - m) < 1e-9);
    }
    // projector route == reduction route, and the torus_sum bookkeeping
    SchrodingerModel model(sp);
    for (int64_t c = 0; c < T.num_chars(); ++c)
        for (int64_t vi = 1; vi < model.vcount(); ++vi) {
            VecFq xi = model.v_of_index(vi);
            cplx a = wigner(T, c, xi, rep);
            cplx b = wigner_reduction(T, c, xi, rep);
            CHECK(std::abs(a - b) < 1e-9);
            if (!T.is_eigenvector(xi)) {
                cplx s = torus_sum(T, T.chi_inverse(c), xi, rep);
                CHECK(std::abs(a - s / double(T.order())) < 1e-9);
            }
        }
}

TEST_CASE("wigner matches the eigenstate matrix coefficient when m = 1") {
    Fq F(7);
    TorusData T = sl2_torus(F, TorusKind::Inert);
    WeilRep rep(T.space);
    SchrodingerModel model(T.space);
    Rng rng(3);
    for (int64_t c = 0; c < T.num_chars(); ++c) {
        if (c == T.quadratic_chi()) continue;
        auto basis = hecke_eigenstates(T, c, rep);
        REQUIRE(basis.size() == 1);
        const State& psi = basis[0];
        for (int it = 0; it < 10; ++it) {
            VecFq xi = model.v_of_index(1 + static_cast<int64_t>(rng.below(static_cast<uint64_t>(model.vcount() - 1))));
            cplx coeff = (psi.adjoint() * model.pi_v(xi) * psi)(0, 0);
            CHECK(std::abs(coeff - wigner(T, c, xi, rep)) < 1e-9);
        }
    }
}

TEST_CASE("exponential-sum form: magnitude and documented phase") {
    for (int64_t p : {5, 7, 13}) {
        Fq F(p);
        for (auto kind : {TorusKind::Split, TorusKind::Inert}) {
            TorusData T = sl2_torus(F, kind);
            WeilRep rep(T.space);
            SchrodingerModel model(T.space);
            Rng rng(p);
            for (int64_t c = 0; c < T.num_chars(); ++c) {
                if (c == T.quadratic_chi()) continue;
                auto basis = hecke_eigenstates(T, c, rep);
                const State& psi = basis[0];
                CHECK(std::abs(exp_sum_form(psi, model, T.space.zero_vec()) - cplx(1, 0)) < 1e-9);
                for (int it = 0; it < 6; ++it) {
                    VecFq xi =
                        model.v_of_index(1 + static_cast<int64_t>(rng.below(static_cast<uint64_t>(model.vcount() - 1))));
                    cplx coeff = (psi.adjoint() * model.pi_v(xi) * psi)(0, 0);
                    cplx sum = exp_sum_form(psi, model, xi);
                    CHECK(std::abs(std::abs(sum) - std::abs(coeff)) < 1e-9);
                    CHECK(std::abs(exp_sum_phase(model, xi) * std::conj(sum) - coeff) < 1e-9);
                }
            }
        }
    }
}

TEST_CASE("two-dimensional torus-sum bound, exhaustive at q = 5") {
    Fq F(5);
    SchrodingerModel model(SympSpace::standard(&F, 1));
    for (auto kind : {TorusKind::Split, TorusKind::Inert}) {
        TorusData T = sl2_torus(F, kind);
        WeilRep rep(T.space);
        const double bound = 2.0 * std::sqrt(5.0);
        for (int64_t c = 0; c < T.num_chars(); ++c)
            for (int64_t vi = 1; vi < model.vcount(); ++vi) {
                VecFq xi = model.v_of_index(vi);
                if (T.is_eigenvector(xi)) {
                    CHECK_THROWS_AS((void)torus_sum(T, c, xi, rep), EigenvectorInput);
                    continue;
                }
                CHECK(std::abs(torus_sum(T, c, xi, rep)) <= bound + 1e-9);
            }
    }
}

TEST_CASE("bound_check: N = 1 census at p = 13") {
    CatMap arnold = make_catmap(kArnold);
    BoundCheckOptions opt;
    opt.store_records = true;
    WignerReport r = bound_check(arnold, 13, opt);
    CHECK(r.torus_order == 14);  // inert
    CHECK(r.rank == 1);
    CHECK(r.violations == 0);
    CHECK(r.records_checked == 14 * (13 * 13 - 1));
    const double bound = 2.0 * std::sqrt(13.0) / 14.0;
    CHECK(std::abs(bound - 0.5150788) < 1e-6);
    for (const auto& rec : r.records) {
        REQUIRE(rec.has_bound);  // every xi != 0 spans for an inert torus
        CHECK(rec.abs_value <= bound + 1e-9);
        CHECK(std::abs(rec.bound - bound) < 1e-12);
    }
    CHECK(r.max_product_ratio <= 1.0);
    CHECK(r.max_paper_ratio <= 1.0 + 1e-9);       // rank 1: 2 sqrt p / (p+1) < 2 / sqrt p
    CHECK(r.max_tensor_residual < 1e-9);
}

TEST_CASE("bound_check: N = 2 strongly generic and generic at p = 5") {
    BoundCheckOptions opt;
    opt.xi_sample = 40;
    opt.store_records = false;
    {
        CatMap A = make_catmap(kSg4b);
        WignerReport r = bound_check(A, 5, opt);
        CHECK(r.rank == 1);
        CHECK(r.violations == 0);
        CHECK(r.max_per_block_ratio <= 1.0 + 1e-9);
        CHECK(r.max_paper_ratio <= 1.0 + 5.0 / std::sqrt(5.0));
        CHECK(r.max_tensor_residual < 1e-9);
    }
    {
        CatMap A = catmap_block_diag(make_catmap({{2, 3}, {1, 2}}), make_catmap({{5, 4}, {1, 1}}));
        WignerReport r = bound_check(A, 5, opt);
        CHECK(r.rank == 2);
        CHECK(r.violations == 0);
        CHECK(r.max_per_block_ratio <= 1.0 + 1e-9);
        CHECK(r.max_paper_ratio <= 1.0 + 5.0 / std::sqrt(5.0));
        CHECK(r.max_tensor_residual < 1e-9);
    }
}

TEST_CASE("statistical states at N = 1, p = 13") {
    CatMap arnold = make_catmap(kArnold);
    std::vector<std::vector<int64_t>> xis;
    Rng rng(7);
    for (int k = 0; k < 8; ++k)
        xis.push_back({1 + static_cast<int64_t>(rng.below(12)), static_cast<int64_t>(rng.below(13))});
    StatReport r = statistical_state_check(arnold, 13, xis);
    CHECK_FALSE(r.ambiguous);
    CHECK(r.max_projector_residual < 1e-8);
    int64_t total = 0;
    for (const auto& e : r.entries) {
        total += e.mult;
        CHECK(e.density_residual < 1e-9);
        for (bool ok : e.pass) CHECK(ok);
    }
    CHECK(total == 13);
    for (double res : r.sum_rule_residuals) CHECK(res < 1e-9);
}

TEST_CASE("observable wigner distributions") {
    CatMap arnold = make_catmap(kArnold);
    Fq F(13);
    SympSpace sp = SympSpace::standard(&F, 1);
    TorusData T = centralizer_torus(reduce_catmap(arnold, F), sp);
    ModuleStructure ms = symplectic_decomposition(T);
    WeilRep rep(sp);
    // constant observable: value 1, deviation 0
    {
        Observable f{{{{0, 0}, cplx(1, 0)}}};
        auto r = observable_wigner(f, ms, 1, rep);
        CHECK(std::abs(r.value - cplx(1, 0)) < 1e-9);
        CHECK(r.deviation < 1e-9);
        CHECK(r.pass);
    }
    // single non-trivial character reduces to wigner()
    {
        Observable f{{{{1, 2}, cplx(1, 0)}}};
        auto r = observable_wigner(f, ms, 1, rep);
        VecFq xi{F.scalar(1), F.scalar(2)};
        CHECK(std::abs(r.value - wigner(T, 1, xi, rep)) < 1e-9);
        CHECK(r.pass);
    }
    // two-term observable obeys the C_f bound
    {
        Observable f{{{{1, 0}, cplx(0.5, 0.25)}, {{0, 3}, cplx(-1, 0.5)}, {{0, 0}, cplx(0.75, 0)}}};
        auto r = observable_wigner(f, ms, 2, rep);
        CHECK(r.has_bound);
        CHECK(std::abs(r.integral - cplx(0.75, 0)) < 1e-12);
        CHECK(r.deviation <= r.bound + 1e-9);
        CHECK(r.pass);
    }
    // aliased exponent folds into the constant
    {
        Observable f{{{{13, 0}, cplx(1, 0)}, {{1, 1}, cplx(1, 0)}}};
        auto r = observable_wigner(f, ms, 1, rep);
        REQUIRE(r.aliased_terms.size() == 1);
        CHECK(r.aliased_terms[0] == 0);
        CHECK(std::abs(r.integral - cplx(1, 0)) < 1e-12);
    }
    // m_chi = 0 rejected
    {
        Observable f{{{{1, 0}, cplx(1, 0)}}};
        int64_t sigma = T.quadratic_chi();
        CHECK(multiplicity_predicted(ms, sigma) == 0);  // inert at p = 13
        CHECK_THROWS_AS((void)observable_wigner(f, ms, sigma, rep), EmptyEigenspace);
    }
}

TEST_CASE("rank sweep") {
    CatMap arnold = make_catmap(kArnold);
    SweepResult s = rank_sweep(arnold, 100, 2);
    CHECK(s.skipped_primes == 1);  // p = 5 divides the discriminant
    for (const auto& row : s.rows)
        if (!row.skipped) CHECK(row.r == 1);
    CHECK(std::abs(s.freq.at(1) - 1.0) < 1e-12);

    CatMap big = make_catmap(kSg4);
    SweepResult s2 = rank_sweep(big, 500, 2);
    double total = 0;
    for (const auto& [r, f] : s2.freq) {
        CHECK((r == 1 || r == 2));
        total += f;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK(s2.good_primes + s2.skipped_primes == static_cast<int64_t>(s2.rows.size()));
    // CSV shape
    std::string csv = sweep_csv(s2);
    CHECK(csv.rfind("p,r_p,factor_degrees,skipped_flag", 0) == 0);
}

TEST_CASE("report serialization is stable and self-consistent") {
    CatMap arnold = make_catmap(kArnold);
    BoundCheckOptions opt;
    opt.xi_sample = 5;
    WignerReport r = bound_check(arnold, 7, opt);
    std::string a = wigner_report_json(r, "{\"p\":7}", 0);
    std::string b = wigner_report_json(bound_check(arnold, 7, opt), "{\"p\":7}", 0);
    CHECK(a == b);
    CHECK(a.find("\"schema_version\": \"1\"") != std::string::npos);
    // pass flags recomputable from value and bound columns
    for (const auto& rec : r.records)
        if (rec.has_bound) CHECK(rec.pass == (rec.abs_value <= rec.bound + 1e-9 && rec.paper_ratio <= 1 + 5 / std::sqrt(7.0) + 1e-9));
}
