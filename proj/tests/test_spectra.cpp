#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "weillab/spectra.hpp"

using namespace weillab;

namespace {

MatFq mat2(const Fq& F, int64_t a, int64_t b, int64_t c, int64_t d) {
    MatFq m(&F, 2, 2);
    m.at(0, 0) = F.scalar(a);
    m.at(0, 1) = F.scalar(b);
    m.at(1, 0) = F.scalar(c);
    m.at(1, 1) = F.scalar(d);
    return m;
}

}  // namespace

TEST_CASE("projector for the trivial torus is the identity") {
    Fq F(5);
    SympSpace sp = SympSpace::standard(&F, 1);
    TorusData T = torus_from_elements(sp, {MatFq::identity(&F, 2)});
    WeilRep rep(sp);
    CHECK((projector(T, 0, rep) - Operator::Identity(5, 5)).norm() < 1e-12);
}

TEST_CASE("projector properties: idempotent, self-adjoint, complete, orthogonal") {
    for (auto kind : {TorusKind::Split, TorusKind::Inert}) {
        Fq F(7);
        TorusData T = sl2_torus(F, kind);
        WeilRep rep(T.space);
        const int64_t dim = rep.dim();
        Operator sum = Operator::Zero(dim, dim);
        std::vector<Operator> ps;
        for (int64_t c = 0; c < T.num_chars(); ++c) {
            Operator P = projector(T, c, rep);
            CHECK((P * P - P).norm() < 1e-9);
            CHECK((P - P.adjoint()).norm() < 1e-9);
            sum += P;
            ps.push_back(std::move(P));
        }
        CHECK((sum - Operator::Identity(dim, dim)).norm() < Tol::matrix(static_cast<int>(dim)));
        for (size_t i = 0; i < ps.size(); ++i)
            for (size_t j = i + 1; j < ps.size(); ++j) CHECK((ps[i] * ps[j]).norm() < Tol::matrix(static_cast<int>(dim)));
    }
}

TEST_CASE("multiplicity census for sl2 tori, q in {5,7,9,13,25}") {
    for (auto [p, d] : std::vector<std::pair<int64_t, int>>{{5, 1}, {7, 1}, {3, 2}, {13, 1}, {5, 2}}) {
        Fq F = Fq::extension(p, d);
        for (auto kind : {TorusKind::Split, TorusKind::Inert}) {
            TorusData T = sl2_torus(F, kind);
            WeilRep rep(T.space);
            int64_t total = 0;
            int64_t sigma = T.quadratic_chi();
            for (int64_t c = 0; c < T.num_chars(); ++c) {
                int64_t measured = multiplicity_measured(projector(T, c, rep));
                int64_t predicted = multiplicity_predicted_sl2(T, kind, c);
                CHECK(measured == predicted);
                if (c == sigma) CHECK(measured == (kind == TorusKind::Split ? 2 : 0));
                total += measured;
            }
            CHECK(total == F.q());
        }
    }
}

TEST_CASE("SL_2(F_7) multiplicity pattern") {
    Fq F(7);
    {
        TorusData T = sl2_torus(F, TorusKind::Split);  // order 6
        WeilRep rep(T.space);
        std::vector<int64_t> dims;
        for (int64_t c = 0; c < T.num_chars(); ++c) dims.push_back(multiplicity_measured(projector(T, c, rep)));
        std::sort(dims.begin(), dims.end(), std::greater<>());
        CHECK(dims == std::vector<int64_t>{2, 1, 1, 1, 1, 1});
    }
    {
        TorusData T = sl2_torus(F, TorusKind::Inert);  // order 8
        WeilRep rep(T.space);
        int64_t zeros = 0, total = 0;
        for (int64_t c = 0; c < T.num_chars(); ++c) {
            int64_t m = multiplicity_measured(projector(T, c, rep));
            if (m == 0) {
                ++zeros;
                CHECK(c == T.quadratic_chi());
            }
            total += m;
        }
        CHECK(zeros == 1);
        CHECK(total == 7);
    }
}

TEST_CASE("rank-2 tori in Sp(4, F_5): m_chi = 2^l") {
    Fq F(5);
    auto combos = std::vector<std::pair<TorusKind, TorusKind>>{
        {TorusKind::Split, TorusKind::Split}, {TorusKind::Split, TorusKind::Inert}, {TorusKind::Inert, TorusKind::Inert}};
    for (auto [k1, k2] : combos) {
        TorusData T = product_torus(sl2_torus(F, k1), sl2_torus(F, k2));
        ModuleStructure ms = symplectic_decomposition(T);
        REQUIRE(ms.rank() == 2);
        WeilRep rep(T.space);
        int64_t total = 0;
        for (int64_t c = 0; c < T.num_chars(); ++c) {
            int64_t m = multiplicity(ms, c, rep);  // throws on measured/predicted mismatch
            total += m;
            // m = 2^l with l the number of split blocks carrying sigma
            int l = 0;
            bool zero = false;
            for (int a = 0; a < 2; ++a) {
                if (restrict_chi(ms, a, c) == ms.blocks[static_cast<size_t>(a)].block_torus.quadratic_chi()) {
                    if (ms.blocks[static_cast<size_t>(a)].split)
                        ++l;
                    else
                        zero = true;
                }
            }
            CHECK(m == (zero ? 0 : (int64_t(1) << l)));
            if (k1 == TorusKind::Split && k2 == TorusKind::Split && m == 4) {
                CHECK(restrict_chi(ms, 0, c) == ms.blocks[0].block_torus.quadratic_chi());
                CHECK(restrict_chi(ms, 1, c) == ms.blocks[1].block_torus.quadratic_chi());
            }
        }
        CHECK(total == 25);
    }
}

TEST_CASE("hecke eigenstates: eigen-relation, dimension, phase convention") {
    Fq F(7);
    for (auto kind : {TorusKind::Split, TorusKind::Inert}) {
        TorusData T = sl2_torus(F, kind);
        WeilRep rep(T.space);
        for (int64_t c = 0; c < T.num_chars(); ++c) {
            int64_t m = multiplicity_predicted_sl2(T, kind, c);
            if (m == 0) {
                CHECK_THROWS_AS((void)hecke_eigenstates(T, c, rep), EmptyEigenspace);
                continue;
            }
            auto basis = hecke_eigenstates(T, c, rep);
            CHECK(static_cast<int64_t>(basis.size()) == m);
            for (const auto& s : basis) {
                CHECK(std::abs(s.norm() - 1.0) < 1e-9);
                for (int64_t e = 0; e < T.order(); ++e) {
                    State lhs = rep.op(T.elements[static_cast<size_t>(e)]) * s;
                    State rhs = T.chi(c, e) * s;
                    CHECK((lhs - rhs).norm() < 1e-9 * 7);
                }
                // first nonzero amplitude real positive
                for (Eigen::Index i = 0; i < s.size(); ++i) {
                    if (std::abs(s(i)) > 1e-8) {
                        CHECK(std::abs(std::arg(s(i))) < 1e-9);
                        break;
                    }
                }
            }
            // orthonormality
            for (size_t i = 0; i < basis.size(); ++i)
                for (size_t j = i + 1; j < basis.size(); ++j)
                    CHECK(std::abs(basis[i].dot(basis[j])) < 1e-9);
        }
    }
}

TEST_CASE("tensor structure of the product representation") {
    Fq F(5);
    TorusData t1 = sl2_torus(F, TorusKind::Split);
    TorusData t2 = sl2_torus(F, TorusKind::Inert);
    SympSpace sp1 = t1.space, sp2 = t2.space;
    TorusData T = product_torus(t1, t2);
    WeilRep rep1(sp1), rep2(sp2), rep(T.space);
    // rho(interleave(g1, g2)) = kron(rho1(g1), rho2(g2))
    Rng rng(21);
    for (int it = 0; it < 25; ++it) {
        MatFq g1 = random_symplectic(sp1, rng);
        MatFq g2 = random_symplectic(sp2, rng);
        Operator lhs = rep.op(interleave(g1, 1, g2, 1));
        Operator rhs = kron(rep1.op(g1), rep2.op(g2));
        CHECK((lhs - rhs).norm() < Tol::matrix(25));
    }
    // pure-tensor eigenstates land in the right character space
    for (int64_t c1 : {int64_t(0), int64_t(1), int64_t(3)}) {
        for (int64_t c2 : {int64_t(1), int64_t(2)}) {
            auto tensor_states = hecke_eigenstates_product(t1, c1, rep1, t2, c2, rep2);
            // find the matching character of the product torus by values on
            // the generators
            int64_t cbig = -1;
            for (int64_t c = 0; c < T.num_chars(); ++c) {
                bool match = true;
                for (int64_t e1 = 0; e1 < t1.order() && match; ++e1)
                    for (int64_t e2 = 0; e2 < t2.order() && match; ++e2) {
                        int64_t ebig = T.find(interleave(t1.elements[static_cast<size_t>(e1)], 1,
                                                         t2.elements[static_cast<size_t>(e2)], 1));
                        REQUIRE(ebig >= 0);
                        if (std::abs(T.chi(c, ebig) - t1.chi(c1, e1) * t2.chi(c2, e2)) > 1e-9) match = false;
                    }
                if (match) {
                    cbig = c;
                    break;
                }
            }
            REQUIRE(cbig >= 0);
            Operator P = projector(T, cbig, rep);
            for (const auto& s : tensor_states) CHECK((P * s - s).norm() < 1e-8);
        }
    }
}

TEST_CASE("rho(A) spectrum: projectors, densities, hecke symmetry") {
    Fq F(13);
    SympSpace sp = SympSpace::standard(&F, 1);
    MatFq A = mat2(F, 2, 1, 1, 1);
    WeilRep rep(sp);
    TorusData T = centralizer_torus(A, sp);
    RhoASpectrum spec = rho_a_spectrum(A, rep);
    CHECK_FALSE(spec.ambiguous);
    int64_t total = 0;
    Operator rho = rep.op(A);
    for (const auto& s : spec.spaces) {
        total += s.mult;
        CHECK((rho * s.proj - s.lambda * s.proj).norm() < 1e-8);
        CHECK((s.proj * s.proj - s.proj).norm() < 1e-8);
        CHECK((s.proj - s.proj.adjoint()).norm() < 1e-8);
        CHECK(std::abs(s.density.trace() - cplx(1, 0)) < 1e-9);
        // the Hecke torus commutes with every spectral projector
        for (const auto& t : T.elements) {
            Operator rt = rep.op(t);
            CHECK((rt * s.proj - s.proj * rt).norm() < 1e-8);
        }
    }
    CHECK(total == 13);

    // independent oracle: rho(A) has finite order m, so the spectral
    // projectors are exact root-of-unity averages (1/m) sum_k w^{-jk} rho(A)^k
    int64_t ord = 1;
    {
        MatFq x = A;
        while (!x.is_identity()) {
            x = x * A;
            ++ord;
        }
    }
    std::vector<Operator> powers(static_cast<size_t>(ord));
    powers[0] = Operator::Identity(13, 13);
    for (int64_t k = 1; k < ord; ++k) powers[static_cast<size_t>(k)] = powers[static_cast<size_t>(k - 1)] * rho;
    for (const auto& s : spec.spaces) {
        // closest m-th root of unity to lambda
        double ang = std::arg(s.lambda);
        if (ang < 0) ang += 2 * M_PI;
        int64_t j = static_cast<int64_t>(std::llround(ang * double(ord) / (2 * M_PI))) % ord;
        Operator P = Operator::Zero(13, 13);
        for (int64_t k = 0; k < ord; ++k)
            P += std::polar(1.0, -2 * M_PI * double(j) * double(k) / double(ord)) * powers[static_cast<size_t>(k)];
        P /= double(ord);
        CHECK((P - s.proj).norm() < 1e-7);
    }
}
