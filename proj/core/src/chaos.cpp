#include "weillab/chaos.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "weillab/errors.hpp"

namespace weillab {

const char* to_string(Genericity g) {
    switch (g) {
        case Genericity::StronglyGeneric: return "strongly_generic";
        case Genericity::Generic: return "generic";
        case Genericity::NonGeneric: return "non_generic";
    }
    return "?";
}

Genericity classify_genericity(const PolyZ& charpoly) {
    auto factors = factor_Q(charpoly);
    for (size_t i = 0; i + 1 < factors.size(); ++i)
        if (factors[i] == factors[i + 1]) throw NotRegular("characteristic polynomial is not squarefree over Q");
    if (factors.size() == 1) return Genericity::StronglyGeneric;
    for (const auto& f : factors)
        if (!is_self_reciprocal(f) || f.deg() % 2 != 0) return Genericity::NonGeneric;
    return Genericity::Generic;
}

CatMap make_catmap(const std::vector<std::vector<int64_t>>& entries) {
    const int d = static_cast<int>(entries.size());
    if (d == 0 || d % 2 != 0) throw DomainError("cat map must be 2N x 2N");
    for (const auto& row : entries)
        if (static_cast<int>(row.size()) != d) throw DomainError("cat map matrix is not square");
    const int N = d / 2;
    // A^T J A = J over Z with the standard form.
    auto J = [&](int i, int j) -> int64_t {
        if (j == i + N) return 1;
        if (i == j + N) return -1;
        return 0;
    };
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            __int128 acc = 0;
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l)
                    acc += static_cast<__int128>(entries[static_cast<size_t>(k)][static_cast<size_t>(i)]) * J(k, l) *
                           entries[static_cast<size_t>(l)][static_cast<size_t>(j)];
            if (acc != J(i, j)) throw DomainError("matrix is not symplectic over Z (standard form)");
        }
    CatMap A;
    A.N = N;
    A.entries = entries;
    A.charpoly = charpoly_z(entries);
    A.gclass = classify_genericity(A.charpoly);
    return A;
}

MatFq reduce_catmap(const CatMap& A, const Fq& F) {
    const int d = 2 * A.N;
    MatFq m(&F, d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m.at(i, j) = F.scalar(A.entries[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    return m;
}

CatMap catmap_block_diag(const CatMap& A1, const CatMap& A2) {
    const int N = A1.N + A2.N;
    std::vector<std::vector<int64_t>> m(static_cast<size_t>(2 * N), std::vector<int64_t>(static_cast<size_t>(2 * N), 0));
    auto place = [&](const CatMap& B, int nblk, int offset) {
        auto pos = [&](int i) { return i < nblk ? offset + i : N + offset + (i - nblk); };
        for (int i = 0; i < 2 * nblk; ++i)
            for (int j = 0; j < 2 * nblk; ++j)
                m[static_cast<size_t>(pos(i))][static_cast<size_t>(pos(j))] =
                    B.entries[static_cast<size_t>(i)][static_cast<size_t>(j)];
    };
    place(A1, A1.N, 0);
    place(A2, A2.N, A1.N);
    return make_catmap(m);
}

RankInfo rank_of_prime(const CatMap& A, int64_t p) {
    if (p == 2) throw DomainError("rank_of_prime: p must be odd");
    if (!is_prime(p)) throw DomainError("rank_of_prime: p must be prime");
    PolyP fp = reduce_modp(A.charpoly, p);
    if (gcd(fp, derivative(fp)).deg() != 0) throw BadPrime("p divides the discriminant of the characteristic polynomial");
    auto factors = factor_modp(fp);
    std::vector<PolyP> irr;
    for (const auto& [f, m] : factors) {
        if (m != 1) throw BadPrime("unexpected repeated factor");
        irr.push_back(f);
    }
    RankInfo info;
    std::vector<bool> used(irr.size(), false);
    for (size_t i = 0; i < irr.size(); ++i) {
        if (used[i]) continue;
        PolyP rec = reciprocal(irr[i]);
        if (rec == irr[i]) {
            if (irr[i].deg() % 2 != 0)
                throw StructureViolation("odd self-reciprocal factor (impossible for regular symplectic input)");
            info.block_degrees.push_back(irr[i].deg() / 2);
            info.block_split.push_back(false);
            used[i] = true;
        } else {
            size_t j = i + 1;
            for (; j < irr.size(); ++j)
                if (!used[j] && irr[j] == rec) break;
            if (j == irr.size())
                throw StructureViolation("factor set not closed under reciprocal (charpoly not symplectic?)");
            info.block_degrees.push_back(irr[i].deg());
            info.block_split.push_back(true);
            used[i] = used[j] = true;
        }
    }
    info.r = static_cast<int>(info.block_degrees.size());
    for (const auto& f : irr) info.factor_degrees.push_back(f.deg());
    std::sort(info.factor_degrees.begin(), info.factor_degrees.end());
    return info;
}

cplx wigner(const TorusData& T, int64_t chi, const VecFq& xi, const WeilRep& rep) {
    Operator P = projector(T, chi, rep);
    return rep.model().trace_against_pi(P, xi);
}

cplx wigner_reduction(const TorusData& T, int64_t chi, const VecFq& xi, const WeilRep& rep) {
    cplx acc = 0;
    const Fq& F = *T.space.F;
    for (int64_t e = 0; e < T.order(); ++e)
        acc += std::conj(T.chi(chi, e)) * rep.char_tau_trace(T.elements[static_cast<size_t>(e)], {xi, F.zero()});
    return acc / double(T.order());
}

cplx torus_sum(const TorusData& T, int64_t chi, const VecFq& xi, const WeilRep& rep) {
    const Fq& F = *T.space.F;
    if (vec_is_zero(F, xi) || T.is_eigenvector(xi))
        throw EigenvectorInput("torus_sum: xi spans a T-invariant line; the bound is not claimed");
    cplx acc = 0;
    for (int64_t e = 0; e < T.order(); ++e)
        acc += T.chi(chi, e) * rep.char_tau_trace(T.elements[static_cast<size_t>(e)], {xi, F.zero()});
    return acc;
}

cplx exp_sum_form(const State& psi, const SchrodingerModel& model, const VecFq& xi) {
    const Fq& F = model.field();
    const int n = model.n();
    VecFq a(xi.begin(), xi.begin() + n);
    VecFq b(xi.begin() + n, xi.end());
    cplx acc = 0;
    for (int64_t i = 0; i < model.dim(); ++i) {
        VecFq x = model.point_of_index(i);
        Fe adotx = F.zero();
        for (int k = 0; k < n; ++k) adotx = F.add(adotx, F.mul(a[static_cast<size_t>(k)], x[static_cast<size_t>(k)]));
        int64_t shifted = model.index_of_point(vec_add(F, x, b));
        acc += psi(i) * F.psi(adotx) * std::conj(psi(shifted));
    }
    return acc;
}

cplx exp_sum_phase(const SchrodingerModel& model, const VecFq& xi) {
    const Fq& F = model.field();
    const int n = model.n();
    Fe adotb = F.zero();
    for (int k = 0; k < n; ++k)
        adotb = F.add(adotb, F.mul(xi[static_cast<size_t>(k)], xi[static_cast<size_t>(n + k)]));
    return F.psi(F.neg(F.mul(F.half(), adotb)));
}

bool orbit_spans(const TorusData& T, const VecFq& xi) {
    // Smallest T-invariant subspace containing xi, by closing span{xi} under
    // the generators; equals Span(T xi) since T is generated by them.
    const Fq& F = *T.space.F;
    const int d = T.space.dim();
    if (vec_is_zero(F, xi)) return false;
    std::vector<VecFq> basis;   // echelonized, pivot positions recorded
    std::vector<int> pivots;
    auto reduce_insert = [&](VecFq v) {
        for (size_t k = 0; k < basis.size(); ++k) {
            const Fe& c = v[static_cast<size_t>(pivots[k])];
            if (!F.is_zero(c)) v = vec_sub(F, v, vec_scale(F, c, basis[k]));
        }
        int piv = -1;
        for (int i = 0; i < d; ++i)
            if (!F.is_zero(v[static_cast<size_t>(i)])) {
                piv = i;
                break;
            }
        if (piv < 0) return false;
        basis.push_back(vec_scale(F, F.inv(v[static_cast<size_t>(piv)]), v));
        pivots.push_back(piv);
        return true;
    };
    reduce_insert(xi);
    size_t frontier = 0;
    while (frontier < basis.size() && static_cast<int>(basis.size()) < d) {
        VecFq w = basis[frontier++];
        for (const auto& g : T.generators) reduce_insert(g.apply(w));
    }
    return static_cast<int>(basis.size()) == d;
}

namespace {

// Dense character table: chi_table[chi * |T| + e].
std::vector<cplx> char_table(const TorusData& T) {
    const int64_t n = T.order();
    if (n > 4096) throw Unsupported("character table too large");
    std::vector<cplx> tab(static_cast<size_t>(n * n));
    for (int64_t c = 0; c < n; ++c)
        for (int64_t e = 0; e < n; ++e) tab[static_cast<size_t>(c * n + e)] = T.chi(c, e);
    return tab;
}

}  // namespace

WignerReport bound_check(const CatMap& A, int64_t p, const BoundCheckOptions& opt) {
    if (A.gclass == Genericity::NonGeneric) throw DomainError("bound_check requires a generic cat map");
    RankInfo ri = rank_of_prime(A, p);  // throws BadPrime when p | disc

    Fq F(p);
    SympSpace space = SympSpace::standard(&F, A.N);
    MatFq Ap = reduce_catmap(A, F);
    TorusData T = centralizer_torus(Ap, space);
    ModuleStructure ms = symplectic_decomposition(T);

    // Factorization-pattern cross-check against the explicit decomposition.
    {
        std::vector<int> deg_a = ri.block_degrees, deg_b;
        for (const auto& blk : ms.blocks) deg_b.push_back(blk.ext_degree());
        std::sort(deg_a.begin(), deg_a.end());
        std::sort(deg_b.begin(), deg_b.end());
        if (deg_a != deg_b) throw StructureViolation("rank_of_prime degrees disagree with the explicit decomposition");
    }

    WeilRep rep(space, opt.seed);
    std::vector<std::unique_ptr<WeilRep>> refs;
    std::vector<SympSpace> ref_spaces;
    for (const auto& blk : ms.blocks) ref_spaces.push_back(SympSpace::standard(blk.field.get(), 1));
    for (size_t a = 0; a < ms.blocks.size(); ++a) refs.push_back(std::make_unique<WeilRep>(ref_spaces[a], opt.seed));

    WignerReport rep_out;
    rep_out.p = p;
    rep_out.N = A.N;
    rep_out.gclass = A.gclass;
    rep_out.torus_order = T.order();
    rep_out.rank = ms.rank();
    for (const auto& blk : ms.blocks) {
        rep_out.block_degrees.push_back(blk.ext_degree());
        rep_out.block_split.push_back(blk.split);
        rep_out.block_orders.push_back(blk.block_torus.order());
    }

    // xi list
    std::vector<VecFq> xis;
    const SchrodingerModel& model = rep.model();
    for (const auto& exps : opt.xis) {
        if (static_cast<int>(exps.size()) != space.dim()) throw ShapeError("bound_check: xi has wrong length");
        VecFq v(static_cast<size_t>(space.dim()));
        for (size_t i = 0; i < exps.size(); ++i) v[i] = F.scalar(exps[i]);
        xis.push_back(std::move(v));
    }
    if (xis.empty()) {
        if (opt.xi_sample <= 0) {
            for (int64_t vi = 1; vi < model.vcount(); ++vi) xis.push_back(model.v_of_index(vi));
        } else {
            Rng rng(opt.seed ^ 0x5151515151515151ULL);
            for (int64_t k = 0; k < opt.xi_sample; ++k) {
                int64_t vi = 1 + static_cast<int64_t>(rng.below(static_cast<uint64_t>(model.vcount() - 1)));
                xis.push_back(model.v_of_index(vi));
            }
        }
    }
    std::vector<int64_t> chis = opt.chis;
    if (chis.empty())
        for (int64_t c = 0; c < T.num_chars(); ++c) chis.push_back(c);

    // Precompute character tables and per-chi data.
    auto tab = char_table(T);
    std::vector<std::vector<cplx>> btabs;
    for (const auto& blk : ms.blocks) btabs.push_back(char_table(blk.block_torus));
    std::vector<int64_t> m_of_chi(static_cast<size_t>(T.num_chars()));
    std::vector<std::vector<int64_t>> chi_restr(static_cast<size_t>(T.num_chars()),
                                                std::vector<int64_t>(ms.blocks.size()));
    for (int64_t c = 0; c < T.num_chars(); ++c) {
        m_of_chi[static_cast<size_t>(c)] = multiplicity_predicted(ms, c);
        for (int a = 0; a < ms.rank(); ++a) chi_restr[static_cast<size_t>(c)][static_cast<size_t>(a)] = restrict_chi(ms, a, c);
    }

    const double sqrtpN = std::pow(double(p), A.N / 2.0);
    double product_bound = 1.0;
    for (const auto& blk : ms.blocks)
        product_bound *= 2.0 * std::sqrt(double(blk.q_alpha())) / double(blk.block_torus.order());
    const double slack = 1.0 + 5.0 / std::sqrt(double(p));

    const int64_t Tn = T.order();
    std::vector<cplx> cB(static_cast<size_t>(Tn));
    std::vector<std::vector<cplx>> cBa(ms.blocks.size());

    // Materialize every rho(B) once (global and per block); the xi loop then
    // runs allocation-free against the sparse structure of pi.
    std::vector<Operator> rhoB;
    rhoB.reserve(static_cast<size_t>(Tn));
    for (int64_t e = 0; e < Tn; ++e) rhoB.push_back(rep.op(T.elements[static_cast<size_t>(e)]));
    std::vector<std::vector<Operator>> rhoBa(ms.blocks.size());
    for (size_t a = 0; a < ms.blocks.size(); ++a) {
        const TorusData& bt = ms.blocks[a].block_torus;
        for (int64_t e = 0; e < bt.order(); ++e)
            rhoBa[a].push_back(refs[a]->op(bt.elements[static_cast<size_t>(e)]));
    }

    for (const VecFq& xi : xis) {
        bool spans = orbit_spans(T, xi);
        // global traces
        int64_t xi_index = model.index_of_v(xi);
        for (int64_t e = 0; e < Tn; ++e)
            cB[static_cast<size_t>(e)] = model.trace_against_pi(rhoB[static_cast<size_t>(e)], xi_index);
        // block components and traces
        std::vector<std::array<Fe, 2>> xi_blocks;
        for (int a = 0; a < ms.rank(); ++a) {
            const Block& blk = ms.blocks[static_cast<size_t>(a)];
            auto c = ms.block_coords(a, ms.project(a, xi));
            xi_blocks.push_back(c);
            const int64_t Ta = blk.block_torus.order();
            cBa[static_cast<size_t>(a)].assign(static_cast<size_t>(Ta), 0);
            const SchrodingerModel& bmodel = refs[static_cast<size_t>(a)]->model();
            int64_t bxi = bmodel.index_of_v(VecFq{c[0], c[1]});
            for (int64_t e = 0; e < Ta; ++e)
                cBa[static_cast<size_t>(a)][static_cast<size_t>(e)] =
                    bmodel.trace_against_pi(rhoBa[static_cast<size_t>(a)][static_cast<size_t>(e)], bxi);
        }

        for (int64_t c : chis) {
            cplx W = 0;
            for (int64_t e = 0; e < Tn; ++e) W += std::conj(tab[static_cast<size_t>(c * Tn + e)]) * cB[static_cast<size_t>(e)];
            W /= double(Tn);

            WignerRecord recd;
            recd.chi = c;
            for (const auto& x : xi) recd.xi.push_back(F.index(x));
            recd.m_chi = m_of_chi[static_cast<size_t>(c)];
            recd.value = W;
            recd.abs_value = std::abs(W);
            recd.has_bound = spans;
            recd.bound = product_bound;

            cplx prod_blocks = 1;
            double per_block_ratio = 0;
            for (int a = 0; a < ms.rank(); ++a) {
                const Block& blk = ms.blocks[static_cast<size_t>(a)];
                const int64_t Ta = blk.block_torus.order();
                int64_t ca = chi_restr[static_cast<size_t>(c)][static_cast<size_t>(a)];
                cplx wa = 0;
                for (int64_t e = 0; e < Ta; ++e)
                    wa += std::conj(btabs[static_cast<size_t>(a)][static_cast<size_t>(ca * Ta + e)]) *
                          cBa[static_cast<size_t>(a)][static_cast<size_t>(e)];
                wa /= double(Ta);
                prod_blocks *= wa;
                per_block_ratio = std::max(
                    per_block_ratio, std::abs(wa) * double(Ta) / (2.0 * std::sqrt(double(blk.q_alpha()))));
            }

            if (spans) {
                ++rep_out.bound_claims;
                rep_out.max_per_block_ratio = std::max(rep_out.max_per_block_ratio, per_block_ratio);
                rep_out.max_product_ratio = std::max(rep_out.max_product_ratio, recd.abs_value / product_bound);
                rep_out.max_tensor_residual = std::max(rep_out.max_tensor_residual, std::abs(W - prod_blocks));
                recd.pass = recd.abs_value <= product_bound + 1e-9 && per_block_ratio <= 1.0 + 1e-9;
                if (recd.m_chi > 0) {
                    recd.paper_ratio = recd.abs_value * sqrtpN / (double(recd.m_chi) * std::pow(2.0, ms.rank()));
                    rep_out.max_paper_ratio = std::max(rep_out.max_paper_ratio, recd.paper_ratio);
                    if (recd.paper_ratio > slack) recd.pass = false;
                }
                if (!recd.pass) {
                    ++rep_out.violations;
                    if (opt.throw_on_violation) throw BoundViolation("exact bound violated at p=" + std::to_string(p));
                }
            } else {
                recd.note = "span condition violated";
                recd.pass = true;
            }
            ++rep_out.records_checked;
            if (opt.store_records) rep_out.records.push_back(std::move(recd));
        }
    }
    return rep_out;
}

StatReport statistical_state_check(const CatMap& A, int64_t p, const std::vector<std::vector<int64_t>>& xi_exps,
                                   uint64_t seed) {
    RankInfo ri = rank_of_prime(A, p);
    (void)ri;
    Fq F(p);
    SympSpace space = SympSpace::standard(&F, A.N);
    std::vector<VecFq> xis;
    for (const auto& exps : xi_exps) {
        if (static_cast<int>(exps.size()) != space.dim())
            throw ShapeError("statistical_state_check: xi has wrong length");
        VecFq v(static_cast<size_t>(space.dim()));
        for (size_t i = 0; i < exps.size(); ++i) v[i] = F.scalar(exps[i]);
        xis.push_back(std::move(v));
    }
    MatFq Ap = reduce_catmap(A, F);
    TorusData T = centralizer_torus(Ap, space);
    ModuleStructure ms = symplectic_decomposition(T);
    WeilRep rep(space, seed);

    RhoASpectrum spec = rho_a_spectrum(Ap, rep);
    StatReport out;
    out.p = p;
    out.N = A.N;
    out.ambiguous = spec.ambiguous;

    double product_bound = 1.0;
    for (const auto& blk : ms.blocks)
        product_bound *= 2.0 * std::sqrt(double(blk.q_alpha())) / double(blk.block_torus.order());

    const int64_t ai = T.find(Ap);
    if (ai < 0) throw StructureViolation("A not in its Hecke torus");

    // group characters by their value on A; characters with empty eigenspaces
    // contribute to no H_lambda and need no matching eigenvalue
    std::vector<std::vector<int64_t>> chis_of_space(spec.spaces.size());
    for (int64_t c = 0; c < T.num_chars(); ++c) {
        if (multiplicity_predicted(ms, c) == 0) continue;
        cplx val = T.chi(c, ai);
        bool placed = false;
        for (size_t s = 0; s < spec.spaces.size(); ++s)
            if (std::abs(val - spec.spaces[s].lambda) < 1e-6) {
                chis_of_space[s].push_back(c);
                placed = true;
                break;
            }
        if (!placed) throw StructureViolation("character value on A matches no rho(A) eigenvalue");
    }

    const int64_t dim = rep.dim();
    for (size_t s = 0; s < spec.spaces.size(); ++s) {
        const EigSpace& es = spec.spaces[s];
        StatEntry entry;
        entry.lambda = es.lambda;
        entry.mult = es.mult;

        // density-operator validity
        double res = std::abs(es.density.trace() - cplx(1, 0));
        res = std::max(res, (es.density - es.density.adjoint()).norm());
        Eigen::SelfAdjointEigenSolver<Operator> saes((es.density + es.density.adjoint()) / 2.0);
        res = std::max(res, std::max(0.0, -saes.eigenvalues().minCoeff()));
        entry.density_residual = res;

        // P_lambda = sum of the contributing Hecke projectors
        Operator psum = Operator::Zero(dim, dim);
        int64_t msum = 0;
        for (int64_t c : chis_of_space[s]) {
            Operator P = projector(T, c, rep);
            msum += multiplicity_measured(P);
            psum += P;
        }
        if (msum != es.mult) throw StructureViolation("eigenspace multiplicity does not match its Hecke content");
        out.max_projector_residual = std::max(out.max_projector_residual, (psum - es.proj).norm());

        for (const VecFq& xi : xis) {
            cplx w = rep.model().trace_against_pi(es.density, xi);
            double b = 0;
            for (int64_t c : chis_of_space[s])
                if (multiplicity_predicted(ms, c) > 0) b += product_bound;
            b /= double(es.mult);
            entry.values.push_back(w);
            entry.bounds.push_back(b);
            entry.pass.push_back(std::abs(w) <= b + 1e-9);
        }
        out.entries.push_back(std::move(entry));
    }

    for (size_t k = 0; k < xis.size(); ++k) {
        cplx acc = 0;
        for (const auto& e : out.entries) acc += double(e.mult) * e.values[k];
        out.sum_rule_residuals.push_back(std::abs(acc));
    }
    return out;
}

ObservableReport observable_wigner(const Observable& f, const ModuleStructure& ms, int64_t chi, const WeilRep& rep) {
    const Fq& F = *ms.torus.space.F;
    const SchrodingerModel& model = rep.model();
    const int dimv = ms.torus.space.dim();
    ObservableReport out;
    int64_t m = multiplicity_predicted(ms, chi);
    if (m == 0) throw EmptyEigenspace("observable_wigner: m_chi = 0");

    Operator op = Operator::Zero(rep.dim(), rep.dim());
    cplx integral = 0;
    double cf = 0;
    for (size_t t = 0; t < f.terms.size(); ++t) {
        const auto& [exps, coeff] = f.terms[t];
        if (static_cast<int>(exps.size()) != dimv) throw ShapeError("observable exponent has wrong length");
        VecFq xi(static_cast<size_t>(dimv));
        bool zero_in_Z = true, zero_mod_p = true;
        for (int i = 0; i < dimv; ++i) {
            xi[static_cast<size_t>(i)] = F.scalar(exps[static_cast<size_t>(i)]);
            if (exps[static_cast<size_t>(i)] != 0) zero_in_Z = false;
            if (mod_reduce(exps[static_cast<size_t>(i)], F.p()) != 0) zero_mod_p = false;
        }
        if (zero_mod_p) {
            integral += coeff;  // pi(0) = Id: constant and aliased terms land here
            if (!zero_in_Z) out.aliased_terms.push_back(t);
            op += coeff * Operator::Identity(rep.dim(), rep.dim());
            continue;
        }
        if (!orbit_spans(ms.torus, xi)) {
            out.span_violations.push_back(t);
            out.has_bound = false;
        }
        cf += std::abs(coeff) * double(m) * std::pow(2.0, ms.rank());
        model.add_pi_scaled(op, xi, coeff);
    }
    Operator P = projector(ms.torus, chi, rep);
    out.value = (P * op).trace() / double(m);
    out.integral = integral;
    out.c_f = cf;
    out.deviation = std::abs(out.value - out.integral);
    out.bound = cf / std::pow(double(F.p()), ms.torus.space.n / 2.0);
    out.pass = !out.has_bound || out.deviation <= out.bound + 1e-9;
    return out;
}

SweepResult rank_sweep(const CatMap& A, int64_t pmax, int jobs) {
    if (A.gclass == Genericity::NonGeneric) throw DomainError("rank_sweep requires a generic cat map");
    if (pmax > 1'000'000) throw ConfigError("pmax cap is 10^6");
    auto primes = primes_up_to(pmax);
    std::vector<int64_t> odd;
    for (int64_t p : primes)
        if (p >= 3) odd.push_back(p);

    SweepResult out;
    out.rows.assign(odd.size(), SweepRow{});
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= odd.size()) return;
            SweepRow row;
            row.p = odd[i];
            try {
                RankInfo ri = rank_of_prime(A, odd[i]);
                row.r = ri.r;
                row.degrees = ri.factor_degrees;
            } catch (const BadPrime&) {
                row.skipped = true;
            }
            out.rows[i] = std::move(row);
        }
    };
    jobs = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (const auto& row : out.rows) {
        if (row.skipped) {
            ++out.skipped_primes;
        } else {
            ++out.good_primes;
            ++out.counts[row.r];
        }
    }
    for (const auto& [r, c] : out.counts)
        out.freq[r] = out.good_primes > 0 ? double(c) / double(out.good_primes) : 0.0;
    return out;
}

}  // namespace weillab
