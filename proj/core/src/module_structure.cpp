#include "weillab/module_structure.hpp"

#include <algorithm>

#include "weillab/errors.hpp"

namespace weillab {

namespace {

VecFq vec_of_matrix(const MatFq& m) {
    VecFq v;
    v.reserve(static_cast<size_t>(m.rows() * m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) v.push_back(m.at(i, j));
    return v;
}

/// Coordinates of m in the span of basis matrices, or nullopt.
std::optional<VecFq> in_span(const std::vector<MatFq>& basis, const MatFq& m) {
    const Fq& F = m.field();
    const int rows = m.rows() * m.cols();
    MatFq sys(&F, rows, static_cast<int>(basis.size()));
    for (size_t k = 0; k < basis.size(); ++k) {
        VecFq col = vec_of_matrix(basis[k]);
        for (int i = 0; i < rows; ++i) sys.at(i, static_cast<int>(k)) = col[static_cast<size_t>(i)];
    }
    VecFq rhs = vec_of_matrix(m);
    auto sol = solve(sys, rhs);
    if (!sol) return std::nullopt;
    // solve() returns a least-structured solution; confirm it reproduces m.
    MatFq rebuilt = MatFq::zero(&F, m.rows(), m.cols());
    for (size_t k = 0; k < basis.size(); ++k) rebuilt = rebuilt + basis[k].scaled((*sol)[k]);
    if (!(rebuilt == m)) return std::nullopt;
    return sol;
}

/// Minimal polynomial of an algebra element (prime base field), by the first
/// linear dependency among its powers. `unit` plays the role of 1.
PolyP minpoly_rel(const MatFq& x, const MatFq& unit) {
    const Fq& F = x.field();
    std::vector<MatFq> powers{unit};
    while (true) {
        MatFq next = powers.back() * x;
        // dependency: next = sum c_k powers[k]?
        auto c = in_span(powers, next);
        if (c) {
            std::vector<int64_t> coeffs;
            for (const auto& ck : *c) coeffs.push_back(mod_reduce(-F.index(ck), F.p()));
            coeffs.push_back(1);
            return PolyP(F.p(), coeffs);
        }
        powers.push_back(next);
        if (powers.size() > 64) throw StructureViolation("minpoly search runaway");
    }
}

MatFq eval_poly_at(const PolyP& f, const MatFq& x, const MatFq& unit) {
    const Fq& F = x.field();
    MatFq acc = MatFq::zero(&F, x.rows(), x.cols());
    for (int i = f.deg(); i >= 0; --i) {
        acc = acc * x;
        if (f.coeff(i) != 0) acc = acc + unit.scaled(F.scalar(f.coeff(i)));
    }
    return acc;
}

}  // namespace

CentralizerAlgebra centralizer_algebra(const TorusData& T) {
    const Fq& F = *T.space.F;
    const int d = T.space.dim();
    const int nn = d * d;
    // Commuting with the generators is enough for the whole torus.
    const auto& gens = T.generators;
    MatFq sys(&F, static_cast<int>(gens.size()) * nn, nn);
    int row0 = 0;
    for (const auto& t : gens) {
        // (tX - Xt)_{ij} = sum_k t_{ik} X_{kj} - sum_l X_{il} t_{lj}
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                int r = row0 + i * d + j;
                for (int k = 0; k < d; ++k) {
                    sys.at(r, k * d + j) = F.add(sys.at(r, k * d + j), t.at(i, k));
                    sys.at(r, i * d + k) = F.sub(sys.at(r, i * d + k), t.at(k, j));
                }
            }
        row0 += nn;
    }
    auto null = nullspace(sys);
    CentralizerAlgebra alg;
    for (const auto& v : null) {
        MatFq m(&F, d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m.at(i, j) = v[static_cast<size_t>(i * d + j)];
        alg.basis.push_back(std::move(m));
    }
    // Commutativity and closure.
    for (const auto& a : alg.basis)
        for (const auto& b : alg.basis) {
            if (!(a * b == b * a)) throw StructureViolation("centralizer algebra is not commutative");
            if (!in_span(alg.basis, a * b)) throw StructureViolation("centralizer not closed under product");
        }
    if (!in_span(alg.basis, MatFq::identity(&F, d))) throw StructureViolation("identity not in centralizer span");
    return alg;
}

ThetaData theta_and_K(const CentralizerAlgebra& alg, const SympSpace& space) {
    const Fq& F = *space.F;
    ThetaData out;
    const int nb = alg.dim();
    // Theta on the basis, with membership verified.
    MatFq theta_mat(&F, nb, nb);  // column i = coords of Theta(b_i)
    for (int i = 0; i < nb; ++i) {
        MatFq ti = symp_transpose(alg.basis[static_cast<size_t>(i)], space);
        auto coords = in_span(alg.basis, ti);
        if (!coords) throw StructureViolation("Theta does not preserve the centralizer algebra");
        out.theta_on_basis.push_back(ti);
        for (int j = 0; j < nb; ++j) theta_mat.at(j, i) = (*coords)[static_cast<size_t>(j)];
    }
    for (int i = 0; i < nb; ++i) {
        MatFq twice = symp_transpose(out.theta_on_basis[static_cast<size_t>(i)], space);
        if (!(twice == alg.basis[static_cast<size_t>(i)])) throw StructureViolation("Theta^2 != Id");
    }
    // Fixed subalgebra: nullspace of (theta_mat - I) in basis coordinates.
    MatFq fix = theta_mat - MatFq::identity(&F, nb);
    for (const auto& c : nullspace(fix)) {
        MatFq m = MatFq::zero(&F, space.dim(), space.dim());
        for (int k = 0; k < nb; ++k) m = m + alg.basis[static_cast<size_t>(k)].scaled(c[static_cast<size_t>(k)]);
        out.k_basis.push_back(std::move(m));
    }
    return out;
}

MatFq ModuleStructure::k_matrix(int alpha, const Fe& x) const {
    const Block& blk = blocks[static_cast<size_t>(alpha)];
    const Fq& F = *torus.space.F;
    MatFq m = MatFq::zero(&F, torus.space.dim(), torus.space.dim());
    for (int k = 0; k < blk.ext_degree(); ++k) {
        int64_t ck = x.c[static_cast<size_t>(k)];
        if (ck != 0) m = m + blk.field_basis[static_cast<size_t>(k)].scaled(F.scalar(ck));
    }
    return m;
}

VecFq ModuleStructure::project(int alpha, const VecFq& v) const {
    return blocks[static_cast<size_t>(alpha)].idempotent.apply(v);
}

std::array<Fe, 2> ModuleStructure::block_coords(int alpha, const VecFq& v_alpha) const {
    const Block& blk = blocks[static_cast<size_t>(alpha)];
    const Fq& F = *torus.space.F;
    const int d = blk.ext_degree();
    const int dimv = torus.space.dim();
    MatFq sys(&F, dimv, 2 * d);
    for (int k = 0; k < d; ++k) {
        VecFq c1 = blk.field_basis[static_cast<size_t>(k)].apply(blk.v1);
        VecFq c2 = blk.field_basis[static_cast<size_t>(k)].apply(blk.v2);
        for (int i = 0; i < dimv; ++i) {
            sys.at(i, k) = c1[static_cast<size_t>(i)];
            sys.at(i, d + k) = c2[static_cast<size_t>(i)];
        }
    }
    auto sol = solve(sys, v_alpha);
    if (!sol) throw DomainError("block_coords: vector not in V_alpha");
    std::vector<int64_t> a(static_cast<size_t>(d)), b(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) {
        a[static_cast<size_t>(k)] = F.index((*sol)[static_cast<size_t>(k)]);
        b[static_cast<size_t>(k)] = F.index((*sol)[static_cast<size_t>(d + k)]);
    }
    return {blk.field->from_coeffs(a), blk.field->from_coeffs(b)};
}

VecFq ModuleStructure::from_block_coords(int alpha, const std::array<Fe, 2>& c) const {
    const Block& blk = blocks[static_cast<size_t>(alpha)];
    const Fq& F = *torus.space.F;
    VecFq r = vec_add(F, k_matrix(alpha, c[0]).apply(blk.v1), k_matrix(alpha, c[1]).apply(blk.v2));
    return r;
}

Fe ModuleStructure::omega_bar(int alpha, const VecFq& v, const VecFq& u) const {
    const Block& blk = blocks[static_cast<size_t>(alpha)];
    const Fq& F = *torus.space.F;
    const Fq& K = *blk.field;
    const int d = blk.ext_degree();
    // Gram of the trace pairing in the power basis, and the right-hand side
    // Tr(lambda_j w) = omega(lambda_j v, u).
    MatFq gram(&F, d, d);
    VecFq rhs(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            Fe prod = K.mul(K.pow(d > 1 ? K.gen() : K.one(), j), K.pow(d > 1 ? K.gen() : K.one(), k));
            gram.at(j, k) = F.scalar(K.trace_to_prime(prod));
        }
        rhs[static_cast<size_t>(j)] =
            torus.space.omega(blk.field_basis[static_cast<size_t>(j)].apply(v), u);
    }
    if (weillab::rank(gram) != d) throw StructureViolation("trace pairing is degenerate on K_alpha");
    auto sol = solve(gram, rhs);
    if (!sol) throw StructureViolation("trace pairing solve failed");
    std::vector<int64_t> w(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) w[static_cast<size_t>(j)] = F.index((*sol)[static_cast<size_t>(j)]);
    return K.from_coeffs(w);
}

MatFq ModuleStructure::embed_sp_block(int alpha, const MatFq& g) const {
    const Block& blk = blocks[static_cast<size_t>(alpha)];
    const Fq& F = *torus.space.F;
    const Fq& K = *blk.field;
    if (g.rows() != 2 || g.cols() != 2 || g.field_ptr()->id() != K.id())
        throw ShapeError("embed_sp_block: expected 2x2 over K_alpha");
    if (!(g.det() == K.one())) throw DomainError("embed_sp_block: g is not K-symplectic (det != 1)");
    const int dimv = torus.space.dim();
    MatFq m(&F, dimv, dimv);
    for (int j = 0; j < dimv; ++j) {
        VecFq ej(static_cast<size_t>(dimv), F.zero());
        ej[static_cast<size_t>(j)] = F.one();
        VecFq w = blk.idempotent.apply(ej);
        VecFq rest = vec_sub(F, ej, w);  // (1 - e_alpha) e_j
        auto c = block_coords(alpha, w);
        Fe i1 = K.add(K.mul(g.at(0, 0), c[0]), K.mul(g.at(0, 1), c[1]));
        Fe i2 = K.add(K.mul(g.at(1, 0), c[0]), K.mul(g.at(1, 1), c[1]));
        VecFq img = vec_add(F, from_block_coords(alpha, {i1, i2}), rest);
        for (int i = 0; i < dimv; ++i) m.at(i, j) = img[static_cast<size_t>(i)];
    }
    return m;
}

MatFq ModuleStructure::embed_sp(const std::vector<MatFq>& gs) const {
    if (gs.size() != blocks.size()) throw ShapeError("embed_sp: one factor per block required");
    MatFq m = embed_sp_block(0, gs[0]);
    for (size_t a = 1; a < gs.size(); ++a) m = m * embed_sp_block(static_cast<int>(a), gs[a]);
    return m;
}

HeisElem ModuleStructure::embed_heis(const VecFq& v, const std::vector<Fe>& z_per_block) const {
    const Fq& F = *torus.space.F;
    if (z_per_block.size() != blocks.size()) throw ShapeError("embed_heis: one z per block required");
    Fe z = F.zero();
    for (size_t a = 0; a < blocks.size(); ++a)
        z = F.add(z, F.scalar(blocks[a].field->trace_to_prime(z_per_block[a])));
    return {v, z};
}

MatFq ModuleStructure::block_matrix(int alpha, const MatFq& t) const {
    const Block& blk = blocks[static_cast<size_t>(alpha)];
    const Fq& K = *blk.field;
    auto c1 = block_coords(alpha, t.apply(blk.v1));
    auto c2 = block_coords(alpha, t.apply(blk.v2));
    MatFq m(&K, 2, 2);
    m.at(0, 0) = c1[0];
    m.at(1, 0) = c1[1];
    m.at(0, 1) = c2[0];
    m.at(1, 1) = c2[1];
    return m;
}

ModuleStructure symplectic_decomposition(const TorusData& T) {
    const Fq& F = *T.space.F;
    if (F.degree() != 1) throw Unsupported("decomposition implemented over prime base fields");
    const int dimv = T.space.dim();
    const int64_t p = F.p();

    ModuleStructure ms;
    ms.torus = T;
    ms.alg = centralizer_algebra(T);
    ms.theta = theta_and_K(ms.alg, T.space);
    const auto& kb = ms.theta.k_basis;
    const int dk = static_cast<int>(kb.size());
    if (dk == 0) throw StructureViolation("fixed algebra K is empty");

    MatFq id = MatFq::identity(&F, dimv);

    // Generator of K: first element (in coefficient lex order) whose minimal
    // polynomial has degree dim K.
    MatFq gen = id;
    PolyP minp;
    bool found = false;
    int64_t total = 1;
    for (int i = 0; i < dk; ++i) total *= p;
    for (int64_t it = 1; it < total && !found; ++it) {
        int64_t rest = it;
        MatFq y = MatFq::zero(&F, dimv, dimv);
        for (int k = 0; k < dk; ++k) {
            int64_t ck = rest % p;
            rest /= p;
            if (ck != 0) y = y + kb[static_cast<size_t>(k)].scaled(F.scalar(ck));
        }
        PolyP m = minpoly_rel(y, id);
        if (m.deg() == dk) {
            gen = y;
            minp = m;
            found = true;
        }
    }
    if (!found) throw StructureViolation("no generator of K found");

    // Primitive idempotents by CRT over the factors of the minimal polynomial.
    auto factors = factor_modp(minp);
    for (const auto& [f, mult] : factors)
        if (mult != 1) throw StructureViolation("K generator minimal polynomial not squarefree");

    std::vector<MatFq> idems;
    for (const auto& [f, mult] : factors) {
        auto [quot, rem] = divmod(minp, f);
        if (!rem.is_zero()) throw StructureViolation("factor does not divide minimal polynomial");
        // L = quot * (quot^{-1} mod f); e = L(gen)
        auto [g, s, t] = ext_gcd(quot, f);
        if (g.deg() != 0) throw StructureViolation("CRT: cofactor not invertible modulo factor");
        PolyP inv = poly_mod(s, f);
        PolyP L = quot * inv;
        idems.push_back(eval_poly_at(L, gen, id));
    }
    // idempotent identities
    MatFq esum = MatFq::zero(&F, dimv, dimv);
    for (size_t a = 0; a < idems.size(); ++a) {
        if (!(idems[a] * idems[a] == idems[a])) throw StructureViolation("e_alpha not idempotent");
        for (size_t b = 0; b < idems.size(); ++b)
            if (a != b && !((idems[a] * idems[b]) == MatFq::zero(&F, dimv, dimv)))
                throw StructureViolation("idempotents not orthogonal");
        esum = esum + idems[a];
    }
    if (!(esum == id)) throw StructureViolation("idempotents do not sum to identity");

    // Blocks.
    for (size_t a = 0; a < idems.size(); ++a) {
        Block blk;
        blk.idempotent = idems[a];
        // F_p-basis of V_alpha = column space of e_alpha.
        {
            MatFq cols = idems[a];
            std::vector<VecFq> basis;
            std::vector<VecFq> rows;  // row-echelon scratch of collected basis
            for (int j = 0; j < dimv; ++j) {
                VecFq col(static_cast<size_t>(dimv));
                for (int i = 0; i < dimv; ++i) col[static_cast<size_t>(i)] = cols.at(i, j);
                if (vec_is_zero(F, col)) continue;
                // keep if independent of current basis
                MatFq sys(&F, dimv, static_cast<int>(basis.size()) + 1);
                for (size_t k = 0; k < basis.size(); ++k)
                    for (int i = 0; i < dimv; ++i) sys.at(i, static_cast<int>(k)) = basis[k][static_cast<size_t>(i)];
                for (int i = 0; i < dimv; ++i)
                    sys.at(i, static_cast<int>(basis.size())) = col[static_cast<size_t>(i)];
                if (rank(sys) == static_cast<int>(basis.size()) + 1) basis.push_back(col);
            }
            blk.fp_basis = std::move(basis);
        }
        const int dim_block = static_cast<int>(blk.fp_basis.size());
        const PolyP& f = factors[a].first;
        const int d = f.deg();
        if (dim_block != 2 * d) throw StructureViolation("block dimension != 2 [K_alpha : F_p]");

        // K_alpha generator and field.
        MatFq y_alpha = idems[a] * gen;
        PolyP m_alpha = minpoly_rel(y_alpha, idems[a]);
        if (!(m_alpha == monic(f))) throw StructureViolation("block generator minimal polynomial mismatch");
        blk.field = d == 1 ? std::make_shared<const Fq>(p) : std::make_shared<const Fq>(p, m_alpha);
        MatFq pw = idems[a];
        for (int k = 0; k < d; ++k) {
            blk.field_basis.push_back(pw);
            pw = pw * y_alpha;
        }
        ms.blocks.push_back(std::move(blk));
    }

    // Orthogonality of distinct blocks under omega.
    for (size_t a = 0; a < ms.blocks.size(); ++a)
        for (size_t b = 0; b < ms.blocks.size(); ++b) {
            if (a == b) continue;
            for (const auto& va : ms.blocks[a].fp_basis)
                for (const auto& vb : ms.blocks[b].fp_basis)
                    if (!F.is_zero(T.space.omega(va, vb)))
                        throw StructureViolation("blocks are not omega-orthogonal");
        }

    // K_alpha-basis (v1, v2) of each block, then the lifted form.
    for (size_t a = 0; a < ms.blocks.size(); ++a) {
        Block& blk = ms.blocks[a];
        const int d = blk.ext_degree();
        blk.v1 = blk.fp_basis[0];
        // span of K v1
        auto k_span_rank = [&](const std::vector<VecFq>& vs) {
            MatFq sys(&F, T.space.dim(), static_cast<int>(vs.size()));
            for (size_t k = 0; k < vs.size(); ++k)
                for (int i = 0; i < T.space.dim(); ++i) sys.at(i, static_cast<int>(k)) = vs[k][static_cast<size_t>(i)];
            return rank(sys);
        };
        std::vector<VecFq> kv1;
        for (int k = 0; k < d; ++k) kv1.push_back(blk.field_basis[static_cast<size_t>(k)].apply(blk.v1));
        if (k_span_rank(kv1) != d) throw StructureViolation("K v1 does not have full rank");
        bool got = false;
        for (const auto& cand : blk.fp_basis) {
            auto test = kv1;
            test.push_back(cand);
            if (k_span_rank(test) == d + 1) {
                blk.v2 = cand;
                got = true;
                break;
            }
        }
        if (!got) throw StructureViolation("no second K-basis vector found (V_alpha not free of rank 2)");
        blk.omega_bar_12 = ms.omega_bar(static_cast<int>(a), blk.v1, blk.v2);
        if (blk.field->is_zero(blk.omega_bar_12)) throw StructureViolation("lifted form is degenerate");
        // Normalize the basis so that omega_bar(v1, v2) = 1: the coordinate
        // identification V_alpha = K^2 is then symplectic w.r.t. the standard
        // form, which the reference models over K assume.
        blk.v2 = ms.k_matrix(static_cast<int>(a), blk.field->inv(blk.omega_bar_12)).apply(blk.v2);
        blk.omega_bar_12 = ms.omega_bar(static_cast<int>(a), blk.v1, blk.v2);
        if (!(blk.omega_bar_12 == blk.field->one()))
            throw StructureViolation("basis normalization failed to make omega_bar(v1, v2) = 1");
        // Tr o omega_bar = omega on all basis pairs of the block.
        for (const auto& u : blk.fp_basis)
            for (const auto& w : blk.fp_basis) {
                Fe ob = ms.omega_bar(static_cast<int>(a), u, w);
                if (blk.field->trace_to_prime(ob) != F.index(T.space.omega(u, w)))
                    throw StructureViolation("Tr(omega_bar) != omega");
            }
    }

    // Per-block tori T_alpha (identity off the block) and their 2x2 forms.
    int64_t order_product = 1;
    for (size_t a = 0; a < ms.blocks.size(); ++a) {
        Block& blk = ms.blocks[a];
        MatFq off = id - blk.idempotent;
        std::vector<int64_t> member_ids;
        std::vector<MatFq> two_by_two;
        for (int64_t i = 0; i < T.order(); ++i) {
            const MatFq& t = T.elements[static_cast<size_t>(i)];
            if (t * off == off) {
                member_ids.push_back(i);
                two_by_two.push_back(ms.block_matrix(static_cast<int>(a), t));
            }
        }
        SympSpace bsp = SympSpace::standard(blk.field.get(), 1);
        for (const auto& m : two_by_two)
            if (!is_symplectic(m, bsp)) throw StructureViolation("block torus element has det != 1");
        blk.block_torus = torus_from_elements(bsp, two_by_two);
        // map block elements back to global indices, verifying the embedding
        blk.global_of_block.assign(static_cast<size_t>(blk.block_torus.order()), -1);
        for (int64_t i = 0; i < blk.block_torus.order(); ++i) {
            MatFq emb = ms.embed_sp_block(static_cast<int>(a), blk.block_torus.elements[static_cast<size_t>(i)]);
            int64_t gi = T.find(emb);
            if (gi < 0) throw StructureViolation("embedded block element escapes the torus");
            blk.global_of_block[static_cast<size_t>(i)] = gi;
        }
        const int64_t qa = blk.q_alpha();
        if (blk.block_torus.order() == qa - 1)
            blk.split = true;
        else if (blk.block_torus.order() == qa + 1)
            blk.split = false;
        else
            throw StructureViolation("block torus order is neither q-1 nor q+1");
        order_product *= blk.block_torus.order();
    }
    if (order_product != T.order()) throw StructureViolation("product of block torus orders != |T|");

    // Factorization t = prod t_alpha for the torus generators.
    for (const auto& t : T.generators) {
        MatFq prod = id;
        for (size_t a = 0; a < ms.blocks.size(); ++a)
            prod = prod * ms.embed_sp_block(static_cast<int>(a), ms.block_matrix(static_cast<int>(a), t));
        if (!(prod == t)) throw StructureViolation("torus element does not factor through the blocks");
    }

    return ms;
}

SelfRedReport verify_self_reducibility(const ModuleStructure& ms, const WeilRep& rep, int nsamples, uint64_t seed) {
    const Fq& F = *ms.torus.space.F;
    if (rep.space().F->id() != F.id() || rep.space().n != ms.torus.space.n)
        throw FieldMismatch("verify_self_reducibility: representation space mismatch");
    SelfRedReport report;
    Rng rng(seed ^ 0xabcdef1234567890ULL);

    // Reference Weil representations over each K_alpha.
    std::vector<SympSpace> block_spaces;
    std::vector<std::unique_ptr<WeilRep>> refs;
    for (const auto& blk : ms.blocks) block_spaces.push_back(SympSpace::standard(blk.field.get(), 1));
    for (size_t a = 0; a < ms.blocks.size(); ++a)
        refs.push_back(std::make_unique<WeilRep>(block_spaces[a], seed + a));

    // (b) commutant of the pulled-back Heisenberg system.
    {
        const auto& model = rep.model();
        const int64_t n = model.dim();
        std::vector<Operator> gens;
        for (int i = 0; i < ms.torus.space.dim(); ++i) {
            VecFq v = ms.torus.space.zero_vec();
            v[static_cast<size_t>(i)] = F.one();
            std::vector<Fe> zz;
            for (const auto& blk : ms.blocks) zz.push_back(blk.field->zero());
            gens.push_back(model.pi(ms.embed_heis(v, zz)));
        }
        Eigen::MatrixXcd S(static_cast<Eigen::Index>(gens.size()) * n * n, n * n);
        Eigen::Index row0 = 0;
        for (const auto& P : gens) {
            Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n * n, n * n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    for (Eigen::Index k = 0; k < n; ++k) {
                        M(i * n + j, i * n + k) += P(k, j);
                        M(i * n + j, k * n + j) -= P(i, k);
                    }
            S.block(row0, 0, n * n, n * n) = M;
            row0 += n * n;
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(S);
        qr.setThreshold(1e-8);
        report.commutant_dim = n * n - qr.rank();
    }

    // central character psi-bar = psi o Tr on sampled central elements
    for (int it = 0; it < 32; ++it) {
        std::vector<Fe> zz;
        int64_t tr_sum = 0;
        for (const auto& blk : ms.blocks) {
            Fe z = blk.field->elem(static_cast<int64_t>(rng.below(static_cast<uint64_t>(blk.field->q()))));
            tr_sum += blk.field->trace_to_prime(z);
            zz.push_back(z);
        }
        HeisElem h = ms.embed_heis(ms.torus.space.zero_vec(), zz);
        Operator c = rep.model().pi(h);
        double res = (c - F.psi_int(tr_sum) * Operator::Identity(rep.dim(), rep.dim())).norm();
        report.max_central_residual = std::max(report.max_central_residual, res);
    }

    // (a) character match and (c) tensor multiplicativity.
    auto random_block_heis = [&](size_t a) {
        const Fq& K = *ms.blocks[a].field;
        VecFq v(2);
        v[0] = K.elem(static_cast<int64_t>(rng.below(static_cast<uint64_t>(K.q()))));
        v[1] = K.elem(static_cast<int64_t>(rng.below(static_cast<uint64_t>(K.q()))));
        Fe z = K.elem(static_cast<int64_t>(rng.below(static_cast<uint64_t>(K.q()))));
        return HeisElem{v, z};
    };
    for (int it = 0; it < nsamples; ++it) {
        // per-block elements of SL2(K_alpha), all inside the Cayley domain
        std::vector<MatFq> gs;
        bool ok = true;
        for (size_t a = 0; a < ms.blocks.size(); ++a) {
            const Fq& K = *ms.blocks[a].field;
            Rng& r = rng;
            MatFq g = random_symplectic(block_spaces[a], r);
            int guard = 0;
            while (K.is_zero((g - MatFq::identity(&K, 2)).det()) && guard++ < 64)
                g = random_symplectic(block_spaces[a], r);
            if (guard >= 64) ok = false;
            gs.push_back(g);
        }
        if (!ok) continue;
        MatFq big = ms.embed_sp(gs);
        // (a) trace of the restricted representation against the product of
        // the reference character formulas
        cplx lhs = rep.op(big).trace();
        cplx rhs = 1;
        for (size_t a = 0; a < ms.blocks.size(); ++a) rhs *= refs[a]->char_rho(gs[a]);
        report.max_char_residual = std::max(report.max_char_residual, std::abs(lhs - rhs));
        ++report.char_samples;

        // (c) Heisenberg-Weil characters multiply across blocks
        VecFq v = ms.torus.space.zero_vec();
        std::vector<Fe> zz;
        std::vector<HeisElem> hs;
        for (size_t a = 0; a < ms.blocks.size(); ++a) {
            HeisElem hb = random_block_heis(a);
            hs.push_back(hb);
            zz.push_back(hb.z);
            v = vec_add(F, v, ms.from_block_coords(static_cast<int>(a), {hb.v[0], hb.v[1]}));
        }
        HeisElem h = ms.embed_heis(v, zz);
        cplx tl = rep.char_tau_trace(big, h);
        cplx tr = 1;
        for (size_t a = 0; a < ms.blocks.size(); ++a) tr *= refs[a]->char_tau_trace(gs[a], hs[a]);
        report.max_tensor_residual = std::max(report.max_tensor_residual, std::abs(tl - tr));
        ++report.tensor_samples;
    }
    return report;
}

}  // namespace weillab
