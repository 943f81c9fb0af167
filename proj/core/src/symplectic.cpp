#include "weillab/symplectic.hpp"

#include <algorithm>

#include "weillab/errors.hpp"

namespace weillab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

SympSpace SympSpace::standard(const Fq* F, int n) {
    SympSpace s;
    s.F = F;
    s.n = n;
    s.gram = MatFq(F, 2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        s.gram.at(i, n + i) = F->one();
        s.gram.at(n + i, i) = F->neg(F->one());
    }
    return s;
}

Fe SympSpace::omega(const VecFq& u, const VecFq& v) const {
    if (static_cast<int>(u.size()) != dim() || static_cast<int>(v.size()) != dim())
        throw ShapeError("omega: vector dimension mismatch");
    VecFq gv = gram.apply(v);
    Fe acc = F->zero();
    for (size_t i = 0; i < u.size(); ++i) acc = F->add(acc, F->mul(u[i], gv[i]));
    return acc;
}

bool is_symplectic(const MatFq& g, const SympSpace& space) {
    if (g.rows() != space.dim() || g.cols() != space.dim()) throw ShapeError("is_symplectic: wrong shape");
    return g.transpose() * space.gram * g == space.gram;
}

MatFq cayley(const MatFq& g) {
    const Fq& F = g.field();
    MatFq id = MatFq::identity(&F, g.rows());
    MatFq gm = g - id;
    if (F.is_zero(gm.det())) throw NotInCayleyDomain("g - I is singular");
    return (g + id) * gm.inverse();
}

MatFq symp_transpose(const MatFq& R, const SympSpace& space) {
    if (R.rows() != space.dim() || R.cols() != space.dim()) throw ShapeError("symp_transpose: wrong shape");
    return space.gram.inverse() * R.transpose() * space.gram;
}

MatFq transvection(const SympSpace& space, const VecFq& u, const Fe& lambda) {
    const Fq& F = *space.F;
    const int d = space.dim();
    MatFq t = MatFq::identity(&F, d);
    for (int j = 0; j < d; ++j) {
        VecFq ej(static_cast<size_t>(d), F.zero());
        ej[static_cast<size_t>(j)] = F.one();
        Fe c = F.mul(lambda, space.omega(ej, u));
        for (int i = 0; i < d; ++i) t.at(i, j) = F.add(t.at(i, j), F.mul(c, u[static_cast<size_t>(i)]));
    }
    return t;
}

MatFq random_symplectic(const SympSpace& space, Rng& rng) {
    const Fq& F = *space.F;
    const int d = space.dim();
    MatFq g = MatFq::identity(&F, d);
    const int steps = 4 * d + 4;
    for (int s = 0; s < steps; ++s) {
        VecFq u(static_cast<size_t>(d), F.zero());
        bool nonzero = false;
        while (!nonzero) {
            for (auto& x : u) x = F.elem(static_cast<int64_t>(rng.below(static_cast<uint64_t>(F.q()))));
            nonzero = !vec_is_zero(F, u);
        }
        Fe lambda = F.elem(1 + static_cast<int64_t>(rng.below(static_cast<uint64_t>(F.q() - 1))));
        g = g * transvection(space, u, lambda);
    }
    return g;
}

std::vector<MatFq> enumerate_sl2(const Fq& F) {
    std::vector<MatFq> out;
    const int64_t q = F.q();
    for (int64_t a = 0; a < q; ++a)
        for (int64_t b = 0; b < q; ++b)
            for (int64_t c = 0; c < q; ++c)
                for (int64_t d = 0; d < q; ++d) {
                    Fe ea = F.elem(a), eb = F.elem(b), ec = F.elem(c), ed = F.elem(d);
                    Fe det = F.sub(F.mul(ea, ed), F.mul(eb, ec));
                    if (det == F.one()) {
                        MatFq m(&F, 2, 2);
                        m.at(0, 0) = ea;
                        m.at(0, 1) = eb;
                        m.at(1, 0) = ec;
                        m.at(1, 1) = ed;
                        out.push_back(std::move(m));
                    }
                }
    return out;
}

namespace {

// Coordinate embedding used by interleave: block 1 occupies momentum slots
// [0, n1) and position slots [n, n+n1); block 2 the rest.
int ileave_index(int i, int nblk, int offset, int n) {
    return i < nblk ? offset + i : n + offset + (i - nblk);
}

}  // namespace

MatFq interleave(const MatFq& g1, int n1, const MatFq& g2, int n2) {
    const Fq& F = g1.field();
    const int n = n1 + n2;
    MatFq m(&F, 2 * n, 2 * n);
    for (int i = 0; i < 2 * n1; ++i)
        for (int j = 0; j < 2 * n1; ++j)
            m.at(ileave_index(i, n1, 0, n), ileave_index(j, n1, 0, n)) = g1.at(i, j);
    for (int i = 0; i < 2 * n2; ++i)
        for (int j = 0; j < 2 * n2; ++j)
            m.at(ileave_index(i, n2, n1, n), ileave_index(j, n2, n1, n)) = g2.at(i, j);
    return m;
}

VecFq interleave_vec(const VecFq& v1, int n1, const VecFq& v2, int n2) {
    const int n = n1 + n2;
    VecFq v(static_cast<size_t>(2 * n));
    for (int i = 0; i < 2 * n1; ++i) v[static_cast<size_t>(ileave_index(i, n1, 0, n))] = v1[static_cast<size_t>(i)];
    for (int i = 0; i < 2 * n2; ++i) v[static_cast<size_t>(ileave_index(i, n2, n1, n))] = v2[static_cast<size_t>(i)];
    return v;
}

std::pair<VecFq, VecFq> split_vec(const VecFq& v, int n1, int n2) {
    const int n = n1 + n2;
    VecFq v1(static_cast<size_t>(2 * n1)), v2(static_cast<size_t>(2 * n2));
    for (int i = 0; i < 2 * n1; ++i) v1[static_cast<size_t>(i)] = v[static_cast<size_t>(ileave_index(i, n1, 0, n))];
    for (int i = 0; i < 2 * n2; ++i) v2[static_cast<size_t>(i)] = v[static_cast<size_t>(ileave_index(i, n2, n1, n))];
    return {v1, v2};
}

// --------------------------------------------------------------------------

void TorusData::rebuild_index() {
    index_.clear();
    for (size_t i = 0; i < elements.size(); ++i) index_[elements[i].key()] = static_cast<int64_t>(i);
}

std::vector<int64_t> TorusData::decode(int64_t index) const {
    std::vector<int64_t> e(orders.size());
    for (size_t k = orders.size(); k-- > 0;) {
        e[k] = index % orders[k];
        index /= orders[k];
    }
    return e;
}

int64_t TorusData::encode(const std::vector<int64_t>& exps) const {
    int64_t idx = 0;
    for (size_t k = 0; k < orders.size(); ++k) idx = idx * orders[k] + mod_reduce(exps[k], orders[k]);
    return idx;
}

int64_t TorusData::find(const MatFq& g) const {
    auto it = index_.find(g.key());
    return it == index_.end() ? -1 : it->second;
}

std::complex<double> TorusData::chi(int64_t chi_index, int64_t elem_index) const {
    auto j = decode(chi_index);
    auto e = decode(elem_index);
    double angle = 0;
    for (size_t k = 0; k < orders.size(); ++k)
        angle += kTwoPi * double(mod_reduce(j[k] * e[k], orders[k])) / double(orders[k]);
    return {std::cos(angle), std::sin(angle)};
}

int64_t TorusData::chi_inverse(int64_t chi_index) const {
    auto j = decode(chi_index);
    for (size_t k = 0; k < orders.size(); ++k) j[k] = mod_reduce(-j[k], orders[k]);
    return encode(j);
}

int64_t TorusData::chi_mul(int64_t a, int64_t b) const {
    auto ja = decode(a), jb = decode(b);
    for (size_t k = 0; k < orders.size(); ++k) ja[k] = mod_reduce(ja[k] + jb[k], orders[k]);
    return encode(ja);
}

int64_t TorusData::quadratic_chi() const {
    int64_t found = -1;
    for (int64_t j = 1; j < num_chars(); ++j) {
        auto e = decode(j);
        bool order2 = true;
        for (size_t k = 0; k < orders.size(); ++k)
            if (mod_reduce(2 * e[k], orders[k]) != 0) order2 = false;
        if (order2) {
            if (found >= 0) throw StructureViolation("quadratic character is not unique");
            found = j;
        }
    }
    if (found < 0) throw StructureViolation("torus has odd order, no quadratic character");
    return found;
}

bool TorusData::is_eigenvector(const VecFq& v) const {
    const Fq& F = *space.F;
    if (vec_is_zero(F, v)) return true;
    // A line is torus-invariant iff it is invariant under every generator.
    for (const auto& g : generators) {
        VecFq gv = g.apply(v);
        size_t piv = 0;
        while (piv < v.size() && F.is_zero(v[piv])) ++piv;
        Fe c = F.mul(gv[piv], F.inv(v[piv]));
        if (!vec_is_zero(F, vec_sub(F, gv, vec_scale(F, c, v)))) return false;
    }
    return true;
}

namespace {

int64_t element_order(const MatFq& g) {
    MatFq x = g;
    int64_t k = 1;
    while (!x.is_identity()) {
        x = x * g;
        ++k;
        if (k > 2'000'000) throw StructureViolation("element order exceeds sanity cap");
    }
    return k;
}

}  // namespace

TorusData torus_from_elements(const SympSpace& space, std::vector<MatFq> elems) {
    const Fq& F = *space.F;
    TorusData T;
    T.space = space;
    const int64_t size = static_cast<int64_t>(elems.size());

    std::map<std::vector<int64_t>, int64_t> present;
    for (size_t i = 0; i < elems.size(); ++i) present[elems[i].key()] = static_cast<int64_t>(i);

    // Closure/abelian sanity on generatable structure is verified implicitly:
    // the greedy basis below must reproduce exactly the given element set.
    std::vector<MatFq> gens;
    std::vector<int64_t> orders;

    std::map<std::vector<int64_t>, int64_t> have;  // subgroup generated so far
    std::vector<MatFq> have_list{MatFq::identity(&F, space.dim())};
    have[have_list[0].key()] = 0;

    auto quotient_order = [&](const MatFq& g) {
        MatFq x = g;
        int64_t k = 1;
        while (have.find(x.key()) == have.end()) {
            x = x * g;
            ++k;
        }
        return k;
    };

    while (static_cast<int64_t>(have_list.size()) < size) {
        // candidates sorted by quotient order, descending; deterministic ties.
        int64_t best_ord = 0;
        std::vector<std::pair<int64_t, int64_t>> cand;  // (qord, elem idx)
        for (int64_t i = 0; i < size; ++i) {
            int64_t qo = quotient_order(elems[static_cast<size_t>(i)]);
            if (qo > 1) cand.emplace_back(qo, i);
            best_ord = std::max(best_ord, qo);
        }
        std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        bool extended = false;
        for (const auto& [qo, idx] : cand) {
            if (extended) break;
            if (qo < best_ord) break;  // only maximal quotient order candidates
            const MatFq& g = elems[static_cast<size_t>(idx)];
            // correction x in the current subgroup with (g x)^qo = I
            for (const auto& x : have_list) {
                MatFq gx = g * x;
                if (gx.pow(qo).is_identity() && quotient_order(gx) == qo) {
                    gens.push_back(gx);
                    orders.push_back(qo);
                    extended = true;
                    break;
                }
            }
        }
        if (!extended) throw StructureViolation("failed to extract abelian group basis");
        // regenerate subgroup
        have.clear();
        have_list.clear();
        int64_t total = 1;
        for (int64_t m : orders) total *= m;
        have_list.reserve(static_cast<size_t>(total));
        for (int64_t idx = 0; idx < total; ++idx) {
            int64_t rest = idx;
            MatFq m = MatFq::identity(&F, space.dim());
            for (size_t k = gens.size(); k-- > 0;) {
                int64_t e = rest % orders[k];
                rest /= orders[k];
                if (e > 0) m = gens[k].pow(e) * m;
            }
            if (have.find(m.key()) != have.end())
                throw StructureViolation("generator orders do not multiply independently");
            have[m.key()] = static_cast<int64_t>(have_list.size());
            have_list.push_back(std::move(m));
        }
    }
    // The generated set must coincide with the input set.
    for (const auto& m : have_list)
        if (present.find(m.key()) == present.end())
            throw StructureViolation("generated subgroup escapes the given element set");

    if (gens.empty()) {
        gens.push_back(MatFq::identity(&F, space.dim()));
        orders.push_back(1);
    }

    // Re-enumerate elements in exponent order (mixed radix, last generator
    // fastest) so that chi/decode stay aligned.
    T.generators = gens;
    T.orders = orders;
    T.elements.clear();
    int64_t total = 1;
    for (int64_t m : orders) total *= m;
    T.elements.reserve(static_cast<size_t>(total));
    for (int64_t idx = 0; idx < total; ++idx) {
        int64_t rest = idx;
        MatFq m = MatFq::identity(&F, space.dim());
        for (size_t k = gens.size(); k-- > 0;) {
            int64_t e = rest % orders[k];
            rest /= orders[k];
            if (e > 0) m = gens[k].pow(e) * m;
        }
        T.elements.push_back(std::move(m));
    }
    T.rebuild_index();
    return T;
}

Fe canonical_nonsquare(const Fq& F) {
    for (int64_t i = 1; i < F.q(); ++i) {
        Fe x = F.elem(i);
        if (F.quad_char(x) == -1) return x;
    }
    throw DomainError("no non-square found (field of characteristic 2?)");
}

TorusData sl2_torus(const Fq& F, TorusKind kind) {
    SympSpace space = SympSpace::standard(&F, 1);
    std::vector<MatFq> elems;
    if (kind == TorusKind::Split) {
        for (int64_t i = 1; i < F.q(); ++i) {
            Fe a = F.elem(i);
            MatFq m(&F, 2, 2);
            m.at(0, 0) = a;
            m.at(1, 1) = F.inv(a);
            elems.push_back(std::move(m));
        }
    } else {
        const Fe r = canonical_nonsquare(F);
        // norm-one elements a + b sqrt(r) of F_{q^2} acting on F_q^2 in the
        // basis {1, sqrt(r)}: [[a, r b], [b, a]], a^2 - r b^2 = 1.
        for (int64_t ia = 0; ia < F.q(); ++ia)
            for (int64_t ib = 0; ib < F.q(); ++ib) {
                Fe a = F.elem(ia), b = F.elem(ib);
                Fe norm = F.sub(F.mul(a, a), F.mul(r, F.mul(b, b)));
                if (norm == F.one()) {
                    MatFq m(&F, 2, 2);
                    m.at(0, 0) = a;
                    m.at(0, 1) = F.mul(r, b);
                    m.at(1, 0) = b;
                    m.at(1, 1) = a;
                    elems.push_back(std::move(m));
                }
            }
    }
    for (const auto& g : elems)
        if (!is_symplectic(g, space)) throw StructureViolation("torus element not symplectic");
    return torus_from_elements(space, std::move(elems));
}

TorusData centralizer_torus(const MatFq& A, const SympSpace& space) {
    const Fq& F = *space.F;
    const int d = space.dim();
    if (A.rows() != d || A.cols() != d) throw ShapeError("centralizer_torus: wrong shape");
    if (!is_symplectic(A, space)) throw DomainError("centralizer_torus: A is not symplectic");

    // Regularity: squarefree characteristic polynomial.
    auto cp = charpoly(A);
    std::vector<int64_t> cp_int;
    if (F.degree() == 1) {
        cp_int.reserve(cp.size());
        for (const auto& c : cp) cp_int.push_back(F.index(c));
        PolyP f(F.p(), cp_int);
        if (gcd(f, derivative(f)).deg() != 0) throw NotRegular("characteristic polynomial is not squarefree");
    } else {
        // generic base field: squarefree test via gcd over Fq done through
        // the matrix route (A regular iff minimal poly = char poly); we check
        // that {I, A, ..., A^{2n-1}} is linearly independent below.
    }

    // Enumerate F[A] = span{I, A, ..., A^{2n-1}} and keep symplectic members.
    std::vector<MatFq> powers;
    MatFq acc = MatFq::identity(&F, d);
    for (int i = 0; i < d; ++i) {
        powers.push_back(acc);
        acc = acc * A;
    }
    // Independence of powers (regularity in the general-field branch).
    MatFq pm(&F, d * d, d);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) pm.at(i * d + j, k) = powers[static_cast<size_t>(k)].at(i, j);
    if (rank(pm) != d) throw NotRegular("minimal polynomial degree < dim (A not regular)");

    std::vector<MatFq> elems;
    const int64_t q = F.q();
    std::vector<int64_t> coef(static_cast<size_t>(d), 0);
    int64_t total = 1;
    for (int i = 0; i < d; ++i) total *= q;
    for (int64_t it = 0; it < total; ++it) {
        int64_t rest = it;
        MatFq m(&F, d, d);
        for (int k = 0; k < d; ++k) {
            int64_t ck = rest % q;
            rest /= q;
            if (ck != 0) m = m + powers[static_cast<size_t>(k)].scaled(F.elem(ck));
        }
        if (is_symplectic(m, space)) elems.push_back(std::move(m));
    }
    TorusData T = torus_from_elements(space, std::move(elems));
    if (T.find(A) < 0) throw StructureViolation("A missing from its own centralizer torus");
    return T;
}

TorusData product_torus(const TorusData& t1, const TorusData& t2) {
    const Fq& F = *t1.space.F;
    if (F.id() != t2.space.F->id()) throw FieldMismatch("product_torus: different base fields");
    const int n1 = t1.space.n, n2 = t2.space.n;
    SympSpace space = SympSpace::standard(&F, n1 + n2);
    std::vector<MatFq> elems;
    elems.reserve(static_cast<size_t>(t1.order() * t2.order()));
    for (const auto& a : t1.elements)
        for (const auto& b : t2.elements) elems.push_back(interleave(a, n1, b, n2));
    return torus_from_elements(space, std::move(elems));
}

}  // namespace weillab
