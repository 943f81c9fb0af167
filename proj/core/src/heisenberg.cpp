#include "weillab/heisenberg.hpp"

#include "weillab/errors.hpp"

namespace weillab {

HeisElem heis_identity(const SympSpace& space) { return {space.zero_vec(), space.F->zero()}; }

HeisElem heis_mul(const HeisElem& a, const HeisElem& b, const SympSpace& space) {
    const Fq& F = *space.F;
    if (a.v.size() != b.v.size() || static_cast<int>(a.v.size()) != space.dim())
        throw ShapeError("heis_mul: ambient space mismatch");
    HeisElem r;
    r.v = vec_add(F, a.v, b.v);
    r.z = F.add(F.add(a.z, b.z), F.mul(F.half(), space.omega(a.v, b.v)));
    return r;
}

HeisElem heis_inv(const HeisElem& a, const SympSpace& space) {
    // (v, z)^{-1} = (-v, -z): omega(v, -v) = 0 kills the twist.
    const Fq& F = *space.F;
    return {vec_neg(F, a.v), F.neg(a.z)};
}

SchrodingerModel::SchrodingerModel(const SympSpace& space) : space_(space) {
    const Fq& F = *space_.F;
    if (F.q() == 3 && space_.n == 1)
        throw Unsupported("(q, dim V) = (3, 2) is excluded (no canonical linearization)");
    dim_ = 1;
    for (int i = 0; i < space_.n; ++i) dim_ *= F.q();
    vcount_ = dim_ * dim_;

    const int n = space_.n;
    const int64_t half = inv_mod(2, F.p());
    shift_.resize(static_cast<size_t>(vcount_));
    tr_adot_.resize(static_cast<size_t>(vcount_));
    tr_half_ab_.resize(static_cast<size_t>(vcount_));
    std::vector<VecFq> pts(static_cast<size_t>(dim_));
    for (int64_t i = 0; i < dim_; ++i) pts[static_cast<size_t>(i)] = point_of_index(i);
    for (int64_t a = 0; a < dim_; ++a) {
        const VecFq& av = pts[static_cast<size_t>(a)];
        for (int64_t x = 0; x < dim_; ++x) {
            const VecFq& xv = pts[static_cast<size_t>(x)];
            Fe dot = F.zero();
            for (int i = 0; i < n; ++i) dot = F.add(dot, F.mul(av[static_cast<size_t>(i)], xv[static_cast<size_t>(i)]));
            int64_t tr = F.trace_to_prime(dot);
            tr_adot_[static_cast<size_t>(a * dim_ + x)] = static_cast<int32_t>(tr);
            tr_half_ab_[static_cast<size_t>(a * dim_ + x)] = static_cast<int32_t>(mul_mod(tr, half, F.p()));
            shift_[static_cast<size_t>(a * dim_ + x)] = static_cast<int32_t>(index_of_point(vec_add(F, xv, av)));
        }
    }
}

VecFq SchrodingerModel::point_of_index(int64_t idx) const {
    const Fq& F = *space_.F;
    VecFq x(static_cast<size_t>(space_.n), F.zero());
    for (int i = space_.n - 1; i >= 0; --i) {
        x[static_cast<size_t>(i)] = F.elem(idx % F.q());
        idx /= F.q();
    }
    return x;
}

int64_t SchrodingerModel::index_of_point(const VecFq& x) const {
    const Fq& F = *space_.F;
    int64_t idx = 0;
    for (int i = 0; i < space_.n; ++i) idx = idx * F.q() + F.index(x[static_cast<size_t>(i)]);
    return idx;
}

VecFq SchrodingerModel::v_of_index(int64_t idx) const {
    const Fq& F = *space_.F;
    VecFq v(static_cast<size_t>(space_.dim()), F.zero());
    for (int i = space_.dim() - 1; i >= 0; --i) {
        v[static_cast<size_t>(i)] = F.elem(idx % F.q());
        idx /= F.q();
    }
    return v;
}

int64_t SchrodingerModel::index_of_v(const VecFq& v) const {
    const Fq& F = *space_.F;
    int64_t idx = 0;
    for (int i = 0; i < space_.dim(); ++i) idx = idx * F.q() + F.index(v[static_cast<size_t>(i)]);
    return idx;
}

Operator SchrodingerModel::pi(const HeisElem& h) const {
    Operator M = Operator::Zero(dim_, dim_);
    const Fq& F = *space_.F;
    add_pi_scaled(M, index_of_v(h.v), F.psi(h.z));
    return M;
}

Operator SchrodingerModel::pi_v(const VecFq& v) const { return pi({v, space_.F->zero()}); }

void SchrodingerModel::add_pi_scaled(Operator& M, const VecFq& v, cplx s) const {
    add_pi_scaled(M, index_of_v(v), s);
}

void SchrodingerModel::add_pi_scaled(Operator& M, int64_t v_index, cplx s) const {
    const Fq& F = *space_.F;
    const int64_t a = v_index / dim_, b = v_index % dim_;
    const int64_t p = F.p();
    const int32_t* sh = shift_.data() + b * dim_;
    const int32_t* ad = tr_adot_.data() + a * dim_;
    const int64_t hab = tr_half_ab_[static_cast<size_t>(a * dim_ + b)];
    for (int64_t x = 0; x < dim_; ++x) {
        int64_t t = mod_reduce(-hab - ad[x], p);
        M(x, sh[x]) += s * F.psi_int(t);
    }
}

cplx SchrodingerModel::trace_pi(const HeisElem& h) const {
    const Fq& F = *space_.F;
    if (!vec_is_zero(F, h.v)) return 0.0;
    return double(dim_) * F.psi(h.z);
}

cplx SchrodingerModel::trace_against_pi(const Operator& A, const VecFq& v) const {
    return trace_against_pi(A, index_of_v(v));
}

cplx SchrodingerModel::trace_against_pi(const Operator& A, int64_t v_index) const {
    const Fq& F = *space_.F;
    const int64_t a = v_index / dim_, b = v_index % dim_;
    const int64_t p = F.p();
    const int32_t* sh = shift_.data() + b * dim_;
    const int32_t* ad = tr_adot_.data() + a * dim_;
    const int64_t hab = tr_half_ab_[static_cast<size_t>(a * dim_ + b)];
    cplx acc = 0;
    // Tr(A pi(v,0)) = sum_y A[y+b][y] psi(-a.b/2 - a.y)
    for (int64_t y = 0; y < dim_; ++y) {
        int64_t t = mod_reduce(-hab - ad[y], p);
        acc += A(sh[y], y) * F.psi_int(t);
    }
    return acc;
}

std::vector<cplx> SchrodingerModel::weyl_transform(const Operator& A) const {
    if (A.rows() != dim_ || A.cols() != dim_) throw ShapeError("weyl_transform: operator dimension mismatch");
    const Fq& F = *space_.F;
    std::vector<cplx> K(static_cast<size_t>(vcount_));
    for (int64_t vi = 0; vi < vcount_; ++vi) {
        VecFq v = v_of_index(vi);
        K[static_cast<size_t>(vi)] = trace_against_pi(A, vec_neg(F, v)) / double(dim_);
    }
    return K;
}

Operator SchrodingerModel::weyl_inverse(const std::vector<cplx>& K) const {
    if (static_cast<int64_t>(K.size()) != vcount_) throw ShapeError("weyl_inverse: kernel size mismatch");
    Operator M = Operator::Zero(dim_, dim_);
    for (int64_t vi = 0; vi < vcount_; ++vi) {
        if (K[static_cast<size_t>(vi)] == cplx(0)) continue;
        add_pi_scaled(M, v_of_index(vi), K[static_cast<size_t>(vi)]);
    }
    return M;
}

Operator kron(const Operator& A, const Operator& B) {
    Operator M(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            M.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return M;
}

State kron_state(const State& a, const State& b) {
    State s(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) s.segment(i * b.size(), b.size()) = a(i) * b;
    return s;
}

}  // namespace weillab
