#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "weillab/symplectic.hpp"

namespace weillab {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using State = Eigen::VectorXcd;

/// Numerical tolerance policy: absolute for scalars, Frobenius-scaled for
/// matrices.
struct Tol {
    static constexpr double kScalar = 1e-9;
    static double matrix(int dim) { return 1e-9 * dim; }
};

/// Element (v, z) of the Heisenberg group H = V x F_q with multiplication
/// (v, z)(v', z') = (v + v', z + z' + (1/2) omega(v, v')).
struct HeisElem {
    VecFq v;
    Fe z;
};

HeisElem heis_identity(const SympSpace& space);
HeisElem heis_mul(const HeisElem& a, const HeisElem& b, const SympSpace& space);
HeisElem heis_inv(const HeisElem& a, const SympSpace& space);

/// Schroedinger realization of the Heisenberg representation with central
/// character psi on C(L), L the position Lagrangian spanned by the last n
/// coordinates (the first n span the momentum Lagrangian L'). For a vector
/// v = (a; b), a in L', b in L:
///
///   [pi(v, z) f](x) = psi(z - (1/2) a.b - a.x) f(x + b),
///
/// the unique composition of the modulation, translation and central actions
/// consistent with the group law and the kernel formula conventions used in
/// the Weil layer. States are indexed by x in F_q^n, big-endian mixed radix.
class SchrodingerModel {
public:
    explicit SchrodingerModel(const SympSpace& space);

    const SympSpace& space() const { return space_; }
    const Fq& field() const { return *space_.F; }
    int n() const { return space_.n; }
    int64_t dim() const { return dim_; }       // q^n
    int64_t vcount() const { return vcount_; }  // q^(2n)

    // position-space indexing (vectors in F_q^n)
    VecFq point_of_index(int64_t idx) const;
    int64_t index_of_point(const VecFq& x) const;

    // full phase-space indexing (vectors in F_q^(2n))
    VecFq v_of_index(int64_t idx) const;
    int64_t index_of_v(const VecFq& v) const;

    Operator pi(const HeisElem& h) const;
    Operator pi_v(const VecFq& v) const;

    /// M += s * pi(v, 0); avoids materializing the sparse factor.
    void add_pi_scaled(Operator& M, const VecFq& v, cplx s) const;
    void add_pi_scaled(Operator& M, int64_t v_index, cplx s) const;

    /// Tr(A pi(v, z)^{-1}) style pairing: exact trace of pi(v, z) itself is
    /// q^n delta_{v,0} psi(z).
    cplx trace_pi(const HeisElem& h) const;

    /// Tr(A * pi(v, 0)) computed against the sparse structure in O(q^n).
    cplx trace_against_pi(const Operator& A, const VecFq& v) const;
    cplx trace_against_pi(const Operator& A, int64_t v_index) const;

    /// Weyl transform restricted to V x {0}: W(A)(v) = Tr(A pi(-v, 0)) / q^n,
    /// indexed by index_of_v.
    std::vector<cplx> weyl_transform(const Operator& A) const;

    /// Normalized inverse: pi(K) = sum_v K(v) pi(v, 0). With this
    /// normalization weyl_inverse(weyl_transform(A)) == A.
    Operator weyl_inverse(const std::vector<cplx>& K) const;

private:
    SympSpace space_;
    int64_t dim_ = 0;
    int64_t vcount_ = 0;
    // Index tables for allocation-free inner loops. With v = (a; b) and
    // point indices x, y in [0, dim):
    //   shift_[b * dim + x]      = index of x + b
    //   tr_adot_[a * dim + x]    = Tr(a . x) mod p
    //   tr_half_ab_[a * dim + b] = Tr((1/2) a . b) mod p
    std::vector<int32_t> shift_;
    std::vector<int32_t> tr_adot_;
    std::vector<int32_t> tr_half_ab_;
};

/// Kronecker product helper (row-major index pairing: index = i1 * dim2 + i2).
Operator kron(const Operator& A, const Operator& B);
State kron_state(const State& a, const State& b);

}  // namespace weillab
