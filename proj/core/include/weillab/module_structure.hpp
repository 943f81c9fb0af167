#pragma once

#include <array>
#include <memory>

#include "weillab/weil.hpp"

namespace weillab {

/// Basis of the centralizer algebra Z(T, End(V)); commutative for the tori
/// handled here (asserted, StructureViolation otherwise).
struct CentralizerAlgebra {
    std::vector<MatFq> basis;
    int dim() const { return static_cast<int>(basis.size()); }
};

CentralizerAlgebra centralizer_algebra(const TorusData& T);

/// The involution Theta = symplectic transpose restricted to the centralizer
/// algebra, together with its fixed subalgebra K.
struct ThetaData {
    std::vector<MatFq> theta_on_basis;  // Theta(b_i) as matrices
    std::vector<MatFq> k_basis;         // basis of K = A^Theta
};

ThetaData theta_and_K(const CentralizerAlgebra& alg, const SympSpace& space);

/// One factor of the canonical torus-invariant decomposition: a symplectic
/// subspace V_alpha that is free of rank 2 over the field K_alpha acting on
/// it, with the lifted K_alpha-linear symplectic form.
struct Block {
    MatFq idempotent;                    // e_alpha
    std::vector<VecFq> fp_basis;         // F_p-basis of V_alpha (2 d_alpha vectors)
    std::shared_ptr<const Fq> field;     // K_alpha, modulus = minpoly of the generator
    std::vector<MatFq> field_basis;      // matrices of e_alpha, y, y^2, ..., y^{d-1}
    VecFq v1, v2;                        // K_alpha-basis of V_alpha
    Fe omega_bar_12;                     // lifted form evaluated at (v1, v2)
    bool split = false;                  // |T_alpha| = q_alpha - 1 (else + 1)
    TorusData block_torus;               // T_alpha as 2x2 matrices over K_alpha
    std::vector<int64_t> global_of_block;  // block_torus element -> index in T

    int ext_degree() const { return field->degree(); }
    int64_t q_alpha() const { return field->q(); }
};

/// Record of the full decomposition attached to a torus: all invariants of
/// the construction are verified at build time.
struct ModuleStructure {
    TorusData torus;
    CentralizerAlgebra alg;
    ThetaData theta;
    std::vector<Block> blocks;

    int rank() const { return static_cast<int>(blocks.size()); }

    /// Matrix realizing an abstract element of K_alpha on V.
    MatFq k_matrix(int alpha, const Fe& x) const;
    /// Projection of v onto V_alpha (application of the idempotent).
    VecFq project(int alpha, const VecFq& v) const;
    /// K_alpha-coordinates of a vector of V_alpha w.r.t. (v1, v2).
    std::array<Fe, 2> block_coords(int alpha, const VecFq& v_alpha) const;
    VecFq from_block_coords(int alpha, const std::array<Fe, 2>& c) const;

    /// Lifted form: the unique K_alpha-valued solution of
    /// Tr(lambda w) = omega(lambda v, u) for all lambda; evaluated by the
    /// trace-pairing solve on the spot.
    Fe omega_bar(int alpha, const VecFq& v, const VecFq& u) const;

    /// iota_S on one factor: a K_alpha-linear symplectic 2x2 matrix acting on
    /// V_alpha, identity on the other blocks. Throws DomainError if g is not
    /// K-symplectic (det != 1).
    MatFq embed_sp_block(int alpha, const MatFq& g_over_K) const;
    /// iota_S for a tuple (g_alpha), one per block.
    MatFq embed_sp(const std::vector<MatFq>& gs) const;

    /// iota_H: (v, (z_alpha)) -> (v, sum_alpha Tr_{K_alpha/F_p} z_alpha).
    HeisElem embed_heis(const VecFq& v, const std::vector<Fe>& z_per_block) const;

    /// 2x2 coordinate form over K_alpha of a torus element preserving the
    /// blocks (the inverse of embed_sp_block on torus elements).
    MatFq block_matrix(int alpha, const MatFq& t) const;
};

/// Computes the canonical decomposition for a centralizer torus, an sl2
/// torus, or an interleaved product of such, verifying every structural
/// invariant (orthogonal symplectic blocks, rank-2 freeness, Tr o omega_bar
/// = omega, torus factorization). Throws StructureViolation on any failure.
ModuleStructure symplectic_decomposition(const TorusData& T);

/// Desk-scale verification of the self-reducibility property:
///  (a) character match Tr rho(iota_S(g)) vs the product of the reference
///      SL_2(K_alpha) character formulas, on sampled tuples with all factors
///      in the Cayley domains;
///  (b) commutant dimension of the pulled-back Heisenberg system (must be 1)
///      plus the central character psi o Tr;
///  (c) tensor multiplicativity of ch_tau against per-block references.
struct SelfRedReport {
    double max_char_residual = 0;
    double max_central_residual = 0;
    double max_tensor_residual = 0;
    int64_t commutant_dim = -1;
    int64_t char_samples = 0;
    int64_t tensor_samples = 0;

    bool pass(double tol = 1e-8) const {
        return commutant_dim == 1 && max_char_residual < tol && max_central_residual < tol &&
               max_tensor_residual < tol;
    }
};

SelfRedReport verify_self_reducibility(const ModuleStructure& ms, const WeilRep& rep, int nsamples = 200,
                                       uint64_t seed = 0);

}  // namespace weillab
