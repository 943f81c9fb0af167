#pragma once

#include "weillab/module_structure.hpp"

namespace weillab {

/// P_chi = (1/|T|) sum_B chi^{-1}(B) rho(B): orthogonal projector on the
/// chi-eigenspace of the torus action.
Operator projector(const TorusData& T, int64_t chi, const WeilRep& rep);

/// Trace of an (approximate) idempotent, rounded; |trace - round| < 1e-6 is
/// asserted (StructureViolation otherwise).
int64_t multiplicity_measured(const Operator& P);

/// Restriction of a character of T to the alpha-th block torus, as an index
/// into that torus's character group.
int64_t restrict_chi(const ModuleStructure& ms, int alpha, int64_t chi);

/// Product over blocks of the two-dimensional multiplicity rule: 1 when the
/// restricted character differs from the block quadratic character sigma_a,
/// else 2 (split block) or 0 (inert block).
int64_t multiplicity_predicted(const ModuleStructure& ms, int64_t chi);

/// Same rule for a (cyclic, rank-1) maximal torus of SL_2.
int64_t multiplicity_predicted_sl2(const TorusData& T, TorusKind kind, int64_t chi);

/// Measured multiplicity with the closed-form prediction enforced; throws
/// StructureViolation on mismatch.
int64_t multiplicity(const ModuleStructure& ms, int64_t chi, const WeilRep& rep);

/// Orthonormal basis of H_chi with the deterministic phase convention (first
/// nonzero amplitude real positive). Throws EmptyEigenspace when m_chi = 0.
std::vector<State> hecke_eigenstates(const TorusData& T, int64_t chi, const WeilRep& rep);

/// Pure-tensor eigenbasis for an interleaved product torus in standard
/// coordinates: Kronecker products of the factor eigenstates. Index
/// conventions match product_torus/interleave, so these lie in H_chi of the
/// product representation.
std::vector<State> hecke_eigenstates_product(const TorusData& t1, int64_t chi1, const WeilRep& rep1,
                                             const TorusData& t2, int64_t chi2, const WeilRep& rep2);

/// One rho(A)-eigenspace: eigenvalue, spectral projector, multiplicity, and
/// the statistical (von Neumann) density operator P/m.
struct EigSpace {
    cplx lambda;
    Operator proj;
    int64_t mult = 0;
    Operator density;
};

struct RhoASpectrum {
    std::vector<EigSpace> spaces;
    bool ambiguous = false;  // some eigenvalue gap is below twice the tolerance
};

/// Unitary eigendecomposition of rho(A), eigenvalues grouped with the given
/// angular tolerance; collisions are flagged, not merged silently.
RhoASpectrum rho_a_spectrum(const MatFq& A, const WeilRep& rep, double angular_tol = 1e-6);

}  // namespace weillab
