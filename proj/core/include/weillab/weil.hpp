#pragma once

#include <list>
#include <mutex>
#include <string>
#include <unordered_map>

#include "weillab/heisenberg.hpp"

namespace weillab {

/// Action of Sp on the Heisenberg group: g(v, z) = (gv, z).
HeisElem sp_act(const MatFq& g, const HeisElem& h);

/// Jacobi group product on Sp x H with tau(g,h) = rho(g) pi(h) multiplicative:
/// (g, h)(g', h') = (g g', (g'^{-1} h) h').
std::pair<MatFq, HeisElem> jacobi_mul(const std::pair<MatFq, HeisElem>& a, const std::pair<MatFq, HeisElem>& b,
                                      const SympSpace& space);

/// The Weil representation of Sp(V, omega) over F_q, realized on the
/// Schroedinger model through the explicit kernel
///
///   K_g(v) = nu(g) psi((1/4) omega(kappa(g) v, v)),
///   nu(g)  = (G/q)^{2N} sigma(det(g - I)),
///
/// for g in the Cayley domain U = {det(g - I) != 0}, with rho(g) the
/// normalized inverse Weyl transform of K_g. Off U, rho(g) is computed as
/// rho(g t^{-1}) rho(t) for a randomly drawn t with both factors in U; the
/// draw is deterministic per instance (seeded), and well-definedness is a
/// tested property, not an assumption. Operators are cached (bounded LRU).
/// Concurrent op() calls are safe and return equal operators.
class WeilRep {
public:
    explicit WeilRep(const SympSpace& space, uint64_t seed = 0, size_t cache_capacity = 512);

    const SympSpace& space() const { return space_; }
    const SchrodingerModel& model() const { return model_; }
    int64_t dim() const { return model_.dim(); }

    /// nu(g); requires g in U.
    cplx normalizer(const MatFq& g) const;

    /// K_g on V (indexed by model().index_of_v); throws NotInCayleyDomain.
    std::vector<cplx> kernel(const MatFq& g) const;
    cplx kernel_at(const MatFq& g, const VecFq& v) const;

    /// rho(g) for any symplectic g.
    Operator op(const MatFq& g) const;

    /// Character sigma((-1)^N det(g - I)) on U; throws NotInCayleyDomain.
    cplx char_rho(const MatFq& g) const;

    /// ch_tau(g, v, z) = ch_rho(g) psi((1/4) omega(kappa(g) v, v) + z) on U.
    cplx char_tau(const MatFq& g, const HeisElem& h) const;

    /// Tr(rho(g) pi(h)): total (defined for every symplectic g); uses the
    /// cached operator and the sparse structure of pi.
    cplx char_tau_trace(const MatFq& g, const HeisElem& h) const;

    Operator tau(const MatFq& g, const HeisElem& h) const;

    /// || rho(g) pi(h) rho(g)^* - pi(g h) ||_F. Uses the adjoint as the
    /// inverse; unitarity is verified independently in the test suites.
    double egorov_residual(const MatFq& g, const HeisElem& h) const;

private:
    Operator compute_op(const MatFq& g) const;
    Operator cached_or_compute(const MatFq& g) const;

    SympSpace space_;
    SchrodingerModel model_;
    cplx nu_base_;  // (G/q)^{2N}

    mutable std::mutex mu_;
    mutable std::list<std::pair<std::string, Operator>> lru_;
    mutable std::unordered_map<std::string, std::list<std::pair<std::string, Operator>>::iterator> cache_;
    size_t cap_;
    mutable Rng rng_;
};

}  // namespace weillab
