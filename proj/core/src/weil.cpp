#include "weillab/weil.hpp"

#include "weillab/errors.hpp"

namespace weillab {

HeisElem sp_act(const MatFq& g, const HeisElem& h) { return {g.apply(h.v), h.z}; }

std::pair<MatFq, HeisElem> jacobi_mul(const std::pair<MatFq, HeisElem>& a, const std::pair<MatFq, HeisElem>& b,
                                      const SympSpace& space) {
    MatFq g = a.first * b.first;
    HeisElem h = heis_mul(sp_act(b.first.inverse(), a.second), b.second, space);
    return {g, h};
}

namespace {

std::string mat_key(const MatFq& g) {
    auto k = g.key();
    std::string s(reinterpret_cast<const char*>(k.data()), k.size() * sizeof(int64_t));
    return s;
}

}  // namespace

WeilRep::WeilRep(const SympSpace& space, uint64_t seed, size_t cache_capacity)
    : space_(space), model_(space), cap_(cache_capacity), rng_(seed * 0x9e3779b97f4a7c15ULL + 1) {
    const Fq& F = *space_.F;
    cplx gq = F.gauss_sum() / double(F.q());
    nu_base_ = 1.0;
    for (int i = 0; i < 2 * space_.n; ++i) nu_base_ *= gq;
}

cplx WeilRep::normalizer(const MatFq& g) const {
    const Fq& F = *space_.F;
    MatFq gm = g - MatFq::identity(&F, space_.dim());
    Fe d = gm.det();
    if (F.is_zero(d)) throw NotInCayleyDomain("nu(g): g - I singular");
    return nu_base_ * double(F.quad_char(d));
}

cplx WeilRep::kernel_at(const MatFq& g, const VecFq& v) const {
    const Fq& F = *space_.F;
    MatFq k = cayley(g);
    cplx nu = normalizer(g);
    Fe form = F.mul(F.quarter(), space_.omega(k.apply(v), v));
    return nu * F.psi(form);
}

std::vector<cplx> WeilRep::kernel(const MatFq& g) const {
    const Fq& F = *space_.F;
    MatFq k = cayley(g);  // throws off U
    cplx nu = normalizer(g);
    const Fe quarter = F.quarter();
    std::vector<cplx> K(static_cast<size_t>(model_.vcount()));
    for (int64_t vi = 0; vi < model_.vcount(); ++vi) {
        VecFq v = model_.v_of_index(vi);
        Fe form = F.mul(quarter, space_.omega(k.apply(v), v));
        K[static_cast<size_t>(vi)] = nu * F.psi(form);
    }
    return K;
}

Operator WeilRep::compute_op(const MatFq& g) const {
    const Fq& F = *space_.F;
    if (g.is_identity()) return Operator::Identity(model_.dim(), model_.dim());
    MatFq gm = g - MatFq::identity(&F, space_.dim());
    if (!F.is_zero(gm.det())) return model_.weyl_inverse(kernel(g));

    // Off the Cayley domain: rho(g) = rho(g t^{-1}) rho(t), both factors in U.
    for (int attempt = 0; attempt < 4096; ++attempt) {
        MatFq t = random_symplectic(space_, rng_);
        MatFq tm = t - MatFq::identity(&F, space_.dim());
        if (F.is_zero(tm.det())) continue;
        MatFq gt = g * t.inverse();
        MatFq gtm = gt - MatFq::identity(&F, space_.dim());
        if (F.is_zero(gtm.det())) continue;
        return model_.weyl_inverse(kernel(gt)) * model_.weyl_inverse(kernel(t));
    }
    throw FactorizationFailed("no Cayley-domain factorization found");
}

Operator WeilRep::cached_or_compute(const MatFq& g) const {
    const std::string key = mat_key(g);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second);
            return it->second->second;
        }
    }
    Operator M = compute_op(g);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            lru_.emplace_front(key, M);
            cache_[key] = lru_.begin();
            while (lru_.size() > cap_) {
                cache_.erase(lru_.back().first);
                lru_.pop_back();
            }
        }
    }
    return M;
}

Operator WeilRep::op(const MatFq& g) const {
    if (!is_symplectic(g, space_)) throw DomainError("weil op: matrix is not symplectic");
    return cached_or_compute(g);
}

cplx WeilRep::char_rho(const MatFq& g) const {
    const Fq& F = *space_.F;
    MatFq gm = g - MatFq::identity(&F, space_.dim());
    Fe d = gm.det();
    if (F.is_zero(d)) throw NotInCayleyDomain("char_rho: g - I singular");
    Fe sign = (space_.n % 2 == 0) ? F.one() : F.neg(F.one());
    return double(F.quad_char(F.mul(sign, d)));
}

cplx WeilRep::char_tau(const MatFq& g, const HeisElem& h) const {
    const Fq& F = *space_.F;
    MatFq k = cayley(g);
    Fe form = F.add(F.mul(F.quarter(), space_.omega(k.apply(h.v), h.v)), h.z);
    return char_rho(g) * F.psi(form);
}

cplx WeilRep::char_tau_trace(const MatFq& g, const HeisElem& h) const {
    const Fq& F = *space_.F;
    if (g.is_identity()) return model_.trace_pi(h);
    Operator rho = op(g);
    // Tr(rho(g) pi(v, z)) = psi(z) Tr(rho(g) pi(v, 0))
    return F.psi(h.z) * model_.trace_against_pi(rho, h.v);
}

Operator WeilRep::tau(const MatFq& g, const HeisElem& h) const { return op(g) * model_.pi(h); }

double WeilRep::egorov_residual(const MatFq& g, const HeisElem& h) const {
    Operator rho = op(g);
    Operator lhs = rho * model_.pi(h) * rho.adjoint();
    Operator rhs = model_.pi(sp_act(g, h));
    return (lhs - rhs).norm();
}

}  // namespace weillab
