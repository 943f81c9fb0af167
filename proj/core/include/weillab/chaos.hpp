#pragma once

#include <map>
#include <string>

#include "weillab/spectra.hpp"

namespace weillab {

enum class Genericity { StronglyGeneric, Generic, NonGeneric };
const char* to_string(Genericity g);

/// Integer symplectomorphism of the 2N-torus: an integer matrix preserving
/// the standard form, with squarefree characteristic polynomial (regular).
struct CatMap {
    int N = 0;
    std::vector<std::vector<int64_t>> entries;
    PolyZ charpoly;
    Genericity gclass = Genericity::NonGeneric;
};

/// Validates (integer symplectic w.r.t. standard J, regular), computes the
/// characteristic polynomial and genericity class. Throws DomainError on a
/// non-symplectic matrix, NotRegular on a non-squarefree charpoly.
CatMap make_catmap(const std::vector<std::vector<int64_t>>& entries);

/// strongly_generic iff irreducible over Q; generic iff squarefree with
/// every irreducible factor self-reciprocal (of even degree); non_generic
/// otherwise. Throws NotRegular when the polynomial is not squarefree.
Genericity classify_genericity(const PolyZ& charpoly);

MatFq reduce_catmap(const CatMap& A, const Fq& F);

/// Block embedding of two cat maps, matching interleave().
CatMap catmap_block_diag(const CatMap& A1, const CatMap& A2);

struct RankInfo {
    int r = 0;
    std::vector<int> block_degrees;   // [K_alpha : F_p], one per block
    std::vector<bool> block_split;    // paired-factor blocks are split
    std::vector<int> factor_degrees;  // degrees of the irreducible factors mod p, ascending
};

/// Symplectic rank and type mod p from the factorization pattern of the
/// characteristic polynomial: blocks are the orbits of the irreducible
/// factors under f -> reciprocal(f). Throws BadPrime when p divides the
/// discriminant (reduction not squarefree).
RankInfo rank_of_prime(const CatMap& A, int64_t p);

// --- Hecke-Wigner distributions ---------------------------------------------

/// Tr(P_chi pi(xi, 0)) via the explicit projector.
cplx wigner(const TorusData& T, int64_t chi, const VecFq& xi, const WeilRep& rep);

/// Dimensional-reduction form (1/|T|) sum_B conj(chi(B)) Tr(rho(B) pi(xi,0));
/// equal to wigner() as an exact linear-algebra identity, kept as the second
/// route of the pair.
cplx wigner_reduction(const TorusData& T, int64_t chi, const VecFq& xi, const WeilRep& rep);

/// sum_B chi(B) ch_tau(B, xi, 0). Throws EigenvectorInput when xi is zero or
/// spans a T-invariant line (the 2 sqrt(q) bound is not claimed there).
cplx torus_sum(const TorusData& T, int64_t chi, const VecFq& xi, const WeilRep& rep);

/// One-dimensional exponential-sum realization of the matrix coefficient:
/// sum_x Psi(x) psi(xi_plus . x) conj(Psi)(x + xi_minus) for xi =
/// (xi_plus; xi_minus) in the standard splitting.
cplx exp_sum_form(const State& psi, const SchrodingerModel& model, const VecFq& xi);

/// Documented phase: <Psi|pi(xi)Psi> = exp_sum_phase * conj(exp_sum_form).
cplx exp_sum_phase(const SchrodingerModel& model, const VecFq& xi);

/// Span_{F_p}(T xi) = V, the side condition for every bound claim.
bool orbit_spans(const TorusData& T, const VecFq& xi);

// --- bound reports -----------------------------------------------------------

struct WignerRecord {
    int64_t chi = 0;
    std::vector<int64_t> xi;  // element indices of the coordinates
    int64_t m_chi = 0;
    cplx value;
    double abs_value = 0;
    double bound = 0;       // product form: prod_alpha 2 sqrt(q_alpha) / |T_alpha|
    bool has_bound = false; // span condition satisfied
    bool pass = true;
    double paper_ratio = 0; // |W| sqrt(p)^N / (m_chi 2^r); 0 when m_chi = 0
    std::string note;
};

struct WignerReport {
    int64_t p = 0;
    int N = 0;
    Genericity gclass = Genericity::NonGeneric;
    int64_t torus_order = 0;
    int rank = 0;
    std::vector<int> block_degrees;
    std::vector<bool> block_split;
    std::vector<int64_t> block_orders;
    // aggregates over all checked records
    int64_t records_checked = 0;
    int64_t bound_claims = 0;
    int64_t violations = 0;
    double max_per_block_ratio = 0;  // |w_alpha| |T_alpha| / (2 sqrt q_alpha)
    double max_product_ratio = 0;    // |W| / product bound
    double max_paper_ratio = 0;
    double max_tensor_residual = 0;  // |W - prod w_alpha|
    std::vector<WignerRecord> records;  // populated when store_records
};

struct BoundCheckOptions {
    /// Explicit exponents xi in Z^{2N}, reduced mod p; empty => derive from
    /// xi_sample.
    std::vector<std::vector<int64_t>> xis;
    int64_t xi_sample = 0;      // 0 => exhaustive over xi != 0
    std::vector<int64_t> chis;  // empty => all characters
    uint64_t seed = 0;
    bool store_records = true;
    bool throw_on_violation = true;
};

/// Exact finite-p bound census for the Hecke torus of A mod p: per-block
/// inequalities |w_alpha| |T_alpha| <= 2 sqrt(q_alpha), the product-form
/// inequality on |W_chi(xi)|, the tensor factorization residual, and the
/// asymptotic-form ratio with its 1 + 5/sqrt(p) slack.
WignerReport bound_check(const CatMap& A, int64_t p, const BoundCheckOptions& opt = {});

// --- statistical states -------------------------------------------------------

struct StatEntry {
    cplx lambda;
    int64_t mult = 0;
    double density_residual = 0;  // max of |Tr D - 1|, hermiticity, PSD defect
    std::vector<cplx> values;     // W_lambda(xi) per requested xi
    std::vector<double> bounds;   // (1/m) sum of contributing per-chi bounds
    std::vector<bool> pass;
};

struct StatReport {
    int64_t p = 0;
    int N = 0;
    bool ambiguous = false;
    double max_projector_residual = 0;  // || P_lambda - sum_chi P_chi ||
    std::vector<StatEntry> entries;
    std::vector<double> sum_rule_residuals;  // |sum_lambda m W_lambda(xi)| per xi
};

StatReport statistical_state_check(const CatMap& A, int64_t p, const std::vector<std::vector<int64_t>>& xis,
                                   uint64_t seed = 0);

// --- observables ---------------------------------------------------------------

/// Trigonometric polynomial on the torus: finite list of (exponent, coeff).
struct Observable {
    std::vector<std::pair<std::vector<int64_t>, cplx>> terms;
};

struct ObservableReport {
    cplx value;      // Tr(P_chi Op(f)) / m_chi
    cplx integral;   // coefficient at 0 (plus aliased terms, which land there)
    double c_f = 0;  // sum over oscillatory terms of |c| m_chi 2^r
    double deviation = 0;
    double bound = 0;  // C_f / sqrt(p)^N
    bool has_bound = true;
    bool pass = true;
    std::vector<size_t> aliased_terms;
    std::vector<size_t> span_violations;
};

ObservableReport observable_wigner(const Observable& f, const ModuleStructure& ms, int64_t chi, const WeilRep& rep);

// --- prime sweeps ---------------------------------------------------------------

struct SweepRow {
    int64_t p = 0;
    int r = 0;
    std::vector<int> degrees;
    bool skipped = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // ascending p
    int64_t good_primes = 0;
    int64_t skipped_primes = 0;
    std::map<int, int64_t> counts;
    std::map<int, double> freq;
};

/// r_p for every odd prime p <= pmax (bad primes skipped and counted), with
/// per-rank frequencies over the good primes. Parallel across primes.
SweepResult rank_sweep(const CatMap& A, int64_t pmax, int jobs = 1);

}  // namespace weillab
