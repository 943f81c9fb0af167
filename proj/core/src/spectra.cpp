#include "weillab/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "weillab/errors.hpp"

namespace weillab {

Operator projector(const TorusData& T, int64_t chi, const WeilRep& rep) {
    const int64_t dim = rep.dim();
    Operator P = Operator::Zero(dim, dim);
    for (int64_t e = 0; e < T.order(); ++e)
        P += std::conj(T.chi(chi, e)) * rep.op(T.elements[static_cast<size_t>(e)]);
    P /= double(T.order());
    return P;
}

int64_t multiplicity_measured(const Operator& P) {
    cplx tr = P.trace();
    double r = std::round(tr.real());
    if (std::abs(tr.real() - r) > 1e-6 || std::abs(tr.imag()) > 1e-6)
        throw StructureViolation("projector trace is not close to an integer");
    return static_cast<int64_t>(r);
}

int64_t restrict_chi(const ModuleStructure& ms, int alpha, int64_t chi) {
    const Block& blk = ms.blocks[static_cast<size_t>(alpha)];
    const TorusData& bt = blk.block_torus;
    std::vector<int64_t> exps(bt.orders.size(), 0);
    for (size_t k = 0; k < bt.orders.size(); ++k) {
        std::vector<int64_t> unit(bt.orders.size(), 0);
        unit[k] = 1;
        int64_t gen_elem = bt.encode(unit);
        int64_t global = blk.global_of_block[static_cast<size_t>(gen_elem)];
        cplx val = ms.torus.chi(chi, global);
        double ang = std::arg(val);
        if (ang < 0) ang += 2 * M_PI;
        double jf = ang * double(bt.orders[k]) / (2 * M_PI);
        int64_t j = static_cast<int64_t>(std::llround(jf)) % bt.orders[k];
        cplx expect = std::polar(1.0, 2 * M_PI * double(j) / double(bt.orders[k]));
        if (std::abs(val - expect) > 1e-6) throw StructureViolation("character restriction is not a root of unity");
        exps[k] = j;
    }
    return bt.encode(exps);
}

int64_t multiplicity_predicted(const ModuleStructure& ms, int64_t chi) {
    int64_t m = 1;
    for (int a = 0; a < ms.rank(); ++a) {
        const Block& blk = ms.blocks[static_cast<size_t>(a)];
        int64_t chi_a = restrict_chi(ms, a, chi);
        int64_t sigma_a = blk.block_torus.quadratic_chi();
        if (chi_a == sigma_a)
            m *= blk.split ? 2 : 0;
        // else factor 1
    }
    return m;
}

int64_t multiplicity_predicted_sl2(const TorusData& T, TorusKind kind, int64_t chi) {
    if (chi == T.quadratic_chi()) return kind == TorusKind::Split ? 2 : 0;
    return 1;
}

int64_t multiplicity(const ModuleStructure& ms, int64_t chi, const WeilRep& rep) {
    int64_t measured = multiplicity_measured(projector(ms.torus, chi, rep));
    int64_t predicted = multiplicity_predicted(ms, chi);
    if (measured != predicted)
        throw StructureViolation("multiplicity mismatch: measured " + std::to_string(measured) + " vs predicted " +
                                 std::to_string(predicted));
    return measured;
}

namespace {

void normalize_phase(State& s) {
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (std::abs(s(i)) > 1e-8) {
            s *= std::conj(s(i)) / std::abs(s(i));
            return;
        }
    }
}

}  // namespace

std::vector<State> hecke_eigenstates(const TorusData& T, int64_t chi, const WeilRep& rep) {
    Operator P = projector(T, chi, rep);
    int64_t m = multiplicity_measured(P);
    if (m == 0) throw EmptyEigenspace("H_chi is trivial for this character");
    // Orthonormal basis of the range via a rank-revealing QR.
    Eigen::ColPivHouseholderQR<Operator> qr(P);
    qr.setThreshold(1e-8);
    if (qr.rank() != m) throw StructureViolation("projector rank disagrees with its trace");
    Operator Q = qr.householderQ();
    std::vector<State> out;
    for (int64_t k = 0; k < m; ++k) {
        State s = Q.col(k);
        normalize_phase(s);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<State> hecke_eigenstates_product(const TorusData& t1, int64_t chi1, const WeilRep& rep1,
                                             const TorusData& t2, int64_t chi2, const WeilRep& rep2) {
    auto b1 = hecke_eigenstates(t1, chi1, rep1);
    auto b2 = hecke_eigenstates(t2, chi2, rep2);
    std::vector<State> out;
    for (const auto& a : b1)
        for (const auto& b : b2) {
            State s = kron_state(a, b);
            normalize_phase(s);
            out.push_back(std::move(s));
        }
    return out;
}

RhoASpectrum rho_a_spectrum(const MatFq& A, const WeilRep& rep, double angular_tol) {
    Operator rho = rep.op(A);
    const int64_t dim = rep.dim();
    Eigen::ComplexEigenSolver<Operator> es(rho);
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");

    struct Ev {
        double angle;
        Eigen::Index idx;
    };
    std::vector<Ev> evs;
    for (Eigen::Index i = 0; i < dim; ++i) {
        double a = std::arg(es.eigenvalues()(i));
        if (a < 0) a += 2 * M_PI;
        evs.push_back({a, i});
    }
    std::sort(evs.begin(), evs.end(), [](const Ev& x, const Ev& y) { return x.angle < y.angle; });

    // Group by angular closeness (careful at the 0 / 2pi seam).
    std::vector<std::vector<Eigen::Index>> groups;
    for (const auto& ev : evs) {
        if (!groups.empty()) {
            double prev = std::arg(es.eigenvalues()(groups.back().back()));
            if (prev < 0) prev += 2 * M_PI;
            if (std::abs(ev.angle - prev) < angular_tol) {
                groups.back().push_back(ev.idx);
                continue;
            }
        }
        groups.push_back({ev.idx});
    }
    if (groups.size() > 1) {
        double first = std::arg(es.eigenvalues()(groups.front().front()));
        if (first < 0) first += 2 * M_PI;
        double last = std::arg(es.eigenvalues()(groups.back().back()));
        if (last < 0) last += 2 * M_PI;
        if (first + 2 * M_PI - last < angular_tol) {
            // seam wrap: merge the last group into the first
            for (auto idx : groups.back()) groups.front().push_back(idx);
            groups.pop_back();
        }
    }

    RhoASpectrum out;
    for (size_t gi = 0; gi < groups.size(); ++gi) {
        const auto& grp = groups[gi];
        Operator vecs(dim, static_cast<Eigen::Index>(grp.size()));
        cplx lambda_acc = 0;
        for (size_t k = 0; k < grp.size(); ++k) {
            vecs.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(grp[k]);
            lambda_acc += es.eigenvalues()(grp[k]);
        }
        // Orthonormalize within the cluster.
        Eigen::HouseholderQR<Operator> qr(vecs);
        Operator Q = qr.householderQ() * Operator::Identity(dim, static_cast<Eigen::Index>(grp.size()));
        EigSpace s;
        s.lambda = lambda_acc / double(grp.size());
        s.proj = Q * Q.adjoint();
        s.mult = static_cast<int64_t>(grp.size());
        s.density = s.proj / double(s.mult);
        out.spaces.push_back(std::move(s));
    }
    // Flag clusters whose centers are closer than twice the tolerance.
    for (size_t i = 0; i < out.spaces.size(); ++i)
        for (size_t j = i + 1; j < out.spaces.size(); ++j) {
            double di = std::abs(std::arg(out.spaces[i].lambda / out.spaces[j].lambda));
            if (di < 2 * angular_tol) out.ambiguous = true;
        }
    // Completeness.
    int64_t total = 0;
    for (const auto& s : out.spaces) total += s.mult;
    if (total != dim) throw StructureViolation("eigenspace multiplicities do not sum to the dimension");
    return out;
}

}  // namespace weillab
