// Command-line front end: verification suites, Hecke-Wigner bound reports,
// rank sweeps, spectra, and self-reducibility checks.
//
// Exit codes: 0 pass, 1 verification failure, 2 config error, 3 bad prime.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "weillab/chaos.hpp"
#include "weillab/reports.hpp"
#include "weillab/version.hpp"

using namespace weillab;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBadPrime = 3;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + out_path);
    f << text;
}

CatMap load_catmap(const std::string& source) {
    json j;
    try {
        if (!source.empty() && (source[0] == '{' || source[0] == '[')) {
            j = json::parse(source);
        } else {
            std::ifstream f(source);
            if (!f) throw ConfigError("cannot open cat map file: " + source);
            j = json::parse(f);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed cat map JSON: ") + e.what());
    }
    std::vector<std::vector<int64_t>> m;
    try {
        if (j.is_array()) {
            m = j.get<std::vector<std::vector<int64_t>>>();
        } else {
            m = j.at("matrix").get<std::vector<std::vector<int64_t>>>();
            if (j.contains("N") && 2 * j.at("N").get<int>() != static_cast<int>(m.size()))
                throw ConfigError("cat map: N does not match the matrix dimensions");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed cat map JSON: ") + e.what());
    }
    try {
        return make_catmap(m);
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid cat map: ") + e.what());
    }
}

void require_odd_prime(int64_t p) {
    if (p < 3 || !is_prime(p)) throw ConfigError("p must be an odd prime, got " + std::to_string(p));
}

std::vector<std::vector<int64_t>> parse_xi_list(const std::vector<std::string>& xi_args, int dim) {
    std::vector<std::vector<int64_t>> out;
    for (const auto& s : xi_args) {
        std::vector<int64_t> v;
        size_t pos = 0;
        while (pos < s.size()) {
            size_t comma = s.find(',', pos);
            if (comma == std::string::npos) comma = s.size();
            try {
                v.push_back(std::stoll(s.substr(pos, comma - pos)));
            } catch (...) {
                throw ConfigError("bad --xi entry: " + s);
            }
            pos = comma + 1;
        }
        if (static_cast<int>(v.size()) != dim)
            throw ConfigError("--xi needs " + std::to_string(dim) + " comma-separated integers, got: " + s);
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<int64_t> parse_chi_selector(const std::string& chis, int64_t num_chars) {
    std::vector<int64_t> out;
    if (chis == "all" || chis.empty()) return out;
    size_t pos = 0;
    while (pos < chis.size()) {
        size_t comma = chis.find(',', pos);
        if (comma == std::string::npos) comma = chis.size();
        int64_t c = 0;
        try {
            c = std::stoll(chis.substr(pos, comma - pos));
        } catch (...) {
            throw ConfigError("bad --chi selector: " + chis);
        }
        if (c < 0 || c >= num_chars) throw ConfigError("--chi index out of range");
        out.push_back(c);
        pos = comma + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// verify suites

struct VerifyArgs {
    std::string suite;
    int64_t p = 7;
    int N = 1;
    uint64_t seed = 0;
    int64_t samples = 0;  // 0 = suite default
    double tol = Tol::kScalar;
    std::string torus = "both";  // split|inert|both (mult suite)
    std::string out;
};

int run_verify(const VerifyArgs& a) {
    require_odd_prime(a.p);
    if (a.N < 1 || a.N > 2) throw ConfigError("--N must be 1 or 2 for the verify suites");
    if (a.p == 3 && a.N == 1) throw ConfigError("(p, N) = (3, 1) is the excluded linearization case");
    Fq F(a.p);
    SympSpace sp = SympSpace::standard(&F, a.N);
    WeilRep rep(sp, a.seed);
    const double mat_tol = a.tol * double(rep.dim());
    Rng rng(a.seed);
    json checks = json::array();
    bool pass = true;

    auto random_heis = [&]() {
        VecFq v(static_cast<size_t>(sp.dim()));
        for (auto& x : v) x = F.elem(static_cast<int64_t>(rng.below(static_cast<uint64_t>(a.p))));
        return HeisElem{v, F.elem(static_cast<int64_t>(rng.below(static_cast<uint64_t>(a.p))))};
    };

    if (a.suite == "egorov") {
        int64_t n = a.samples > 0 ? a.samples : (a.N == 1 ? 200 : 100);
        double worst = 0;
        for (int64_t i = 0; i < n; ++i) {
            MatFq g = random_symplectic(sp, rng);
            double r = rep.egorov_residual(g, random_heis());
            worst = std::max(worst, r);
            json c;
            c["check"] = "egorov";
            c["index"] = i;
            c["residual"] = round_sig9(r);
            c["pass"] = r < mat_tol;
            if (r >= mat_tol) pass = false;
            checks.push_back(std::move(c));
        }
        (void)worst;
    } else if (a.suite == "char") {
        if (a.N != 1) throw ConfigError("char suite is exhaustive over SL_2: use --N 1");
        for (const auto& g : enumerate_sl2(F)) {
            MatFq gm = g - MatFq::identity(&F, 2);
            if (F.is_zero(gm.det())) continue;
            double r = std::abs(rep.char_rho(g) - rep.op(g).trace());
            json c;
            c["check"] = "char";
            c["g"] = g.str();
            c["residual"] = round_sig9(r);
            c["pass"] = r < a.tol;
            if (r >= a.tol) pass = false;
            checks.push_back(std::move(c));
        }
    } else if (a.suite == "mult") {
        std::vector<TorusKind> kinds;
        if (a.torus == "split" || a.torus == "both") kinds.push_back(TorusKind::Split);
        if (a.torus == "inert" || a.torus == "both") kinds.push_back(TorusKind::Inert);
        if (kinds.empty()) throw ConfigError("--torus must be split, inert, or both");
        if (a.N == 1) {
            for (auto kind : kinds) {
                TorusData T = sl2_torus(F, kind);
                int64_t total = 0;
                bool ok = true;
                for (int64_t c = 0; c < T.num_chars(); ++c) {
                    int64_t measured = multiplicity_measured(projector(T, c, rep));
                    total += measured;
                    if (measured != multiplicity_predicted_sl2(T, kind, c)) ok = false;
                }
                if (total != a.p) ok = false;
                json c;
                c["check"] = std::string("mult_") + (kind == TorusKind::Split ? "split" : "inert");
                c["torus_order"] = T.order();
                c["total"] = total;
                c["pass"] = ok;
                if (!ok) pass = false;
                checks.push_back(std::move(c));
            }
        } else {
            for (auto [k1, k2] : std::vector<std::pair<TorusKind, TorusKind>>{
                     {TorusKind::Split, TorusKind::Split}, {TorusKind::Split, TorusKind::Inert},
                     {TorusKind::Inert, TorusKind::Inert}}) {
                TorusData T = product_torus(sl2_torus(F, k1), sl2_torus(F, k2));
                ModuleStructure ms = symplectic_decomposition(T);
                bool ok = true;
                int64_t total = 0;
                for (int64_t c = 0; c < T.num_chars(); ++c) {
                    try {
                        total += multiplicity(ms, c, rep);
                    } catch (const StructureViolation&) {
                        ok = false;
                    }
                }
                if (total != a.p * a.p) ok = false;
                json c;
                c["check"] = "mult_rank2";
                c["torus_order"] = T.order();
                c["total"] = total;
                c["pass"] = ok;
                if (!ok) pass = false;
                checks.push_back(std::move(c));
            }
        }
    } else if (a.suite == "svn") {
        // Stone-von Neumann: the commutant of {pi(v)} is one-dimensional.
        const SchrodingerModel& model = rep.model();
        const int64_t n = model.dim();
        Eigen::MatrixXcd S(static_cast<Eigen::Index>(sp.dim()) * n * n, n * n);
        Eigen::Index row0 = 0;
        for (int i = 0; i < sp.dim(); ++i) {
            VecFq v = sp.zero_vec();
            v[static_cast<size_t>(i)] = F.one();
            Operator P = model.pi_v(v);
            Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n * n, n * n);
            for (Eigen::Index x = 0; x < n; ++x)
                for (Eigen::Index y = 0; y < n; ++y)
                    for (Eigen::Index k = 0; k < n; ++k) {
                        M(x * n + y, x * n + k) += P(k, y);
                        M(x * n + y, k * n + y) -= P(x, k);
                    }
            S.block(row0, 0, n * n, n * n) = M;
            row0 += n * n;
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(S);
        qr.setThreshold(1e-8);
        int64_t dim_comm = n * n - qr.rank();
        json c;
        c["check"] = "svn_commutant";
        c["dimension"] = dim_comm;
        c["pass"] = dim_comm == 1;
        if (dim_comm != 1) pass = false;
        checks.push_back(std::move(c));
    } else {
        throw ConfigError("unknown suite: " + a.suite + " (expected egorov|char|mult|svn)");
    }

    json out;
    out["schema_version"] = "1";
    out["library_version"] = kVersion;
    out["seed"] = a.seed;
    json cfg;
    cfg["command"] = "verify";
    cfg["suite"] = a.suite;
    cfg["p"] = a.p;
    cfg["N"] = a.N;
    cfg["tol"] = a.tol;
    out["config"] = cfg;
    out["checks"] = checks;
    out["pass"] = pass;
    emit(out.dump(2) + "\n", a.out);
    return pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weillab: Weil representations over finite fields, exponential-sum bounds, and cat-map spectra"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // ---- verify
    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run a verification suite (egorov|char|mult|svn)");
    verify->add_option("--suite", va.suite, "suite name")->required();
    verify->add_option("--p", va.p, "odd prime");
    verify->add_option("--N", va.N, "half-dimension");
    verify->add_option("--seed", va.seed, "RNG seed");
    verify->add_option("--samples", va.samples, "sample count override");
    verify->add_option("--tol", va.tol, "scalar tolerance");
    verify->add_option("--torus", va.torus, "torus kind for the mult suite: split|inert|both")
        ->check(CLI::IsMember({"split", "inert", "both"}));
    verify->add_option("--out", va.out, "output path (default stdout)");

    // ---- wigner
    struct {
        std::string catmap;
        int64_t p = 13;
        std::vector<std::string> xi;
        std::string chi = "all";
        uint64_t seed = 0;
        std::string out;
        std::string format = "json";
        int64_t xi_sample = 0;
    } wa;
    auto* wig = app.add_subcommand("wigner", "Hecke-Wigner bound report for a cat map mod p");
    wig->add_option("--catmap", wa.catmap, "cat map JSON (path or inline)")->required();
    wig->add_option("--p", wa.p, "odd prime");
    wig->add_option("--xi", wa.xi, "exponent (comma-separated, repeatable); default exhaustive");
    wig->add_option("--chi", wa.chi, "character selector: all or comma list");
    wig->add_option("--xi-sample", wa.xi_sample, "random xi count (when no --xi given)");
    wig->add_option("--seed", wa.seed, "RNG seed");
    wig->add_option("--out", wa.out, "output path");
    wig->add_option("--format", wa.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

    // ---- ranksweep
    struct {
        std::string catmap;
        int64_t pmax = 1000;
        int jobs = 1;
        std::string out;
        std::string format = "csv";
    } ra;
    auto* rsw = app.add_subcommand("ranksweep", "symplectic-rank sweep over primes <= pmax");
    rsw->add_option("--catmap", ra.catmap, "cat map JSON (path or inline)")->required();
    rsw->add_option("--pmax", ra.pmax, "prime bound (<= 10^6)");
    rsw->add_option("--jobs", ra.jobs, "worker threads");
    rsw->add_option("--out", ra.out, "output path");
    rsw->add_option("--format", ra.format, "csv|json")->check(CLI::IsMember({"json", "csv"}));

    // ---- spectrum
    struct {
        std::string catmap;
        int64_t p = 13;
        uint64_t seed = 0;
        std::string out;
    } sa;
    auto* spc = app.add_subcommand("spectrum", "torus character multiplicities and rho(A) eigenspaces");
    spc->add_option("--catmap", sa.catmap, "cat map JSON (path or inline)")->required();
    spc->add_option("--p", sa.p, "odd prime");
    spc->add_option("--seed", sa.seed, "RNG seed");
    spc->add_option("--out", sa.out, "output path");

    // ---- selfred
    struct {
        std::string catmap;
        int64_t p = 5;
        int64_t samples = 200;
        uint64_t seed = 0;
        std::string out;
    } fa;
    auto* sfr = app.add_subcommand("selfred", "self-reducibility verification for the Hecke torus mod p");
    sfr->add_option("--catmap", fa.catmap, "cat map JSON (path or inline)")->required();
    sfr->add_option("--p", fa.p, "odd prime");
    sfr->add_option("--samples", fa.samples, "sample count");
    sfr->add_option("--seed", fa.seed, "RNG seed");
    sfr->add_option("--out", fa.out, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfig;
    }

    try {
        if (verify->parsed()) return run_verify(va);

        if (wig->parsed()) {
            require_odd_prime(wa.p);
            CatMap A = load_catmap(wa.catmap);
            BoundCheckOptions opt;
            opt.xis = parse_xi_list(wa.xi, 2 * A.N);
            opt.xi_sample = wa.xi_sample;
            opt.seed = wa.seed;
            opt.throw_on_violation = false;
            {
                // torus order from the factorization pattern, for --chi validation
                RankInfo ri = rank_of_prime(A, wa.p);
                int64_t order = 1;
                for (size_t i = 0; i < ri.block_degrees.size(); ++i) {
                    int64_t qa = 1;
                    for (int k = 0; k < ri.block_degrees[i]; ++k) qa *= wa.p;
                    order *= ri.block_split[i] ? qa - 1 : qa + 1;
                }
                opt.chis = parse_chi_selector(wa.chi, order);
                // keep stored reports sane: an exhaustive census over a large
                // phase space must be narrowed explicitly
                int64_t n_xi = !opt.xis.empty() ? static_cast<int64_t>(opt.xis.size())
                               : wa.xi_sample > 0 ? wa.xi_sample
                                                  : static_cast<int64_t>(std::pow(double(wa.p), 2 * A.N)) - 1;
                int64_t n_chi = opt.chis.empty() ? order : static_cast<int64_t>(opt.chis.size());
                if (n_xi * n_chi > 200000)
                    throw ConfigError("report would hold " + std::to_string(n_xi * n_chi) +
                                      " records; narrow the census with --xi, --xi-sample, or --chi");
            }
            WignerReport r = bound_check(A, wa.p, opt);
            json cfg;
            cfg["command"] = "wigner";
            cfg["p"] = wa.p;
            cfg["N"] = A.N;
            cfg["chi"] = wa.chi;
            cfg["xi_count"] = opt.xis.size();
            cfg["xi_sample"] = wa.xi_sample;
            if (wa.format == "json") {
                emit(wigner_report_json(r, cfg.dump(), wa.seed), wa.out);
            } else {
                std::string csv = "chi,xi,m_chi,re,im,abs,bound,pass,note\r\n";
                for (const auto& rec : r.records) {
                    csv += std::to_string(rec.chi) + ",";
                    for (size_t i = 0; i < rec.xi.size(); ++i) csv += (i ? ";" : "") + std::to_string(rec.xi[i]);
                    csv += "," + std::to_string(rec.m_chi) + "," + format_sig9(rec.value.real()) + "," +
                           format_sig9(rec.value.imag()) + "," + format_sig9(rec.abs_value) + ",";
                    csv += rec.has_bound ? format_sig9(rec.bound) : std::string();
                    csv += ",";
                    csv += rec.has_bound ? (rec.pass ? "1" : "0") : std::string();
                    csv += "," + rec.note + "\r\n";
                }
                emit(csv, wa.out);
            }
            return r.violations == 0 ? kExitPass : kExitFail;
        }

        if (rsw->parsed()) {
            CatMap A = load_catmap(ra.catmap);
            if (ra.pmax > 1'000'000) throw ConfigError("--pmax cap is 10^6");
            SweepResult s = rank_sweep(A, ra.pmax, ra.jobs);
            if (ra.format == "csv") {
                emit(sweep_csv(s), ra.out);
            } else {
                json j;
                j["schema_version"] = "1";
                j["library_version"] = kVersion;
                json cfg;
                cfg["command"] = "ranksweep";
                cfg["pmax"] = ra.pmax;
                j["config"] = cfg;
                j["good_primes"] = s.good_primes;
                j["skipped_primes"] = s.skipped_primes;
                json freq = json::object();
                for (auto& [r, f] : s.freq) freq[std::to_string(r)] = round_sig9(f);
                j["freq"] = freq;
                emit(j.dump(2) + "\n", ra.out);
            }
            return kExitPass;
        }

        if (spc->parsed()) {
            require_odd_prime(sa.p);
            CatMap A = load_catmap(sa.catmap);
            rank_of_prime(A, sa.p);  // BadPrime gate
            Fq F(sa.p);
            SympSpace sp = SympSpace::standard(&F, A.N);
            MatFq Ap = reduce_catmap(A, F);
            TorusData T = centralizer_torus(Ap, sp);
            ModuleStructure ms = symplectic_decomposition(T);
            WeilRep rep(sp, sa.seed);
            json j;
            j["schema_version"] = "1";
            j["library_version"] = kVersion;
            j["seed"] = sa.seed;
            json cfg;
            cfg["command"] = "spectrum";
            cfg["p"] = sa.p;
            cfg["N"] = A.N;
            j["config"] = cfg;
            j["torus_order"] = T.order();
            j["rank"] = ms.rank();
            json mults = json::array();
            int64_t total = 0;
            for (int64_t c = 0; c < T.num_chars(); ++c) {
                int64_t m = multiplicity(ms, c, rep);
                total += m;
                json e;
                e["chi"] = c;
                e["m"] = m;
                mults.push_back(std::move(e));
            }
            j["multiplicities"] = mults;
            j["multiplicity_total"] = total;
            RhoASpectrum spec = rho_a_spectrum(Ap, rep);
            j["ambiguous_spectrum"] = spec.ambiguous;
            json eig = json::array();
            for (const auto& s : spec.spaces) {
                json e;
                e["lambda"] = json::array({round_sig9(s.lambda.real()), round_sig9(s.lambda.imag())});
                e["m"] = s.mult;
                eig.push_back(std::move(e));
            }
            j["rho_A_eigenspaces"] = eig;
            emit(j.dump(2) + "\n", sa.out);
            return total == rep.dim() ? kExitPass : kExitFail;
        }

        if (sfr->parsed()) {
            require_odd_prime(fa.p);
            CatMap A = load_catmap(fa.catmap);
            rank_of_prime(A, fa.p);  // BadPrime gate
            Fq F(fa.p);
            SympSpace sp = SympSpace::standard(&F, A.N);
            TorusData T = centralizer_torus(reduce_catmap(A, F), sp);
            ModuleStructure ms = symplectic_decomposition(T);
            WeilRep rep(sp, fa.seed);
            SelfRedReport r = verify_self_reducibility(ms, rep, static_cast<int>(fa.samples), fa.seed);
            json cfg;
            cfg["command"] = "selfred";
            cfg["p"] = fa.p;
            cfg["N"] = A.N;
            cfg["samples"] = fa.samples;
            emit(selfred_report_json(r, cfg.dump(), fa.seed), fa.out);
            return r.pass() ? kExitPass : kExitFail;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const BadPrime& e) {
        std::cerr << "bad prime: " << e.what() << "\n";
        return kExitBadPrime;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitConfig;
}
