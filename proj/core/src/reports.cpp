#include "weillab/reports.hpp"

#include <cstdio>
#include <cstdlib>

#include "json.hpp"

#include "weillab/version.hpp"

namespace weillab {

using json = nlohmann::ordered_json;

std::string format_sig9(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

double round_sig9(double x) { return std::strtod(format_sig9(x).c_str(), nullptr); }

namespace {

json complex_json(cplx z) { return json::array({round_sig9(z.real()), round_sig9(z.imag())}); }

json header(const std::string& config_echo, uint64_t seed) {
    json h;
    h["schema_version"] = "1";
    h["library_version"] = kVersion;
    h["seed"] = seed;
    h["config"] = config_echo.empty() ? json::object() : json::parse(config_echo);
    return h;
}

}  // namespace

std::string wigner_report_json(const WignerReport& r, const std::string& config_echo, uint64_t seed) {
    json j = header(config_echo, seed);
    j["p"] = r.p;
    j["N"] = r.N;
    j["genericity"] = to_string(r.gclass);
    json torus;
    torus["order"] = r.torus_order;
    torus["rank"] = r.rank;
    torus["block_degrees"] = r.block_degrees;
    torus["block_split"] = r.block_split;
    torus["block_orders"] = r.block_orders;
    j["torus"] = torus;
    json agg;
    agg["records_checked"] = r.records_checked;
    agg["bound_claims"] = r.bound_claims;
    agg["violations"] = r.violations;
    agg["max_per_block_ratio"] = round_sig9(r.max_per_block_ratio);
    agg["max_product_ratio"] = round_sig9(r.max_product_ratio);
    agg["max_paper_ratio"] = round_sig9(r.max_paper_ratio);
    agg["max_tensor_residual"] = round_sig9(r.max_tensor_residual);
    j["aggregates"] = agg;
    json records = json::array();
    for (const auto& rec : r.records) {
        json rj;
        rj["chi"] = rec.chi;
        rj["xi"] = rec.xi;
        rj["m_chi"] = rec.m_chi;
        rj["value"] = complex_json(rec.value);
        rj["abs"] = round_sig9(rec.abs_value);
        if (rec.has_bound) {
            rj["bound"] = round_sig9(rec.bound);
            rj["pass"] = rec.pass;
            if (rec.m_chi > 0) rj["paper_ratio"] = round_sig9(rec.paper_ratio);
        }
        if (!rec.note.empty()) rj["note"] = rec.note;
        records.push_back(std::move(rj));
    }
    j["records"] = std::move(records);
    return j.dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& s) {
    std::string out = "p,r_p,factor_degrees,skipped_flag\r\n";
    for (const auto& row : s.rows) {
        out += std::to_string(row.p);
        out += ",";
        out += row.skipped ? "" : std::to_string(row.r);
        out += ",";
        for (size_t i = 0; i < row.degrees.size(); ++i) {
            if (i) out += ";";
            out += std::to_string(row.degrees[i]);
        }
        out += ",";
        out += row.skipped ? "1" : "0";
        out += "\r\n";
    }
    for (const auto& [r, f] : s.freq) {
        out += "freq_r" + std::to_string(r) + "," + std::to_string(r) + "," + format_sig9(f) + ",0\r\n";
    }
    return out;
}

std::string stat_report_json(const StatReport& r, const std::string& config_echo, uint64_t seed) {
    json j = header(config_echo, seed);
    j["p"] = r.p;
    j["N"] = r.N;
    j["ambiguous_spectrum"] = r.ambiguous;
    j["max_projector_residual"] = round_sig9(r.max_projector_residual);
    json entries = json::array();
    for (const auto& e : r.entries) {
        json ej;
        ej["lambda"] = complex_json(e.lambda);
        ej["mult"] = e.mult;
        ej["density_residual"] = round_sig9(e.density_residual);
        json vals = json::array();
        for (size_t k = 0; k < e.values.size(); ++k) {
            json v;
            v["value"] = complex_json(e.values[k]);
            v["bound"] = round_sig9(e.bounds[k]);
            v["pass"] = static_cast<bool>(e.pass[k]);
            vals.push_back(std::move(v));
        }
        ej["wigner"] = std::move(vals);
        entries.push_back(std::move(ej));
    }
    j["eigenspaces"] = std::move(entries);
    json sr = json::array();
    for (double x : r.sum_rule_residuals) sr.push_back(round_sig9(x));
    j["sum_rule_residuals"] = std::move(sr);
    return j.dump(2) + "\n";
}

std::string selfred_report_json(const SelfRedReport& r, const std::string& config_echo, uint64_t seed) {
    json j = header(config_echo, seed);
    j["commutant_dim"] = r.commutant_dim;
    j["max_char_residual"] = round_sig9(r.max_char_residual);
    j["max_central_residual"] = round_sig9(r.max_central_residual);
    j["max_tensor_residual"] = round_sig9(r.max_tensor_residual);
    j["char_samples"] = r.char_samples;
    j["tensor_samples"] = r.tensor_samples;
    j["pass"] = r.pass();
    return j.dump(2) + "\n";
}

}  // namespace weillab
