#pragma once

#include <string>

#include "weillab/chaos.hpp"
#include "weillab/module_structure.hpp"

namespace weillab {

/// Fixed 9-significant-digit float formatting used by every report, so runs
/// are byte-stable for a given config and seed.
std::string format_sig9(double x);
double round_sig9(double x);

/// WignerReport as JSON (schema_version 1). `config_echo` is the verbatim
/// flag set the caller ran with, serialized as a JSON object string.
std::string wigner_report_json(const WignerReport& r, const std::string& config_echo, uint64_t seed);

/// Rank sweep as RFC-4180-style CSV: header row, one row per prime
/// (p, r_p, factor_degrees, skipped_flag), then per-rank frequency footer rows.
std::string sweep_csv(const SweepResult& s);

std::string stat_report_json(const StatReport& r, const std::string& config_echo, uint64_t seed);

std::string selfred_report_json(const SelfRedReport& r, const std::string& config_echo, uint64_t seed);

}  // namespace weillab
