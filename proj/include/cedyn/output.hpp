// Copyright 2026 The ce-dynamics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CEDYN_OUTPUT_HPP
#define CEDYN_OUTPUT_HPP

#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cedyn/diagnostics.hpp"
#include "cedyn/error.hpp"
#include "cedyn/game_io.hpp"
#include "cedyn/runner.hpp"
#include "cedyn/trace.hpp"
#include "json.hpp"

namespace cedyn {

inline constexpr std::string_view kCsvHeader =
    "t,player,external_regret,internal_regret_raw,internal_regret_clamped,"
    "swap_regret,ce_gap_running,eta,max_consec_ratio";

/// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& out, const std::vector<RoundRow>& rows) {
  out << kCsvHeader << '\n';
  for (const RoundRow& r : rows) {
    out << r.t << ',' << r.player << ',' << format_double(r.external_regret) << ','
        << format_double(r.internal_regret_raw) << ','
        << format_double(r.internal_regret_clamped) << ','
        << format_double(r.swap_regret) << ',' << format_double(r.ce_gap_running)
        << ',' << format_double(r.eta) << ',' << format_double(r.max_consec_ratio)
        << '\n';
  }
}

inline std::string csv_string(const std::vector<RoundRow>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(VarianceCheckReport, lhs, variance_sum, order,
                                   constant, rhs, min_constant, holds)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RvuReport, lhs, rhs, rhs_log_actions, slack, eta,
                                   constant, holds)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(StabilityReport, max_ratio, eta, exp_bound,
                                   linear_bound, pass_exp, pass_linear)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EquivalenceReport, horizon, eta, tolerance,
                                   max_strategy_deviation,
                                   max_proportionality_residual,
                                   deviation_per_round, residual_per_round, passed)

/// h,t,observed,bound,pass rows of a smoothness table.
inline std::string smoothness_csv(const SmoothnessReport& r) {
  std::string out = "h,t,observed,bound,pass\n";
  for (const SmoothnessEntry& e : r.entries)
    out += std::to_string(e.h) + ',' + std::to_string(e.t) + ',' +
           format_double(e.observed) + ',' + format_double(e.bound) + ',' +
           (e.pass ? "1" : "0") + '\n';
  return out;
}

// The per-entry table stays out of the summary.
inline void to_json(nlohmann::json& j, const SmoothnessReport& r) {
  j = nlohmann::json{{"max_order", r.max_order},
                     {"alpha", r.alpha},
                     {"eta", r.eta},
                     {"eta_limit", r.eta_limit},
                     {"eta_limit_loose", r.eta_limit_loose},
                     {"preconditions_met", r.preconditions_met},
                     {"loose_preconditions_met", r.loose_preconditions_met},
                     {"all_pass", r.all_pass},
                     {"worst_ratio", r.worst_ratio}};
}

inline void from_json(const nlohmann::json& j, SmoothnessReport& r) {
  j.at("max_order").get_to(r.max_order);
  j.at("alpha").get_to(r.alpha);
  j.at("eta").get_to(r.eta);
  j.at("eta_limit").get_to(r.eta_limit);
  j.at("eta_limit_loose").get_to(r.eta_limit_loose);
  j.at("preconditions_met").get_to(r.preconditions_met);
  j.at("loose_preconditions_met").get_to(r.loose_preconditions_met);
  j.at("all_pass").get_to(r.all_pass);
  j.at("worst_ratio").get_to(r.worst_ratio);
  r.entries.clear();
}

inline void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"dynamics", to_string(c.dynamics)},
                     {"horizon", c.horizon},
                     {"eta_rule", to_string(c.eta_rule)},
                     {"eta", c.eta},
                     {"schedule_constant", c.schedule_constant},
                     {"log_base", to_string(c.log_base)},
                     {"check_constant", c.check_constant},
                     {"seed", c.seed},
                     {"game", c.game_source},
                     {"record_inner", c.record_inner},
                     {"smoothness_order", c.smoothness_order},
                     {"smoothness_alpha", c.smoothness_alpha},
                     {"rvu_constant", c.rvu_constant},
                     {"stability", c.stability}};
}

inline void from_json(const nlohmann::json& j, RunConfig& c) {
  c.dynamics = parse_dynamics(j.at("dynamics").get<std::string>());
  j.at("horizon").get_to(c.horizon);
  c.eta_rule = parse_eta_rule(j.at("eta_rule").get<std::string>());
  j.at("eta").get_to(c.eta);
  j.at("schedule_constant").get_to(c.schedule_constant);
  c.log_base = parse_log_base(j.at("log_base").get<std::string>());
  j.at("check_constant").get_to(c.check_constant);
  j.at("seed").get_to(c.seed);
  j.at("game").get_to(c.game_source);
  j.at("record_inner").get_to(c.record_inner);
  j.at("smoothness_order").get_to(c.smoothness_order);
  j.at("smoothness_alpha").get_to(c.smoothness_alpha);
  j.at("rvu_constant").get_to(c.rvu_constant);
  j.at("stability").get_to(c.stability);
}

namespace detail {

template <class T>
void put_optional(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
void get_optional(const nlohmann::json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key) && !j.at(key).is_null())
    v = j.at(key).get<T>();
  else
    v.reset();
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const PlayerSummary& p) {
  j = nlohmann::json{{"external_regret", p.external_regret},
                     {"internal_regret_raw", p.internal_regret_raw},
                     {"internal_regret_clamped", p.internal_regret_clamped},
                     {"swap_regret", p.swap_regret},
                     {"initial_eta", p.initial_eta},
                     {"final_eta", p.final_eta},
                     {"max_consec_ratio", p.max_consec_ratio},
                     {"stability_pass", p.stability_pass},
                     {"switched", p.switched},
                     {"switch_round", p.switch_round}};
  detail::put_optional(j, "variance_check", p.variance_check);
  detail::put_optional(j, "rvu", p.rvu);
  detail::put_optional(j, "smoothness", p.smoothness);
}

inline void from_json(const nlohmann::json& j, PlayerSummary& p) {
  j.at("external_regret").get_to(p.external_regret);
  j.at("internal_regret_raw").get_to(p.internal_regret_raw);
  j.at("internal_regret_clamped").get_to(p.internal_regret_clamped);
  j.at("swap_regret").get_to(p.swap_regret);
  j.at("initial_eta").get_to(p.initial_eta);
  j.at("final_eta").get_to(p.final_eta);
  j.at("max_consec_ratio").get_to(p.max_consec_ratio);
  j.at("stability_pass").get_to(p.stability_pass);
  j.at("switched").get_to(p.switched);
  j.at("switch_round").get_to(p.switch_round);
  detail::get_optional(j, "variance_check", p.variance_check);
  detail::get_optional(j, "rvu", p.rvu);
  detail::get_optional(j, "smoothness", p.smoothness);
}

inline nlohmann::json summary_to_json(const RunSummary& s) {
  return nlohmann::json{{"config", s.config},
                        {"actions", s.action_counts},
                        {"horizon", s.horizon},
                        {"players", s.players},
                        {"ce_gap", s.ce_gap},
                        {"ce_gap_mode", s.ce_gap_mode},
                        {"ce_gap_from_regret", s.ce_gap_from_regret},
                        {"coarse_ce_gap", s.coarse_ce_gap},
                        {"max_stationary_residual", s.max_stationary_residual},
                        {"max_decomposition_gap", s.max_decomposition_gap},
                        {"stability_pass", s.stability_pass}};
}

inline RunSummary summary_from_json(const nlohmann::json& j) {
  try {
    RunSummary s;
    j.at("config").get_to(s.config);
    j.at("actions").get_to(s.action_counts);
    j.at("horizon").get_to(s.horizon);
    j.at("players").get_to(s.players);
    j.at("ce_gap").get_to(s.ce_gap);
    j.at("ce_gap_mode").get_to(s.ce_gap_mode);
    j.at("ce_gap_from_regret").get_to(s.ce_gap_from_regret);
    j.at("coarse_ce_gap").get_to(s.coarse_ce_gap);
    j.at("max_stationary_residual").get_to(s.max_stationary_residual);
    j.at("max_decomposition_gap").get_to(s.max_decomposition_gap);
    j.at("stability_pass").get_to(s.stability_pass);
    if (s.players.size() != s.action_counts.size())
      throw ValidationError("summary player count does not match \"actions\"");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid summary: ") + e.what());
  }
}

inline std::string save_summary(const RunSummary& s) {
  return summary_to_json(s).dump(2) + "\n";
}

inline RunSummary load_summary(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
  return summary_from_json(j);
}

enum class OutputFormat { csv, json };

inline OutputFormat parse_output_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw ValidationError("format must be csv or json, got \"" + s + "\"");
}

/// Writes summary.json and either metrics.csv or metrics.json (the same rows
/// as an array of objects) into `dir`, plus trace.json when asked.
inline void write_run_outputs(const RunResult& result, const std::filesystem::path& dir,
                              OutputFormat format, bool with_trace) {
  std::filesystem::create_directories(dir);
  write_file(dir / "summary.json", save_summary(result.summary));
  if (format == OutputFormat::csv) {
    write_file(dir / "metrics.csv", csv_string(result.rows));
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (const RoundRow& r : result.rows)
      rows.push_back({{"t", r.t},
                      {"player", r.player},
                      {"external_regret", r.external_regret},
                      {"internal_regret_raw", r.internal_regret_raw},
                      {"internal_regret_clamped", r.internal_regret_clamped},
                      {"swap_regret", r.swap_regret},
                      {"ce_gap_running", r.ce_gap_running},
                      {"eta", r.eta},
                      {"max_consec_ratio", r.max_consec_ratio}});
    write_file(dir / "metrics.json", rows.dump() + "\n");
  }
  if (with_trace) write_file(dir / "trace.json", trace_to_json(result.trace).dump() + "\n");
}

}  // namespace cedyn

#endif  // CEDYN_OUTPUT_HPP
