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

// ce-dynamics: command-line front end for the cedyn library.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cedyn/cedyn.hpp"
#include "json.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kNumerical = 3 };

// Option combinations CLI11 cannot express; exits with kUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunArgs {
  std::string game;
  std::size_t players = 2;
  std::vector<std::size_t> actions;
  std::string dynamics = "sl-omwu";
  std::size_t horizon = 1000;
  double eta = 0.0;
  std::string eta_rule;
  double schedule_constant = 1.0;
  std::string log_base = "e";
  double check_constant = cedyn::kVarianceCheckConstant;
  std::uint64_t seed = 0;
  std::size_t smoothness_order = 0;
  double smoothness_alpha = 0.0;
  double rvu_constant = 64.0;
  bool no_inner = false;
};

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--game", a.game, "Game JSON file");
  cmd->add_option("--players", a.players, "Players of a generated game")
      ->check(CLI::Range(2, 64));
  cmd->add_option("--actions", a.actions, "Action counts of a generated game")
      ->delimiter(',');
  cmd->add_option("--dynamics", a.dynamics, "omwu, mwu, sl-omwu, bm-omwu or arbo");
  cmd->add_option("--horizon", a.horizon, "Rounds T")->check(CLI::PositiveNumber);
  auto* eta = cmd->add_option("--eta", a.eta, "Fixed learning rate");
  auto* rule = cmd->add_option("--eta-rule", a.eta_rule,
                               "fixed, theorem-internal, theorem-swap or adaptive");
  eta->excludes(rule);
  cmd->add_option("--schedule-constant", a.schedule_constant,
                  "C in the theorem schedules");
  cmd->add_option("--log-base", a.log_base, "Log base of the schedules: e or 2");
  cmd->add_option("--check-constant", a.check_constant,
                  "C' of the variance check driving the adaptive rule");
  cmd->add_option("--seed", a.seed, "Seed for generated games");
  cmd->add_option("--smoothness-order", a.smoothness_order,
                  "Max finite-difference order H for the smoothness report (0 = off)");
  cmd->add_option("--smoothness-alpha", a.smoothness_alpha,
                  "alpha of the smoothness bound (0 = 1/(H+3))");
  cmd->add_option("--rvu-constant", a.rvu_constant, "C of the RVU check (0 = off)");
  cmd->add_flag("--no-inner", a.no_inner,
                "Do not record inner distributions (disables trace diagnostics)");
}

cedyn::Game make_game(const RunArgs& a) {
  if (!a.game.empty()) return cedyn::load_game_file(a.game);
  if (a.actions.empty())
    throw UsageError("either --game or --actions is required");
  std::vector<std::size_t> counts = a.actions;
  if (counts.size() == 1) counts.assign(a.players, counts.front());
  return cedyn::random_game(counts.size(), counts, a.seed);
}

cedyn::RunConfig make_config(const RunArgs& a) {
  cedyn::RunConfig c;
  c.dynamics = cedyn::parse_dynamics(a.dynamics);
  c.horizon = a.horizon;
  if (!a.eta_rule.empty()) {
    c.eta_rule = cedyn::parse_eta_rule(a.eta_rule);
    if (c.eta_rule == cedyn::EtaRule::fixed && a.eta <= 0.0)
      throw UsageError("--eta-rule fixed needs --eta");
  } else if (a.eta > 0.0) {
    c.eta_rule = cedyn::EtaRule::fixed;
  } else {
    throw UsageError("one of --eta or --eta-rule is required");
  }
  c.eta = a.eta;
  c.schedule_constant = a.schedule_constant;
  c.log_base = cedyn::parse_log_base(a.log_base);
  c.check_constant = a.check_constant;
  c.seed = a.seed;
  if (!a.game.empty()) {
    c.game_source = a.game;
  } else {
    std::string spec = "random:";
    for (std::size_t i = 0; i < a.actions.size(); ++i)
      spec += (i ? "," : "") + std::to_string(a.actions[i]);
    c.game_source = spec;
  }
  c.record_inner = !a.no_inner;
  c.smoothness_order = a.smoothness_order;
  c.smoothness_alpha = a.smoothness_alpha;
  c.rvu_constant = a.rvu_constant;
  return c;
}

nlohmann::json diagnose_trace(const cedyn::RunTrace& trace, std::size_t order,
                              double alpha, double rvu_constant,
                              double check_constant, const std::string& csv_path) {
  nlohmann::json out = nlohmann::json::array();
  std::string csv;
  for (std::size_t i = 0; i < trace.num_players(); ++i) {
    nlohmann::json p;
    p["player"] = i;
    p["stability"] = cedyn::stability_check(trace, i);
    p["variance_check"] = cedyn::check_variance_inequality(trace, i, check_constant);
    const double eta = trace.rounds.back()[i].eta;
    if (rvu_constant > 0.0) p["rvu"] = cedyn::rvu_check(trace, i, eta, rvu_constant);
    if (order > 0) {
      const double a = alpha > 0.0 ? alpha : 1.0 / (static_cast<double>(order) + 3.0);
      const auto report = cedyn::smoothness_report(trace, i, order, a);
      p["smoothness"] = report;
      if (!csv_path.empty()) {
        std::string table = cedyn::smoothness_csv(report);
        if (i > 0) table.erase(0, table.find('\n') + 1);
        csv += table;
      }
    }
    out.push_back(p);
  }
  if (!csv.empty()) cedyn::write_file(csv_path, csv);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncoupled no-regret dynamics for correlated equilibria"};
  app.require_subcommand(1);

  RunArgs run_args;
  std::string out_dir;
  std::string format = "csv";
  bool with_trace = false;
  auto* run = app.add_subcommand("run", "Self-play run with regret curves");
  add_run_options(run, run_args);
  run->add_option("--out", out_dir, "Output directory (stdout if omitted)");
  run->add_option("--format", format, "csv or json");
  run->add_flag("--trace", with_trace, "Also write trace.json");

  std::string eq_game;
  double eq_eta = 0.01;
  std::size_t eq_horizon = 200;
  double eq_tol = 1e-8;
  auto* equivalence =
      app.add_subcommand("equivalence", "SL-OMWU vs arborescence dynamics");
  equivalence->add_option("--game", eq_game, "Game JSON file")->required();
  equivalence->add_option("--eta", eq_eta, "Learning rate");
  equivalence->add_option("--horizon", eq_horizon, "Rounds T")
      ->check(CLI::PositiveNumber);
  equivalence->add_option("--tolerance", eq_tol, "Pass threshold");

  std::size_t tree_n = 3;
  std::size_t tree_root = 0;
  auto* trees = app.add_subcommand("trees", "Enumerate arborescences rooted at a node");
  trees->add_option("--n", tree_n, "Number of nodes")->required()->check(CLI::Range(1, 7));
  trees->add_option("--root", tree_root, "Root node, 0-based")->required();

  std::string matrix_file;
  std::string method = "linear";
  auto* stationary =
      app.add_subcommand("stationary", "Stationary distribution of a Markov chain");
  stationary->add_option("--matrix", matrix_file,
                         "JSON file: array of rows, row-stochastic")
      ->required();
  stationary->add_option("--method", method, "linear, tree, tree-log or power");

  RunArgs diag_args;
  std::string diag_trace;
  std::string diag_csv;
  auto* diagnose = app.add_subcommand("diagnose", "Smoothness, RVU, variance and "
                                                  "stability checks on a trace");
  add_run_options(diagnose, diag_args);
  diagnose->add_option("--trace-file", diag_trace,
                       "Trace written by run --trace (replaces the run options)");
  diagnose->add_option("--csv", diag_csv, "Write the per-(h,t) smoothness table here");

  std::size_t gen_players = 2;
  std::vector<std::size_t> gen_actions;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a random game");
  gen->add_option("--players", gen_players, "Number of players")->check(CLI::Range(2, 64));
  gen->add_option("--actions", gen_actions, "Action counts, one or per player")
      ->required()
      ->delimiter(',');
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out", gen_out, "Output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) {
      const cedyn::Game game = make_game(run_args);
      const cedyn::RunConfig config = make_config(run_args);
      const auto fmt = cedyn::parse_output_format(format);
      const cedyn::RunResult result = cedyn::run_dynamics(game, config);
      if (!out_dir.empty()) {
        cedyn::write_run_outputs(result, out_dir, fmt, with_trace);
      } else if (fmt == cedyn::OutputFormat::csv) {
        cedyn::write_csv(std::cout, result.rows);
      } else {
        std::cout << cedyn::save_summary(result.summary);
      }
    } else if (*equivalence) {
      const cedyn::Game game = cedyn::load_game_file(eq_game);
      const auto report = cedyn::verify_equivalence(game, eq_eta, eq_horizon, eq_tol);
      std::cout << nlohmann::json(report).dump(2) << '\n';
      return report.passed ? kOk : kNumerical;
    } else if (*trees) {
      if (tree_root >= tree_n) throw cedyn::ValidationError("--root must be below --n");
      const auto list = cedyn::enumerate_arborescences(tree_n, tree_root);
      nlohmann::json out{{"n", tree_n}, {"root", tree_root}, {"count", list.size()}};
      out["trees"] = nlohmann::json::array();
      for (const auto& t : list) out["trees"].push_back(t.parents);
      std::cout << out.dump() << '\n';
    } else if (*stationary) {
      nlohmann::json j;
      const std::string text = cedyn::read_file(matrix_file);
      try {
        j = nlohmann::json::parse(text);
      } catch (const nlohmann::json::parse_error& e) {
        throw cedyn::ParseError(e.what(), e.byte);
      }
      std::vector<cedyn::Vector> rows;
      try {
        rows = j.get<std::vector<cedyn::Vector>>();
      } catch (const nlohmann::json::exception& e) {
        throw cedyn::ValidationError(std::string("matrix must be an array of rows: ") +
                                     e.what());
      }
      const auto q = cedyn::TransitionMatrix::from_rows(rows);
      cedyn::SimplexVector pi;
      if (method == "linear")
        pi = cedyn::solve_stationary(q);
      else if (method == "tree")
        pi = cedyn::tree_theorem_stationary(q);
      else if (method == "tree-log")
        pi = cedyn::tree_theorem_stationary_log(q);
      else if (method == "power")
        pi = cedyn::power_iteration_stationary(q);
      else
        throw cedyn::ValidationError("unknown method \"" + method + "\"");
      nlohmann::json out = nlohmann::json::array();
      for (double v : pi) out.push_back(v);
      std::cout << out.dump() << '\n';
    } else if (*diagnose) {
      cedyn::RunTrace trace;
      if (!diag_trace.empty()) {
        const std::string text = cedyn::read_file(diag_trace);
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
          throw cedyn::ParseError(e.what(), e.byte);
        }
        trace = cedyn::trace_from_json(j);
      } else {
        RunArgs a = diag_args;
        a.no_inner = false;
        cedyn::RunConfig config = make_config(a);
        config.smoothness_order = 0;
        config.rvu_constant = 0.0;
        trace = cedyn::run_dynamics(make_game(a), config).trace;
      }
      if (trace.horizon() == 0) throw cedyn::ValidationError("empty trace");
      const auto report =
          diagnose_trace(trace, diag_args.smoothness_order, diag_args.smoothness_alpha,
                         diag_args.rvu_constant, diag_args.check_constant, diag_csv);
      std::cout << nlohmann::json{{"players", report}}.dump(2) << '\n';
    } else if (*gen) {
      std::vector<std::size_t> counts = gen_actions;
      if (counts.size() == 1) counts.assign(gen_players, counts.front());
      const auto game = cedyn::random_game(counts.size(), counts, gen_seed);
      const std::string text = cedyn::save_game(game);
      if (gen_out.empty())
        std::cout << text;
      else
        cedyn::write_file(gen_out, text);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kUsage;
  } catch (const cedyn::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const cedyn::ParseError& e) {
    std::cerr << "parse error at byte " << e.byte_offset() << ": " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
