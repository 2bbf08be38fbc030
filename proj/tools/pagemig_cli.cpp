// pagemig: command-line harness for the page-migration library.
//
// Exit codes: 0 when every configured bound check passed, 1 when a bound was
// violated, 2 on usage or input errors.

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>

#include "pagemig/errors.hpp"
#include "pagemig/generators.hpp"
#include "pagemig/harness.hpp"
#include "pagemig/offline_solver.hpp"
#include "pagemig/sequences.hpp"
#include "pagemig/simulation.hpp"
#include "pagemig/strategies.hpp"

namespace {

using namespace pagemig;

constexpr int kOk = 0;
constexpr int kBoundViolated = 1;
constexpr int kUsage = 2;

struct GenerateArgs {
  std::string kind;
  std::size_t n = 500;
  double sigma = 0.0;
  double q = 0.05;
  double D = 10.0;
  std::uint64_t seed = 1;
  std::string branch = "a";
  double far = 100.0;
  std::string out;
};

struct SimulateArgs {
  std::string pair;
  std::string strategy = "predict";
  double D = 10.0;
  double q = 0.05;
  double epsilon = 1.0;
  std::uint64_t seed = 1;
  std::optional<double> bound;
};

struct CompareArgs {
  std::string config;
  std::string csv;
  std::string report;
  std::size_t workers = 0;
};

struct CheckArgs {
  std::string pair;
  double D = 10.0;
  double q = 0.05;
  double epsilon = 1.0;
};

struct ReplayArgs {
  std::string config;
  std::size_t row = 0;
};

struct LowerBoundArgs {
  double D = 100.0;
  double q = 0.1;
};

struct RobustArgs {
  std::size_t n = 2000;
  double q = 0.05;
  double D = 40.0;
  double far = 1000.0;
  double C = 30.0;
  std::size_t seeds = 20;
  std::uint64_t seed = 1;
};

void print(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

int run_generate(const GenerateArgs& a) {
  const auto files = PairFiles::from_prefix(a.out);
  if (a.kind == "line" || a.kind == "brownian") {
    auto predicted = a.kind == "line" ? line_process(a.n)
                                      : brownian_process(a.n, derive_seed(a.seed, "predicted"));
    auto actual = gaussian_perturb(predicted, a.sigma, derive_seed(a.seed, "noise"));
    write_pair(files, PredictionPair(std::move(actual), std::move(predicted)),
               Metric::euclidean2d());
  } else if (a.kind == "lowerbound") {
    if (a.branch != "a" && a.branch != "b") {
      throw ParameterError("--branch must be a or b");
    }
    write_pair(files, lower_bound_instance(a.D, a.q, a.branch == "a" ? Branch::kA : Branch::kB),
               Metric::uniform(2));
  } else {
    const auto count = floor_count(a.q * static_cast<double>(a.n));
    const auto suffix = alternating(Planar{a.far, 0.0}, Planar{-a.far, 0.0}, count);
    write_pair(files, suffix_adversary(a.n, a.q, suffix, Planar{0.0, 0.0}),
               Metric::euclidean2d());
  }
  print({{"header", files.header}, {"predicted", files.predicted}, {"actual", files.actual}});
  return kOk;
}

int run_simulate(const SimulateArgs& a) {
  const auto loaded = read_pair(PairFiles::from_prefix(a.pair));
  const StrategySpec spec{a.strategy, {{"q", a.q}, {"epsilon", a.epsilon}}};
  auto strategy = make_strategy(spec, loaded.pair, loaded.metric, a.D, a.seed);
  auto report = run(*strategy, loaded.pair.actual(), loaded.metric, a.D, a.seed);
  report.assumption = check_assumption(loaded.pair, AssumptionParams(a.D, a.q, a.epsilon));
  const double opt = optimal_schedule(loaded.pair.actual(), loaded.metric, a.D).total_cost;
  const double ratio = opt > 0.0 ? report.ledger.total() / opt : 1.0;
  auto out = to_json(report);
  out["opt_cost"] = opt;
  out["ratio"] = ratio;
  if (a.bound) {
    out["bound"] = *a.bound;
    out["within_bound"] = ratio <= *a.bound;
  }
  print(out);
  return a.bound && ratio > *a.bound ? kBoundViolated : kOk;
}

int run_compare(const CompareArgs& a) {
  auto config = load_config(a.config);
  if (!a.csv.empty()) {
    config.csv_path = a.csv;
  }
  if (!a.report.empty()) {
    config.report_path = a.report;
  }
  if (a.workers != 0) {
    config.workers = a.workers;
  }
  auto rows = compare(config);
  const bool ok = apply_bounds(config, rows);
  std::ofstream csv(config.csv_path);
  if (!csv) {
    throw ReportError("cannot write " + config.csv_path);
  }
  write_csv(csv, rows);

  nlohmann::json violations = nlohmann::json::array();
  for (const auto& row : rows) {
    if (row.within_bound && !*row.within_bound) {
      violations.push_back({{"instance_id", row.instance_id},
                            {"strategy", row.strategy},
                            {"ratio", *row.ratio},
                            {"bound", config.bounds.at(row.strategy)}});
    }
  }
  const nlohmann::json report{{"config", to_json(config)},
                              {"rows", rows.size()},
                              {"csv", config.csv_path},
                              {"all_within_bounds", ok},
                              {"violations", violations}};
  std::ofstream out(config.report_path);
  if (!out) {
    throw ReportError("cannot write " + config.report_path);
  }
  out << report.dump(2) << '\n';
  std::cout << "wrote " << rows.size() << " rows to " << config.csv_path << '\n';
  if (!ok) {
    std::cout << violations.size() << " rows exceed their bound\n";
  }
  return ok ? kOk : kBoundViolated;
}

int run_check(const CheckArgs& a) {
  const auto loaded = read_pair(PairFiles::from_prefix(a.pair));
  const auto report = check_pair(loaded.pair, AssumptionParams(a.D, a.q, a.epsilon));
  print(to_json(report));
  return report.verdict.holds ? kOk : kBoundViolated;
}

int run_replay(const ReplayArgs& a) {
  const auto config = load_config(a.config);
  std::cout << kCsvHeader << '\n' << csv_line(replay_row(config, a.row)) << '\n';
  return kOk;
}

int run_lowerbound(const LowerBoundArgs& a) {
  const auto e = evaluate_lower_bound(a.D, a.q);
  print(to_json(e));
  bool ok = e.best_online >= e.floor;
  for (const auto& entry : e.entries) {
    ok = ok && entry.ratio >= e.floor;
  }
  return ok ? kOk : kBoundViolated;
}

int run_robust(const RobustArgs& a) {
  const auto e = evaluate_robust(a.n, a.q, a.D, a.far, a.C, a.seeds, a.seed);
  print(to_json(e));
  for (double r : e.ratios) {
    if (r > e.bound) {
      return kBoundViolated;
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prediction-augmented online page migration"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a prediction pair to sequence files");
  generate->add_option("--kind", gen.kind, "Instance family")
      ->required()
      ->check(CLI::IsMember({"line", "brownian", "lowerbound", "suffix"}));
  generate->add_option("--n", gen.n, "Sequence length (line, brownian, suffix)");
  generate->add_option("--sigma", gen.sigma, "Gaussian noise level (line, brownian)");
  generate->add_option("--q", gen.q, "Error rate (lowerbound, suffix)");
  generate->add_option("--D", gen.D, "Page size (lowerbound)");
  generate->add_option("--seed", gen.seed, "Master seed");
  generate->add_option("--branch", gen.branch, "Lower-bound branch: a or b");
  generate->add_option("--far", gen.far, "Distance of the suffix points from the origin");
  generate->add_option("--out", gen.out, "Output prefix for header and request files")
      ->required();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run one strategy on a stored pair");
  simulate->add_option("--pair", sim.pair, "Pair file prefix")->required();
  simulate->add_option("--strategy", sim.strategy, "Strategy name")
      ->check(CLI::IsMember(
          {"predict", "lazy_predict", "delayed_predict", "coinflip", "robust", "opt"}));
  simulate->add_option("--D", sim.D, "Page size")->required();
  simulate->add_option("--q", sim.q, "Assumed error rate");
  simulate->add_option("--eps", sim.epsilon, "Window scale epsilon");
  simulate->add_option("--seed", sim.seed, "Seed for randomized strategies");
  simulate->add_option("--bound", sim.bound, "Fail when cost/opt exceeds this");

  CompareArgs cmp;
  auto* compare_cmd = app.add_subcommand("compare", "Run an experiment sweep");
  compare_cmd->add_option("--config", cmp.config, "Experiment JSON")->required();
  compare_cmd->add_option("--csv", cmp.csv, "Override the CSV output path");
  compare_cmd->add_option("--report", cmp.report, "Override the report output path");
  compare_cmd->add_option("--workers", cmp.workers, "Worker threads (0 = all cores)");

  CheckArgs chk;
  auto* check = app.add_subcommand("check", "Check the error assumption on a stored pair");
  check->add_option("--pair", chk.pair, "Pair file prefix")->required();
  check->add_option("--D", chk.D, "Page size")->required();
  check->add_option("--q", chk.q, "Error rate")->required();
  check->add_option("--eps", chk.epsilon, "Window scale epsilon");

  ReplayArgs rep;
  auto* replay = app.add_subcommand("replay", "Recompute one CSV row of a sweep");
  replay->add_option("--config", rep.config, "Experiment JSON")->required();
  replay->add_option("--row", rep.row, "Zero-based data row index")->required();

  LowerBoundArgs lb;
  auto* lowerbound = app.add_subcommand("lowerbound-eval", "Evaluate the two-branch instance");
  lowerbound->add_option("--D", lb.D, "Page size");
  lowerbound->add_option("--q", lb.q, "Error rate");

  RobustArgs rob;
  auto* robust = app.add_subcommand("robust-eval", "Robust strategy on suffix adversaries");
  robust->add_option("--n", rob.n, "Sequence length");
  robust->add_option("--q", rob.q, "Error rate");
  robust->add_option("--D", rob.D, "Page size");
  robust->add_option("--far", rob.far, "Distance of the suffix points");
  robust->add_option("--C", rob.C, "Ratio bound constant, bound = C/q");
  robust->add_option("--seeds", rob.seeds, "Number of seeds");
  robust->add_option("--seed", rob.seed, "Master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (generate->parsed()) return run_generate(gen);
    if (simulate->parsed()) return run_simulate(sim);
    if (compare_cmd->parsed()) return run_compare(cmp);
    if (check->parsed()) return run_check(chk);
    if (replay->parsed()) return run_replay(rep);
    if (lowerbound->parsed()) return run_lowerbound(lb);
    if (robust->parsed()) return run_robust(rob);
  } catch (const pagemig::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
