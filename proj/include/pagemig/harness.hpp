#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pagemig/generators.hpp"
#include "pagemig/metric.hpp"
#include "pagemig/sequences.hpp"
#include "pagemig/strategies.hpp"

namespace pagemig {

// Counter-based seed split: mixes (master, tag, a, b) with SplitMix64 so each
// consumer owns an independent stream.
std::uint64_t derive_seed(std::uint64_t master, const std::string& tag, std::uint64_t a = 0,
                          std::uint64_t b = 0);

// One cross-product grid of (D, x) values; x is sigma or q by dataset.
struct SweepGrid {
  std::vector<double> D;
  std::vector<double> x;
};

/// Experiment description, loaded from a JSON file.
///
/// Datasets: "line" and "brownian" (planar, x = sigma of the Gaussian noise)
/// and "uniform_flip" (uniform metric phase process, x = bounded_flip rate).
struct ExperimentConfig {
  std::string dataset = "brownian";
  std::size_t n = 500;
  std::vector<SweepGrid> sweeps;
  std::vector<StrategySpec> strategies;
  std::size_t runs = 100;
  std::uint64_t seed = 1;
  std::string csv_path = "results.csv";
  std::string report_path = "report.json";
  // Upper bounds on cost(strategy) / cost(opt), by strategy name.
  std::map<std::string, double> bounds;
  // uniform_flip only.
  std::size_t sites = 4;
  double mean_dwell = 100.0;
  double epsilon = 1.0;
  // 0 = hardware concurrency.
  std::size_t workers = 0;
};

// Throws ConfigError naming the offending field.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

struct SweepPoint {
  std::size_t instance_id = 0;
  double D = 0.0;
  double x = 0.0;
};

std::vector<SweepPoint> sweep_points(const ExperimentConfig& config);

struct Instance {
  Metric metric;
  PredictionPair pair;
};

// The prediction and noise seeds depend only on the master seed, so every
// sweep point shares one predicted sequence and one noise draw.
Instance build_instance(const ExperimentConfig& config, const SweepPoint& point);

struct ResultRow {
  std::size_t instance_id = 0;
  std::string dataset;
  std::string strategy;
  std::uint64_t seed = 0;
  double D = 0.0;
  double sigma_or_q = 0.0;
  std::size_t runs = 1;
  double total_cost = 0.0;  // mean over runs
  double cost_std = 0.0;    // population standard deviation over runs
  double move_cost = 0.0;
  double serve_cost = 0.0;
  std::optional<std::size_t> switch_time;
  std::optional<double> ratio;
  std::optional<bool> within_bound;
};

// Fixed CSV header; ratio and within_bound stay empty until ratio_report.
inline constexpr const char* kCsvHeader =
    "instance_id,dataset,strategy,seed,D,sigma_or_q,runs,total_cost,cost_std,move_cost,"
    "serve_cost,switch_time,ratio,within_bound";

/// Runs every configured strategy at every sweep point.
///
/// Rows come out in config order (sweep point major, strategy minor)
/// independent of worker scheduling. Randomized strategies are averaged over
/// `runs` seeds; the rest run once.
std::vector<ResultRow> compare(const ExperimentConfig& config);

// Row `index` of compare(config), computed standalone.
ResultRow compute_row(const ExperimentConfig& config, std::size_t index);
std::size_t row_count(const ExperimentConfig& config);

/// Fills ratio = cost / cost(opt) per sweep point and flags rows whose ratio
/// exceeds bounds[strategy]. Returns true when no row is flagged. Throws
/// ReportError when a sweep point has no opt row.
bool ratio_report(std::vector<ResultRow>& rows, const std::map<std::string, double>& bounds);

// Runs ratio_report with the config's bounds when the config lists opt.
// Bounds without an opt strategy are a ReportError. Returns false on a
// bound violation.
bool apply_bounds(const ExperimentConfig& config, std::vector<ResultRow>& rows);

// Row `index` as written to the CSV, ratio and bound verdict included.
ResultRow replay_row(const ExperimentConfig& config, std::size_t index);

std::string csv_line(const ResultRow& row);
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

struct CheckReport {
  AssumptionVerdict verdict;
  std::vector<std::pair<std::size_t, double>> densities;  // (length, max density)
};

// Verdict plus max_window_density for lengths W, 2W, 4W, ... up to n.
CheckReport check_pair(const PredictionPair& pair, const AssumptionParams& params);
nlohmann::json to_json(const CheckReport& report);

/// Branch-averaged competitive ratios on the lower-bound instance, computed
/// exactly from both branches.
struct LowerBoundEvaluation {
  double D = 0.0;
  double q = 0.0;
  double opt_a = 0.0;
  double opt_b = 0.0;
  // strategy name -> (cost on A, cost on B, averaged ratio)
  struct Entry {
    std::string strategy;
    double cost_a = 0.0;
    double cost_b = 0.0;
    double ratio = 0.0;
  };
  std::vector<Entry> entries;
  // Smallest averaged ratio any deterministic online algorithm can reach:
  // it must commit to one prefix schedule before the branches diverge.
  double best_online = 0.0;
  double floor = 0.0;  // 1 + q / 8
};

LowerBoundEvaluation evaluate_lower_bound(double D, double q);
nlohmann::json to_json(const LowerBoundEvaluation& e);

/// Exact expected cost of Robust with a coin-flip shadow on a fixed pair.
double robust_expected_cost(const PredictionPair& pair, const AssumptionParams& params,
                            const Metric& m);

/// Robust versus the offline optimum on suffix-adversary instances.
struct RobustEvaluation {
  double q = 0.0;
  double D = 0.0;
  std::size_t n = 0;
  double opt_cost = 0.0;
  std::vector<double> ratios;  // one per seed
  std::vector<std::optional<std::size_t>> switch_times;
  double bound = 0.0;  // C / q
};

// Adversarial suffix alternates between (far, 0) and (-far, 0); p_0 = (0, 0).
RobustEvaluation evaluate_robust(std::size_t n, double q, double D, double far, double C,
                                 std::size_t seeds, std::uint64_t master_seed);
nlohmann::json to_json(const RobustEvaluation& e);

}  // namespace pagemig
