#include "pagemig/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "pagemig/errors.hpp"
#include "pagemig/offline_solver.hpp"
#include "pagemig/simulation.hpp"

namespace pagemig {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a; stable across standard libraries, unlike std::hash.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <typename T>
T field(const nlohmann::json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

struct RunStats {
  double mean_total = 0.0;
  double std_total = 0.0;
  double mean_move = 0.0;
  double mean_serve = 0.0;
  std::optional<std::size_t> switch_time;
};

RunStats run_strategy(const StrategySpec& spec, const Instance& instance, double D,
                      std::size_t runs, std::uint64_t master, std::size_t instance_id,
                      const Schedule* predict_schedule) {
  std::vector<double> totals;
  RunStats stats;
  for (std::size_t r = 0; r < runs; ++r) {
    const auto seed = derive_seed(master, spec.name, instance_id, r);
    auto strategy =
        make_strategy(spec, instance.pair, instance.metric, D, seed, predict_schedule);
    const auto report = run(*strategy, instance.pair.actual(), instance.metric, D, seed);
    totals.push_back(report.ledger.total());
    stats.mean_move += report.ledger.total_move();
    stats.mean_serve += report.ledger.total_serve();
    if (r == 0) {
      stats.switch_time = report.switch_time;
    }
  }
  const auto count = static_cast<double>(runs);
  for (double t : totals) {
    stats.mean_total += t;
  }
  stats.mean_total /= count;
  stats.mean_move /= count;
  stats.mean_serve /= count;
  double squares = 0.0;
  for (double t : totals) {
    squares += (t - stats.mean_total) * (t - stats.mean_total);
  }
  stats.std_total = std::sqrt(squares / count);
  return stats;
}

bool needs_predict_schedule(const ExperimentConfig& config) {
  return std::any_of(config.strategies.begin(), config.strategies.end(), [](const auto& s) {
    return s.name == "predict" || s.name == "delayed_predict" || s.name == "robust";
  });
}

ResultRow make_row(const ExperimentConfig& config, const SweepPoint& point,
                   const Instance& instance, const StrategySpec& spec,
                   const Schedule* predict_schedule) {
  const std::size_t runs = is_randomized(spec.name) ? config.runs : 1;
  const auto stats = run_strategy(spec, instance, point.D, runs, config.seed, point.instance_id,
                                  predict_schedule);
  ResultRow row;
  row.instance_id = point.instance_id;
  row.dataset = config.dataset;
  row.strategy = spec.name;
  row.seed = derive_seed(config.seed, spec.name, point.instance_id, 0);
  row.D = point.D;
  row.sigma_or_q = point.x;
  row.runs = runs;
  row.total_cost = stats.mean_total;
  row.cost_std = stats.std_total;
  row.move_cost = stats.mean_move;
  row.serve_cost = stats.mean_serve;
  row.switch_time = stats.switch_time;
  return row;
}

std::vector<ResultRow> rows_for_point(const ExperimentConfig& config, const SweepPoint& point) {
  const auto instance = build_instance(config, point);
  std::optional<Schedule> predict_schedule;
  if (needs_predict_schedule(config)) {
    predict_schedule =
        optimal_schedule(instance.pair.predicted(), instance.metric, point.D).schedule;
  }
  std::vector<ResultRow> rows;
  for (const auto& spec : config.strategies) {
    rows.push_back(make_row(config, point, instance, spec,
                            predict_schedule ? &*predict_schedule : nullptr));
  }
  return rows;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, const std::string& tag, std::uint64_t a,
                          std::uint64_t b) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ fnv1a(tag));
  h = splitmix64(h ^ a);
  return splitmix64(h ^ (b * 0x9e3779b97f4a7c15ULL));
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ConfigError("config: expected a JSON object");
  }
  ExperimentConfig c;
  c.dataset = field<std::string>(j, "dataset", c.dataset);
  if (c.dataset != "line" && c.dataset != "brownian" && c.dataset != "uniform_flip") {
    throw ConfigError("dataset: expected line, brownian or uniform_flip, got '" + c.dataset +
                      "'");
  }
  c.n = field<std::size_t>(j, "n", c.n);
  c.runs = field<std::size_t>(j, "runs", c.runs);
  if (c.runs < 1) {
    throw ConfigError("runs: must be at least 1");
  }
  c.seed = field<std::uint64_t>(j, "seed", c.seed);
  c.csv_path = field<std::string>(j, "csv", c.csv_path);
  c.report_path = field<std::string>(j, "report", c.report_path);
  c.sites = field<std::size_t>(j, "sites", c.sites);
  c.mean_dwell = field<double>(j, "mean_dwell", c.mean_dwell);
  c.epsilon = field<double>(j, "epsilon", c.epsilon);
  c.workers = field<std::size_t>(j, "workers", c.workers);
  c.bounds = field<std::map<std::string, double>>(j, "bounds", {});

  if (!j.contains("sweeps") || !j.at("sweeps").is_array() || j.at("sweeps").empty()) {
    throw ConfigError("sweeps: expected a nonempty array of {\"D\": [...], \"x\": [...]}");
  }
  for (const auto& grid : j.at("sweeps")) {
    SweepGrid g;
    g.D = field<std::vector<double>>(grid, "D", {});
    g.x = field<std::vector<double>>(grid, grid.contains("sigma") ? "sigma" : grid.contains("q") ? "q" : "x", {});
    if (g.D.empty() || g.x.empty()) {
      throw ConfigError("sweeps: every grid needs nonempty D and sigma/q lists");
    }
    for (double D : g.D) {
      if (!(D > 1.0)) {
        throw ConfigError("sweeps.D: values must exceed 1");
      }
    }
    for (double x : g.x) {
      if (!(x >= 0.0)) {
        throw ConfigError("sweeps.x: values must be nonnegative");
      }
      if (c.dataset == "uniform_flip" && !(x > 0.0 && x < 1.0)) {
        throw ConfigError("sweeps.q: flip rates must lie in (0, 1)");
      }
    }
    c.sweeps.push_back(std::move(g));
  }

  if (!j.contains("strategies") || !j.at("strategies").is_array() ||
      j.at("strategies").empty()) {
    throw ConfigError("strategies: expected a nonempty array");
  }
  for (const auto& s : j.at("strategies")) {
    StrategySpec spec;
    if (s.is_string()) {
      spec.name = s.get<std::string>();
    } else {
      spec.name = field<std::string>(s, "name", "");
      spec.params = field<std::map<std::string, double>>(s, "params", {});
    }
    static const std::vector<std::string> known{"predict",  "lazy_predict", "delayed_predict",
                                                "coinflip", "robust",       "opt"};
    if (std::find(known.begin(), known.end(), spec.name) == known.end()) {
      throw ConfigError("strategies: unknown strategy '" + spec.name + "'");
    }
    c.strategies.push_back(std::move(spec));
  }
  if (c.dataset == "uniform_flip" && c.sites < 2) {
    throw ConfigError("sites: uniform_flip needs at least two sites");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open " + path);
  }
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json sweeps = nlohmann::json::array();
  for (const auto& g : c.sweeps) {
    sweeps.push_back({{"D", g.D}, {"x", g.x}});
  }
  nlohmann::json strategies = nlohmann::json::array();
  for (const auto& s : c.strategies) {
    strategies.push_back({{"name", s.name}, {"params", s.params}});
  }
  return {{"dataset", c.dataset}, {"n", c.n},           {"sweeps", sweeps},
          {"strategies", strategies}, {"runs", c.runs}, {"seed", c.seed},
          {"csv", c.csv_path},    {"report", c.report_path}, {"bounds", c.bounds},
          {"sites", c.sites},     {"mean_dwell", c.mean_dwell}, {"epsilon", c.epsilon}};
}

std::vector<SweepPoint> sweep_points(const ExperimentConfig& config) {
  std::vector<SweepPoint> points;
  for (const auto& grid : config.sweeps) {
    for (double D : grid.D) {
      for (double x : grid.x) {
        points.push_back({points.size(), D, x});
      }
    }
  }
  return points;
}

Instance build_instance(const ExperimentConfig& config, const SweepPoint& point) {
  const auto predicted_seed = derive_seed(config.seed, "predicted");
  const auto noise_seed = derive_seed(config.seed, "noise");
  if (config.dataset == "uniform_flip") {
    std::vector<Point> sites;
    for (std::size_t i = 0; i < config.sites; ++i) {
      sites.emplace_back(Label{static_cast<std::int64_t>(i)});
    }
    auto predicted = phase_process(config.n, sites, config.mean_dwell, predicted_seed);
    auto actual = bounded_flip(predicted, point.x, config.epsilon, point.D, noise_seed,
                               FlipUniform{sites});
    return {Metric::uniform(config.sites),
            PredictionPair(std::move(actual), std::move(predicted))};
  }
  auto predicted = config.dataset == "line" ? line_process(config.n)
                                            : brownian_process(config.n, predicted_seed);
  auto actual = gaussian_perturb(predicted, point.x, noise_seed);
  return {Metric::euclidean2d(), PredictionPair(std::move(actual), std::move(predicted))};
}

std::vector<ResultRow> compare(const ExperimentConfig& config) {
  const auto points = sweep_points(config);
  std::vector<std::vector<ResultRow>> per_point(points.size());
  std::size_t workers = config.workers != 0 ? config.workers : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, points.size()));

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(points.size());
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        per_point[i] = rows_for_point(config, points[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  std::vector<ResultRow> rows;
  for (auto& block : per_point) {
    rows.insert(rows.end(), block.begin(), block.end());
  }
  return rows;
}

std::size_t row_count(const ExperimentConfig& config) {
  return sweep_points(config).size() * config.strategies.size();
}

ResultRow compute_row(const ExperimentConfig& config, std::size_t index) {
  const auto points = sweep_points(config);
  if (index >= points.size() * config.strategies.size()) {
    throw BoundsError("row " + std::to_string(index) + " outside 0.." +
                      std::to_string(row_count(config) - 1));
  }
  const auto& point = points[index / config.strategies.size()];
  const auto& spec = config.strategies[index % config.strategies.size()];
  const auto instance = build_instance(config, point);
  std::optional<Schedule> predict_schedule;
  if (spec.name == "predict" || spec.name == "delayed_predict" || spec.name == "robust") {
    predict_schedule =
        optimal_schedule(instance.pair.predicted(), instance.metric, point.D).schedule;
  }
  return make_row(config, point, instance, spec,
                  predict_schedule ? &*predict_schedule : nullptr);
}

bool ratio_report(std::vector<ResultRow>& rows, const std::map<std::string, double>& bounds) {
  std::map<std::size_t, double> opt_cost;
  for (const auto& row : rows) {
    if (row.strategy == "opt") {
      opt_cost[row.instance_id] = row.total_cost;
    }
  }
  bool ok = true;
  for (auto& row : rows) {
    const auto it = opt_cost.find(row.instance_id);
    if (it == opt_cost.end()) {
      throw ReportError("instance " + std::to_string(row.instance_id) + " has no opt row");
    }
    const double opt = it->second;
    row.ratio = opt > 0.0 ? row.total_cost / opt
                          : (row.total_cost <= kCostTolerance ? 1.0 : HUGE_VAL);
    const auto bound = bounds.find(row.strategy);
    if (bound != bounds.end()) {
      row.within_bound = *row.ratio <= bound->second;
      ok = ok && *row.within_bound;
    }
  }
  return ok;
}

bool apply_bounds(const ExperimentConfig& config, std::vector<ResultRow>& rows) {
  const bool has_opt = std::any_of(config.strategies.begin(), config.strategies.end(),
                                   [](const StrategySpec& s) { return s.name == "opt"; });
  if (has_opt) {
    return ratio_report(rows, config.bounds);
  }
  if (!config.bounds.empty()) {
    throw ReportError("bounds need an opt strategy in the config");
  }
  return true;
}

ResultRow replay_row(const ExperimentConfig& config, std::size_t index) {
  std::vector<ResultRow> rows{compute_row(config, index)};
  const std::size_t base = index - index % config.strategies.size();
  for (std::size_t s = 0; s < config.strategies.size(); ++s) {
    if (config.strategies[s].name == "opt" && base + s != index) {
      rows.push_back(compute_row(config, base + s));
    }
  }
  apply_bounds(config, rows);
  return rows.front();
}

std::string csv_line(const ResultRow& row) {
  std::ostringstream os;
  os << row.instance_id << ',' << row.dataset << ',' << row.strategy << ',' << row.seed << ','
     << format_double(row.D) << ',' << format_double(row.sigma_or_q) << ',' << row.runs << ','
     << format_double(row.total_cost) << ',' << format_double(row.cost_std) << ','
     << format_double(row.move_cost) << ',' << format_double(row.serve_cost) << ',';
  if (row.switch_time) {
    os << *row.switch_time;
  }
  os << ',';
  if (row.ratio) {
    os << format_double(*row.ratio);
  }
  os << ',';
  if (row.within_bound) {
    os << (*row.within_bound ? "true" : "false");
  }
  return os.str();
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) {
    out << csv_line(row) << '\n';
  }
}

CheckReport check_pair(const PredictionPair& pair, const AssumptionParams& params) {
  CheckReport report;
  report.verdict = check_assumption(pair, params);
  for (std::size_t length = params.window(); length >= 1 && length <= pair.size();
       length *= 2) {
    report.densities.emplace_back(length, max_window_density(pair, length));
  }
  return report;
}

nlohmann::json to_json(const CheckReport& report) {
  nlohmann::json densities = nlohmann::json::array();
  for (const auto& [length, density] : report.densities) {
    densities.push_back({{"length", length}, {"max_density", density}});
  }
  return {{"holds", report.verdict.holds},
          {"violated_at", report.verdict.violated_at ? nlohmann::json(*report.verdict.violated_at)
                                                     : nlohmann::json(nullptr)},
          {"densities", densities}};
}

double robust_expected_cost(const PredictionPair& pair, const AssumptionParams& params,
                            const Metric& m) {
  const double D = params.D();
  const auto& actual = pair.actual();
  const std::size_t n = pair.size();
  const auto trigger = check_assumption(pair, params).violated_at;

  Delayed following(predict_strategy(pair.predicted(), m, D), robust_delay(params.q(), D));
  const auto follow = run(following, actual, m, D);
  if (!trigger) {
    return follow.ledger.total();
  }
  const std::size_t switch_at = *trigger;
  const auto points = candidate_points(actual, m);
  const double p = 1.0 / (2.0 * D);
  std::vector<double> mass(points.size(), 0.0);  // law of the shadow's a_t
  mass[0] = 1.0;
  double expected = follow.ledger.prefix(switch_at - 1);
  for (std::size_t t = 1; t <= n; ++t) {
    const Point& request = actual.at(t);
    if (t == switch_at) {
      const Point& from = follow.schedule.positions[t - 1];
      for (std::size_t i = 0; i < points.size(); ++i) {
        expected += mass[i] * (D * m.distance(from, points[i]) + m.distance(points[i], request));
      }
    } else if (t > switch_at) {
      for (std::size_t i = 0; i < points.size(); ++i) {
        expected += mass[i] * m.distance(points[i], request);
      }
    }
    // Coin after serving request t; the move lands at step t+1.
    const auto target = static_cast<std::size_t>(
        std::find(points.begin(), points.end(), request) - points.begin());
    double moved = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (t >= switch_at && t < n) {
        expected += mass[i] * p * D * m.distance(points[i], request);
      }
      moved += mass[i] * p;
      mass[i] *= 1.0 - p;
    }
    mass[target] += moved;
  }
  return expected;
}

LowerBoundEvaluation evaluate_lower_bound(double D, double q) {
  LowerBoundEvaluation e;
  e.D = D;
  e.q = q;
  e.floor = 1.0 + q / 8.0;
  const auto lengths = lower_bound_lengths(D, q);
  const auto branch_a = lower_bound_instance(D, q, Branch::kA);
  const auto branch_b = lower_bound_instance(D, q, Branch::kB);
  const Metric m = Metric::uniform(2);
  const std::vector<Point> both{Label{0}, Label{1}};

  e.opt_a = optimal_schedule(branch_a.actual(), m, D, both).total_cost;
  e.opt_b = optimal_schedule(branch_b.actual(), m, D, both).total_cost;
  auto average = [&](double a, double b) { return 0.5 * a / e.opt_a + 0.5 * b / e.opt_b; };

  const AssumptionParams robust_params(D, q, 1.0);
  const std::vector<StrategySpec> specs{{"predict", {}},
                                        {"lazy_predict", {{"epsilon", 1.0}}},
                                        {"delayed_predict", {{"q", q}}}};
  for (const auto& spec : specs) {
    LowerBoundEvaluation::Entry entry{spec.name};
    auto on_a = make_strategy(spec, branch_a, m, D, 0);
    entry.cost_a = run(*on_a, branch_a.actual(), m, D).ledger.total();
    auto on_b = make_strategy(spec, branch_b, m, D, 0);
    entry.cost_b = run(*on_b, branch_b.actual(), m, D).ledger.total();
    entry.ratio = average(entry.cost_a, entry.cost_b);
    e.entries.push_back(entry);
  }
  {
    LowerBoundEvaluation::Entry entry{"coinflip"};
    entry.cost_a = coinflip_expected_cost(branch_a.actual(), m, D);
    entry.cost_b = coinflip_expected_cost(branch_b.actual(), m, D);
    entry.ratio = average(entry.cost_a, entry.cost_b);
    e.entries.push_back(entry);
  }
  {
    LowerBoundEvaluation::Entry entry{"robust"};
    entry.cost_a = robust_expected_cost(branch_a, robust_params, m);
    entry.cost_b = robust_expected_cost(branch_b, robust_params, m);
    entry.ratio = average(entry.cost_a, entry.cost_b);
    e.entries.push_back(entry);
  }

  // Requests 1..L are identical in both branches, so a_1..a_L must be too.
  // Past L the algorithm knows the branch and can play optimally.
  RequestSequence prefix{Label{0}, {}};
  prefix.items.assign(branch_a.actual().items.begin(),
                      branch_a.actual().items.begin() + static_cast<long>(lengths.prefix));
  auto suffix_cost = [&](const PredictionPair& branch, const Point& from) {
    RequestSequence rest{from, {}};
    rest.items.assign(branch.actual().items.begin() + static_cast<long>(lengths.prefix),
                      branch.actual().items.end());
    return optimal_schedule(rest, m, D, both).total_cost;
  };
  e.best_online = HUGE_VAL;
  for (const auto& end : both) {
    const double shared = constrained_optimal(prefix, m, D, lengths.prefix, end, both);
    e.best_online = std::min(e.best_online, average(shared + suffix_cost(branch_a, end),
                                                    shared + suffix_cost(branch_b, end)));
  }
  return e;
}

nlohmann::json to_json(const LowerBoundEvaluation& e) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& entry : e.entries) {
    entries.push_back({{"strategy", entry.strategy},
                       {"cost_a", entry.cost_a},
                       {"cost_b", entry.cost_b},
                       {"ratio", entry.ratio}});
  }
  return {{"D", e.D},         {"q", e.q},
          {"opt_a", e.opt_a}, {"opt_b", e.opt_b},
          {"entries", entries}, {"best_online", e.best_online},
          {"floor", e.floor}};
}

RobustEvaluation evaluate_robust(std::size_t n, double q, double D, double far, double C,
                                 std::size_t seeds, std::uint64_t master_seed) {
  RobustEvaluation e;
  e.q = q;
  e.D = D;
  e.n = n;
  e.bound = C / q;
  const Point start = Planar{0.0, 0.0};
  const auto suffix = alternating(Planar{far, 0.0}, Planar{-far, 0.0},
                                  floor_count(q * static_cast<double>(n)));
  const auto pair = suffix_adversary(n, q, suffix, start);
  const Metric m = Metric::euclidean2d();
  e.opt_cost = optimal_schedule(pair.actual(), m, D).total_cost;
  const AssumptionParams params(D, q, 1.0);
  const auto predicted_schedule = optimal_schedule(pair.predicted(), m, D).schedule;
  for (std::size_t s = 0; s < seeds; ++s) {
    Robust robust(pair.predicted(), predicted_schedule, params,
                  coinflip_online(start, D, derive_seed(master_seed, "robust-eval", s)));
    const auto report = run(robust, pair.actual(), m, D);
    e.ratios.push_back(report.ledger.total() / e.opt_cost);
    e.switch_times.push_back(report.switch_time);
  }
  return e;
}

nlohmann::json to_json(const RobustEvaluation& e) {
  nlohmann::json switches = nlohmann::json::array();
  for (const auto& s : e.switch_times) {
    switches.push_back(s ? nlohmann::json(*s) : nlohmann::json(nullptr));
  }
  const double worst = e.ratios.empty() ? 0.0 : *std::max_element(e.ratios.begin(), e.ratios.end());
  return {{"n", e.n},          {"q", e.q},           {"D", e.D},
          {"opt_cost", e.opt_cost}, {"ratios", e.ratios}, {"worst_ratio", worst},
          {"bound", e.bound},  {"switch_times", switches}};
}

}  // namespace pagemig
