#include "pagemig/simulation.hpp"

#include <algorithm>

#include "pagemig/errors.hpp"

namespace pagemig {

CostLedger::CostLedger(std::vector<double> move, std::vector<double> serve)
    : move_(std::move(move)), serve_(std::move(serve)) {
  if (move_.size() != serve_.size() || move_.empty()) {
    throw ShapeError("ledger move and serve vectors must have equal length n+1");
  }
  prefix_.assign(move_.size(), 0.0);
  for (std::size_t t = 1; t < move_.size(); ++t) {
    if (move_[t] < 0.0 || serve_[t] < 0.0) {
      throw DomainError("ledger entries must be nonnegative");
    }
    total_move_ += move_[t];
    total_serve_ += serve_[t];
    prefix_[t] = prefix_[t - 1] + move_[t] + serve_[t];
  }
}

double CostLedger::between(std::size_t t1, std::size_t t2) const {
  if (t1 > t2 || t2 >= prefix_.size()) {
    throw BoundsError("ledger interval (" + std::to_string(t1) + ", " + std::to_string(t2) +
                      "] outside 0.." + std::to_string(steps()));
  }
  return prefix_[t2] - prefix_[t1];
}

nlohmann::json to_json(const RunReport& report) {
  nlohmann::json positions = nlohmann::json::array();
  for (const auto& p : report.schedule.positions) {
    positions.push_back(point_to_json(p));
  }
  nlohmann::json j{{"strategy", report.strategy},
                   {"D", report.D},
                   {"total_cost", report.ledger.total()},
                   {"move_cost", report.ledger.total_move()},
                   {"serve_cost", report.ledger.total_serve()},
                   {"positions", positions}};
  j["seed"] = report.seed ? nlohmann::json(*report.seed) : nlohmann::json(nullptr);
  j["switch_time"] =
      report.switch_time ? nlohmann::json(*report.switch_time) : nlohmann::json(nullptr);
  j["analysis_switch_point"] = report.analysis_switch_point
                                   ? nlohmann::json(*report.analysis_switch_point)
                                   : nlohmann::json(nullptr);
  if (report.assumption) {
    j["assumption"] = {{"holds", report.assumption->holds},
                       {"violated_at", report.assumption->violated_at
                                           ? nlohmann::json(*report.assumption->violated_at)
                                           : nlohmann::json(nullptr)}};
  }
  return j;
}

CostLedger cost_of(const Schedule& schedule, const RequestSequence& actual, const Metric& m,
                   double D) {
  const std::size_t n = actual.size();
  if (schedule.positions.size() != n + 1) {
    throw ShapeError("schedule has " + std::to_string(schedule.positions.size()) +
                     " positions, expected " + std::to_string(n + 1));
  }
  std::vector<double> move(n + 1, 0.0);
  std::vector<double> serve(n + 1, 0.0);
  for (std::size_t t = 1; t <= n; ++t) {
    move[t] = D * m.distance(schedule.positions[t - 1], schedule.positions[t]);
    serve[t] = m.distance(schedule.positions[t], actual.at(t));
  }
  return CostLedger(std::move(move), std::move(serve));
}

RunReport run(Strategy& strategy, const RequestSequence& actual, const Metric& m, double D,
              std::optional<std::uint64_t> seed) {
  if (!strategy.fresh()) {
    throw StateError(strategy.name() + " has already been run");
  }
  if (!(strategy.position() == actual.start)) {
    throw DomainError(strategy.name() + " does not start at p_0");
  }
  actual.validate(m);
  RunReport report;
  report.strategy = strategy.name();
  report.seed = seed;
  report.D = D;
  report.schedule.positions.reserve(actual.size() + 1);
  report.schedule.positions.push_back(actual.start);
  for (std::size_t t = 1; t <= actual.size(); ++t) {
    report.schedule.positions.push_back(strategy.step(t, actual.at(t)));
  }
  report.ledger = cost_of(report.schedule, actual, m, D);
  report.switch_time = strategy.switch_time();
  if (const auto* robust = dynamic_cast<const Robust*>(&strategy)) {
    report.analysis_switch_point = robust->analysis_switch_point();
  }
  return report;
}

namespace {

IntervalDiagnostic interval_with_breakpoints(const RunReport& alg, const RunReport& opt,
                                   const PredictionPair& pair, std::vector<std::size_t> cuts) {
  IntervalDiagnostic out;
  out.lhs = alg.ledger.total() - opt.ledger.total();
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  out.breakpoints = std::move(cuts);
  const MismatchIndex index(pair);
  for (std::size_t i = 1; i < out.breakpoints.size(); ++i) {
    const std::size_t lo = out.breakpoints[i - 1];
    const std::size_t hi = out.breakpoints[i];
    const std::size_t wrong = index.count(lo + 1, hi);
    if (wrong == 0) {
      continue;
    }
    double moves = 0.0;
    for (std::size_t t = lo + 1; t <= hi; ++t) {
      moves += alg.ledger.move(t) + opt.ledger.move(t);
    }
    const double spent = alg.ledger.between(lo, hi) + opt.ledger.between(lo, hi) - moves;
    out.rhs += 2.0 * static_cast<double>(wrong) * spent / static_cast<double>(hi - lo);
  }
  return out;
}

void require_same_run(const RunReport& alg, const RunReport& opt, const PredictionPair& pair) {
  const std::size_t n = pair.size();
  if (alg.ledger.steps() != n || opt.ledger.steps() != n) {
    throw ShapeError("diagnostic needs both reports over the same n=" + std::to_string(n) +
                     " requests");
  }
}

}  // namespace

IntervalDiagnostic interval_diagnostic(const RunReport& alg, const RunReport& opt,
                             const PredictionPair& pair) {
  require_same_run(alg, opt, pair);
  const std::size_t n = pair.size();
  std::vector<std::size_t> cuts{0, n};
  for (std::size_t t = 1; t <= n; ++t) {
    if (alg.ledger.move(t) > 0.0 || opt.ledger.move(t) > 0.0) {
      cuts.push_back(t - 1);
    }
  }
  return interval_with_breakpoints(alg, opt, pair, std::move(cuts));
}

IntervalDiagnostic interval_diagnostic_at_moves(const RunReport& alg, const RunReport& opt,
                                      const PredictionPair& pair) {
  require_same_run(alg, opt, pair);
  const std::size_t n = pair.size();
  std::vector<std::size_t> cuts{0, n};
  for (std::size_t t = 1; t <= n; ++t) {
    if (alg.ledger.move(t) > 0.0 || opt.ledger.move(t) > 0.0) {
      cuts.push_back(t);
    }
  }
  return interval_with_breakpoints(alg, opt, pair, std::move(cuts));
}

}  // namespace pagemig
