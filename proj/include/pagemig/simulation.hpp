#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pagemig/offline_solver.hpp"
#include "pagemig/sequences.hpp"
#include "pagemig/strategies.hpp"

namespace pagemig {

/// Per-step move and serve charges with prefix sums.
///
/// Index 0 of move/serve is unused so that move[t] and serve[t] refer to
/// request t directly.
class CostLedger {
 public:
  CostLedger() = default;
  CostLedger(std::vector<double> move, std::vector<double> serve);

  std::size_t steps() const { return prefix_.size() - 1; }
  double move(std::size_t t) const { return move_.at(t); }
  double serve(std::size_t t) const { return serve_.at(t); }
  // C_t = cost of steps 1..t.
  double prefix(std::size_t t) const { return prefix_.at(t); }
  // C_{t1,t2} = C_{t2} - C_{t1}, 0 <= t1 <= t2 <= n.
  double between(std::size_t t1, std::size_t t2) const;
  double total() const { return prefix_.back(); }
  double total_move() const { return total_move_; }
  double total_serve() const { return total_serve_; }

  bool operator==(const CostLedger&) const = default;

 private:
  std::vector<double> move_{0.0};
  std::vector<double> serve_{0.0};
  std::vector<double> prefix_{0.0};
  double total_move_ = 0.0;
  double total_serve_ = 0.0;
};

struct RunReport {
  std::string strategy;
  std::optional<std::uint64_t> seed;
  double D = 0.0;
  Schedule schedule;
  CostLedger ledger;
  std::optional<std::size_t> switch_time;
  std::optional<std::size_t> analysis_switch_point;
  // Verdict of check_assumption when the caller supplied parameters.
  std::optional<AssumptionVerdict> assumption;
};

nlohmann::json to_json(const RunReport& report);

/// Drives a fresh strategy over `actual`, moving then serving at each step.
///
/// Throws StateError when the strategy has already been stepped.
RunReport run(Strategy& strategy, const RequestSequence& actual, const Metric& m, double D,
              std::optional<std::uint64_t> seed = std::nullopt);

// Recomputes the ledger from positions alone; ShapeError on length mismatch.
CostLedger cost_of(const Schedule& schedule, const RequestSequence& actual, const Metric& m,
                   double D);

/// Both sides of the per-interval bound on A_n - O_n.
struct IntervalDiagnostic {
  double lhs = 0.0;
  double rhs = 0.0;
  // t_0 = 0 < t_1 < ... < t_last = n.
  std::vector<std::size_t> breakpoints;
};

/// Compares a prediction-following run with the offline optimum run.
///
/// Breakpoints are the last step before either schedule moves, so each
/// interval (t_{i-1}, t_i] opens with the move and both positions are
/// constant inside it. rhs = 2 sum_i m(I_i) (dA + dO - c_move) / |I_i|.
IntervalDiagnostic interval_diagnostic(const RunReport& alg, const RunReport& opt,
                             const PredictionPair& pair);

// Same sum with breakpoints at the move steps themselves. Kept for
// comparison; this form is not a valid upper bound on every instance.
IntervalDiagnostic interval_diagnostic_at_moves(const RunReport& alg, const RunReport& opt,
                                      const PredictionPair& pair);

}  // namespace pagemig
