#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pagemig/metric.hpp"
#include "pagemig/sequences.hpp"

namespace pagemig {

// Page positions a_0..a_n with a_0 = p_0.
struct Schedule {
  std::vector<Point> positions;

  std::size_t steps() const { return positions.empty() ? 0 : positions.size() - 1; }
};

struct SolveResult {
  Schedule schedule;
  double total_cost = 0.0;
  double move_cost = 0.0;
  double serve_cost = 0.0;
};

nlohmann::json to_json(const SolveResult& r);

/// Time steps at which a schedule may change position.
class MoveTimes {
 public:
  // Every t in 1..n.
  static MoveTimes all(std::size_t n);
  // t with t mod period == 0.
  static MoveTimes multiples_of(std::size_t period, std::size_t n);
  // Explicit set; indices outside 1..n throw BoundsError.
  static MoveTimes from_indices(const std::vector<std::size_t>& indices, std::size_t n);

  std::size_t horizon() const { return allowed_.size() - 1; }
  bool allows(std::size_t t) const { return t < allowed_.size() && allowed_[t]; }

 private:
  explicit MoveTimes(std::vector<bool> allowed) : allowed_(std::move(allowed)) {}
  std::vector<bool> allowed_;  // indexed 0..n, slot 0 unused
};

// {p_0} followed by requests in order of first appearance, deduplicated.
// With expand_all on a finite metric the remaining labels are appended.
std::vector<Point> candidate_points(const RequestSequence& seq, const Metric& m,
                                    bool expand_all = false);

/// Minimum-cost schedule over positions drawn from `candidates`.
///
/// Runs the recurrence C[t][p] = min_p' (C[t-1][p'] + D d(p', p)) + d(p, s_t)
/// in O(n k^2) time (O(n k) on uniform metrics) with parent pointers for
/// reconstruction. Positions change only at steps allowed by `move_times`.
/// Equal-cost predecessors resolve toward staying, then toward the lowest
/// candidate index. Throws DomainError when p_0 is not a candidate.
SolveResult optimal_schedule(const RequestSequence& seq, const Metric& m, double D,
                             const std::vector<Point>& candidates,
                             const std::optional<MoveTimes>& move_times = std::nullopt);

// optimal_schedule over candidate_points(seq, m).
SolveResult optimal_schedule(const RequestSequence& seq, const Metric& m, double D);

/// Cheapest cost of serving s_1..s_t while ending at `end`.
///
/// Candidates default to candidate_points(seq, m). Throws DomainError when
/// `end` is not a candidate or when t = 0 and end differs from p_0.
double constrained_optimal(const RequestSequence& seq, const Metric& m, double D, std::size_t t,
                           const Point& end,
                           const std::optional<std::vector<Point>>& candidates = std::nullopt);

// Largest k^n brute_force_schedule accepts.
inline constexpr double kBruteForceLimit = 1e7;

/// Exhaustive optimum over every candidate sequence; verification oracle for
/// optimal_schedule. Throws SizeError when k^n exceeds kBruteForceLimit.
SolveResult brute_force_schedule(const RequestSequence& seq, const Metric& m, double D,
                                 const std::vector<Point>& candidates);

}  // namespace pagemig
