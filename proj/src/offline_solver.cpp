#include "pagemig/offline_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>

#include "pagemig/errors.hpp"

namespace pagemig {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Above this candidate count the k x k distance table is not materialized.
constexpr std::size_t kDenseTableLimit = 2048;

std::size_t index_of(const std::vector<Point>& candidates, const Point& p) {
  const auto it = std::find(candidates.begin(), candidates.end(), p);
  if (it == candidates.end()) {
    throw DomainError("point " + to_string(p) + " is not a candidate position");
  }
  return static_cast<std::size_t>(it - candidates.begin());
}

// min(floor, min_i a[i] + b[i]) with four independent running minima.
double min_plus(const double* a, const double* b, std::size_t k, double floor) {
  double m0 = floor, m1 = floor, m2 = floor, m3 = floor;
  std::size_t i = 0;
  for (; i + 4 <= k; i += 4) {
    m0 = std::min(m0, a[i] + b[i]);
    m1 = std::min(m1, a[i + 1] + b[i + 1]);
    m2 = std::min(m2, a[i + 2] + b[i + 2]);
    m3 = std::min(m3, a[i + 3] + b[i + 3]);
  }
  for (; i < k; ++i) {
    m0 = std::min(m0, a[i] + b[i]);
  }
  return std::min(std::min(m0, m1), std::min(m2, m3));
}

// Rolling DP over candidate positions. Keeps parent pointers so the optimal
// schedule ending at any position can be reconstructed.
class ScheduleDp {
 public:
  ScheduleDp(const RequestSequence& seq, const Metric& m, double D,
             const std::vector<Point>& candidates, const std::optional<MoveTimes>& move_times)
      : seq_(seq), metric_(m), D_(D), candidates_(candidates), move_times_(move_times) {
    const std::size_t k = candidates_.size();
    if (k == 0) {
      throw DomainError("candidate set is empty");
    }
    for (const auto& c : candidates_) {
      m.require(c);
    }
    seq.validate(m);
    if (move_times_ && move_times_->horizon() < seq.size()) {
      throw BoundsError("move_times horizon is shorter than the sequence");
    }
    start_ = index_of(candidates_, seq.start);
    uniform_ = m.kind() == MetricKind::kUniform;
    // Metrics are symmetric, so row p doubles as the column of moves into p
    // and the inner loop reads it contiguously.
    if (!uniform_ && k <= kDenseTableLimit) {
      dense_.resize(k * k);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          dense_[i * k + j] = D_ * m.distance(candidates_[i], candidates_[j]);
        }
      }
    } else if (!uniform_) {
      scratch_.resize(k);
    }
  }

  // Fills rows 1..t; returns C[t][.].
  std::vector<double> run(std::size_t t) {
    const std::size_t k = candidates_.size();
    std::vector<double> cost(k, kInf);
    cost[start_] = 0.0;
    parents_.assign(t * k, 0);
    std::vector<double> next(k);
    std::vector<double> serve(k);
    for (std::size_t step = 1; step <= t; ++step) {
      const Point& request = seq_.at(step);
      for (std::size_t p = 0; p < k; ++p) {
        serve[p] = metric_.distance(candidates_[p], request);
      }
      std::uint32_t* parent = &parents_[(step - 1) * k];
      if (move_times_ && !move_times_->allows(step)) {
        for (std::size_t p = 0; p < k; ++p) {
          next[p] = cost[p] + serve[p];
          parent[p] = static_cast<std::uint32_t>(p);
        }
      } else if (uniform_) {
        relax_uniform(cost, serve, next, parent);
      } else {
        relax_general(cost, serve, next, parent);
      }
      cost.swap(next);
    }
    return cost;
  }

  Schedule reconstruct(std::size_t t, std::size_t end) const {
    const std::size_t k = candidates_.size();
    Schedule s;
    s.positions.resize(t + 1, candidates_[start_]);
    std::size_t at = end;
    for (std::size_t step = t; step >= 1; --step) {
      s.positions[step] = candidates_[at];
      at = parents_[(step - 1) * k + at];
    }
    return s;
  }

  std::size_t start() const { return start_; }

 private:
  // D d(c, p) for every candidate c.
  const double* moves_into(std::size_t p) {
    const std::size_t k = candidates_.size();
    if (!dense_.empty()) {
      return &dense_[p * k];
    }
    for (std::size_t c = 0; c < k; ++c) {
      scratch_[c] = D_ * metric_.distance(candidates_[c], candidates_[p]);
    }
    return scratch_.data();
  }

  void relax_uniform(const std::vector<double>& cost, const std::vector<double>& serve,
                     std::vector<double>& next, std::uint32_t* parent) const {
    const std::size_t k = cost.size();
    double lowest = kInf;
    for (double c : cost) {
      lowest = std::min(lowest, c);
    }
    std::size_t lowest_at = 0;
    while (lowest_at < k && !(cost[lowest_at] <= lowest + kCostTolerance)) {
      ++lowest_at;
    }
    for (std::size_t p = 0; p < k; ++p) {
      const double moved = lowest + D_;
      if (cost[p] <= std::min(cost[p], moved) + kCostTolerance) {
        next[p] = cost[p] + serve[p];
        parent[p] = static_cast<std::uint32_t>(p);
      } else {
        next[p] = cost[lowest_at] + D_ + serve[p];
        parent[p] = static_cast<std::uint32_t>(lowest_at);
      }
    }
  }

  void relax_general(const std::vector<double>& cost, const std::vector<double>& serve,
                     std::vector<double>& next, std::uint32_t* parent) {
    const std::size_t k = cost.size();
    const double* c = cost.data();
    for (std::size_t p = 0; p < k; ++p) {
      const double* move = moves_into(p);
      double best = min_plus(c, move, k, c[p]);
      std::size_t chosen = p;
      double chosen_cost = c[p];
      if (!(c[p] <= best + kCostTolerance)) {
        for (std::size_t from = 0; from < k; ++from) {
          const double via = c[from] + move[from];
          if (via <= best + kCostTolerance) {
            chosen = from;
            chosen_cost = via;
            break;
          }
        }
      }
      next[p] = chosen_cost + serve[p];
      parent[p] = static_cast<std::uint32_t>(chosen);
    }
  }

  const RequestSequence& seq_;
  const Metric& metric_;
  double D_;
  const std::vector<Point>& candidates_;
  const std::optional<MoveTimes>& move_times_;
  std::size_t start_ = 0;
  bool uniform_ = false;
  std::vector<double> dense_;  // D d(i, j), row-major
  std::vector<double> scratch_;
  std::vector<std::uint32_t> parents_;
};

SolveResult cost_schedule(const Schedule& schedule, const RequestSequence& seq, const Metric& m,
                          double D) {
  SolveResult r;
  r.schedule = schedule;
  for (std::size_t t = 1; t <= seq.size(); ++t) {
    r.move_cost += D * m.distance(schedule.positions[t - 1], schedule.positions[t]);
    r.serve_cost += m.distance(schedule.positions[t], seq.at(t));
  }
  r.total_cost = r.move_cost + r.serve_cost;
  return r;
}

void require_factor(double D) {
  if (!(D > 0.0) || !std::isfinite(D)) {
    throw ParameterError("move-cost factor D must be positive and finite");
  }
}

}  // namespace

nlohmann::json to_json(const SolveResult& r) {
  nlohmann::json positions = nlohmann::json::array();
  for (const auto& p : r.schedule.positions) {
    positions.push_back(point_to_json(p));
  }
  return {{"cost", r.total_cost},
          {"move_cost", r.move_cost},
          {"serve_cost", r.serve_cost},
          {"positions", positions}};
}

MoveTimes MoveTimes::all(std::size_t n) {
  std::vector<bool> allowed(n + 1, true);
  allowed[0] = false;
  return MoveTimes(std::move(allowed));
}

MoveTimes MoveTimes::multiples_of(std::size_t period, std::size_t n) {
  if (period == 0) {
    throw ParameterError("move period must be positive");
  }
  std::vector<bool> allowed(n + 1, false);
  for (std::size_t t = period; t <= n; t += period) {
    allowed[t] = true;
  }
  return MoveTimes(std::move(allowed));
}

MoveTimes MoveTimes::from_indices(const std::vector<std::size_t>& indices, std::size_t n) {
  std::vector<bool> allowed(n + 1, false);
  for (std::size_t t : indices) {
    if (t < 1 || t > n) {
      throw BoundsError("move time " + std::to_string(t) + " outside 1.." + std::to_string(n));
    }
    allowed[t] = true;
  }
  return MoveTimes(std::move(allowed));
}

std::vector<Point> candidate_points(const RequestSequence& seq, const Metric& m,
                                    bool expand_all) {
  std::vector<Point> out{seq.start};
  std::set<Point> seen{seq.start};
  for (const auto& p : seq.items) {
    if (seen.insert(p).second) {
      out.push_back(p);
    }
  }
  if (expand_all && m.size()) {
    for (const auto& p : m.all_points()) {
      if (seen.insert(p).second) {
        out.push_back(p);
      }
    }
  }
  return out;
}

SolveResult optimal_schedule(const RequestSequence& seq, const Metric& m, double D,
                             const std::vector<Point>& candidates,
                             const std::optional<MoveTimes>& move_times) {
  require_factor(D);
  ScheduleDp dp(seq, m, D, candidates, move_times);
  const auto final_cost = dp.run(seq.size());
  std::size_t end = dp.start();
  if (!seq.empty()) {
    const double lowest = *std::min_element(final_cost.begin(), final_cost.end());
    end = 0;
    while (!(final_cost[end] <= lowest + kCostTolerance)) {
      ++end;
    }
  }
  return cost_schedule(dp.reconstruct(seq.size(), end), seq, m, D);
}

SolveResult optimal_schedule(const RequestSequence& seq, const Metric& m, double D) {
  return optimal_schedule(seq, m, D, candidate_points(seq, m));
}

double constrained_optimal(const RequestSequence& seq, const Metric& m, double D, std::size_t t,
                           const Point& end, const std::optional<std::vector<Point>>& candidates) {
  require_factor(D);
  if (t > seq.size()) {
    throw BoundsError("prefix length " + std::to_string(t) + " exceeds n=" +
                      std::to_string(seq.size()));
  }
  const auto points = candidates ? *candidates : candidate_points(seq, m);
  const std::size_t end_index = index_of(points, end);
  if (t == 0) {
    if (!(end == seq.start)) {
      throw DomainError("no request to move on: a prefix of length 0 must end at p_0");
    }
    return 0.0;
  }
  ScheduleDp dp(seq, m, D, points, std::nullopt);
  return dp.run(t)[end_index];
}

SolveResult brute_force_schedule(const RequestSequence& seq, const Metric& m, double D,
                                 const std::vector<Point>& candidates) {
  require_factor(D);
  const std::size_t n = seq.size();
  const std::size_t k = candidates.size();
  if (std::pow(static_cast<double>(k), static_cast<double>(n)) > kBruteForceLimit) {
    throw SizeError("brute force refused: k^n exceeds 1e7");
  }
  index_of(candidates, seq.start);
  seq.validate(m);

  Schedule best;
  double best_cost = kInf;
  std::vector<std::size_t> choice(n, 0);
  Schedule current;
  current.positions.assign(n + 1, seq.start);
  while (true) {
    double total = 0.0;
    for (std::size_t t = 1; t <= n; ++t) {
      current.positions[t] = candidates[choice[t - 1]];
      total += D * m.distance(current.positions[t - 1], current.positions[t]) +
               m.distance(current.positions[t], seq.at(t));
    }
    if (total < best_cost) {
      best_cost = total;
      best = current;
    }
    std::size_t digit = 0;
    while (digit < n && ++choice[digit] == k) {
      choice[digit++] = 0;
    }
    if (digit == n) {
      break;
    }
  }
  return cost_schedule(best, seq, m, D);
}

}  // namespace pagemig
