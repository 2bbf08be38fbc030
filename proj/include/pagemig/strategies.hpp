#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pagemig/metric.hpp"
#include "pagemig/offline_solver.hpp"
#include "pagemig/sequences.hpp"

namespace pagemig {

/// An online page-migration procedure.
///
/// The driver calls step(t, s_t) once for t = 1, 2, ... in order. The
/// strategy sees the request, commits the position a_t, and the driver then
/// charges D d(a_{t-1}, a_t) + d(a_t, s_t). A strategy is single-use.
class Strategy {
 public:
  explicit Strategy(Point start) : position_(std::move(start)) {}
  virtual ~Strategy() = default;

  Strategy(const Strategy&) = delete;
  Strategy& operator=(const Strategy&) = delete;

  // Throws StateError when t is not the next expected index.
  Point step(std::size_t t, const Point& request);

  virtual std::string name() const = 0;
  virtual std::optional<std::size_t> switch_time() const { return std::nullopt; }

  bool fresh() const { return time_ == 0; }
  std::size_t time() const { return time_; }
  const Point& position() const { return position_; }

 protected:
  virtual Point decide(std::size_t t, const Point& request) = 0;

 private:
  Point position_;
  std::size_t time_ = 0;
};

using StrategyPtr = std::unique_ptr<Strategy>;

/// Replays a precomputed schedule and ignores the requests.
class ScheduleStrategy : public Strategy {
 public:
  ScheduleStrategy(Schedule schedule, std::string name = "schedule");

  std::string name() const override { return name_; }
  const Schedule& schedule() const { return schedule_; }

 protected:
  Point decide(std::size_t t, const Point& request) override;

 private:
  Schedule schedule_;
  std::string name_;
};

/// Follows the offline optimum computed on the prediction.
///
/// With a move period the optimum is restricted to steps that are multiples
/// of it. Candidates default to candidate_points(predicted, m).
StrategyPtr predict_strategy(const RequestSequence& predicted, const Metric& m, double D,
                             std::optional<std::size_t> move_period = std::nullopt,
                             std::optional<std::vector<Point>> candidates = std::nullopt);

/// Moves to the inner strategy's position at multiples of `period` only.
///
/// The inner strategy is still fed every request.
class LazyMultiples : public Strategy {
 public:
  LazyMultiples(StrategyPtr inner, std::size_t period);

  std::string name() const override { return "lazy(" + inner_->name() + ")"; }

 protected:
  Point decide(std::size_t t, const Point& request) override;

 private:
  StrategyPtr inner_;
  std::size_t period_;
};

StrategyPtr lazy_multiples(StrategyPtr inner, std::size_t period);

/// Occupies the inner strategy's position from `delay` steps earlier.
class Delayed : public Strategy {
 public:
  Delayed(StrategyPtr inner, std::size_t delay);

  std::string name() const override { return "delayed(" + inner_->name() + ")"; }

 protected:
  Point decide(std::size_t t, const Point& request) override;

 private:
  StrategyPtr inner_;
  std::size_t delay_;
  std::vector<Point> history_;  // inner positions a_0..a_t
};

StrategyPtr delayed(StrategyPtr inner, std::size_t delay);

// Source of coin flips; returns true when the page should follow the request.
using CoinSource = std::function<bool()>;

/// Randomized baseline: after serving a request remotely, the page moves to
/// that request with probability 1/(2D).
///
/// The move decided after request t is applied as the position for step
/// t+1, so a move after the final request is never charged.
class CoinFlip : public Strategy {
 public:
  CoinFlip(Point start, double D, std::uint64_t seed);
  // Rigged coin for tests.
  CoinFlip(Point start, CoinSource coin);

  std::string name() const override { return "coinflip"; }

 protected:
  Point decide(std::size_t t, const Point& request) override;

 private:
  std::mt19937_64 rng_;
  std::bernoulli_distribution flip_;
  CoinSource coin_;
  std::optional<Point> pending_;
};

StrategyPtr coinflip_online(const Point& start, double D, std::uint64_t seed);

/// Exact expected cost of CoinFlip on a fixed sequence.
///
/// Propagates the position distribution over {p_0} and the requests.
double coinflip_expected_cost(const RequestSequence& seq, const Metric& m, double D);

/// Follows the delayed prediction schedule until the error detector fires,
/// then teleports to a shadow online baseline and follows it for good.
///
/// The shadow baseline and the detector see every request from t = 1.
class Robust : public Strategy {
 public:
  Robust(const RequestSequence& predicted, const AssumptionParams& params, StrategyPtr online,
         const Metric& m);
  // Reuses an already solved prediction schedule.
  Robust(const RequestSequence& predicted, Schedule prediction_schedule,
         const AssumptionParams& params, StrategyPtr online);

  std::string name() const override { return "robust"; }
  // Detection step t at which the strategy switched to the baseline.
  std::optional<std::size_t> switch_time() const override { return switch_time_; }
  // max(1, t - ceil(qD) + 1) for a switch at t.
  std::optional<std::size_t> analysis_switch_point() const;
  std::size_t delay() const { return delay_; }

 protected:
  Point decide(std::size_t t, const Point& request) override;

 private:
  RequestSequence predicted_;
  AssumptionParams params_;
  std::size_t delay_;
  StrategyPtr following_;
  StrategyPtr online_;
  ViolationDetector detector_;
  std::optional<std::size_t> switch_time_;
};

StrategyPtr robust_strategy(const RequestSequence& predicted, const AssumptionParams& params,
                            StrategyPtr online, const Metric& m);

// Delay ceil(6 q D) used by the robust strategy.
std::size_t robust_delay(double q, double D);

/// Named strategy construction used by the harness and bindings.
///
/// Names: predict, lazy_predict, delayed_predict, coinflip, robust, opt.
/// `opt` replays the offline optimum of the actual sequence and is only a
/// reference point. Parameters: q and epsilon (defaults 0.05 and 1) select
/// the lazy period round(eps D), the delay ceil(6 q D) and detector window.
struct StrategySpec {
  std::string name;
  std::map<std::string, double> params;
};

// `predict_schedule`, when given, must be optimal_schedule(predicted, m, D)
// and saves re-solving it for every randomized run.
StrategyPtr make_strategy(const StrategySpec& spec, const PredictionPair& pair, const Metric& m,
                          double D, std::uint64_t seed,
                          const Schedule* predict_schedule = nullptr);

bool is_randomized(const std::string& name);

}  // namespace pagemig
