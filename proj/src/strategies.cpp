#include "pagemig/strategies.hpp"

#include <algorithm>

#include "pagemig/errors.hpp"

namespace pagemig {

Point Strategy::step(std::size_t t, const Point& request) {
  if (t != time_ + 1) {
    throw StateError(name() + ": expected step " + std::to_string(time_ + 1) + ", got " +
                     std::to_string(t));
  }
  position_ = decide(t, request);
  time_ = t;
  return position_;
}

ScheduleStrategy::ScheduleStrategy(Schedule schedule, std::string name)
    : Strategy(schedule.positions.at(0)), schedule_(std::move(schedule)), name_(std::move(name)) {}

Point ScheduleStrategy::decide(std::size_t t, const Point&) {
  if (t >= schedule_.positions.size()) {
    throw StateError(name_ + ": schedule has only " + std::to_string(schedule_.steps()) +
                     " steps");
  }
  return schedule_.positions[t];
}

StrategyPtr predict_strategy(const RequestSequence& predicted, const Metric& m, double D,
                             std::optional<std::size_t> move_period,
                             std::optional<std::vector<Point>> candidates) {
  const auto points = candidates ? std::move(*candidates) : candidate_points(predicted, m);
  std::optional<MoveTimes> times;
  if (move_period) {
    times = MoveTimes::multiples_of(*move_period, predicted.size());
  }
  auto solved = optimal_schedule(predicted, m, D, points, times);
  return std::make_unique<ScheduleStrategy>(std::move(solved.schedule),
                                            move_period ? "lazy_predict" : "predict");
}

LazyMultiples::LazyMultiples(StrategyPtr inner, std::size_t period)
    : Strategy(inner->position()), inner_(std::move(inner)), period_(period) {
  if (period_ == 0) {
    throw ParameterError("lazy period must be positive");
  }
}

Point LazyMultiples::decide(std::size_t t, const Point& request) {
  const Point inner_position = inner_->step(t, request);
  return t % period_ == 0 ? inner_position : position();
}

StrategyPtr lazy_multiples(StrategyPtr inner, std::size_t period) {
  return std::make_unique<LazyMultiples>(std::move(inner), period);
}

Delayed::Delayed(StrategyPtr inner, std::size_t delay)
    : Strategy(inner->position()), inner_(std::move(inner)), delay_(delay) {
  history_.push_back(inner_->position());
}

Point Delayed::decide(std::size_t t, const Point& request) {
  history_.push_back(inner_->step(t, request));
  return history_[t >= delay_ ? t - delay_ : 0];
}

StrategyPtr delayed(StrategyPtr inner, std::size_t delay) {
  return std::make_unique<Delayed>(std::move(inner), delay);
}

CoinFlip::CoinFlip(Point start, double D, std::uint64_t seed)
    : Strategy(std::move(start)), rng_(seed), flip_(1.0 / (2.0 * D)) {
  if (!(D > 1.0)) {
    throw ParameterError("coin-flip baseline needs D > 1");
  }
}

CoinFlip::CoinFlip(Point start, CoinSource coin) : Strategy(std::move(start)), coin_(std::move(coin)) {}

Point CoinFlip::decide(std::size_t, const Point& request) {
  Point next = pending_ ? *pending_ : position();
  pending_.reset();
  const bool heads = coin_ ? coin_() : flip_(rng_);
  if (heads) {
    pending_ = request;
  }
  return next;
}

StrategyPtr coinflip_online(const Point& start, double D, std::uint64_t seed) {
  return std::make_unique<CoinFlip>(start, D, seed);
}

double coinflip_expected_cost(const RequestSequence& seq, const Metric& m, double D) {
  if (!(D > 1.0)) {
    throw ParameterError("coin-flip baseline needs D > 1");
  }
  const auto points = candidate_points(seq, m);
  const double move_probability = 1.0 / (2.0 * D);
  std::vector<double> mass(points.size(), 0.0);
  mass[0] = 1.0;  // candidate_points puts p_0 first
  double expected = 0.0;
  for (std::size_t t = 1; t <= seq.size(); ++t) {
    const Point& request = seq.at(t);
    const auto target = static_cast<std::size_t>(
        std::find(points.begin(), points.end(), request) - points.begin());
    double moved = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (mass[i] == 0.0) {
        continue;
      }
      const double d = m.distance(points[i], request);
      expected += mass[i] * d;
      if (t < seq.size()) {
        expected += mass[i] * move_probability * D * d;
      }
      moved += mass[i] * move_probability;
    }
    for (double& w : mass) {
      w *= 1.0 - move_probability;
    }
    mass[target] += moved;
  }
  return expected;
}

std::size_t robust_delay(double q, double D) { return ceil_count(6.0 * q * D); }

Robust::Robust(const RequestSequence& predicted, const AssumptionParams& params,
               StrategyPtr online, const Metric& m)
    : Robust(predicted, optimal_schedule(predicted, m, params.D()).schedule, params,
             std::move(online)) {}

Robust::Robust(const RequestSequence& predicted, Schedule prediction_schedule,
               const AssumptionParams& params, StrategyPtr online)
    : Strategy(predicted.start),
      predicted_(predicted),
      params_(params),
      delay_(robust_delay(params.q(), params.D())),
      following_(delayed(std::make_unique<ScheduleStrategy>(std::move(prediction_schedule),
                                                            "predict"),
                         delay_)),
      online_(std::move(online)),
      detector_(params) {
  if (following_->position() != predicted.start) {
    throw DomainError("prediction schedule must start at p_0");
  }
  if (online_->position() != predicted.start) {
    throw DomainError("online baseline must start at p_0");
  }
}

std::optional<std::size_t> Robust::analysis_switch_point() const {
  if (!switch_time_) {
    return std::nullopt;
  }
  const std::size_t back = ceil_count(params_.q() * params_.D());
  return *switch_time_ + 1 > back + 1 ? *switch_time_ + 1 - back : 1;
}

Point Robust::decide(std::size_t t, const Point& request) {
  const Point shadow = online_->step(t, request);
  if (switch_time_) {
    return shadow;
  }
  const Point follow = following_->step(t, request);
  if (detector_.push(!(request == predicted_.at(t)))) {
    switch_time_ = t;
    return shadow;
  }
  return follow;
}

StrategyPtr robust_strategy(const RequestSequence& predicted, const AssumptionParams& params,
                            StrategyPtr online, const Metric& m) {
  return std::make_unique<Robust>(predicted, params, std::move(online), m);
}

bool is_randomized(const std::string& name) { return name == "coinflip" || name == "robust"; }

namespace {

double param_or(const StrategySpec& spec, const std::string& key, double fallback) {
  const auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

}  // namespace

StrategyPtr make_strategy(const StrategySpec& spec, const PredictionPair& pair, const Metric& m,
                          double D, std::uint64_t seed, const Schedule* predict_schedule) {
  const double q = param_or(spec, "q", 0.05);
  const double epsilon = param_or(spec, "epsilon", 1.0);
  const auto& predicted = pair.predicted();
  auto follow = [&]() -> StrategyPtr {
    if (predict_schedule != nullptr) {
      return std::make_unique<ScheduleStrategy>(*predict_schedule, "predict");
    }
    return predict_strategy(predicted, m, D);
  };
  if (spec.name == "predict") {
    return follow();
  }
  if (spec.name == "lazy_predict") {
    const std::size_t period = std::max<std::size_t>(1, round_count(epsilon * D));
    return predict_strategy(predicted, m, D, period);
  }
  if (spec.name == "delayed_predict") {
    return std::make_unique<Delayed>(follow(), robust_delay(q, D));
  }
  if (spec.name == "coinflip") {
    return coinflip_online(predicted.start, D, seed);
  }
  if (spec.name == "robust") {
    const AssumptionParams params(D, q, epsilon);
    auto online = coinflip_online(predicted.start, D, seed);
    if (predict_schedule != nullptr) {
      return std::make_unique<Robust>(predicted, *predict_schedule, params, std::move(online));
    }
    return robust_strategy(predicted, params, std::move(online), m);
  }
  if (spec.name == "opt") {
    auto solved = optimal_schedule(pair.actual(), m, D);
    return std::make_unique<ScheduleStrategy>(std::move(solved.schedule), "opt");
  }
  throw ConfigError("strategies: unknown strategy '" + spec.name + "'");
}

}  // namespace pagemig
