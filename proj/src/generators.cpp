#include "pagemig/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "pagemig/errors.hpp"

namespace pagemig {

RequestSequence line_process(std::size_t n) {
  RequestSequence seq{Planar{0.0, 0.0}, {}};
  seq.items.reserve(n);
  for (std::size_t t = 1; t <= n; ++t) {
    seq.items.emplace_back(Planar{static_cast<double>(t), 0.0});
  }
  return seq;
}

RequestSequence brownian_process(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> step(0.0, 1.0);
  RequestSequence seq{Planar{0.0, 0.0}, {}};
  seq.items.reserve(n);
  Planar at{0.0, 0.0};
  for (std::size_t t = 1; t <= n; ++t) {
    at.x += step(rng);
    at.y += step(rng);
    seq.items.emplace_back(at);
  }
  return seq;
}

RequestSequence gaussian_perturb(const RequestSequence& predicted, double sigma,
                                 std::uint64_t seed) {
  if (!(sigma >= 0.0)) {
    throw ParameterError("sigma must be nonnegative");
  }
  if (!std::holds_alternative<Planar>(predicted.start)) {
    throw DomainError("gaussian noise needs planar points");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  RequestSequence out{predicted.start, {}};
  out.items.reserve(predicted.size());
  for (const auto& p : predicted.items) {
    const auto* q = std::get_if<Planar>(&p);
    if (q == nullptr) {
      throw DomainError("gaussian noise needs planar points");
    }
    const double dx = unit(rng);
    const double dy = unit(rng);
    out.items.emplace_back(Planar{q->x + sigma * dx, q->y + sigma * dy});
  }
  return out;
}

RequestSequence phase_process(std::size_t n, const std::vector<Point>& sites, double mean_dwell,
                              std::uint64_t seed) {
  if (sites.size() < 2) {
    throw ParameterError("phase process needs at least two sites");
  }
  if (!(mean_dwell >= 1.0)) {
    throw ParameterError("mean dwell time must be at least 1");
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution jump(1.0 / mean_dwell);
  std::uniform_int_distribution<std::size_t> other(1, sites.size() - 1);
  RequestSequence seq{sites[0], {}};
  seq.items.reserve(n);
  std::size_t at = 0;
  for (std::size_t t = 1; t <= n; ++t) {
    if (jump(rng)) {
      at = (at + other(rng)) % sites.size();
    }
    seq.items.push_back(sites[at]);
  }
  return seq;
}

RequestSequence bounded_flip(const RequestSequence& predicted, double q, double epsilon, double D,
                             std::uint64_t seed, const FlipDistribution& replacement) {
  if (!(q > 0.0 && q < 1.0)) {
    throw ParameterError("flip rate q must lie in (0, 1)");
  }
  if (!(epsilon > 0.0) || !(D > 0.0)) {
    throw ParameterError("epsilon and D must be positive");
  }
  if (const auto* u = std::get_if<FlipUniform>(&replacement); u && u->points.size() < 2) {
    throw ParameterError("uniform replacement needs at least two points");
  }
  const std::size_t n = predicted.size();
  const std::size_t window = std::max<std::size_t>(1, round_count(epsilon * D));
  std::mt19937_64 rng(seed);
  RequestSequence out = predicted;
  std::vector<std::size_t> slots;
  for (std::size_t begin = 0; begin < n; begin += window) {
    const std::size_t length = std::min(window, n - begin);
    const std::size_t flips = floor_count(q * static_cast<double>(length));
    if (flips == 0) {
      continue;
    }
    slots.resize(length);
    std::iota(slots.begin(), slots.end(), begin);
    std::shuffle(slots.begin(), slots.end(), rng);
    for (std::size_t f = 0; f < flips; ++f) {
      Point& target = out.items[slots[f]];
      if (const auto* far = std::get_if<FlipFar>(&replacement)) {
        target = far->point;
        continue;
      }
      const auto& pool = std::get<FlipUniform>(replacement).points;
      const Point original = target;
      if (std::all_of(pool.begin(), pool.end(), [&](const Point& p) { return p == original; })) {
        throw ParameterError("replacement pool has no point other than " + to_string(original));
      }
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      do {
        target = pool[pick(rng)];
      } while (target == original);
    }
  }
  return out;
}

LowerBoundLengths lower_bound_lengths(double D, double q) {
  if (!(D > 1.0) || !(q > 0.0 && q < 1.0)) {
    throw ParameterError("lower-bound instance needs D > 1 and q in (0, 1)");
  }
  const std::size_t prefix = round_count((1.0 - q) * D);
  const std::size_t suffix = round_count(2.0 * q * D);
  if (prefix < 1 || suffix < 1) {
    throw ParameterError("(1-q)D and 2qD must round to at least 1");
  }
  return {prefix, suffix};
}

PredictionPair lower_bound_instance(double D, double q, Branch branch) {
  const auto lengths = lower_bound_lengths(D, q);
  const Point zero = Label{0};
  const Point one = Label{1};
  RequestSequence predicted{zero, {}};
  predicted.items.assign(lengths.prefix, one);
  predicted.items.insert(predicted.items.end(), lengths.suffix, zero);
  RequestSequence actual = predicted;
  if (branch == Branch::kB) {
    actual.items.assign(lengths.prefix + lengths.suffix, one);
  }
  return PredictionPair(std::move(actual), std::move(predicted));
}

PredictionPair suffix_adversary(std::size_t n, double q, const std::vector<Point>& adversarial,
                                const Point& start) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw ParameterError("q must lie in [0, 1]");
  }
  const std::size_t length = floor_count(q * static_cast<double>(n));
  if (adversarial.size() != length) {
    throw ShapeError("adversarial suffix must have floor(q n) = " + std::to_string(length) +
                     " points, got " + std::to_string(adversarial.size()));
  }
  RequestSequence predicted{start, std::vector<Point>(n, start)};
  RequestSequence actual = predicted;
  std::copy(adversarial.begin(), adversarial.end(), actual.items.end() - static_cast<long>(length));
  return PredictionPair(std::move(actual), std::move(predicted));
}

std::vector<Point> alternating(const Point& a, const Point& b, std::size_t count) {
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(i % 2 == 0 ? a : b);
  }
  return out;
}

}  // namespace pagemig
