#pragma once

// Instance builders and naive reference computations shared by the tests.

#include <cstddef>
#include <random>
#include <vector>

#include "pagemig/metric.hpp"
#include "pagemig/sequences.hpp"

namespace pagemig::testing {

inline Point L(std::int64_t id) { return Label{id}; }
inline Point P(double x, double y) { return Planar{x, y}; }

inline RequestSequence labels(std::int64_t start, std::initializer_list<std::int64_t> ids) {
  RequestSequence seq{Label{start}, {}};
  for (auto id : ids) {
    seq.items.emplace_back(Label{id});
  }
  return seq;
}

enum class Family { kUniform, kExplicit, kSnapped };

struct SmallInstance {
  Metric metric;
  RequestSequence seq;
  std::vector<Point> sites;  // every point of the finite site set
};

// Up to k sites and n requests drawn uniformly from them; p_0 is site 0.
inline SmallInstance small_instance(Family family, std::size_t n, std::size_t k,
                                    std::mt19937_64& rng) {
  std::vector<Point> sites;
  Metric metric = Metric::euclidean2d();
  if (family == Family::kUniform) {
    metric = Metric::uniform(k);
  } else if (family == Family::kExplicit) {
    metric = Metric::explicit_matrix(random_explicit_matrix(k, rng));
  }
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (family == Family::kSnapped) {
      sites.push_back(Planar{coord(rng), coord(rng)});
    } else {
      sites.push_back(Label{static_cast<std::int64_t>(i)});
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  RequestSequence seq{sites[0], {}};
  for (std::size_t t = 0; t < n; ++t) {
    seq.items.push_back(sites[pick(rng)]);
  }
  return {metric, seq, sites};
}

// Mismatch count over [i, j] by a direct loop.
inline std::size_t naive_mismatches(const PredictionPair& pair, std::size_t i, std::size_t j) {
  std::size_t count = 0;
  for (std::size_t t = i; t <= j; ++t) {
    count += pair.actual().at(t) == pair.predicted().at(t) ? 0 : 1;
  }
  return count;
}

// First t whose window [max(1, t-W+1), t] holds more than `threshold`
// mismatches, found by recounting every window from scratch.
inline std::optional<std::size_t> naive_first_violation(const PredictionPair& pair,
                                                        std::size_t window,
                                                        std::size_t threshold) {
  for (std::size_t t = 1; t <= pair.size(); ++t) {
    const std::size_t from = t >= window ? t - window + 1 : 1;
    if (naive_mismatches(pair, from, t) > threshold) {
      return t;
    }
  }
  return std::nullopt;
}

inline double naive_max_density(const PredictionPair& pair, std::size_t length) {
  double best = 0.0;
  for (std::size_t i = 1; i + length - 1 <= pair.size(); ++i) {
    best = std::max(best, static_cast<double>(naive_mismatches(pair, i, i + length - 1)) /
                              static_cast<double>(length));
  }
  return best;
}

// Cost of a position sequence a_0..a_n against requests, move then serve.
inline double naive_cost(const std::vector<Point>& positions, const RequestSequence& seq,
                         const Metric& m, double D) {
  double cost = 0.0;
  for (std::size_t t = 1; t < positions.size(); ++t) {
    cost += D * m.distance(positions[t - 1], positions[t]) + m.distance(positions[t], seq.at(t));
  }
  return cost;
}

}  // namespace pagemig::testing
