#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "pagemig/metric.hpp"
#include "pagemig/sequences.hpp"

namespace pagemig {

// s-hat_t = (t, 0), p_0 = (0, 0).
RequestSequence line_process(std::size_t n);

// Planar random walk with N(0, 1) steps per coordinate from p_0 = (0, 0).
RequestSequence brownian_process(std::size_t n, std::uint64_t seed);

/// Adds i.i.d. N(0, sigma^2) noise to each coordinate of every request.
///
/// The same seed yields the same standard-normal draws for every sigma.
/// Throws DomainError on non-planar points, ParameterError on sigma < 0.
RequestSequence gaussian_perturb(const RequestSequence& predicted, double sigma,
                                 std::uint64_t seed);

/// Piecewise-constant process over a fixed site list: each step keeps the
/// current site, or with probability 1/mean_dwell jumps to another one.
/// Starts at sites[0].
RequestSequence phase_process(std::size_t n, const std::vector<Point>& sites, double mean_dwell,
                              std::uint64_t seed);

// Replacement distributions for bounded_flip.
struct FlipUniform {
  std::vector<Point> points;  // replacement drawn uniformly among points != s-hat_t
};
struct FlipFar {
  Point point;
};
using FlipDistribution = std::variant<FlipUniform, FlipFar>;

/// Replaces floor(q W) random indices in every aligned block of length
/// W = max(1, round(eps D)), so every window of length W holds at most
/// 2 floor(q W) mismatches. A trailing partial block of length L gets
/// floor(q L) flips.
RequestSequence bounded_flip(const RequestSequence& predicted, double q, double epsilon, double D,
                             std::uint64_t seed, const FlipDistribution& replacement);

enum class Branch { kA, kB };

/// Two-point instance on which every online algorithm pays 1 + Omega(q).
///
/// Uniform metric {0, 1}, p_0 = 0, s-hat = 1^L 0^M with L = round((1-q)D)
/// and M = round(2qD). Branch A: s = s-hat. Branch B: s = 1^(L+M).
/// Throws ParameterError when L or M rounds below 1.
PredictionPair lower_bound_instance(double D, double q, Branch branch);

struct LowerBoundLengths {
  std::size_t prefix = 0;  // L
  std::size_t suffix = 0;  // M
};

LowerBoundLengths lower_bound_lengths(double D, double q);

/// s-hat = p_0 repeated n times; s replaces the last floor(q n) entries with
/// `adversarial`. Throws ShapeError when the length differs.
PredictionPair suffix_adversary(std::size_t n, double q, const std::vector<Point>& adversarial,
                                const Point& start);

// `count` points alternating between a and b, starting with a.
std::vector<Point> alternating(const Point& a, const Point& b, std::size_t count);

}  // namespace pagemig
