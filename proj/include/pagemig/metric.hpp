#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace pagemig {

// Absolute tolerance for every cost comparison in the library.
inline constexpr double kCostTolerance = 1e-9;

// Opaque point identifier used by the uniform and explicit metrics.
struct Label {
  std::int64_t id = 0;
  auto operator<=>(const Label&) const = default;
};

// A point in the Euclidean plane.
struct Planar {
  double x = 0.0;
  double y = 0.0;
  auto operator<=>(const Planar&) const = default;
};

using Point = std::variant<Label, Planar>;

std::string to_string(const Point& p);

enum class MetricKind { kUniform, kEuclidean2d, kExplicit };

std::string to_string(MetricKind kind);

using DistanceMatrix = std::vector<std::vector<double>>;

/// Distance oracle over one of the three supported point families.
///
/// Immutable after construction, so a single instance can be shared by
/// concurrent simulation workers.
class Metric {
 public:
  // Uniform metric over labels. With a size, only labels 0..size-1 are valid
  // and candidate expansion can enumerate them.
  static Metric uniform(std::optional<std::size_t> size = std::nullopt);
  static Metric euclidean2d();
  // Validates the matrix; throws DomainError naming the violated axiom.
  static Metric explicit_matrix(DistanceMatrix matrix);

  MetricKind kind() const { return kind_; }
  // Number of points for finite metrics.
  std::optional<std::size_t> size() const;
  const DistanceMatrix& matrix() const { return matrix_; }

  double distance(const Point& p, const Point& q) const;
  bool contains(const Point& p) const;
  // Throws DomainError when p is not a point of this metric.
  void require(const Point& p) const;
  // Every point of a finite metric, in label order.
  std::vector<Point> all_points() const;

 private:
  Metric(MetricKind kind, std::optional<std::size_t> size, DistanceMatrix matrix)
      : kind_(kind), size_(size), matrix_(std::move(matrix)) {}

  MetricKind kind_;
  std::optional<std::size_t> size_;
  DistanceMatrix matrix_;
};

enum class Axiom { kIdentity, kPositivity, kSymmetry, kTriangle };

std::string to_string(Axiom axiom);

struct MetricViolation {
  Axiom axiom;
  // Witness indices; for identity only i is meaningful, for positivity and
  // symmetry (i, j), for the triangle inequality d(i,k) > d(i,j) + d(j,k).
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;

  std::string describe() const;
};

/// Checks the four metric axioms on a square matrix.
///
/// Returns the first violation in the order identity, positivity, symmetry,
/// triangle, scanning indices lexicographically. Throws ShapeError on a
/// non-square matrix.
std::optional<MetricViolation> validate_explicit(const DistanceMatrix& matrix,
                                                 double tolerance = kCostTolerance);

// Symmetrizes by averaging, zeroes the diagonal and replaces every entry by
// the shortest-path distance. Off-diagonal inputs must be positive.
DistanceMatrix repair_to_metric(DistanceMatrix matrix);

// Random explicit metric with entries drawn from [lo, hi] before repair.
DistanceMatrix random_explicit_matrix(std::size_t k, std::mt19937_64& rng,
                                      double lo = 0.5, double hi = 10.0);

// JSON for a single point: labels as integers, planar points as [x, y].
nlohmann::json point_to_json(const Point& p);
Point point_from_json(const nlohmann::json& j);

// Metric descriptor used in sequence headers:
// {"kind": "uniform"|"euclidean2d"|"explicit", ...}.
nlohmann::json metric_to_json(const Metric& m);
Metric metric_from_json(const nlohmann::json& j);

// Explicit metric file: {"points": k, "matrix": [[...]]}.
Metric load_explicit_metric(const std::string& path);

}  // namespace pagemig
