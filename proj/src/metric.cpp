#include "pagemig/metric.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pagemig/errors.hpp"

namespace pagemig {

std::string to_string(const Point& p) {
  if (const auto* l = std::get_if<Label>(&p)) {
    return std::to_string(l->id);
  }
  const auto& q = std::get<Planar>(p);
  std::ostringstream os;
  os.precision(17);
  os << '(' << q.x << ',' << q.y << ')';
  return os.str();
}

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::kUniform:
      return "uniform";
    case MetricKind::kEuclidean2d:
      return "euclidean2d";
    case MetricKind::kExplicit:
      return "explicit";
  }
  return "unknown";
}

Metric Metric::uniform(std::optional<std::size_t> size) {
  if (size && *size == 0) {
    throw DomainError("uniform metric needs at least one point");
  }
  return Metric(MetricKind::kUniform, size, {});
}

Metric Metric::euclidean2d() { return Metric(MetricKind::kEuclidean2d, std::nullopt, {}); }

Metric Metric::explicit_matrix(DistanceMatrix matrix) {
  if (matrix.empty()) {
    throw ShapeError("explicit metric needs at least one point");
  }
  if (auto v = validate_explicit(matrix)) {
    throw DomainError("not a metric: " + v->describe());
  }
  const std::size_t k = matrix.size();
  return Metric(MetricKind::kExplicit, k, std::move(matrix));
}

std::optional<std::size_t> Metric::size() const { return size_; }

bool Metric::contains(const Point& p) const {
  if (kind_ == MetricKind::kEuclidean2d) {
    const auto* q = std::get_if<Planar>(&p);
    return q != nullptr && std::isfinite(q->x) && std::isfinite(q->y);
  }
  const auto* l = std::get_if<Label>(&p);
  if (l == nullptr || l->id < 0) {
    return false;
  }
  return !size_ || static_cast<std::size_t>(l->id) < *size_;
}

void Metric::require(const Point& p) const {
  if (!contains(p)) {
    throw DomainError("point " + to_string(p) + " is not valid for the " + to_string(kind_) +
                      " metric");
  }
}

double Metric::distance(const Point& p, const Point& q) const {
  require(p);
  require(q);
  switch (kind_) {
    case MetricKind::kUniform:
      return p == q ? 0.0 : 1.0;
    case MetricKind::kEuclidean2d: {
      const auto& a = std::get<Planar>(p);
      const auto& b = std::get<Planar>(q);
      return std::hypot(a.x - b.x, a.y - b.y);
    }
    case MetricKind::kExplicit:
      return matrix_[static_cast<std::size_t>(std::get<Label>(p).id)]
                    [static_cast<std::size_t>(std::get<Label>(q).id)];
  }
  return 0.0;
}

std::vector<Point> Metric::all_points() const {
  if (!size_) {
    throw DomainError("the " + to_string(kind_) + " metric has no finite point set");
  }
  std::vector<Point> out;
  out.reserve(*size_);
  for (std::size_t i = 0; i < *size_; ++i) {
    out.emplace_back(Label{static_cast<std::int64_t>(i)});
  }
  return out;
}

std::string to_string(Axiom axiom) {
  switch (axiom) {
    case Axiom::kIdentity:
      return "identity";
    case Axiom::kPositivity:
      return "positivity";
    case Axiom::kSymmetry:
      return "symmetry";
    case Axiom::kTriangle:
      return "triangle";
  }
  return "unknown";
}

std::string MetricViolation::describe() const {
  std::ostringstream os;
  os << to_string(axiom) << " (";
  switch (axiom) {
    case Axiom::kIdentity:
      os << i;
      break;
    case Axiom::kPositivity:
    case Axiom::kSymmetry:
      os << i << ',' << j;
      break;
    case Axiom::kTriangle:
      os << i << ',' << j << ',' << k;
      break;
  }
  os << ')';
  return os.str();
}

std::optional<MetricViolation> validate_explicit(const DistanceMatrix& matrix, double tolerance) {
  const std::size_t k = matrix.size();
  for (const auto& row : matrix) {
    if (row.size() != k) {
      throw ShapeError("distance matrix is not square");
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (matrix[i][i] != 0.0) {
      return MetricViolation{Axiom::kIdentity, i, i, i};
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j && !(matrix[i][j] > 0.0 && std::isfinite(matrix[i][j]))) {
        return MetricViolation{Axiom::kPositivity, i, j, 0};
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (std::abs(matrix[i][j] - matrix[j][i]) > tolerance) {
        return MetricViolation{Axiom::kSymmetry, i, j, 0};
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t l = 0; l < k; ++l) {
        if (matrix[i][l] > matrix[i][j] + matrix[j][l] + tolerance) {
          return MetricViolation{Axiom::kTriangle, i, j, l};
        }
      }
    }
  }
  return std::nullopt;
}

DistanceMatrix repair_to_metric(DistanceMatrix m) {
  const std::size_t k = m.size();
  for (const auto& row : m) {
    if (row.size() != k) {
      throw ShapeError("distance matrix is not square");
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    m[i][i] = 0.0;
    for (std::size_t j = i + 1; j < k; ++j) {
      if (!(m[i][j] > 0.0) || !(m[j][i] > 0.0)) {
        throw DomainError("repair needs positive off-diagonal entries");
      }
      const double sym = 0.5 * (m[i][j] + m[j][i]);
      m[i][j] = sym;
      m[j][i] = sym;
    }
  }
  // Floyd-Warshall closes every triangle.
  for (std::size_t via = 0; via < k; ++via) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        const double through = m[i][via] + m[via][j];
        if (through < m[i][j]) {
          m[i][j] = through;
        }
      }
    }
  }
  return m;
}

DistanceMatrix random_explicit_matrix(std::size_t k, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> entry(lo, hi);
  DistanceMatrix m(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j) {
        m[i][j] = entry(rng);
      }
    }
  }
  return repair_to_metric(std::move(m));
}

nlohmann::json point_to_json(const Point& p) {
  if (const auto* l = std::get_if<Label>(&p)) {
    return l->id;
  }
  const auto& q = std::get<Planar>(p);
  return nlohmann::json::array({q.x, q.y});
}

Point point_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) {
    return Label{j.get<std::int64_t>()};
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Planar{j[0].get<double>(), j[1].get<double>()};
  }
  throw DomainError("cannot read a point from " + j.dump());
}

nlohmann::json metric_to_json(const Metric& m) {
  nlohmann::json j;
  j["kind"] = to_string(m.kind());
  switch (m.kind()) {
    case MetricKind::kUniform:
      if (m.size()) {
        j["points"] = *m.size();
      }
      break;
    case MetricKind::kEuclidean2d:
      break;
    case MetricKind::kExplicit:
      j["points"] = *m.size();
      j["matrix"] = m.matrix();
      break;
  }
  return j;
}

Metric metric_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw DomainError("metric descriptor must be an object");
  }
  // A bare {"points", "matrix"} object is the explicit metric file format.
  const std::string kind = j.value("kind", j.contains("matrix") ? "explicit" : "");
  if (kind == "uniform") {
    if (j.contains("points")) {
      return Metric::uniform(j.at("points").get<std::size_t>());
    }
    return Metric::uniform();
  }
  if (kind == "euclidean2d") {
    return Metric::euclidean2d();
  }
  if (kind == "explicit") {
    auto matrix = j.at("matrix").get<DistanceMatrix>();
    if (j.contains("points") && j.at("points").get<std::size_t>() != matrix.size()) {
      throw ShapeError("\"points\" does not match the matrix size");
    }
    return Metric::explicit_matrix(std::move(matrix));
  }
  throw DomainError("unknown metric kind '" + kind + "'");
}

Metric load_explicit_metric(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DomainError("cannot open metric file " + path);
  }
  const auto j = nlohmann::json::parse(in);
  if (!j.contains("matrix")) {
    throw ShapeError(path + ": missing \"matrix\"");
  }
  return metric_from_json(j);
}

}  // namespace pagemig
