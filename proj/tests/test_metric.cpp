#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "pagemig/errors.hpp"
#include "pagemig/metric.hpp"
#include "support.hpp"

using namespace pagemig;
using pagemig::testing::L;
using pagemig::testing::P;

TEST(MetricDistance, UniformIdentityAndUnitDistance) {
  const auto m = Metric::uniform();
  EXPECT_EQ(m.distance(L(3), L(3)), 0.0);
  EXPECT_EQ(m.distance(L(3), L(7)), 1.0);
}

TEST(MetricDistance, EuclideanPythagoreanTriple) {
  EXPECT_DOUBLE_EQ(Metric::euclidean2d().distance(P(0, 0), P(3, 4)), 5.0);
}

TEST(MetricDistance, ExplicitLooksUpMatrix) {
  const auto m = Metric::explicit_matrix({{0, 2, 3}, {2, 0, 1.5}, {3, 1.5, 0}});
  EXPECT_EQ(m.distance(L(0), L(2)), 3.0);
  EXPECT_EQ(m.distance(L(2), L(1)), 1.5);
  EXPECT_EQ(m.size(), 3u);
}

TEST(MetricDistance, ExplicitUnknownLabelIsDomainError) {
  const auto m = Metric::explicit_matrix({{0, 1}, {1, 0}});
  EXPECT_THROW(m.distance(L(0), L(2)), DomainError);
  EXPECT_THROW(m.distance(L(-1), L(0)), DomainError);
  EXPECT_THROW(m.distance(P(0, 0), L(0)), DomainError);
}

TEST(MetricDistance, KindMismatchIsDomainError) {
  EXPECT_THROW(Metric::euclidean2d().distance(L(0), L(1)), DomainError);
  EXPECT_THROW(Metric::uniform().distance(P(0, 0), P(1, 1)), DomainError);
  EXPECT_THROW(Metric::uniform(2).require(L(2)), DomainError);
  EXPECT_NO_THROW(Metric::uniform(2).require(L(1)));
}

TEST(ValidateExplicit, AcceptsTwoPointMetric) {
  EXPECT_FALSE(validate_explicit({{0, 1}, {1, 0}}).has_value());
}

TEST(ValidateExplicit, ReportsAsymmetricPair) {
  const auto v = validate_explicit({{0, 1}, {2, 0}});
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->axiom, Axiom::kSymmetry);
  EXPECT_EQ(v->i, 0u);
  EXPECT_EQ(v->j, 1u);
}

TEST(ValidateExplicit, ReportsTriangleWitness) {
  const auto v = validate_explicit({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->axiom, Axiom::kTriangle);
  EXPECT_EQ(v->i, 0u);
  EXPECT_EQ(v->j, 1u);
  EXPECT_EQ(v->k, 2u);
}

TEST(ValidateExplicit, ReportsIdentityAndPositivity) {
  auto v = validate_explicit({{0.5, 1}, {1, 0}});
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->axiom, Axiom::kIdentity);
  v = validate_explicit({{0, 0}, {0, 0}});
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->axiom, Axiom::kPositivity);
}

TEST(ValidateExplicit, NonSquareIsShapeError) {
  EXPECT_THROW(validate_explicit({{0, 1, 2}, {1, 0}}), ShapeError);
  EXPECT_THROW(Metric::explicit_matrix({{0, 1}, {2, 0}}), DomainError);
}

TEST(MetricProperties, RepairedRandomMatricesAreMetrics) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> size(1, 9);
  std::uniform_real_distribution<double> entry(0.1, 20.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = size(rng);
    DistanceMatrix raw(k, std::vector<double>(k, 0.0));
    for (auto& row : raw) {
      for (auto& x : row) {
        x = entry(rng);
      }
    }
    const auto repaired = repair_to_metric(raw);
    const auto violation = validate_explicit(repaired);
    ASSERT_FALSE(violation.has_value()) << violation->describe();
  }
}

TEST(MetricProperties, EuclideanTriangleInequalityOnRandomTriples) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> coord(-1e3, 1e3);
  const auto m = Metric::euclidean2d();
  for (int trial = 0; trial < 1000; ++trial) {
    const Point a = P(coord(rng), coord(rng));
    const Point b = P(coord(rng), coord(rng));
    const Point c = P(coord(rng), coord(rng));
    EXPECT_LE(m.distance(a, c), m.distance(a, b) + m.distance(b, c) + 1e-9);
    EXPECT_EQ(m.distance(a, b), m.distance(b, a));
    EXPECT_EQ(m.distance(a, a), 0.0);
  }
}

TEST(MetricProperties, ExplicitAxiomsByEnumeration) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = Metric::explicit_matrix(random_explicit_matrix(6, rng));
    const auto points = m.all_points();
    for (const auto& a : points) {
      for (const auto& b : points) {
        EXPECT_EQ(m.distance(a, b), m.distance(b, a));
        EXPECT_EQ(m.distance(a, b) == 0.0, a == b);
        for (const auto& c : points) {
          EXPECT_LE(m.distance(a, c), m.distance(a, b) + m.distance(b, c) + 1e-9);
        }
      }
    }
  }
}

TEST(MetricJson, RoundTripsEveryKind) {
  for (const auto& m : {Metric::uniform(), Metric::uniform(4), Metric::euclidean2d(),
                        Metric::explicit_matrix({{0, 2}, {2, 0}})}) {
    const auto back = metric_from_json(metric_to_json(m));
    EXPECT_EQ(back.kind(), m.kind());
    EXPECT_EQ(back.size(), m.size());
    EXPECT_EQ(back.matrix(), m.matrix());
  }
  EXPECT_EQ(point_from_json(point_to_json(P(1.5, -2))), P(1.5, -2));
  EXPECT_EQ(point_from_json(point_to_json(L(9))), L(9));
  EXPECT_THROW(point_from_json(nlohmann::json("x")), DomainError);
}

TEST(MetricJson, LoadsExplicitMetricFile) {
  const std::string path = ::testing::TempDir() + "metric_file.json";
  {
    std::ofstream out(path);
    out << R"({"points": 3, "matrix": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]})";
  }
  const auto m = load_explicit_metric(path);
  EXPECT_EQ(m.kind(), MetricKind::kExplicit);
  EXPECT_EQ(m.distance(L(0), L(2)), 2.0);
  std::remove(path.c_str());
}
