#include <gtest/gtest.h>

#include <random>

#include "pagemig/errors.hpp"
#include "pagemig/generators.hpp"
#include "pagemig/offline_solver.hpp"
#include "support.hpp"

using namespace pagemig;
using namespace pagemig::testing;

TEST(LineProcess, Examples) {
  EXPECT_TRUE(line_process(0).empty());
  const auto seq = line_process(3);
  EXPECT_EQ(seq.start, P(0, 0));
  EXPECT_EQ(seq.items, (std::vector<Point>{P(1, 0), P(2, 0), P(3, 0)}));
  const auto m = Metric::euclidean2d();
  const auto longer = line_process(50);
  for (std::size_t t = 2; t <= 50; ++t) {
    EXPECT_DOUBLE_EQ(m.distance(longer.at(t - 1), longer.at(t)), 1.0);
  }
}

TEST(BrownianProcess, SeededAndReproducible) {
  EXPECT_EQ(brownian_process(100, 4).items, brownian_process(100, 4).items);
  EXPECT_NE(brownian_process(100, 4).items, brownian_process(100, 5).items);
  EXPECT_TRUE(brownian_process(0, 4).empty());
}

TEST(BrownianProcess, MeanSquaredDisplacementGrowsLikeTwoT) {
  const std::size_t n = 10000;
  std::vector<double> msd(n + 1, 0.0);
  const int seeds = 100;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto seq = brownian_process(n, static_cast<std::uint64_t>(seed));
    for (std::size_t t : {100u, 1000u, 5000u, 10000u}) {
      const auto& p = std::get<Planar>(seq.at(t));
      msd[t] += (p.x * p.x + p.y * p.y) / seeds;
    }
  }
  for (std::size_t t : {100u, 1000u, 5000u, 10000u}) {
    // The sample mean of 100 chi-square(2) draws has relative sd 0.1; allow
    // three of those so the check does not depend on the seed set.
    EXPECT_NEAR(msd[t] / (2.0 * static_cast<double>(t)), 1.0, 0.3) << "t=" << t;
  }
}

TEST(BrownianProcess, StepVarianceIsOnePerCoordinate) {
  const auto seq = brownian_process(10000, 7);
  double sum = 0.0;
  Planar previous{0, 0};
  for (const auto& point : seq.items) {
    const auto& p = std::get<Planar>(point);
    sum += (p.x - previous.x) * (p.x - previous.x) + (p.y - previous.y) * (p.y - previous.y);
    previous = p;
  }
  EXPECT_NEAR(sum / 10000.0, 2.0, 0.2);
}

TEST(GaussianPerturb, ZeroSigmaIsIdentity) {
  const auto predicted = brownian_process(200, 1);
  EXPECT_EQ(gaussian_perturb(predicted, 0.0, 2).items, predicted.items);
}

TEST(GaussianPerturb, MeanSquaredOffsetIsTwoSigmaSquared) {
  const auto predicted = line_process(10000);
  for (double sigma : {1.0, 2.5}) {
    const auto actual = gaussian_perturb(predicted, sigma, 3);
    double sum = 0.0;
    for (std::size_t t = 1; t <= 10000; ++t) {
      const auto& a = std::get<Planar>(actual.at(t));
      const auto& p = std::get<Planar>(predicted.at(t));
      sum += (a.x - p.x) * (a.x - p.x) + (a.y - p.y) * (a.y - p.y);
    }
    EXPECT_NEAR(sum / 10000.0 / (2 * sigma * sigma), 1.0, 0.1);
  }
}

TEST(GaussianPerturb, ReproducibleAndSharedAcrossSigma) {
  const auto predicted = brownian_process(100, 1);
  EXPECT_EQ(gaussian_perturb(predicted, 1.0, 9).items, gaussian_perturb(predicted, 1.0, 9).items);
  const auto one = gaussian_perturb(predicted, 1.0, 9);
  const auto two = gaussian_perturb(predicted, 2.0, 9);
  for (std::size_t t = 1; t <= 100; ++t) {
    const auto& p = std::get<Planar>(predicted.at(t));
    EXPECT_NEAR(std::get<Planar>(two.at(t)).x - p.x, 2 * (std::get<Planar>(one.at(t)).x - p.x),
                1e-9);
  }
}

TEST(GaussianPerturb, RejectsLabelsAndNegativeSigma) {
  EXPECT_THROW(gaussian_perturb(labels(0, {1}), 1.0, 1), DomainError);
  EXPECT_THROW(gaussian_perturb(line_process(3), -1.0, 1), ParameterError);
}

TEST(PhaseProcess, StaysOnSitesAndIsSeeded) {
  const std::vector<Point> sites{L(0), L(1), L(2)};
  const auto seq = phase_process(500, sites, 20, 5);
  EXPECT_EQ(seq.start, L(0));
  EXPECT_EQ(seq.items, phase_process(500, sites, 20, 5).items);
  std::size_t jumps = 0;
  for (std::size_t t = 1; t <= 500; ++t) {
    EXPECT_NE(std::find(sites.begin(), sites.end(), seq.at(t)), sites.end());
    if (t > 1 && !(seq.at(t) == seq.at(t - 1))) {
      ++jumps;
    }
  }
  EXPECT_GT(jumps, 5u);
  EXPECT_LT(jumps, 60u);
  EXPECT_THROW(phase_process(10, {L(0)}, 5, 1), ParameterError);
}

TEST(BoundedFlip, NoFlipsWhenTheBudgetRoundsToZero) {
  const std::vector<Point> sites{L(0), L(1)};
  const auto predicted = phase_process(300, sites, 30, 1);
  EXPECT_EQ(bounded_flip(predicted, 0.01, 1.0, 50, 2, FlipUniform{sites}).items, predicted.items);
}

TEST(BoundedFlip, PassesTheCheckerAtTwiceQAndCountsStayBounded) {
  std::mt19937_64 rng(71);
  const std::vector<Point> sites{L(0), L(1), L(2), L(3)};
  std::uniform_real_distribution<double> q_dist(0.02, 0.3);
  std::uniform_real_distribution<double> D_dist(5, 80);
  std::uniform_real_distribution<double> eps_dist(0.1, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double q = q_dist(rng);
    const double D = D_dist(rng);
    const double eps = eps_dist(rng);
    const auto predicted = phase_process(1000, sites, 25, rng());
    const auto actual = bounded_flip(predicted, q, eps, D, rng(), FlipUniform{sites});
    const PredictionPair pair(actual, predicted);
    if (2 * q < 1) {
      EXPECT_TRUE(check_assumption(pair, AssumptionParams(D, 2 * q, eps)).holds)
          << "q=" << q << " D=" << D << " eps=" << eps;
    }
    const std::size_t window = std::max<std::size_t>(1, round_count(eps * D));
    const std::size_t per_block = floor_count(q * static_cast<double>(window));
    for (std::size_t t = window; t <= 1000; ++t) {
      EXPECT_LE(naive_mismatches(pair, t - window + 1, t), 2 * per_block);
    }
    EXPECT_LE(naive_mismatches(pair, 1, 1000), 2 * q * 1000);
  }
}

TEST(BoundedFlip, FarReplacementAndDeterminism) {
  const auto predicted = line_process(200);
  const auto a = bounded_flip(predicted, 0.1, 1.0, 20, 4, FlipFar{P(1e6, 0)});
  EXPECT_EQ(a.items, bounded_flip(predicted, 0.1, 1.0, 20, 4, FlipFar{P(1e6, 0)}).items);
  std::size_t far = 0;
  for (const auto& p : a.items) {
    far += p == P(1e6, 0) ? 1 : 0;
  }
  EXPECT_EQ(far, 20u);
  EXPECT_THROW(bounded_flip(predicted, 0.0, 1.0, 20, 4, FlipFar{P(0, 0)}), ParameterError);
}

TEST(LowerBoundInstance, BranchesFromTheConstruction) {
  const auto a = lower_bound_instance(100, 0.1, Branch::kA);
  const auto b = lower_bound_instance(100, 0.1, Branch::kB);
  std::vector<Point> expected(90, L(1));
  expected.insert(expected.end(), 20, L(0));
  EXPECT_EQ(a.predicted().items, expected);
  EXPECT_EQ(a.actual().items, expected);
  EXPECT_EQ(b.actual().items, std::vector<Point>(110, L(1)));
  EXPECT_EQ(b.predicted().items, expected);
  EXPECT_EQ(a.actual().start, L(0));
}

TEST(LowerBoundInstance, OptimaOfTheTwoBranches) {
  const auto m = Metric::uniform(2);
  const std::vector<Point> both{L(0), L(1)};
  const auto a = optimal_schedule(lower_bound_instance(100, 0.1, Branch::kA).actual(), m, 100, both);
  EXPECT_DOUBLE_EQ(a.total_cost, 90.0);
  for (const auto& p : a.schedule.positions) {
    EXPECT_EQ(p, L(0));
  }
  const auto b = optimal_schedule(lower_bound_instance(100, 0.1, Branch::kB).actual(), m, 100, both);
  EXPECT_LE(b.total_cost, 100.0);
  EXPECT_EQ(b.schedule.positions[1], L(1));
}

TEST(LowerBoundInstance, BranchesShareTheirPrefix) {
  for (double q : {0.05, 0.1, 0.2}) {
    const auto a = lower_bound_instance(100, q, Branch::kA);
    const auto b = lower_bound_instance(100, q, Branch::kB);
    const std::size_t prefix = lower_bound_lengths(100, q).prefix;
    for (std::size_t t = 1; t <= prefix; ++t) {
      EXPECT_EQ(a.actual().at(t), b.actual().at(t));
    }
    EXPECT_FALSE(a.actual().at(prefix + 1) == b.actual().at(prefix + 1));
  }
}

TEST(LowerBoundInstance, DegenerateRoundingIsParameterError) {
  EXPECT_THROW(lower_bound_instance(2, 0.1, Branch::kA), ParameterError);
  EXPECT_THROW(lower_bound_instance(100, 0.0, Branch::kA), ParameterError);
}

TEST(SuffixAdversary, ZeroRateIsIdentity) {
  const auto pair = suffix_adversary(50, 0.0, {}, P(0, 0));
  EXPECT_EQ(pair.actual().items, pair.predicted().items);
}

TEST(SuffixAdversary, ReplacesExactlyTheTail) {
  const auto pair = suffix_adversary(100, 0.1, alternating(P(9, 0), P(-9, 0), 10), P(0, 0));
  EXPECT_EQ(naive_mismatches(pair, 1, 100), 10u);
  EXPECT_EQ(naive_mismatches(pair, 91, 100), 10u);
  EXPECT_EQ(pair.actual().at(91), P(9, 0));
  EXPECT_EQ(pair.actual().at(92), P(-9, 0));
  EXPECT_THROW(suffix_adversary(100, 0.1, alternating(P(9, 0), P(-9, 0), 9), P(0, 0)),
               ShapeError);
}

TEST(SuffixAdversary, FailsTheCheckerForShortWindows) {
  const std::size_t n = 400;
  const double q = 0.1;
  const auto pair = suffix_adversary(n, q, alternating(P(9, 0), P(-9, 0), 40), P(0, 0));
  for (double D : {2.0, 10.0, 40.0}) {
    for (double eps : {0.1, 0.5, 1.0}) {
      for (double q_check : {0.05, 0.3, 0.9}) {
        const AssumptionParams params(D, q_check, eps);
        if (params.window() <= 40 && params.threshold() < params.window()) {
          const auto verdict = check_assumption(pair, params);
          EXPECT_FALSE(verdict.holds);
          EXPECT_GT(*verdict.violated_at, n - 40);
        }
      }
    }
  }
}

TEST(Alternating, StartsWithTheFirstPoint) {
  EXPECT_EQ(alternating(L(1), L(2), 3), (std::vector<Point>{L(1), L(2), L(1)}));
  EXPECT_TRUE(alternating(L(1), L(2), 0).empty());
}
