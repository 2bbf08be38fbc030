#include <gtest/gtest.h>

#include <random>

#include "pagemig/errors.hpp"
#include "pagemig/offline_solver.hpp"
#include "pagemig/simulation.hpp"
#include "pagemig/strategies.hpp"
#include "support.hpp"

using namespace pagemig;
using namespace pagemig::testing;

namespace {

StrategyPtr replay(std::vector<Point> positions) {
  return std::make_unique<ScheduleStrategy>(Schedule{std::move(positions)});
}

// The diagnostic's right-hand side recomputed from per-step costs with
// explicit interval loops; breakpoints are supplied by the caller.
double naive_rhs(const std::vector<Point>& alg, const std::vector<Point>& opt,
                 const PredictionPair& pair, const Metric& m,
                 const std::vector<std::size_t>& cuts) {
  double rhs = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    std::size_t wrong = 0;
    double serve = 0.0;
    for (std::size_t t = cuts[i - 1] + 1; t <= cuts[i]; ++t) {
      wrong += pair.mismatch_at(t) ? 1 : 0;
      serve += m.distance(alg[t], pair.actual().at(t)) + m.distance(opt[t], pair.actual().at(t));
    }
    rhs += 2.0 * static_cast<double>(wrong) * serve / static_cast<double>(cuts[i] - cuts[i - 1]);
  }
  return rhs;
}

}  // namespace

TEST(Run, StillStrategyOnStillRequestsIsFree) {
  auto s = replay({L(0), L(0), L(0)});
  const auto report = run(*s, labels(0, {0, 0}), Metric::uniform(2), 5.0);
  EXPECT_EQ(report.ledger.total(), 0.0);
}

TEST(Run, MoveThenServe) {
  auto s = replay({L(0), L(1), L(1)});
  const auto report = run(*s, labels(0, {1, 1}), Metric::uniform(2), 2.0);
  EXPECT_EQ(report.ledger.total_move(), 2.0);
  EXPECT_EQ(report.ledger.total_serve(), 0.0);
  EXPECT_EQ(report.ledger.total(), 2.0);
  EXPECT_EQ(report.ledger.move(1), 2.0);
  EXPECT_EQ(report.ledger.serve(1), 0.0);
}

TEST(Run, PerfectPredictionMatchesTheDp) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = small_instance(Family::kExplicit, 80, 5, rng);
    auto alg = predict_strategy(inst.seq, inst.metric, 3.0);
    EXPECT_DOUBLE_EQ(run(*alg, inst.seq, inst.metric, 3.0).ledger.total(),
                     optimal_schedule(inst.seq, inst.metric, 3.0).total_cost);
  }
}

TEST(Run, ReusedStrategyIsStateError) {
  auto s = replay({L(0), L(0)});
  run(*s, labels(0, {0}), Metric::uniform(2), 2.0);
  EXPECT_THROW(run(*s, labels(0, {0}), Metric::uniform(2), 2.0), StateError);
}

TEST(Run, DeterministicUnderAFixedSeed) {
  std::mt19937_64 rng(62);
  const auto inst = small_instance(Family::kSnapped, 300, 6, rng);
  auto a = coinflip_online(inst.seq.start, 4.0, 17);
  auto b = coinflip_online(inst.seq.start, 4.0, 17);
  const auto ra = run(*a, inst.seq, inst.metric, 4.0, 17);
  const auto rb = run(*b, inst.seq, inst.metric, 4.0, 17);
  EXPECT_EQ(ra.schedule.positions, rb.schedule.positions);
  EXPECT_EQ(ra.ledger, rb.ledger);
  EXPECT_EQ(to_json(ra).dump(), to_json(rb).dump());
}

TEST(CostLedgerTest, AdditivityAndNonnegativity) {
  std::mt19937_64 rng(63);
  const auto inst = small_instance(Family::kSnapped, 120, 6, rng);
  auto s = coinflip_online(inst.seq.start, 2.0, 5);
  const auto ledger = run(*s, inst.seq, inst.metric, 2.0).ledger;
  double sum = 0.0;
  for (std::size_t t = 1; t <= 120; ++t) {
    EXPECT_GE(ledger.move(t), 0.0);
    EXPECT_GE(ledger.serve(t), 0.0);
    sum += ledger.move(t) + ledger.serve(t);
  }
  EXPECT_NEAR(ledger.between(0, 120), sum, 1e-9);
  EXPECT_DOUBLE_EQ(ledger.total(), ledger.between(0, 120));
  for (std::size_t a = 0; a <= 120; a += 13) {
    for (std::size_t b = a; b <= 120; b += 17) {
      for (std::size_t c = b; c <= 120; c += 19) {
        EXPECT_NEAR(ledger.between(a, b) + ledger.between(b, c), ledger.between(a, c), 1e-9);
      }
    }
  }
  EXPECT_THROW(ledger.between(5, 4), BoundsError);
}

TEST(CostOf, ConstantScheduleHasNoMoveCost) {
  const auto seq = labels(0, {1, 2, 1});
  const auto ledger = cost_of(Schedule{{L(0), L(0), L(0), L(0)}}, seq, Metric::uniform(3), 4.0);
  EXPECT_EQ(ledger.total_move(), 0.0);
  EXPECT_EQ(ledger.total_serve(), 3.0);
}

TEST(CostOf, AgreesWithTheRunLedger) {
  std::mt19937_64 rng(64);
  const auto inst = small_instance(Family::kExplicit, 100, 4, rng);
  auto s = coinflip_online(inst.seq.start, 3.0, 9);
  const auto report = run(*s, inst.seq, inst.metric, 3.0);
  EXPECT_EQ(cost_of(report.schedule, inst.seq, inst.metric, 3.0), report.ledger);
}

TEST(CostOf, BruteForceScheduleCostsItsOwnCost) {
  std::mt19937_64 rng(65);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = small_instance(Family::kExplicit, 7, 3, rng);
    const auto bf = brute_force_schedule(inst.seq, inst.metric, 2.0, inst.sites);
    EXPECT_NEAR(cost_of(bf.schedule, inst.seq, inst.metric, 2.0).total(), bf.total_cost, 1e-9);
  }
}

TEST(CostOf, LengthMismatchIsShapeError) {
  EXPECT_THROW(cost_of(Schedule{{L(0)}}, labels(0, {1}), Metric::uniform(2), 2.0), ShapeError);
}

TEST(RunReportJson, CarriesScheduleAndCosts) {
  auto s = replay({L(0), L(1)});
  const auto j = to_json(run(*s, labels(0, {1}), Metric::uniform(2), 2.0, 4));
  EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 4u);
  EXPECT_DOUBLE_EQ(j.at("total_cost").get<double>(), 2.0);
  EXPECT_EQ(j.at("positions").size(), 2u);
}

TEST(IntervalDiagnostic, PerfectPredictionHasZeroRightHandSide) {
  std::mt19937_64 rng(66);
  const auto inst = small_instance(Family::kUniform, 100, 4, rng);
  const PredictionPair pair(inst.seq, inst.seq);
  auto alg = predict_strategy(inst.seq, inst.metric, 5.0);
  auto opt = predict_strategy(inst.seq, inst.metric, 5.0);
  const auto d = interval_diagnostic(run(*alg, inst.seq, inst.metric, 5.0),
                                run(*opt, inst.seq, inst.metric, 5.0), pair);
  EXPECT_EQ(d.rhs, 0.0);
  EXPECT_LE(d.lhs, 0.0);
}

TEST(IntervalDiagnostic, MatchesNaiveIntervalScan) {
  std::mt19937_64 rng(67);
  const auto m = Metric::uniform(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = small_instance(Family::kUniform, 40, 3, rng);
    auto actual = inst.seq;
    const std::size_t at = 1 + rng() % 40;
    actual.items[at - 1] = inst.sites[(std::get<Label>(actual.items[at - 1]).id + 1) % 3];
    const PredictionPair pair(actual, inst.seq);
    auto alg = predict_strategy(inst.seq, m, 4.0);
    const auto alg_run = run(*alg, actual, m, 4.0);
    auto opt = predict_strategy(actual, m, 4.0);
    const auto opt_run = run(*opt, actual, m, 4.0);

    const auto d = interval_diagnostic(alg_run, opt_run, pair);
    std::vector<std::size_t> cuts{0};
    for (std::size_t t = 1; t <= 40; ++t) {
      const bool moved = !(alg_run.schedule.positions[t] == alg_run.schedule.positions[t - 1]) ||
                         !(opt_run.schedule.positions[t] == opt_run.schedule.positions[t - 1]);
      if (moved && t - 1 > cuts.back()) {
        cuts.push_back(t - 1);
      }
    }
    if (cuts.back() != 40) {
      cuts.push_back(40);
    }
    EXPECT_EQ(d.breakpoints, cuts);
    EXPECT_NEAR(d.rhs,
                naive_rhs(alg_run.schedule.positions, opt_run.schedule.positions, pair, m, cuts),
                1e-9);
    EXPECT_NEAR(d.lhs, alg_run.ledger.total() - opt_run.ledger.total(), 1e-12);
  }
}

TEST(IntervalDiagnostic, PositionsAreConstantInsideIntervals) {
  std::mt19937_64 rng(68);
  const auto inst = small_instance(Family::kExplicit, 60, 4, rng);
  auto actual = inst.seq;
  actual.items[20] = inst.sites[(std::get<Label>(actual.items[20]).id + 1) % 4];
  const PredictionPair pair(actual, inst.seq);
  auto alg = predict_strategy(inst.seq, inst.metric, 3.0);
  auto opt = predict_strategy(actual, inst.metric, 3.0);
  const auto a = run(*alg, actual, inst.metric, 3.0);
  const auto o = run(*opt, actual, inst.metric, 3.0);
  const auto d = interval_diagnostic(a, o, pair);
  for (std::size_t i = 1; i < d.breakpoints.size(); ++i) {
    for (std::size_t t = d.breakpoints[i - 1] + 2; t <= d.breakpoints[i]; ++t) {
      EXPECT_EQ(a.schedule.positions[t], a.schedule.positions[t - 1]);
      EXPECT_EQ(o.schedule.positions[t], o.schedule.positions[t - 1]);
    }
  }
}

TEST(IntervalDiagnostic, MismatchedLengthsAreShapeErrors) {
  auto a = replay({L(0), L(0)});
  auto b = replay({L(0), L(0)});
  const auto ra = run(*a, labels(0, {0}), Metric::uniform(2), 2.0);
  const auto rb = run(*b, labels(0, {0}), Metric::uniform(2), 2.0);
  const PredictionPair longer(labels(0, {0, 1}), labels(0, {0, 0}));
  EXPECT_THROW(interval_diagnostic(ra, rb, longer), ShapeError);
}
