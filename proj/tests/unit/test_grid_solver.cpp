#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "setevo/grid_solver.hpp"
#include "setevo/oracle.hpp"
#include "setevo/shape.hpp"

namespace setevo {
namespace {

StepProblem uniform_problem(const BinaryField& m, double g, PerimeterScheme s) {
  StepProblem p;
  p.admissible = m;
  p.g.assign(m.size(), g);
  p.scheme = s;
  return p;
}

TEST(SolveParams, Validation) {
  const GridSpec g({0, 0}, 1.0, 16);
  SolveParams p;
  EXPECT_NO_THROW(p.validate(g));
  EXPECT_DOUBLE_EQ(p.resolved_sigma(g), g.h() / std::sqrt(8.0));
  EXPECT_DOUBLE_EQ(p.resolved_tau(g), g.h() / std::sqrt(8.0));
  EXPECT_TRUE(p.adaptive_steps);
  EXPECT_DOUBLE_EQ(p.resolved_tolerance(g), 1e-6);
  p.sigma = p.tau = g.h();
  EXPECT_THROW(p.validate(g), SolverConfigError);
  p = {};
  p.threshold = 1.0;
  EXPECT_THROW(p.validate(g), SolverConfigError);
  p = {};
  p.max_iterations = 0;
  EXPECT_THROW(p.validate(g), SolverConfigError);
}

TEST(RelaxedSolve, PositiveWeightGivesZero) {
  const GridSpec g({0, 0}, 1.0, 12);
  const auto r = relaxed_solve(uniform_problem(BinaryField::full(g), 1.0, PerimeterScheme::isotropic), {});
  for (double u : r.u.values()) EXPECT_LT(u, 1e-9);
  EXPECT_TRUE(r.z.none());
  EXPECT_LE(r.gap, 1e-6);
  EXPECT_TRUE(r.converged);
}

TEST(RelaxedSolve, StrongRewardFillsTheMask) {
  const GridSpec g({0, 0}, 1.0, 12);
  const auto r = relaxed_solve(uniform_problem(BinaryField::full(g), -100.0, PerimeterScheme::isotropic), {});
  for (double u : r.u.values()) EXPECT_GT(u, 1.0 - 1e-9);
  EXPECT_EQ(r.z, BinaryField::full(g));
}

TEST(RelaxedSolve, BelowBinaryOptimumOnRandomInstances) {
  std::mt19937_64 rng(2024);
  const double a = 5.0;
  std::uniform_real_distribution<double> w(-2 * a, 2 * a);
  const GridSpec g({0, 0}, 1.0, 4);
  for (int trial = 0; trial < 10; ++trial) {
    StepProblem p = uniform_problem(BinaryField::full(g), 0.0, PerimeterScheme::anisotropic);
    for (auto& x : p.g) x = w(rng) * 8.0;
    const auto r = relaxed_solve(p, {});
    const auto bf = testing::enumerate_step(p);
    EXPECT_LE(r.dual, bf.value + 1e-9);
    EXPECT_LE(r.primal - r.gap, bf.value + 1e-9);
    EXPECT_TRUE(r.converged);
  }
}

TEST(RelaxedSolve, GapIsMonotone) {
  const GridSpec g = GridSpec::standard(64);
  StepProblem p = uniform_problem(rasterize(shapes::RoundedPolygon{6, {0, 0}, 1.6, 0.0, 0.0}, g), -5.0,
                                  PerimeterScheme::isotropic);
  SolveParams sp;
  sp.record_telemetry = true;
  const auto r = relaxed_solve(p, sp);
  ASSERT_GE(r.telemetry.size(), 3u);
  for (std::size_t i = 1; i < r.telemetry.size(); ++i) {
    EXPECT_LE(r.telemetry[i].gap, r.telemetry[i - 1].gap);
    EXPECT_GT(r.telemetry[i].iteration, r.telemetry[i - 1].iteration);
  }
  EXPECT_EQ(r.telemetry.front().iteration, 1);
  EXPECT_EQ(telemetry_csv(r.telemetry).rfind("iteration,primal,dual,gap\r\n", 0), 0u);
}

TEST(Threshold, Examples) {
  const GridSpec g({0, 0}, 1.0, 6);
  EXPECT_TRUE(threshold(RelaxedField(g, 0.0), 0.5).none());
  const BinaryField m = rasterize(shapes::Box{{0.2, 0.2}, {0.7, 0.9}}, g);
  EXPECT_EQ(threshold(RelaxedField::from_binary(m), 0.5), m);
  std::vector<double> u(g.size(), 0.5);
  EXPECT_EQ(threshold(RelaxedField(g, u), 0.5), BinaryField::full(g));  // ties go to inclusion
}

TEST(Threshold, AnisotropicCoareaBound) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> w(-40.0, 40.0);
  const GridSpec g({0, 0}, 1.0, 6);
  for (int trial = 0; trial < 10; ++trial) {
    StepProblem p = uniform_problem(BinaryField::full(g), 0.0, PerimeterScheme::anisotropic);
    for (auto& x : p.g) x = w(rng);
    const auto r = relaxed_solve(p, {});
    for (double s : {0.25, 0.5, 0.75}) {
      EXPECT_LE(step_objective(p, threshold(r.u, s)), r.primal + r.gap + 1e-9) << s;
    }
  }
}

TEST(SingleStep, EmptyAdmissibleMaskShortCircuits) {
  const GridSpec g = GridSpec::standard(32);
  StepProblem p = uniform_problem(BinaryField::empty(g), -5.0, PerimeterScheme::isotropic);
  p.offset = 3.0;
  const auto r = single_step(p, {});
  EXPECT_TRUE(r.z.none());
  EXPECT_EQ(r.value, 3.0);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.gap, 0.0);
}

TEST(SingleStep, OutputStaysBelowMask) {
  std::mt19937_64 rng(5);
  const GridSpec g({0, 0}, 1.0, 24);
  std::uniform_real_distribution<double> w(-60.0, 20.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::uint8_t> m(g.size());
    for (auto& c : m) c = rng() % 5 != 0;
    StepProblem p = uniform_problem(BinaryField(g, m), 0.0, PerimeterScheme::isotropic);
    for (auto& x : p.g) x = w(rng);
    const auto r = single_step(p, {});
    EXPECT_TRUE(r.z.subset_of(p.admissible));
    EXPECT_NEAR(r.value, step_objective(p, r.z), 1e-12);
    EXPECT_GE(r.gap, -1e-12);
  }
}

TEST(SingleStep, HexagonForcingGivesRoundedHexagon) {
  const double a = 5.0, side = 1.6;
  const GridSpec g = GridSpec::standard(128);
  const BinaryField m = rasterize(shapes::RoundedPolygon{6, {0, 0}, side, 0.0, 0.0}, g);
  StepProblem p = uniform_problem(m, -a, PerimeterScheme::isotropic);
  p.offset = a * volume(m);
  const auto r = single_step(p, {});
  ASSERT_TRUE(r.converged);
  const oracle::RoundedPolygon ref(6, a, side);
  const BinaryField expected = rasterize(ref.to_shape({0, 0}), g);
  const double band = g.h() * ref.perimeter();
  EXPECT_LE(r.z.symmetric_difference_count(expected) * g.cell_area(), band);
}

TEST(SingleStep, NeedleForcingDisconnects) {
  const double a = 5.0;
  const GridSpec g({-1, -1}, 2.0, 128);
  const BinaryField m = rasterize(shapes::NeedleComplement{0.05, 0.6 * g.h()}, g);
  StepProblem p = uniform_problem(m, -a, PerimeterScheme::isotropic);
  p.offset = a * volume(m);
  const auto r = single_step(p, {});
  ASSERT_TRUE(r.converged);
  EXPECT_GE(connected_components(r.z).count, 2);
}

TEST(BruteForce, Examples) {
  const GridSpec g({0, 0}, 1.0, 4);
  StepProblem p = uniform_problem(BinaryField::empty(g), -5.0, PerimeterScheme::anisotropic);
  p.offset = 1.5;
  const auto e = brute_force_step(p);
  EXPECT_TRUE(e.z.none());
  EXPECT_EQ(e.value, 1.5);

  // One interior cell: keeping it costs 4h + g h^2.
  BinaryField one(g);
  one.set(1, 1, true);
  const double h = g.h();
  for (double w : {-4.0 / h - 1.0, -4.0 / h + 1.0}) {
    p = uniform_problem(one, w, PerimeterScheme::anisotropic);
    const auto r = brute_force_step(p);
    EXPECT_EQ(r.z.count(), w * h * h + 4 * h < 0 ? 1u : 0u);
  }

  const GridSpec big({0, 0}, 1.0, 5);
  EXPECT_THROW(brute_force_step(uniform_problem(BinaryField::full(big), -1.0, PerimeterScheme::anisotropic)),
               TooManyCells);
}

TEST(BruteForce, AgreesWithIndependentEnumeration) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const StepProblem p = testing::random_step_problem(seed);
    const auto lib = brute_force_step(p);
    const auto ref = testing::enumerate_step(p);
    EXPECT_NEAR(lib.value, ref.value, 1e-12) << seed;
    EXPECT_NEAR(step_objective(p, lib.z), lib.value, 1e-12);
  }
}

TEST(BruteForce, SingleStepMatchesOnAdhesiveInstances) {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 20; seed += 2, ++checked) {
    const StepProblem p = testing::random_step_problem(seed);
    EXPECT_NEAR(single_step(p, {}).value, brute_force_step(p).value, 1e-9) << seed;
  }
}

TEST(BruteForce, ComparisonPrinciple) {
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    StepProblem small = testing::random_step_problem(seed);
    StepProblem large = small;
    std::vector<std::uint8_t> m(small.admissible.values().begin(), small.admissible.values().end());
    for (auto& c : m) c = c || rng() % 3 == 0;
    large.admissible = BinaryField(small.admissible.grid(), m);
    large.offset = small.offset = 0.0;
    EXPECT_LE(brute_force_step(large).value, brute_force_step(small).value + 1e-12);
  }
}

TEST(BruteForce, AnisotropicThresholdExactness) {
  for (std::uint64_t seed = 200; seed < 210; ++seed) {
    const StepProblem p = testing::random_step_problem(seed);
    const auto best = brute_force_step(p).value;
    const auto r = relaxed_solve(p, {});
    for (double s : {0.2, 0.5, 0.8}) {
      EXPECT_NEAR(step_objective(p, threshold(r.u, s)), best, 1e-6) << seed << " " << s;
    }
  }
}

}  // namespace
}  // namespace setevo
