#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "setevo/profile_solver.hpp"

namespace setevo {
namespace {

Profile make(int N, std::vector<double> u, std::vector<double> v) { return Profile{N, std::move(u), std::move(v)}; }

Profile solved(double (*fn)(double), double a, int N = 100) {
  const auto v = sample_obstacle(fn, N);
  const auto r = solve_profile(v, a, N);
  EXPECT_TRUE(r.converged);
  return r.profile;
}

TEST(ProfileObjective, Examples) {
  const int N = 10;
  EXPECT_NEAR(profile_objective(make(N, std::vector<double>(N + 1, 0.3), std::vector<double>(N + 1, 0.3)), 5.0),
              2 * (2 * 0.3 + 1), 1e-12);
  EXPECT_NEAR(profile_objective(make(N, std::vector<double>(N + 1, 0.0), std::vector<double>(N + 1, 0.0)), 5.0), 2.0,
              1e-12);
}

TEST(ProfileObjective, RejectsInfeasibleProfiles) {
  EXPECT_THROW(profile_objective(make(2, {0.0, 0.6, 0.0}, {0.5, 0.5, 0.5}), 5.0), std::invalid_argument);
  EXPECT_THROW(profile_objective(make(2, {0.0, -0.1, 0.0}, {0.5, 0.5, 0.5}), 5.0), std::invalid_argument);
  EXPECT_THROW(profile_objective(make(3, {0.0, 0.1, 0.0}, {0.5, 0.5, 0.5}), 5.0), std::invalid_argument);
}

TEST(ProfileObjective, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.1, 0.9);
  const int N = 8;
  std::vector<double> v(N + 1, 1.0), u(N + 1);
  for (auto& x : u) x = unit(rng);
  const Profile p = make(N, u, v);
  const auto g = profile_gradient(p, 5.0);
  for (int i = 0; i <= N; ++i) {
    Profile lo = p, hi = p;
    lo.u[i] -= 1e-6;
    hi.u[i] += 1e-6;
    EXPECT_NEAR(g[i], (profile_objective(hi, 5.0) - profile_objective(lo, 5.0)) / 2e-6, 1e-6) << i;
  }
}

TEST(ProfileObjective, Convexity) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int N = 20;
  std::vector<double> v(N + 1);
  for (int i = 0; i <= N; ++i) v[i] = 0.2 + 0.8 * unit(rng);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> u1(N + 1), u2(N + 1), um(N + 1);
    const double lam = unit(rng);
    for (int i = 0; i <= N; ++i) {
      u1[i] = v[i] * unit(rng);
      u2[i] = v[i] * unit(rng);
      um[i] = lam * u1[i] + (1 - lam) * u2[i];
    }
    const double f1 = profile_objective(make(N, u1, v), 5.0), f2 = profile_objective(make(N, u2, v), 5.0);
    EXPECT_LE(profile_objective(make(N, um, v), 5.0), lam * f1 + (1 - lam) * f2 + 1e-12);
  }
}

TEST(SolveProfile, ZeroObstacle) {
  const auto r = solve_profile(std::vector<double>(11, 0.0), 5.0, 10);
  EXPECT_TRUE(r.converged);
  for (double u : r.profile.u) EXPECT_EQ(u, 0.0);
}

TEST(SolveProfile, RejectsBadInput) {
  EXPECT_THROW(solve_profile({0.5, -0.1, 0.5}, 5.0, 2), std::invalid_argument);
  EXPECT_THROW(solve_profile({0.5, 0.5}, 5.0, 2), std::invalid_argument);
  EXPECT_THROW(solve_profile({0.5, 0.5, 0.5}, -1.0, 2), std::invalid_argument);
}

TEST(SolveProfile, BeatsLatticeBruteForce) {
  const int N = 6, levels = 40;
  for (auto fn : {obstacles::f1, obstacles::f31, obstacles::f32, obstacles::f41}) {
    for (double a : {3.0, 5.0, 7.0}) {
      const auto v = sample_obstacle(fn, N);
      const auto r = solve_profile(v, a, N);
      ASSERT_TRUE(r.converged);
      EXPECT_LE(r.objective, testing::profile_lattice_minimum(v, a, levels) + 1e-10) << a;
    }
  }
}

TEST(SolveProfile, IsDeterministic) {
  const auto v = sample_obstacle(obstacles::f42, 100);
  const auto r1 = solve_profile(v, 5.0, 100), r2 = solve_profile(v, 5.0, 100);
  EXPECT_EQ(r1.profile.u, r2.profile.u);
  EXPECT_EQ(r1.iterations, r2.iterations);
}

TEST(SolveProfile, ConcaveObstacleGivesConcaveProfile) {
  // v = 3/4 - 2 (x - 1/2)^2 at a = 7.
  const Profile p = solved([](double x) { return obstacles::f2(x, 2.0); }, 7.0);
  EXPECT_TRUE(is_concave(std::vector<double>(p.u.begin() + 1, p.u.end() - 1), 1e-9));
  const auto contact = contact_indices(p);
  EXPECT_NE(std::find(contact.begin(), contact.end(), 50), contact.end());
  EXPECT_GE(contact_length(p), 0.9);
}

TEST(SolveProfile, StaircaseTouchesAtTheSteps) {
  const Profile p = solved(obstacles::f42, 5.0);
  const auto contact = contact_indices(p);
  ASSERT_FALSE(contact.empty());
  for (int i : contact) {
    const double x = p.x(i);
    EXPECT_NEAR(x, std::round(5 * x) / 5, 0.02) << x;
  }
  for (double x : {0.2, 0.4, 0.6, 0.8}) {
    bool hit = false;
    for (int i : contact) hit = hit || std::abs(p.x(i) - x) <= 0.02;
    EXPECT_TRUE(hit) << x;
  }
}

TEST(SolveProfile, ContactLengthGrowsWithA) {
  double prev = -1.0;
  for (double a : {3.0, 5.0, 7.0}) {
    const double len = contact_length(solved(obstacles::f1, a));
    EXPECT_GE(len, prev) << a;
    prev = len;
  }
}

TEST(SolveProfile, SmallAPathology) {
  const Profile p = solved(obstacles::f1, 1.5);
  EXPECT_LE(p.u.front(), 1e-6);
  EXPECT_LE(p.u.back(), 1e-6);
}

TEST(SolveProfile, SeparatedFromAxisAtAFive) {
  for (auto fn : {obstacles::f1, obstacles::f31, obstacles::f32, obstacles::f41, obstacles::f42}) {
    EXPECT_GT(interior_min_height(solved(fn, 5.0)), 0.05);
  }
}

TEST(AnalyticArc, Examples) {
  const ArcParams p{1.0, 5.0};
  EXPECT_NEAR(arc_y0(p), (std::sqrt(2.0) - 1) / 5, 1e-15);
  EXPECT_NEAR(analytic_arc(p, 0.0), arc_y0(p), 1e-15);
  EXPECT_NEAR(arc_tangency_x(p), 0.141421, 1e-6);
  EXPECT_NEAR(arc_y0(p), 0.082843, 1e-6);
  EXPECT_THROW(analytic_arc(p, 0.21), std::invalid_argument);
  EXPECT_THROW(analytic_arc(p, -0.01), std::invalid_argument);
}

TEST(AnalyticArc, TangentToTheCone) {
  for (double beta : {0.3, 1.0, 2.5}) {
    for (double a : {3.0, 5.0, 9.0}) {
      const ArcParams p{beta, a};
      const double xh = arc_tangency_x(p);
      EXPECT_NEAR(analytic_arc(p, xh), beta * xh, 1e-13);
      const double d = 1e-6;
      EXPECT_NEAR((analytic_arc(p, xh + d) - analytic_arc(p, xh - d)) / (2 * d), beta, 1e-6);
    }
  }
}

TEST(AnalyticArc, BeatsTheConeObjective) {
  // Cone v = 3/4 - |x - 1/2| with the arc substituted near the apex.
  const int N = 100;
  const double a = 5.0, beta = 1.0;
  const auto v = sample_obstacle(obstacles::f31, N);
  Profile arc = make(N, v, v);
  const double xh = arc_tangency_x({beta, a});
  for (int i = 0; i <= N; ++i) {
    const double s = std::abs(arc.x(i) - 0.5);
    if (s < xh) arc.u[i] = 0.75 - analytic_arc({beta, a}, s);
  }
  EXPECT_LT(profile_objective(arc, a), profile_objective(make(N, v, v), a));
}

TEST(CurvatureScan, StraightRunIsFlagged) {
  const int N = 40;
  std::vector<double> u(N + 1), v(N + 1, 1.0);
  for (int i = 0; i <= N; ++i) u[i] = 0.2 + 0.1 * i / N;
  const auto rep = curvature_scan(make(N, u, v), 5.0);
  EXPECT_GT(rep.samples_scanned, 0);
  EXPECT_NEAR(rep.max_deviation, 1.0, 1e-9);
}

TEST(CurvatureScan, ExactArcSamples) {
  const int N = 100;
  const double a = 1.5;
  std::vector<double> u(N + 1), v(N + 1, 2.0);
  for (int i = 0; i <= N; ++i) {
    const double s = i / double(N) - 0.5;
    u[i] = 0.5 + std::sqrt(1.0 / (a * a) - s * s);
  }
  const auto rep = curvature_scan(make(N, u, v), a);
  EXPECT_LE(rep.max_deviation, 0.02);
}

TEST(CurvatureScan, ShortRunsAreSkippedWithNotice) {
  const int N = 20;
  std::vector<double> v(N + 1, 0.5), u = v;
  u[10] = 0.4;
  u[11] = 0.45;
  const auto rep = curvature_scan(make(N, u, v), 5.0);
  EXPECT_EQ(rep.samples_scanned, 0);
  EXPECT_FALSE(rep.notices.empty());
  EXPECT_TRUE(std::isinf(rep.max_deviation));
}

TEST(Menger, UnitCircle) {
  EXPECT_NEAR(menger_curvature(1, 0, 0, 1, -1, 0), 1.0, 1e-12);
  EXPECT_EQ(menger_curvature(0, 0, 1, 1, 2, 2), 0.0);
}

TEST(Obstacles, Formulas) {
  EXPECT_DOUBLE_EQ(obstacles::f1(0.5), 0.5);
  EXPECT_DOUBLE_EQ(obstacles::f1(0.0), 0.75);
  EXPECT_DOUBLE_EQ(obstacles::f2(0.0, 2.0), 0.25);
  EXPECT_DOUBLE_EQ(obstacles::f31(0.5), 0.75);
  EXPECT_DOUBLE_EQ(obstacles::f32(0.5), 0.25);
  EXPECT_DOUBLE_EQ(obstacles::f41(0.5), 1.0);
  EXPECT_DOUBLE_EQ(obstacles::f41(0.1), 0.5);
  EXPECT_DOUBLE_EQ(obstacles::f42(0.4), 0.6);
  EXPECT_DOUBLE_EQ(obstacles::f42(0.39), 0.4);
  EXPECT_DOUBLE_EQ(obstacles::cone(0.25, 1.0, 0.75), 0.5);
}

}  // namespace
}  // namespace setevo
