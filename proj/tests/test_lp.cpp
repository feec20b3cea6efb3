#include <gtest/gtest.h>

#include <random>

#include "locker/optim/lp.hpp"
#include "locker/oracles/solvers.hpp"

using namespace locker::optim;

using locker::oracle::enumerate_vertices;
using locker::oracle::random_lp;

TEST(LpSolve, SingleBound) {
  LpModel m;
  const int x = m.add_variable(0.0, kInfinity, 1.0);
  m.add_constraint({{x, 1.0}}, Sense::kLessEqual, 3.0);
  const LpResult r = lp_solve(m);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_DOUBLE_EQ(r.objective, 3.0);
  EXPECT_DOUBLE_EQ(r.values[0], 3.0);
}

TEST(LpSolve, DetectsUnboundedAndInfeasible) {
  LpModel u;
  const int x = u.add_variable(0.0, kInfinity, 1.0);
  const int y = u.add_variable(0.0, kInfinity, 0.0);
  u.add_constraint({{x, 1.0}, {y, -1.0}}, Sense::kLessEqual, 1.0);
  EXPECT_EQ(lp_solve(u).status, LpStatus::kUnbounded);

  LpModel f;
  const int z = f.add_variable(0.0, 2.0, 1.0);
  f.add_constraint({{z, 1.0}}, Sense::kGreaterEqual, 3.0);
  EXPECT_EQ(lp_solve(f).status, LpStatus::kInfeasible);
}

TEST(LpSolve, NegativeLowerBoundsAndOffset) {
  LpModel m;
  const int x = m.add_variable(-4.0, -1.0, -1.0);
  const int y = m.add_variable(-2.0, 5.0, 1.0);
  m.add_constraint({{x, 1.0}, {y, 1.0}}, Sense::kLessEqual, 0.0);
  m.objective_offset = 10.0;
  const LpResult r = lp_solve(m);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  // x = -4 frees y up to 4: -(-4) + 4 + 10
  EXPECT_NEAR(r.objective, 18.0, 1e-12);
}

TEST(LpSolve, RedundantEqualitiesTerminate) {
  // Highly degenerate: the same equality three times, plus a zero-rhs cone.
  LpModel m;
  for (int j = 0; j < 4; ++j) m.add_variable(0.0, kInfinity, j == 3 ? 1.0 : 0.5);
  std::vector<LinearTerm> all{{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}};
  for (int k = 0; k < 3; ++k) m.add_constraint(all, Sense::kEqual, 1.0);
  m.add_constraint(all, Sense::kLessEqual, 1.0);
  m.add_constraint({{0, 1.0}, {1, -1.0}}, Sense::kLessEqual, 0.0);
  m.add_constraint({{1, 1.0}, {2, -1.0}}, Sense::kLessEqual, 0.0);
  m.add_constraint({{3, 1.0}, {0, -1.0}}, Sense::kLessEqual, 0.0);
  const LpResult r = lp_solve(m);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, enumerate_vertices(m).objective, 1e-9);
}

TEST(LpSolve, BealeCyclingExampleTerminates) {
  // Beale's classic instance cycles under textbook Dantzig pricing.
  LpModel m;
  const int x1 = m.add_variable(0, kInfinity, 0.75);
  const int x2 = m.add_variable(0, kInfinity, -150);
  const int x3 = m.add_variable(0, kInfinity, 0.02);
  const int x4 = m.add_variable(0, kInfinity, -6);
  m.add_constraint({{x1, 0.25}, {x2, -60}, {x3, -0.04}, {x4, 9}}, Sense::kLessEqual, 0);
  m.add_constraint({{x1, 0.5}, {x2, -90}, {x3, -0.02}, {x4, 3}}, Sense::kLessEqual, 0);
  m.add_constraint({{x3, 1}}, Sense::kLessEqual, 1);
  const LpResult r = lp_solve(m);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 0.05, 1e-12);
}

TEST(LpSolve, MatchesVertexEnumeration) {
  std::mt19937_64 rng(20240517);
  int optimal = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const LpModel m = random_lp(rng);
    const auto ref = enumerate_vertices(m);
    const LpResult r = lp_solve(m);
    ASSERT_EQ(r.status, ref.status) << "trial " << trial;
    if (r.status == LpStatus::kOptimal) {
      ++optimal;
      EXPECT_NEAR(r.objective, ref.objective, 1e-8) << "trial " << trial;
    }
  }
  EXPECT_GT(optimal, 100);
}
