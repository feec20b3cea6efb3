#include <gtest/gtest.h>

#include <random>

#include "locker/optim/ilp.hpp"
#include "locker/oracles/solvers.hpp"

using namespace locker::optim;

using locker::oracle::enumerate_box;
using locker::oracle::random_int_model;

TEST(IlpSolve, EmptyModelIsOptimalAtZero) {
  IntModel m;
  const IlpResult r = ilp_solve(m);
  EXPECT_EQ(r.status, IlpStatus::kOptimal);
  EXPECT_TRUE(r.values.empty());
  EXPECT_EQ(r.objective, 0.0);
}

TEST(IlpSolve, MatchesEnumerationOnRandomTinyModels) {
  std::mt19937_64 rng(77);
  int feasible = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const IntModel m = random_int_model(rng);
    const auto best = enumerate_box(m);
    for (bool lp : {true, false}) {
      const IlpResult r = ilp_solve(m, {lp, 0});
      ASSERT_EQ(r.status == IlpStatus::kOptimal, best.feasible) << "trial " << trial;
      if (!best.feasible) continue;
      EXPECT_TRUE(m.is_feasible(r.values)) << "trial " << trial;
      EXPECT_NEAR(r.objective, best.objective, 1e-9) << "trial " << trial << " lp=" << lp;
      EXPECT_NEAR(m.evaluate(r.values), r.objective, 1e-12);
    }
    feasible += best.feasible;
  }
  EXPECT_GT(feasible, 300);
}

TEST(IlpSolve, DeterministicAssignment) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const IntModel m = random_int_model(rng);
    const IlpResult a = ilp_solve(m);
    const IlpResult b = ilp_solve(m);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.nodes, b.nodes);
  }
}

TEST(IlpSolve, FeasibilityModeStopsAtFirstPoint) {
  IntModel m;
  m.feasibility_only = true;
  const int x = m.add_variable(0, 3, 0.0, "x");
  const int y = m.add_variable(0, 3, 0.0, "y");
  m.add_constraint({{x, 2.0}, {y, 2.0}}, Sense::kEqual, 5.0);
  EXPECT_EQ(ilp_solve(m).status, IlpStatus::kInfeasible);
  m.constraints.back().rhs = 4.0;
  const IlpResult r = ilp_solve(m);
  ASSERT_EQ(r.status, IlpStatus::kOptimal);
  EXPECT_TRUE(m.is_feasible(r.values));
}

TEST(IlpSolve, LpFormatListsRowsAndBounds) {
  IntModel m;
  const int x = m.add_variable(0, 2, 1.5, "x");
  m.add_constraint({{x, 1.0}}, Sense::kLessEqual, 1.0, "cap");
  const std::string text = m.to_lp_format();
  EXPECT_NE(text.find("cap: x <= 1"), std::string::npos);
  EXPECT_NE(text.find("0 <= x <= 2"), std::string::npos);
  EXPECT_NE(text.find("General"), std::string::npos);
}
