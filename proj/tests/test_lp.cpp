#include "bidfair/lp.hpp"

#include <gtest/gtest.h>

using namespace bidfair;
using namespace bidfair::lp;

TEST(Lp, MaximizesSmallProgram) {
  // max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, x <= 3.
  Program p;
  p.variables = 2;
  p.add({1, 1}, Sense::less_equal, 4);
  p.add({1, 3}, Sense::less_equal, 6);
  p.add({1, 0}, Sense::less_equal, 3);
  p.objective = {3, 2};
  const auto r = solve(p);
  ASSERT_EQ(r.status, Status::optimal);
  EXPECT_EQ(r.objective, Rational(11));
  EXPECT_EQ(r.x, (std::vector<Rational>{3, 1}));
  EXPECT_TRUE(satisfies(p, r.x));
}

TEST(Lp, EqualityAndGreaterRows) {
  // min x + y (as max -x - y) s.t. x + 2y >= 3, x - y = 1/2.
  Program p;
  p.variables = 2;
  p.add({1, 2}, Sense::greater_equal, 3);
  p.add({1, -1}, Sense::equal, Rational(1, 2));
  p.objective = {-1, -1};
  const auto r = solve(p);
  ASSERT_EQ(r.status, Status::optimal);
  EXPECT_EQ(r.x, (std::vector<Rational>{Rational(4, 3), Rational(5, 6)}));
  EXPECT_TRUE(satisfies(p, r.x));
}

TEST(Lp, NegativeRightHandSide) {
  // -x <= -2 forces x >= 2.
  Program p;
  p.variables = 1;
  p.add({-1}, Sense::less_equal, -2);
  p.objective = {-1};
  const auto r = solve(p);
  ASSERT_EQ(r.status, Status::optimal);
  EXPECT_EQ(r.x[0], Rational(2));
}

TEST(Lp, DetectsInfeasibleAndUnbounded) {
  Program inf;
  inf.variables = 1;
  inf.add({1}, Sense::less_equal, 1);
  inf.add({1}, Sense::greater_equal, 2);
  EXPECT_EQ(solve(inf).status, Status::infeasible);

  Program unb;
  unb.variables = 2;
  unb.add({1, -1}, Sense::less_equal, 1);
  unb.objective = {0, 1};
  EXPECT_EQ(solve(unb).status, Status::unbounded);
}

TEST(Lp, FeasibilityOnlyAndRedundantEqualities) {
  Program p;
  p.variables = 3;
  p.add({1, 1, 1}, Sense::equal, 1);
  p.add({2, 2, 2}, Sense::equal, 2);
  p.add({1, 0, 0}, Sense::less_equal, Rational(1, 3));
  const auto r = solve(p);
  ASSERT_EQ(r.status, Status::optimal);
  EXPECT_TRUE(satisfies(p, r.x));
}

TEST(Lp, RejectsWidthMismatch) {
  Program p;
  p.variables = 2;
  EXPECT_THROW(p.add({1}, Sense::less_equal, 1), std::invalid_argument);
  p.objective = {1};
  EXPECT_THROW(solve(p), std::invalid_argument);
}

// Degenerate vertex where Bland's rule matters for termination.
TEST(Lp, DegenerateCycleExample) {
  Program p;
  p.variables = 4;
  p.add({Rational(1, 4), -8, -1, 9}, Sense::less_equal, 0);
  p.add({Rational(1, 2), -12, Rational(-1, 2), 3}, Sense::less_equal, 0);
  p.add({0, 0, 1, 0}, Sense::less_equal, 1);
  p.objective = {Rational(3, 4), -20, Rational(1, 2), -6};
  const auto r = solve(p);
  ASSERT_EQ(r.status, Status::optimal);
  EXPECT_EQ(r.objective, Rational(5, 4));
  EXPECT_TRUE(satisfies(p, r.x));
}
