#include "permsym/oracle.hpp"
#include "permsym/states.hpp"

#include <gtest/gtest.h>

using namespace permsym;

TEST(MixedState, TraceAndExcitations)
{
  for (int N = 1; N <= 8; ++N)
    for (int M = 1; M <= N; ++M) {
      EXPECT_EQ(trace(mixed_state(N, M)), Rational(1));
      EXPECT_EQ(excitation_expectation(mixed_state(N, M)), Rational(M));
    }
}

TEST(MixedState, PermutationAverageOfProductStates)
{
  // one excited atom out of three: average of the three product projectors
  const auto s = oracle::embed(mixed_state(3, 1));
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(8, 8);
  for (std::size_t b : {1u, 2u, 4u}) expected(b, b) = 1.0 / 3.0;
  EXPECT_LT((s.rho - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DickeState, TraceAndExcitations)
{
  for (int N = 1; N <= 8; ++N)
    for (int M = 1; M <= N; ++M) {
      EXPECT_EQ(trace(dicke_state(N, M)), Rational(1));
      EXPECT_EQ(excitation_expectation(dicke_state(N, M)), Rational(M));
    }
}

TEST(DickeState, SingleExcitationPairIsBellProjector)
{
  const auto s = oracle::embed(dicke_state(2, 1));
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
  expected(1, 1) = expected(2, 2) = expected(1, 2) = expected(2, 1) = 0.5;
  EXPECT_LT((s.rho - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DickeState, HermitianLabels)
{
  for (int N = 2; N <= 7; ++N)
    for (int M = 1; M <= N; ++M) {
      const auto v = dicke_state(N, M);
      for (const auto& [idx, c] : v) EXPECT_EQ(v.coeff({idx.n00, idx.n10, idx.n01, idx.n11}), c);
    }
}

TEST(CheckPhysical, Examples)
{
  EXPECT_TRUE(check_physical(mixed_state(4, 2)).physical());
  const auto d = check_physical(dicke_state(4, 2));
  EXPECT_TRUE(d.physical());
  EXPECT_NEAR(d.purity, 1.0, 1e-12);
  const auto r = check_physical(right_eigenvector({4, 1, 0}, 4));
  EXPECT_FALSE(r.physical());
  EXPECT_NEAR(r.trace, 0.0, 1e-14);
}

TEST(CheckPhysical, AllSmallStates)
{
  for (int N = 1; N <= 5; ++N)
    for (int M = 1; M <= N; ++M) {
      EXPECT_TRUE(check_physical(mixed_state(N, M)).physical());
      EXPECT_TRUE(check_physical(dicke_state(N, M)).physical());
    }
}

TEST(MultinomialDicke, NotPositive)
{
  const auto r = check_physical(multinomial_dicke_state(2, 1));
  EXPECT_FALSE(r.positive);
  EXPECT_NEAR(r.min_eigenvalue, -0.5, 1e-12);
}

TEST(InitialState, Errors)
{
  EXPECT_THROW(mixed_state(3, 4), std::invalid_argument);
  EXPECT_THROW(dicke_state(3, 0), std::invalid_argument);
  EXPECT_THROW(parse_state_kind("ghz"), std::invalid_argument);
  EXPECT_EQ(initial_state(StateKind::dicke, 4, 2), dicke_state(4, 2));
}
