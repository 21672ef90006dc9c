#include "permsym/closed_form.hpp"
#include "permsym/exact.hpp"
#include "permsym/oracle.hpp"
#include "permsym/verify.hpp"

#include <gtest/gtest.h>

using namespace permsym;

TEST(BalancedLabels, MatchesPrintedSet)
{
  const int N = 9;
  const std::vector<DampingLabel> expected = {{N, 0, 0},     {N, 1, 0},     {N - 2, 0, 1}, {N, 2, 0},
                                              {N - 2, 1, 1}, {N - 4, 0, 2}, {N, 3, 0},     {N - 2, 2, 1},
                                              {N - 4, 1, 2}, {N - 6, 0, 3}};
  EXPECT_EQ(balanced_labels(N, 3), expected);
}

TEST(BuildRestricted, PrintedEntries)
{
  const int N = 9;
  const auto L = build_restricted(N, 3, Rates(1.0, 0.3));
  EXPECT_EQ(L.independent(1, 1), Rational(-1));
  EXPECT_EQ(L.collective(1, 1), Rational(-1));
  EXPECT_EQ(L.collective(1, 2), Rational(-(N - 1)));
  EXPECT_EQ(L.independent(1, 2), Rational(0));
  EXPECT_NEAR(L.mat(1, 1), -(0.7 + 0.3), 1e-15);
}

TEST(BuildRestricted, IndependentOnlyIsDiagonal)
{
  const int N = 7;
  const auto L = build_restricted(N, 3, Rates(1.0, 0.0));
  for (std::size_t i = 0; i < L.basis.size(); ++i)
    for (std::size_t j = 0; j < L.basis.size(); ++j)
      EXPECT_DOUBLE_EQ(L.mat(i, j), i == j ? -to_double(decay_units(L.basis[i], N)) : 0.0);
}

TEST(BuildRestricted, RejectsOpenBasis)
{
  EXPECT_THROW(build_restricted(6, truncated_labels(6, 3), Rates(1.0, 0.5)), std::logic_error);
}

TEST(BuildRestricted, PrintedTableAcrossN)
{
  for (int N = 6; N <= 12; ++N) {
    const auto L = build_restricted(N, 3, Rates(1.0, 0.5));
    for (const auto& e : verify::printed_restricted_entries()) {
      EXPECT_EQ(L.independent(e.row, e.col), Rational(-e.a));
      EXPECT_EQ(L.collective(e.row, e.col), Rational(-(e.p + e.q * N)));
    }
  }
}

TEST(ClosureLabels, ContainsInitialSupport)
{
  const int N = 4;
  SymOpVector<Rational> v(N);
  v.add({2, 1, 0, 1}, Rational(1));
  v.add({2, 0, 1, 1}, Rational(1));
  const auto labels = closure_labels(v, 2);
  const std::set<DampingLabel> members(labels.begin(), labels.end());
  for (const auto& [l, c] : expand(v)) EXPECT_TRUE(members.count(l));
  EXPECT_NO_THROW(build_restricted(N, labels, Rates(1.0, 0.4)));
  EXPECT_THROW(closure_labels(v, 0), TruncationError);
}

TEST(EvolveExact, IdentityAtZero)
{
  const auto initial = dicke_state(5, 2);
  const auto s = evolve_exact(initial, {0.0}, 2, Rates(1.0, 0.6)).front();
  for (const auto& idx : enumerate_basis(5)) EXPECT_NEAR(s.coeff(idx), to_double(initial.coeff(idx)), 1e-12);
}

TEST(EvolveExact, PairDecayAtEqualRates)
{
  const std::vector<double> times = {0.0, 0.4, 1.0, 2.5, 6.0};
  const auto P = p_expm(2, StateKind::mixed, 2, Rates(1.0, 1.0), times);
  for (std::size_t k = 0; k < times.size(); ++k)
    EXPECT_NEAR(P[k], 2 * std::exp(-2 * times[k]) * (times[k] + 1), 1e-10);
}

TEST(EvolveExact, MatchesOracle)
{
  const std::vector<double> times = {0.0, 0.3, 1.0, 3.0};
  for (int N = 2; N <= 4; ++N)
    for (int M = 1; M <= std::min(N, 3); ++M)
      for (StateKind kind : {StateKind::mixed, StateKind::dicke})
        for (double ratio : {0.0, 0.5, 1.0}) {
          const Rates rates = rates_from_ratio(ratio);
          const auto initial = initial_state(kind, N, M);
          const auto ours = evolve_exact(initial, times, M, rates);
          const auto full = oracle::integrate_expm(oracle::embed(initial), times, rates);
          for (std::size_t k = 0; k < times.size(); ++k)
            EXPECT_LT((oracle::embed(ours[k]).rho - full[k].rho).cwiseAbs().maxCoeff(), 1e-10)
                << to_string(kind) << " N=" << N << " M=" << M << " ratio=" << ratio;
        }
}

TEST(EvolveExact, ThreeExcitationsHalfCollective)
{
  const std::vector<double> times = {0.0, 0.5, 2.0, 5.0};
  const Rates rates = rates_from_ratio(0.5);
  const auto P = p_expm(3, StateKind::mixed, 4, rates, times);
  const auto full = oracle::integrate_expm(oracle::embed(mixed_state(4, 3)), times, rates);
  for (std::size_t k = 0; k < times.size(); ++k) EXPECT_NEAR(P[k], oracle::excitation_number(full[k]), 1e-8);
}

TEST(EvolveExact, Errors)
{
  EXPECT_THROW(evolve_exact(mixed_state(4, 2), {1.0, 0.5}, 2, Rates(1.0, 0.5)), std::invalid_argument);
  EXPECT_THROW(p_expm(2, StateKind::mixed, 4, Rates(1.0, 0.5), {-1.0}), std::invalid_argument);
}

TEST(Expm, JordanBlock)
{
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 4);
  A(0, 0) = -0.2;
  A(1, 1) = A(2, 2) = -1.1;
  A(1, 2) = 1.0;
  A(3, 3) = -3.0;
  for (double t : {0.0, 0.5, 2.0, 8.0}) {
    const Eigen::MatrixXd E = (A * t).exp();
    EXPECT_NEAR(E(1, 2), t * std::exp(-1.1 * t), 1e-12);
    EXPECT_NEAR(E(1, 1), std::exp(-1.1 * t), 1e-12);
    EXPECT_NEAR(E(2, 1), 0.0, 1e-14);
  }
}
