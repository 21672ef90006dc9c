#include "permsym/damping.hpp"
#include "permsym/oracle.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

using namespace permsym;

namespace {

SymOpVector<Rational> unit(const MultiIndex& m) { return SymOpVector<Rational>(m.atoms(), m, Rational(1)); }

}  // namespace

TEST(DampingLabels, CountMatchesBasis)
{
  for (int N = 1; N <= 12; ++N) {
    const auto labels = damping_labels(N);
    EXPECT_EQ(labels.size(), basis_dimension(N));
    EXPECT_EQ(labels.front(), (DampingLabel{N, 0, 0}));
    EXPECT_TRUE(std::is_sorted(labels.begin(), labels.end()));
  }
}

TEST(DampingLabels, InvalidLabelRejected)
{
  EXPECT_THROW(right_eigenvector({3, 4, 0}, 3), std::invalid_argument);
  EXPECT_THROW(decay_units({2, 0, 2}, 3), std::invalid_argument);
}

TEST(Eigenvalue, TableValues)
{
  const Rates rates(1.0, 0.25);
  const int N = 7;
  EXPECT_DOUBLE_EQ(eigenvalue({N, 0, 0}, N, rates), 0.0);
  EXPECT_DOUBLE_EQ(eigenvalue({N - 1, 0, 0}, N, rates), -rates.gamma10() / 2);
  EXPECT_DOUBLE_EQ(eigenvalue({N, 3, 0}, N, rates), -3 * rates.gamma10());
  EXPECT_EQ(decay_units({N - 2, 1, 1}, N), Rational(2));
}

TEST(RightEigenvector, Examples)
{
  for (int N = 1; N <= 8; ++N) {
    EXPECT_EQ(right_eigenvector({N, 0, 0}, N), unit({N, 0, 0, 0}));
    SymOpVector<Rational> expected(N);
    expected.add({N, 0, 0, 0}, Rational(-N));
    expected.add({N - 1, 0, 0, 1}, Rational(N));
    EXPECT_EQ(right_eigenvector({N, 1, 0}, N), expected);
  }
}

TEST(RightEigenvector, EigenRelationExact)
{
  for (int N = 1; N <= 12; ++N)
    for (const auto& l : damping_labels(N)) {
      const auto& r = right_eigenvector(l, N);
      ASSERT_EQ(independent_decay(r), r * Rational(-decay_units(l, N))) << to_string(l) << " N=" << N;
      ASSERT_TRUE(satisfies_recurrence(l, N)) << to_string(l) << " N=" << N;
    }
}

TEST(LeftEigenvector, GroundDual)
{
  for (int N = 1; N <= 8; ++N) {
    SymOpVector<Rational> expected(N);
    for (int m = 0; m <= N; ++m) expected.add({N - m, 0, 0, m}, Rational(binomial(N, N - m)));
    EXPECT_EQ(left_eigenvector({N, 0, 0}, N), expected);
  }
}

TEST(LeftEigenvector, Biorthonormal)
{
  for (int N = 1; N <= 10; ++N) {
    const auto labels = damping_labels(N);
    for (const auto& a : labels)
      for (const auto& b : labels)
        ASSERT_EQ(inner_product(left_eigenvector(a, N), right_eigenvector(b, N)), Rational(a == b ? 1 : 0))
            << to_string(a) << " x " << to_string(b) << " N=" << N;
  }
}

TEST(LeftEigenvector, ConcurrentAccessIsConsistent)
{
  const int N = 9;
  std::vector<std::thread> pool;
  std::atomic<int> bad{0};
  for (int w = 0; w < 4; ++w)
    pool.emplace_back([&] {
      for (const auto& l : damping_labels(N))
        if (inner_product(left_eigenvector(l, N), right_eigenvector(l, N)) != 1) ++bad;
    });
  for (auto& t : pool) t.join();
  EXPECT_EQ(bad.load(), 0);
}

TEST(Expand, Examples)
{
  for (int N = 1; N <= 8; ++N) {
    EXPECT_EQ(expand_Q({N, 0, 0, 0}), DampingExpansion<Rational>(N, {N, 0, 0}, Rational(1)));
    DampingExpansion<Rational> e(N);
    e.add({N, 0, 0}, Rational(1));
    e.add({N, 1, 0}, Rational(1, N));
    EXPECT_EQ(expand_Q({N - 1, 0, 0, 1}), e);
  }
}

TEST(Expand, ReconstructionExact)
{
  for (int N = 1; N <= 7; ++N)
    for (const auto& idx : enumerate_basis(N)) ASSERT_EQ(reconstruct(expand_Q(idx)), unit(idx)) << N;
}

TEST(Expand, AgreesWithDualProjection)
{
  const int N = 6;
  for (const auto& idx : enumerate_basis(N)) {
    const auto e = expand_Q(idx);
    for (const auto& l : damping_labels(N)) ASSERT_EQ(e.coeff(l), inner_product(left_eigenvector(l, N), unit(idx)));
  }
}

TEST(EvolveIndependent, IdentityAtZero)
{
  for (const auto& idx : enumerate_basis(4)) {
    const auto v = evolve_independent(idx, 0.0, Rates(1.0, 0.0));
    const auto u = unit(idx).cast<double>();
    for (const auto& m : enumerate_basis(4)) EXPECT_NEAR(v.coeff(m), u.coeff(m), 1e-14);
  }
}

TEST(EvolveIndependent, SingleExcitationDecay)
{
  const Rates rates(1.0, 0.0);
  for (int N = 1; N <= 6; ++N)
    for (double t : {0.3, 1.0, 4.0})
      EXPECT_NEAR(excitation_expectation(evolve_independent({N - 1, 0, 0, 1}, t, rates)), std::exp(-t), 1e-13);
}

TEST(EvolveIndependent, MatchesOracle)
{
  const Rates rates(1.0, 0.0);
  const std::vector<double> times = {0.0, 0.5, 2.0};
  for (int N = 1; N <= 3; ++N)
    for (const auto& idx : enumerate_basis(N)) {
      const auto full = oracle::integrate_expm(oracle::embed(unit(idx)), times, rates);
      for (std::size_t k = 0; k < times.size(); ++k) {
        const auto ours = oracle::embed(evolve_independent(idx, times[k], rates));
        EXPECT_LT((ours.rho - full[k].rho).cwiseAbs().maxCoeff(), 1e-10);
      }
    }
}
