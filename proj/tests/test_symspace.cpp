#include "permsym/oracle.hpp"
#include "permsym/symspace.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace permsym;

namespace {

SymOpVector<Rational> unit(const MultiIndex& m) { return SymOpVector<Rational>(m.atoms(), m, Rational(1)); }

SymOpVector<Rational> random_vector(int N, std::mt19937& rng)
{
  const auto basis = enumerate_basis(N);
  std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
  std::uniform_int_distribution<int> coeff(-4, 4);
  SymOpVector<Rational> v(N);
  for (int k = 0; k < 5; ++k) v.add(basis[pick(rng)], Rational(coeff(rng)));
  return v;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST(EnumerateBasis, Dimensions)
{
  EXPECT_EQ(enumerate_basis(1).size(), 4u);
  EXPECT_EQ(enumerate_basis(3).size(), 20u);
  EXPECT_EQ(enumerate_basis(10).size(), 286u);
  for (int N = 1; N <= 12; ++N) {
    const auto b = enumerate_basis(N);
    EXPECT_EQ(b.size(), static_cast<std::size_t>((N + 1) * (N + 2) * (N + 3) / 6));
    EXPECT_EQ(std::set<MultiIndex>(b.begin(), b.end()).size(), b.size());
    for (const auto& m : b) EXPECT_TRUE(fits(m, N));
    EXPECT_EQ(b.front(), (MultiIndex{N, 0, 0, 0}));
  }
}

TEST(ApplyLadder, WeightedShift)
{
  const auto a = apply_ladder(Dyad::d11, Dyad::d10, Side::left, unit({1, 0, 2, 0}));
  EXPECT_EQ(a, SymOpVector<Rational>(3, {1, 0, 1, 1}, Rational(2)));
  const auto b = apply_ladder(Dyad::d00, Dyad::d11, Side::left, unit({0, 0, 0, 2}));
  EXPECT_EQ(b, SymOpVector<Rational>(2, {1, 0, 0, 1}, Rational(2)));
}

TEST(ApplyLadder, AbsentLabelAnnihilates)
{
  EXPECT_TRUE(apply_ladder(Dyad::d11, Dyad::d01, Side::left, unit({2, 0, 1, 1})).empty());
  // right side removes a factor of type `to`
  EXPECT_TRUE(apply_ladder(Dyad::d11, Dyad::d00, Side::right, unit({3, 0, 0, 0})).empty());
}

TEST(ApplyLadder, RightSideIsAdjointUnderInnerProduct)
{
  std::mt19937 rng(3);
  const std::array<Dyad, 4> dyads = {Dyad::d00, Dyad::d01, Dyad::d10, Dyad::d11};
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_vector(3, rng), b = random_vector(3, rng);
    for (Dyad to : dyads)
      for (Dyad from : dyads)
        EXPECT_EQ(inner_product(a, apply_ladder(to, from, Side::left, b)),
                  inner_product(apply_ladder(to, from, Side::right, a), b));
  }
}

TEST(IndependentDecay, GroundIsStationary)
{
  for (int N = 1; N <= 6; ++N) EXPECT_TRUE(independent_decay(unit({N, 0, 0, 0})).empty());
}

TEST(IndependentDecay, SingleExcitation)
{
  for (int N = 1; N <= 6; ++N) {
    SymOpVector<Rational> expected(N);
    expected.add({N, 0, 0, 0}, Rational(1));
    expected.add({N - 1, 0, 0, 1}, Rational(-1));
    EXPECT_EQ(independent_decay(unit({N - 1, 0, 0, 1})), expected);
  }
}

TEST(IndependentDecay, MatchesFullSpace)
{
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto v = random_vector(4, rng);
    const auto full = oracle::embed(v);
    EXPECT_LT(max_abs(oracle::embed(independent_decay(v)).rho - oracle::independent_part(4, full.rho)), 1e-12);
  }
}

TEST(CollectiveDecay, GroundIsStationary)
{
  for (int N = 1; N <= 6; ++N) EXPECT_TRUE(collective_decay(unit({N, 0, 0, 0})).empty());
}

TEST(CollectiveDecay, TwoExcitedAtomsMatchFullSpace)
{
  const auto v = unit({0, 0, 0, 2});
  EXPECT_LT(max_abs(oracle::embed(collective_decay(v)).rho - oracle::collective_part(2, oracle::embed(v).rho)), 1e-14);
}

TEST(CollectiveDecay, RandomStatesMatchFullSpace)
{
  std::mt19937 rng(5);
  for (int N = 1; N <= 4; ++N)
    for (int trial = 0; trial < 5; ++trial) {
      const auto v = random_vector(N, rng);
      EXPECT_LT(max_abs(oracle::embed(collective_decay(v)).rho - oracle::collective_part(N, oracle::embed(v).rho)),
                1e-12);
    }
}

TEST(CollectiveDecay, EveryTermMatters)
{
  SymOpVector<Rational> v(3);
  int k = 1;
  for (const auto& m : enumerate_basis(3)) v.add(m, Rational(k++));
  const auto reference = collective_decay(v);
  for (std::size_t k = 0; k < kCollectiveTerms.size(); ++k) {
    std::vector<CollectiveTerm> terms(kCollectiveTerms.begin(), kCollectiveTerms.end());
    terms[k].num = -terms[k].num;
    EXPECT_NE(collective_decay(v, std::span<const CollectiveTerm>(terms)), reference) << "term " << k;
  }
}

TEST(ApplyL, CombinesRates)
{
  std::mt19937 rng(2);
  const auto v = random_vector(4, rng);
  const BasicRates<Rational> rates(Rational(1), Rational(1, 4));
  EXPECT_EQ(apply_L(v, rates), independent_decay(v) * Rational(3, 4) + collective_decay(v) * Rational(1, 4));
}

TEST(InnerProduct, OverlapWeights)
{
  EXPECT_EQ(inner_product(unit({5, 0, 0, 0}), unit({5, 0, 0, 0})), Rational(1));
  EXPECT_EQ(inner_product(unit({2, 0, 0, 1}), unit({2, 0, 0, 1})), Rational(1, 3));
  EXPECT_EQ(inner_product(unit({2, 0, 0, 1}), unit({2, 1, 0, 0})), Rational(0));
  EXPECT_EQ(inner_product(unit({1, 1, 0, 1}), unit({1, 0, 1, 1})), Rational(0));
}

TEST(InnerProduct, MatchesFullSpaceTrace)
{
  std::mt19937 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_vector(3, rng), b = random_vector(3, rng);
    // entrywise pairing of the embedded matrices
    const auto fa = oracle::embed(a), fb = oracle::embed(b);
    const double full = (fa.rho.conjugate().cwiseProduct(fb.rho)).sum().real();
    EXPECT_NEAR(full, to_double(inner_product(a, b)), 1e-12);
  }
}

TEST(Trace, DiagonalLabelsOnly)
{
  EXPECT_EQ(trace(unit({4, 0, 0, 0})), Rational(1));
  EXPECT_EQ(trace(unit({2, 0, 0, 2})), Rational(1));
  EXPECT_EQ(trace(unit({2, 1, 0, 1})), Rational(0));
  EXPECT_EQ(trace(unit({2, 0, 1, 1})), Rational(0));
  for (int N = 1; N <= 5; ++N)
    for (int M = 0; M <= N; ++M) EXPECT_NEAR(oracle::embed(unit({N - M, 0, 0, M})).rho.trace().real(), 1.0, 1e-12);
}

TEST(ExcitationExpectation, Examples)
{
  EXPECT_EQ(excitation_expectation(unit({6, 0, 0, 0})), Rational(0));
  for (int M = 0; M <= 5; ++M) EXPECT_EQ(excitation_expectation(unit({5 - M, 0, 0, M})), Rational(M));
}

TEST(CollectiveMaps, MatchFullSpace)
{
  std::mt19937 rng(8);
  for (int N = 1; N <= 4; ++N)
    for (int trial = 0; trial < 3; ++trial) {
      const auto v = random_vector(N, rng);
      const auto full = oracle::embed(v);
      for (auto m : kCollectiveMaps)
        EXPECT_LT(max_abs(oracle::embed(apply_collective_map(m, v)).rho - oracle::apply_collective_map(m, N, full.rho)),
                  1e-12)
            << to_string(m) << " N=" << N;
    }
}
