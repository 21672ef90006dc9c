#include "permsym/perturb.hpp"
#include "permsym/states.hpp"
#include "permsym/verify.hpp"

#include <gtest/gtest.h>

using namespace permsym;

namespace {

const DegenerateClass& class_with(const std::vector<DegenerateClass>& classes, const DampingLabel& l)
{
  for (const auto& c : classes)
    if (std::find(c.members.begin(), c.members.end(), l) != c.members.end()) return c;
  throw std::out_of_range("label not in any class");
}

}  // namespace

TEST(TruncatedLabels, Dimension)
{
  for (int N = 4; N <= 9; ++N)
    for (int M = 1; M <= 4; ++M) {
      std::size_t total = 0;
      for (const auto& c : degenerate_classes(N, M)) total += c.members.size();
      EXPECT_EQ(total, static_cast<std::size_t>((M + 1) * (M + 2) * (M + 3) / 6));
    }
}

TEST(TruncatedLabels, Errors)
{
  EXPECT_THROW(truncated_labels(3, 4), std::invalid_argument);
  EXPECT_THROW(truncated_labels(3, 0), std::invalid_argument);
  EXPECT_THROW(perturbed_modes(8, 5), std::invalid_argument);
}

TEST(DegenerateClasses, FirstOrder)
{
  const int N = 7;
  const auto classes = degenerate_classes(N, 1);
  ASSERT_EQ(classes.size(), 3u);
  EXPECT_EQ(classes[0].members, (std::vector<DampingLabel>{{N, 0, 0}}));
  EXPECT_EQ(classes[1].members, (std::vector<DampingLabel>{{N - 1, 0, 0}, {N - 1, 0, 1}}));
  EXPECT_EQ(classes[2].members, (std::vector<DampingLabel>{{N, 1, 0}}));
}

TEST(DegenerateClasses, UnitDecayClass)
{
  const int N = 8;
  const auto classes = degenerate_classes(N, 3);
  const auto& c = class_with(classes, {N, 1, 0});
  EXPECT_EQ(c.units, Rational(1));
  EXPECT_NE(std::find(c.members.begin(), c.members.end(), DampingLabel{N - 2, 0, 1}), c.members.end());
  EXPECT_DOUBLE_EQ(c.eigenvalue0(Rates(1.0, 0.25)), -0.75);
}

TEST(PerturbationMatrix, GroundIsZero)
{
  const auto classes = degenerate_classes(6, 3);
  const auto m = perturbation_matrix(classes.front(), 6);
  ASSERT_EQ(m.rows(), 1u);
  EXPECT_EQ(m(0, 0), Rational(0));
}

TEST(PerturbationMatrix, FormulaEqualsDualProjection)
{
  for (int N = 4; N <= 9; ++N)
    for (const auto& c : degenerate_classes(N, std::min(N, 4)))
      EXPECT_TRUE(perturbation_matrix(c, N) == projected_perturbation_matrix(c, N)) << to_string(c) << " N=" << N;
}

TEST(PerturbedModes, UnitDecayShifts)
{
  for (int N = 4; N <= 10; ++N) {
    const auto modes = perturbed_modes(N, 3);
    std::vector<Surd> shifts;
    for (const auto& m : modes)
      if (m.units == 1 && m.vec0.contains({N, 1, 0})) shifts.push_back(m.shift);
    ASSERT_EQ(shifts.size(), 2u);
    EXPECT_TRUE((shifts[0] == Surd(0) && shifts[1] == Surd(-N)) || (shifts[1] == Surd(0) && shifts[0] == Surd(-N)));
  }
}

TEST(PerturbedModes, PrintedTable)
{
  for (int N = 4; N <= 10; ++N) {
    const auto modes = perturbed_modes(N, 3);
    ASSERT_EQ(modes.size(), 20u);
    for (const auto& t : verify::printed_mode_table(N))
      EXPECT_TRUE(std::any_of(modes.begin(), modes.end(), [&](const auto& m) { return verify::same_mode(m, t, N); }))
          << t.name << " N=" << N;
  }
}

TEST(PerturbedModes, NuPairIsIrrational)
{
  const int N = 5;
  int irrational = 0;
  for (const auto& m : perturbed_modes(N, 3))
    if (!m.shift.is_rational()) {
      ++irrational;
      EXPECT_EQ(m.shift.radicand(), 33);
    }
  EXPECT_EQ(irrational, 2);
}

TEST(PerturbedModes, FourthOrderResidualAndDuality)
{
  for (int N = 4; N <= 8; ++N) {
    const auto classes = degenerate_classes(N, 4);
    for (const auto& c : classes) {
      const auto a = perturbation_matrix(c, N).cast<Surd>();
      const auto modes = perturbed_modes(N, std::vector<DegenerateClass>{c});
      ASSERT_EQ(modes.size(), c.members.size());
      for (std::size_t p = 0; p < modes.size(); ++p) {
        for (std::size_t i = 0; i < c.members.size(); ++i) {
          Surd acc(0);
          for (std::size_t j = 0; j < c.members.size(); ++j) acc += a(i, j) * modes[p].vec0.coeff(c.members[j]);
          EXPECT_TRUE(acc == modes[p].shift * modes[p].vec0.coeff(c.members[i])) << to_string(c);
        }
        for (std::size_t q = 0; q < modes.size(); ++q) {
          Surd dot(0);
          for (const auto& l : c.members) dot += modes[p].left0.coeff(l) * modes[q].vec0.coeff(l);
          EXPECT_TRUE(dot == Surd(p == q ? 1 : 0));
        }
      }
    }
  }
}

TEST(EvolvePerturbative, SingleOrderMissesSubradiantSplit)
{
  const Rates rates(1.0, 0.05);
  const auto e = evolve_perturbative(mixed_state(5, 1), 2.0, 1, rates);
  EXPECT_NEAR(excitation_expectation(e.state), std::exp(-2.0), 1e-12);
  EXPECT_GT(std::abs(excitation_expectation(e.state) - p_perturbative(1, StateKind::mixed, 5, rates, 2.0)), 1e-4);
}

TEST(SquarefreeFactors, RepeatedQuadratic)
{
  // (x^2 + 12 x + 23)^2 (x + 1)
  std::vector<Rational> p = {23, 12, 1};
  std::vector<Rational> sq(5, Rational(0)), full(6, Rational(0));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) sq[i + j] += p[i] * p[j];
  for (std::size_t i = 0; i < 5; ++i) {
    full[i] += sq[i];
    full[i + 1] += sq[i];
  }
  const auto f = squarefree_factors(full);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].first, (std::vector<Rational>{1, 1}));
  EXPECT_EQ(f[0].second, 1);
  EXPECT_EQ(f[1].first, p);
  EXPECT_EQ(f[1].second, 2);
}

TEST(ModeWeights, PrintedThreeExcitationWeights)
{
  for (int N = 4; N <= 10; ++N) {
    const auto modes = perturbed_modes(N, 3);
    const auto table = verify::printed_mode_table(N);
    for (StateKind kind : {StateKind::mixed, StateKind::dicke}) {
      const auto w = mode_weights(modes, initial_state(kind, N, 3), 3, TruncationPolicy::project);
      for (const auto& [name, value] : verify::printed_weights(kind, N)) {
        const auto& t = *std::find_if(table.begin(), table.end(), [&](const auto& x) { return x.name == name; });
        for (std::size_t i = 0; i < modes.size(); ++i)
          if (verify::same_mode(modes[i], t, N)) EXPECT_TRUE(w.weights[i] == value) << name << " N=" << N;
      }
    }
  }
}

TEST(ModeWeights, StrictPolicyReportsResidual)
{
  const int N = 6;
  const auto modes = perturbed_modes(N, 3);
  EXPECT_NO_THROW(mode_weights(modes, mixed_state(N, 3), 3));
  try {
    mode_weights(modes, dicke_state(N, 3), 3);
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_GT(e.residual_norm, 0.0);
  }
  EXPECT_GT(mode_weights(modes, dicke_state(N, 3), 3, TruncationPolicy::project).residual_norm, 0.0);
}

TEST(EvolvePerturbative, InitialReconstruction)
{
  const Rates rates(1.0, 0.1);
  for (int N = 3; N <= 7; ++N)
    for (int M = 1; M <= 3; ++M) {
      const auto initial = mixed_state(N, M);
      const auto e = evolve_perturbative(initial, 0.0, M, rates);
      EXPECT_EQ(e.residual_norm, 0.0);
      for (const auto& idx : enumerate_basis(N)) EXPECT_NEAR(e.state.coeff(idx), to_double(initial.coeff(idx)), 1e-12);
    }
}

// The unit-decay class needs (N-2,0)_1, so the truncation order is at least 2.
TEST(EvolvePerturbative, MatchesPrintedExcitationNumber)
{
  const Rates rates(1.0, 0.05);
  for (int N = 4; N <= 8; ++N)
    for (int M = 1; M <= 4; ++M)
      for (StateKind kind : {StateKind::mixed, StateKind::dicke})
        for (double t : {0.0, 0.7, 3.0}) {
          const int order = std::max(M, 2);
          const auto e = evolve_perturbative(initial_state(kind, N, M), t, order, rates, TruncationPolicy::project);
          EXPECT_NEAR(excitation_expectation(e.state), p_perturbative(M, kind, N, rates, t), 1e-12)
              << to_string(kind) << " N=" << N << " M=" << M << " t=" << t;
        }
}

TEST(PPerturbative, Limits)
{
  for (int N = 2; N <= 9; ++N) {
    for (int M = 1; M <= std::min(N, 4); ++M) {
      EXPECT_DOUBLE_EQ(p_perturbative(M, StateKind::mixed, N, Rates(1.0, 0.3), 0.0), M);
      for (StateKind kind : {StateKind::mixed, StateKind::dicke})
        EXPECT_NEAR(p_perturbative(M, kind, N, Rates(1.0, 0.0), 1.3), M * std::exp(-1.3), 1e-14);
    }
    const Rates rates(1.0, 0.2);
    EXPECT_NEAR(p_perturbative(1, StateKind::dicke, N, rates, 0.8), std::exp(-(1.0 + (N - 1) * 0.2) * 0.8), 1e-15);
  }
  EXPECT_THROW(p_perturbative(5, StateKind::mixed, 8, Rates(1.0, 0.2), 1.0), std::domain_error);
}
