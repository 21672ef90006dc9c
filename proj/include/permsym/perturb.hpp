#pragma once

#include "permsym/damping.hpp"
#include "permsym/linalg.hpp"
#include "permsym/state_kind.hpp"
#include "permsym/surd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace permsym {

// Number of excitations carried by a damping label, (N - alpha) + delta.
inline int excitation_order(const DampingLabel& l, int N) { return (N - l.alpha) + l.delta; }

// Labels kept by the M_max truncation, ground first.
inline std::vector<DampingLabel> truncated_labels(int N, int M_max)
{
  if (M_max < 1 || M_max > N) throw std::invalid_argument("truncation order must satisfy 1 <= M_max <= N");
  std::vector<DampingLabel> out;
  for (const auto& l : damping_labels(N))
    if (excitation_order(l, N) <= M_max) out.push_back(l);
  return out;
}

struct DegenerateClass {
  Rational units;  // lambda0 = -gamma10 * units
  std::vector<DampingLabel> members;

  template <class S>
  S eigenvalue0(const BasicRates<S>& rates) const
  {
    return -rates.gamma10() * scalar_cast<S>(units);
  }
};

inline std::string to_string(const DegenerateClass& c)
{
  std::string s = "{";
  for (std::size_t i = 0; i < c.members.size(); ++i) s += (i ? ", " : "") + to_string(c.members[i]);
  return s + "} units " + c.units.str();
}

// Partition of the given labels by zeroth-order eigenvalue, ascending decay.
inline std::vector<DegenerateClass> degenerate_classes(int N, const std::vector<DampingLabel>& labels)
{
  std::map<Rational, std::vector<DampingLabel>> groups;
  for (const auto& l : labels) groups[decay_units(l, N)].push_back(l);
  std::vector<DegenerateClass> out;
  for (auto& [u, members] : groups) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    out.push_back({u, std::move(members)});
  }
  return out;
}

inline std::vector<DegenerateClass> degenerate_classes(int N, int M_max)
{
  return degenerate_classes(N, truncated_labels(N, M_max));
}

// Q L_c Q on the class in units of gamma_c; column = source member, row = target member.
inline Matrix<Rational> perturbation_matrix(const DegenerateClass& cls, int N)
{
  const std::size_t k = cls.members.size();
  std::map<DampingLabel, std::size_t> pos;
  for (std::size_t i = 0; i < k; ++i) pos[cls.members[i]] = i;
  Matrix<Rational> m(k, k);
  auto put = [&](const DampingLabel& target, std::size_t col, const Rational& w) {
    auto it = pos.find(target);
    if (it != pos.end()) m(it->second, col) += w;
  };
  for (std::size_t j = 0; j < k; ++j) {
    const auto& [a, d, n] = cls.members[j];
    put({a + 2, d + 1, n - 1}, j, -Rational((d + 1) * (a - d + 1)));
    put({a, d, n}, j, -(Rational((N - a) * (a + 1)) / 2 + d));
    put({a - 2, d - 1, n + 1}, j, -Rational((n + 1) * (N - a - n + 1)));
  }
  return m;
}

// Same matrix through the dual pairing <left(l'), L_c right(l)>.
inline Matrix<Rational> projected_perturbation_matrix(const DegenerateClass& cls, int N)
{
  const std::size_t k = cls.members.size();
  Matrix<Rational> m(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto image = collective_decay(right_eigenvector(cls.members[j], N));
    for (std::size_t i = 0; i < k; ++i) m(i, j) = inner_product(left_eigenvector(cls.members[i], N), image);
  }
  return m;
}

class DefectiveClassError : public std::runtime_error {
public:
  explicit DefectiveClassError(const std::string& what) : std::runtime_error(what) {}
};

struct PerturbedMode {
  Rational units;                // zeroth order: -gamma10 * units
  Surd shift;                    // first-order shift in units of gamma_c
  DampingExpansion<Surd> vec0;   // right vector, coefficient 1 on its highest-alpha member
  DampingExpansion<Surd> left0;  // dual row

  double lambda1(const Rates& r) const { return -to_double(units) * r.gamma10() + shift.value() * r.gamma_c; }
};

namespace detail {

inline std::vector<PerturbedMode> diagonalize_class(const DegenerateClass& cls, int N)
{
  const std::size_t k = cls.members.size();
  const Matrix<Rational> a = perturbation_matrix(cls, N);
  const auto roots = rational_roots(characteristic_polynomial(a));

  std::vector<std::pair<Surd, int>> spectrum;
  for (const auto& [r, mult] : roots.rational) spectrum.emplace_back(Surd(r), mult);
  for (const auto& [factor, mult] : squarefree_factors(roots.remainder)) {
    if (factor.size() != 3)
      throw std::domain_error("class " + to_string(cls) + " has an irreducible spectrum beyond quadratic");
    auto [p, q] = quadratic_roots(factor);
    spectrum.emplace_back(p, mult);
    spectrum.emplace_back(q, mult);
  }
  std::sort(spectrum.begin(), spectrum.end(),
            [](const auto& x, const auto& y) { return x.first.value() > y.first.value(); });

  // reversed member order makes high-alpha members the free columns
  const Matrix<Surd> as = a.cast<Surd>();
  Matrix<Surd> columns(k, k);
  std::vector<Surd> shifts;
  std::size_t filled = 0;
  for (const auto& [mu, mult] : spectrum) {
    Matrix<Surd> shifted(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) shifted(k - 1 - i, k - 1 - j) = as(i, j) - (i == j ? mu : Surd(0));
    auto null = nullspace(shifted);
    if (null.size() < static_cast<std::size_t>(mult))
      throw DefectiveClassError("defective perturbation matrix on class " + to_string(cls) + " at shift " +
                                mu.str());
    for (const auto& v : null) {
      std::size_t lead = k;
      for (std::size_t i = k; i-- > 0;)
        if (!is_zero(v[i])) {
          lead = i;
          break;
        }
      const Surd norm = v[lead];
      for (std::size_t i = 0; i < k; ++i) columns(i, filled) = v[k - 1 - i] / norm;
      shifts.push_back(mu);
      ++filled;
    }
  }
  const Matrix<Surd> rows = inverse(columns);

  std::vector<PerturbedMode> out;
  for (std::size_t m = 0; m < k; ++m) {
    PerturbedMode mode{cls.units, shifts[m], DampingExpansion<Surd>(N), DampingExpansion<Surd>(N)};
    for (std::size_t i = 0; i < k; ++i) {
      mode.vec0.add(cls.members[i], columns(i, m));
      mode.left0.add(cls.members[i], rows(m, i));
    }
    out.push_back(std::move(mode));
  }
  return out;
}

}  // namespace detail

inline std::vector<PerturbedMode> perturbed_modes(int N, const std::vector<DegenerateClass>& classes)
{
  std::vector<PerturbedMode> out;
  for (const auto& cls : classes) {
    auto modes = detail::diagonalize_class(cls, N);
    out.insert(out.end(), std::make_move_iterator(modes.begin()), std::make_move_iterator(modes.end()));
  }
  return out;
}

inline std::vector<PerturbedMode> perturbed_modes(int N, int M_max)
{
  if (M_max > 4) throw std::invalid_argument("perturbed_modes: M_max above 4 is not supported");
  return perturbed_modes(N, degenerate_classes(N, M_max));
}

enum class TruncationPolicy { strict, project };

class TruncationError : public std::runtime_error {
public:
  TruncationError(const std::string& what, double residual) : std::runtime_error(what), residual_norm(residual) {}
  double residual_norm;
};

struct ModeWeights {
  std::vector<Surd> weights;  // aligned with the mode list
  double residual_norm = 0.0; // Euclidean norm of damping coordinates outside the truncation
};

inline ModeWeights mode_weights(const std::vector<PerturbedMode>& modes, const SymOpVector<Rational>& initial,
                                int M_max, TruncationPolicy policy = TruncationPolicy::strict)
{
  const int N = initial.atoms();
  const auto coords = expand(initial);
  ModeWeights out;
  double dropped = 0.0;
  for (const auto& [l, c] : coords)
    if (excitation_order(l, N) > M_max) dropped += std::pow(to_double(c), 2);
  out.residual_norm = std::sqrt(dropped);
  if (dropped > 0 && policy == TruncationPolicy::strict)
    throw TruncationError("initial state has support outside the M_max = " + std::to_string(M_max) +
                              " truncation (residual norm " + std::to_string(out.residual_norm) + ")",
                          out.residual_norm);
  for (const auto& mode : modes) {
    Surd w(0);
    for (const auto& [l, c] : mode.left0) w += c * Surd(coords.coeff(l));
    out.weights.push_back(w);
  }
  return out;
}

struct PerturbativeEvolution {
  SymOpVector<double> state;
  double residual_norm = 0.0;
};

inline PerturbativeEvolution evolve_perturbative(const SymOpVector<Rational>& initial, double t, int M_max,
                                                 const Rates& rates,
                                                 TruncationPolicy policy = TruncationPolicy::strict)
{
  if (t < 0) throw std::invalid_argument("evolve_perturbative: negative time");
  const int N = initial.atoms();
  const auto modes = perturbed_modes(N, M_max);
  const auto w = mode_weights(modes, initial, M_max, policy);
  DampingExpansion<double> coords(N);
  for (std::size_t m = 0; m < modes.size(); ++m) {
    if (is_zero(w.weights[m])) continue;
    const double amp = w.weights[m].value() * std::exp(modes[m].lambda1(rates) * t);
    coords.add_scaled(modes[m].vec0.cast<double>(), amp);
  }
  return {reconstruct(coords), w.residual_norm};
}

// Mean excitation number from the printed first-order forms; M <= 4.
inline double p_perturbative(int M, StateKind kind, int N, const Rates& rates, double t)
{
  if (M < 1 || M > N) throw std::invalid_argument("p_perturbative: need 1 <= M <= N");
  if (M > 4) throw std::domain_error("p_perturbative: M above 4 is unsupported");
  const double sub = std::exp(-(rates.Gamma - rates.gamma_c) * t);
  const double super = std::exp(-(rates.Gamma + (N - 1) * rates.gamma_c) * t);
  if (kind == StateKind::mixed) return M * ((N - 1.0) / N * sub + super / N);
  return M * ((N - M + 1.0) / N * super + (M - 1.0) / N * sub);
}

}  // namespace permsym
