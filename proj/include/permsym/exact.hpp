#pragma once

#include "permsym/damping.hpp"
#include "permsym/linalg.hpp"
#include "permsym/perturb.hpp"
#include "permsym/state_kind.hpp"
#include "permsym/states.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace permsym {

// Largest excitation count on either side of the operators in a label, max(n, N - alpha - n) + delta.
inline int excitation_content(const DampingLabel& l, int N) { return std::max(l.n, N - l.alpha - l.n) + l.delta; }

// Labels with N - alpha = 2n and n + delta <= M_max, ordered by e = n + delta, then n.
inline std::vector<DampingLabel> balanced_labels(int N, int M_max)
{
  if (N < 1) throw std::invalid_argument("balanced_labels: N must be at least 1");
  if (M_max < 0 || M_max > N) throw std::invalid_argument("balanced_labels: need 0 <= M_max <= N");
  std::vector<DampingLabel> out;
  for (int e = 0; e <= M_max; ++e)
    for (int n = 0; n <= e; ++n) {
      const DampingLabel l{N - 2 * n, e - n, n};
      if (l.alpha >= 0 && fits(l, N)) out.push_back(l);
    }
  return out;
}

namespace detail {

inline DampingExpansion<Rational> liouvillian_image(const DampingLabel& l, int N)
{
  const auto& r = right_eigenvector(l, N);
  return expand(collective_decay(r) + independent_decay(r));
}

inline double norm_outside(const DampingExpansion<Rational>& coords, const std::set<DampingLabel>& keep)
{
  double acc = 0.0;
  for (const auto& [l, c] : coords)
    if (!keep.count(l)) acc += std::pow(to_double(c), 2);
  return std::sqrt(acc);
}

}  // namespace detail

// Smallest label set containing the initial support and closed under L, ground first.
inline std::vector<DampingLabel> closure_labels(const SymOpVector<Rational>& initial, int M_max)
{
  const int N = initial.atoms();
  std::set<DampingLabel> seen;
  std::deque<DampingLabel> queue;
  auto visit = [&](const DampingLabel& l) {
    if (seen.insert(l).second) queue.push_back(l);
  };
  visit({N, 0, 0});
  for (const auto& [l, c] : expand(initial)) visit(l);
  while (!queue.empty()) {
    const DampingLabel l = queue.front();
    queue.pop_front();
    if (excitation_content(l, N) > M_max)
      throw TruncationError("closure leaves the M_max = " + std::to_string(M_max) + " label set at " + to_string(l),
                            0.0);
    for (const auto& [m, c] : detail::liouvillian_image(l, N)) visit(m);
  }
  return {seen.begin(), seen.end()};
}

struct RestrictedLiouvillian {
  int N = 0;
  std::vector<DampingLabel> basis;
  Matrix<Rational> independent;  // coefficient of gamma10
  Matrix<Rational> collective;   // coefficient of gamma_c
  Eigen::MatrixXd mat;

  Eigen::MatrixXd at(const Rates& rates) const
  {
    const std::size_t k = basis.size();
    Eigen::MatrixXd m(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        m(i, j) = to_double(independent(i, j)) * rates.gamma10() + to_double(collective(i, j)) * rates.gamma_c;
    return m;
  }

  std::size_t index_of(const DampingLabel& l) const
  {
    auto it = std::find(basis.begin(), basis.end(), l);
    if (it == basis.end()) throw std::out_of_range("label " + to_string(l) + " not in restricted basis");
    return static_cast<std::size_t>(it - basis.begin());
  }
};

// Entries <left(l'), L right(l)>; verifies that the basis is closed under L.
inline RestrictedLiouvillian build_restricted(int N, const std::vector<DampingLabel>& basis, const Rates& rates)
{
  const std::size_t k = basis.size();
  const std::set<DampingLabel> members(basis.begin(), basis.end());
  RestrictedLiouvillian out{N, basis, Matrix<Rational>(k, k), Matrix<Rational>(k, k), {}};
  for (std::size_t j = 0; j < k; ++j) {
    const auto& r = right_eigenvector(basis[j], N);
    const auto li = independent_decay(r);
    const auto lc = collective_decay(r);
    if (detail::norm_outside(expand(li + lc), members) > 0)
      throw std::logic_error("restricted basis is not closed under L at column " + to_string(basis[j]));
    for (std::size_t i = 0; i < k; ++i) {
      const auto& l = left_eigenvector(basis[i], N);
      out.independent(i, j) = inner_product(l, li);
      out.collective(i, j) = inner_product(l, lc);
    }
  }
  out.mat = out.at(rates);
  return out;
}

inline RestrictedLiouvillian build_restricted(int N, int M_max, const Rates& rates)
{
  return build_restricted(N, balanced_labels(N, M_max), rates);
}

// Damping coordinates of the initial state on the restricted basis.
inline Eigen::VectorXd restricted_coordinates(const RestrictedLiouvillian& L, const SymOpVector<Rational>& initial)
{
  const auto coords = expand(initial);
  const double residual = detail::norm_outside(coords, {L.basis.begin(), L.basis.end()});
  if (residual > 0)
    throw TruncationError("initial state has support outside the restricted basis (residual norm " +
                              std::to_string(residual) + ")",
                          residual);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(L.basis.size()));
  for (std::size_t i = 0; i < L.basis.size(); ++i) x(i) = to_double(coords.coeff(L.basis[i]));
  return x;
}

// Picks the balanced basis when it carries the state, else the closure.
inline RestrictedLiouvillian restricted_for(const SymOpVector<Rational>& initial, int M_max, const Rates& rates)
{
  const int N = initial.atoms();
  auto basis = balanced_labels(N, std::min(M_max, N));
  const std::set<DampingLabel> members(basis.begin(), basis.end());
  if (detail::norm_outside(expand(initial), members) > 0) basis = closure_labels(initial, M_max);
  return build_restricted(N, basis, rates);
}

inline std::vector<SymOpVector<double>> evolve_exact(const SymOpVector<Rational>& initial, const std::vector<double>& times,
                                                     int M_max, const Rates& rates)
{
  if (!std::is_sorted(times.begin(), times.end())) throw std::invalid_argument("evolve_exact: times must be sorted");
  const auto L = restricted_for(initial, M_max, rates);
  const Eigen::VectorXd x0 = restricted_coordinates(L, initial);
  std::vector<SymOpVector<double>> out;
  for (double t : times) {
    if (t < 0) throw std::invalid_argument("evolve_exact: negative time");
    const Eigen::VectorXd x = (L.mat * t).exp() * x0;
    DampingExpansion<double> e(L.N);
    for (std::size_t i = 0; i < L.basis.size(); ++i) e.add(L.basis[i], x(i));
    out.push_back(reconstruct(e));
  }
  return out;
}

// Mean excitation number through exp(mat t) on the restricted basis.
inline std::vector<double> p_expm(int M, StateKind kind, int N, const Rates& rates, const std::vector<double>& times)
{
  const auto initial = initial_state(kind, N, M);
  const auto L = restricted_for(initial, M, rates);
  const Eigen::VectorXd x0 = restricted_coordinates(L, initial);
  Eigen::RowVectorXd f(L.basis.size());
  for (std::size_t i = 0; i < L.basis.size(); ++i)
    f(i) = to_double(excitation_expectation(right_eigenvector(L.basis[i], N)));
  std::vector<double> out;
  for (double t : times) {
    if (t < 0) throw std::invalid_argument("p_expm: negative time");
    out.push_back(f * ((L.mat * t).exp() * x0));
  }
  return out;
}

}  // namespace permsym
