#pragma once

#include "permsym/symspace.hpp"

#include <cmath>
#include <compare>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

namespace permsym {

// Eigenvector label of L_i: alpha = n00 + n11, delta, and n = n10.
struct DampingLabel {
  int alpha = 0;
  int delta = 0;
  int n = 0;

  friend bool operator==(const DampingLabel&, const DampingLabel&) = default;
  // ground label (N,0)_0 first
  friend std::strong_ordering operator<=>(const DampingLabel& a, const DampingLabel& b)
  {
    return std::make_tuple(-a.alpha, a.delta, a.n) <=> std::make_tuple(-b.alpha, b.delta, b.n);
  }
};

inline bool fits(const DampingLabel& l, int N)
{
  return l.alpha >= 0 && l.alpha <= N && l.delta >= 0 && l.delta <= l.alpha && l.n >= 0 &&
         l.n <= N - l.alpha;
}

inline std::string to_string(const DampingLabel& l)
{
  return "(" + std::to_string(l.alpha) + "," + std::to_string(l.delta) + ")_" + std::to_string(l.n);
}

template <class S = Rational>
using DampingExpansion = SparseVector<DampingLabel, S>;

inline void require_label(const DampingLabel& l, int N)
{
  if (!fits(l, N)) throw std::invalid_argument("invalid damping label " + to_string(l));
}

// All labels for N atoms, ground first.
inline std::vector<DampingLabel> damping_labels(int N)
{
  if (N < 1) throw std::invalid_argument("damping_labels: N must be at least 1");
  std::vector<DampingLabel> out;
  for (int a = N; a >= 0; --a)
    for (int d = 0; d <= a; ++d)
      for (int n = 0; n <= N - a; ++n) out.push_back({a, d, n});
  return out;
}

// (N - alpha)/2 + delta, so that lambda = -gamma10 * units.
inline Rational decay_units(const DampingLabel& l, int N)
{
  require_label(l, N);
  return Rational(N - l.alpha) / 2 + l.delta;
}

template <class S>
S eigenvalue(const DampingLabel& l, int N, const BasicRates<S>& rates)
{
  return -rates.gamma10() * scalar_cast<S>(decay_units(l, N));
}

namespace detail {

inline SymOpVector<Rational> build_right(const DampingLabel& l, int N)
{
  const int a = l.alpha, d = l.delta, n = l.n;
  const Integer pre = binomial(N, a) * binomial(N - a, n) * binomial(a, d) * sign_power(d);
  SymOpVector<Rational> v(N);
  for (int j = 0; j <= d; ++j)
    v.add({a - j, N - a - n, n, j}, Rational(pre * binomial(d, j) * sign_power(j)));
  return v;
}

inline SymOpVector<Rational> build_left(const DampingLabel& l, int N)
{
  const int a = l.alpha, d = l.delta, n = l.n;
  SymOpVector<Rational> v(N);
  for (int j = d; j <= a; ++j) v.add({a - j, N - a - n, n, j}, Rational(binomial(a - d, a - j)));
  return v;
}

// Concurrent readers, idempotent fills; entries are never erased so references stay valid.
class EigenvectorCache {
public:
  const SymOpVector<Rational>& right(const DampingLabel& l, int N) { return get(right_, l, N, true); }
  const SymOpVector<Rational>& left(const DampingLabel& l, int N) { return get(left_, l, N, false); }

  static EigenvectorCache& instance()
  {
    static EigenvectorCache cache;
    return cache;
  }

private:
  using Key = std::pair<int, DampingLabel>;
  using Store = std::map<Key, std::unique_ptr<const SymOpVector<Rational>>>;

  const SymOpVector<Rational>& get(Store& store, const DampingLabel& l, int N, bool is_right)
  {
    const Key key{N, l};
    {
      std::shared_lock lock(mutex_);
      auto it = store.find(key);
      if (it != store.end()) return *it->second;
    }
    auto fresh = std::make_unique<const SymOpVector<Rational>>(is_right ? build_right(l, N) : build_left(l, N));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = store.try_emplace(key, std::move(fresh));
    return *it->second;
  }

  std::shared_mutex mutex_;
  Store right_;
  Store left_;
};

}  // namespace detail

inline const SymOpVector<Rational>& right_eigenvector(const DampingLabel& l, int N)
{
  require_label(l, N);
  return detail::EigenvectorCache::instance().right(l, N);
}

inline const SymOpVector<Rational>& left_eigenvector(const DampingLabel& l, int N)
{
  require_label(l, N);
  return detail::EigenvectorCache::instance().left(l, N);
}

// Checks r_{j+1} (j+1) = (N/2 + (j - (alpha - j))/2 + lambda/gamma10) r_j along the eigenvector.
inline bool satisfies_recurrence(const DampingLabel& l, int N)
{
  const auto& v = right_eigenvector(l, N);
  const Rational ratio = -decay_units(l, N);
  for (int j = 0; j < l.alpha; ++j) {
    const MultiIndex cur{l.alpha - j, N - l.alpha - l.n, l.n, j};
    const MultiIndex nxt{l.alpha - j - 1, N - l.alpha - l.n, l.n, j + 1};
    const Rational factor = (Rational(N) / 2 + Rational(j - (l.alpha - j)) / 2 + ratio) / (j + 1);
    if (v.coeff(nxt) != factor * v.coeff(cur)) return false;
  }
  return true;
}

// Q^{alpha-n11, N-alpha-n; n, n11} = sum_k c_k (alpha,k)_n
inline DampingExpansion<Rational> expand_Q(const MultiIndex& idx)
{
  if (!idx.valid()) throw std::invalid_argument("expand_Q: negative occupation");
  const int N = idx.atoms();
  const int a = idx.n00 + idx.n11, n = idx.n10, m = idx.n11;
  const Rational inv = Rational(1) / Rational(binomial(a, m) * binomial(N - a, n) * binomial(N, a));
  DampingExpansion<Rational> out(N);
  for (int k = 0; k <= m; ++k) out.add({a, k, n}, inv * Rational(binomial(a - k, a - m)));
  return out;
}

inline DampingExpansion<Rational> expand(const SymOpVector<Rational>& v)
{
  DampingExpansion<Rational> out(v.atoms());
  for (const auto& [idx, c] : v) out.add_scaled(expand_Q(idx), c);
  return out;
}

template <class S>
SymOpVector<S> reconstruct(const DampingExpansion<S>& e)
{
  SymOpVector<S> out(e.atoms());
  for (const auto& [l, c] : e) {
    if constexpr (std::is_same_v<S, Rational>)
      out.add_scaled(right_eigenvector(l, e.atoms()), c);
    else
      out.add_scaled(right_eigenvector(l, e.atoms()).template cast<S>(), c);
  }
  return out;
}

// Exact evolution under L_i alone starting from a single Q.
inline SymOpVector<double> evolve_independent(const MultiIndex& idx, double t, const Rates& rates)
{
  if (t < 0) throw std::invalid_argument("evolve_independent: negative time");
  if (!idx.valid()) throw std::invalid_argument("evolve_independent: negative occupation");
  const int N = idx.atoms();
  const int a = idx.n00 + idx.n11, n = idx.n10, m = idx.n11;
  const double g = rates.gamma10();
  const double envelope = std::exp(-0.5 * (N - a) * g * t);
  const Rational norm = Rational(1) / Rational(binomial(a, m));
  SymOpVector<double> out(N);
  for (int i = 0; i <= m; ++i) {
    double d = 0.0;
    for (int j = i; j <= m; ++j) {
      const Rational w = norm * Rational(binomial(a - j, a - m) * binomial(a, j) * binomial(j, i)) *
                         sign_power(i + j);
      d += to_double(w) * std::exp(-j * g * t);
    }
    out.add({a - i, N - a - n, n, i}, envelope * d);
  }
  return out;
}

}  // namespace permsym
