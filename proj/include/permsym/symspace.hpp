#pragma once

#include "permsym/rational.hpp"
#include "permsym/sparse_vector.hpp"

#include <array>
#include <compare>
#include <span>
#include <stdexcept>
#include <string_view>
#include <tuple>
#include <vector>

namespace permsym {

// Single-atom dyad |m><n| labelled by mn.
enum class Dyad { d00, d01, d10, d11 };

// Which factor a ladder map acts on: Q itself or its dual partner.
enum class Side { left, right };

// Occupation numbers (n00, n01, n10, n11) of a symmetrized product of dyads.
struct MultiIndex {
  int n00 = 0;
  int n01 = 0;
  int n10 = 0;
  int n11 = 0;

  int atoms() const { return n00 + n01 + n10 + n11; }
  bool valid() const { return n00 >= 0 && n01 >= 0 && n10 >= 0 && n11 >= 0; }

  int& operator[](Dyad d)
  {
    switch (d) {
      case Dyad::d00: return n00;
      case Dyad::d01: return n01;
      case Dyad::d10: return n10;
      default: return n11;
    }
  }
  int operator[](Dyad d) const { return const_cast<MultiIndex&>(*this)[d]; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  // ground state first, then by (n11, n10, n01)
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b)
  {
    return std::tie(a.n11, a.n10, a.n01, a.n00) <=> std::tie(b.n11, b.n10, b.n01, b.n00);
  }
};

inline bool fits(const MultiIndex& m, int atoms) { return m.valid() && m.atoms() == atoms; }

template <class S = Rational>
using SymOpVector = SparseVector<MultiIndex, S>;

template <class S>
struct BasicRates {
  S Gamma;
  S gamma_c;

  BasicRates(S total, S collective) : Gamma(std::move(total)), gamma_c(std::move(collective))
  {
    if (!(Gamma > 0)) throw std::invalid_argument("Gamma must be positive");
    if (gamma_c < 0 || gamma_c > Gamma)
      throw std::invalid_argument("gamma_c must satisfy 0 <= gamma_c <= Gamma");
  }
  S gamma10() const { return Gamma - gamma_c; }

  template <class T>
  BasicRates<T> cast() const
  {
    return BasicRates<T>(scalar_cast<T>(Gamma), scalar_cast<T>(gamma_c));
  }
};

using Rates = BasicRates<double>;

inline Rates rates_from_ratio(double ratio, double Gamma = 1.0) { return Rates(Gamma, ratio * Gamma); }

// (N+1)(N+2)(N+3)/6 indices, ground state first.
inline std::vector<MultiIndex> enumerate_basis(int N)
{
  if (N < 1) throw std::invalid_argument("enumerate_basis: N must be at least 1");
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>((N + 1) * (N + 2) * (N + 3) / 6));
  for (int n11 = 0; n11 <= N; ++n11)
    for (int n10 = 0; n10 <= N - n11; ++n10)
      for (int n01 = 0; n01 <= N - n11 - n10; ++n01)
        out.push_back({N - n11 - n10 - n01, n01, n10, n11});
  return out;
}

inline std::size_t basis_dimension(int N)
{
  return static_cast<std::size_t>((N + 1) * (N + 2) * (N + 3) / 6);
}

// Collective map A(to <- from). Left: n_from -> n_from - 1, n_to + 1, weight n_from.
// Right (dual): n_to -> n_to - 1, n_from + 1, weight n_to.
template <class S>
SymOpVector<S> apply_ladder(Dyad to, Dyad from, Side side, const SymOpVector<S>& v)
{
  const Dyad lose = side == Side::left ? from : to;
  const Dyad gain = side == Side::left ? to : from;
  SymOpVector<S> out(v.atoms());
  for (const auto& [idx, c] : v) {
    const int w = idx[lose];
    if (w == 0) continue;
    MultiIndex m = idx;
    m[lose] -= 1;
    m[gain] += 1;
    out.add(m, c * S(w));
  }
  return out;
}

struct Ladder {
  Dyad to;
  Dyad from;
};

// weight * outer(inner(v)); weight = num/den in units of the collective rate.
struct CollectiveTerm {
  int num;
  int den;
  Ladder outer;
  Ladder inner;
};

// J- rho J+  -  (J+ J- rho + rho J+ J-)/2 as twelve ladder compositions.
inline constexpr std::array<CollectiveTerm, 12> kCollectiveTerms = {{
    {1, 1, {Dyad::d00, Dyad::d10}, {Dyad::d10, Dyad::d11}},
    {1, 1, {Dyad::d00, Dyad::d10}, {Dyad::d00, Dyad::d01}},
    {1, 1, {Dyad::d01, Dyad::d11}, {Dyad::d10, Dyad::d11}},
    {1, 1, {Dyad::d01, Dyad::d11}, {Dyad::d00, Dyad::d01}},
    {-1, 2, {Dyad::d10, Dyad::d00}, {Dyad::d00, Dyad::d10}},
    {-1, 2, {Dyad::d10, Dyad::d00}, {Dyad::d01, Dyad::d11}},
    {-1, 2, {Dyad::d11, Dyad::d01}, {Dyad::d00, Dyad::d10}},
    {-1, 2, {Dyad::d11, Dyad::d01}, {Dyad::d01, Dyad::d11}},
    {-1, 2, {Dyad::d11, Dyad::d10}, {Dyad::d10, Dyad::d11}},
    {-1, 2, {Dyad::d11, Dyad::d10}, {Dyad::d00, Dyad::d01}},
    {-1, 2, {Dyad::d01, Dyad::d00}, {Dyad::d10, Dyad::d11}},
    {-1, 2, {Dyad::d01, Dyad::d00}, {Dyad::d00, Dyad::d01}},
}};

// L_i at unit rate gamma10.
template <class S>
SymOpVector<S> independent_decay(const SymOpVector<S>& v)
{
  SymOpVector<S> out = apply_ladder(Dyad::d00, Dyad::d11, Side::left, v);
  out -= apply_ladder(Dyad::d11, Dyad::d11, Side::left, v);
  SymOpVector<S> half = apply_ladder(Dyad::d10, Dyad::d10, Side::left, v);
  half += apply_ladder(Dyad::d01, Dyad::d01, Side::left, v);
  out.add_scaled(half, S(-1) / S(2));
  return out;
}

// L_c at unit rate gamma_c, built from an explicit term table.
template <class S>
SymOpVector<S> collective_decay(const SymOpVector<S>& v, std::span<const CollectiveTerm> terms)
{
  SymOpVector<S> out(v.atoms());
  for (const auto& t : terms) {
    auto inner = apply_ladder(t.inner.to, t.inner.from, Side::left, v);
    auto outer = apply_ladder(t.outer.to, t.outer.from, Side::left, inner);
    out.add_scaled(outer, S(t.num) / S(t.den));
  }
  return out;
}

template <class S>
SymOpVector<S> collective_decay(const SymOpVector<S>& v)
{
  return collective_decay(v, std::span<const CollectiveTerm>(kCollectiveTerms));
}

template <class S>
SymOpVector<S> apply_Li(const SymOpVector<S>& v, const BasicRates<S>& rates)
{
  return independent_decay(v) * rates.gamma10();
}

template <class S>
SymOpVector<S> apply_Lc(const SymOpVector<S>& v, const BasicRates<S>& rates)
{
  return collective_decay(v) * rates.gamma_c;
}

template <class S>
SymOpVector<S> apply_L(const SymOpVector<S>& v, const BasicRates<S>& rates)
{
  return apply_Li(v, rates) + apply_Lc(v, rates);
}

// Tr(Q^dagger Q) = prod(n!)/N!
inline Rational overlap_weight(const MultiIndex& m)
{
  return Rational(factorial(m.n00) * factorial(m.n01) * factorial(m.n10) * factorial(m.n11)) /
         Rational(factorial(m.atoms()));
}

template <class S>
S inner_product(const SymOpVector<S>& a, const SymOpVector<S>& b)
{
  if (a.atoms() != b.atoms()) throw std::invalid_argument("inner_product: atom counts differ");
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  S acc(0);
  for (const auto& [idx, c] : small) {
    auto it = large.terms().find(idx);
    if (it == large.terms().end()) continue;
    acc += c * it->second * scalar_cast<S>(overlap_weight(idx));
  }
  return acc;
}

// Only products with no off-diagonal dyads carry trace, and those have trace 1.
template <class S>
S trace(const SymOpVector<S>& v)
{
  S acc(0);
  for (const auto& [idx, c] : v)
    if (idx.n01 == 0 && idx.n10 == 0) acc += c;
  return acc;
}

// Tr[(A(10<-10) + A(11<-11)) rho]
template <class S>
S excitation_expectation(const SymOpVector<S>& v)
{
  return trace(apply_ladder(Dyad::d10, Dyad::d10, Side::left, v)) +
         trace(apply_ladder(Dyad::d11, Dyad::d11, Side::left, v));
}

// Sums over atoms of single-atom actions and the collective sandwiches.
enum class CollectiveMap {
  minus_rho_plus,
  plus_rho_minus,
  plus_minus_rho,
  rho_plus_minus,
  minus_plus_rho,
  rho_minus_plus,
  jplus_rho,
  rho_jplus,
  jminus_rho,
  rho_jminus,
  jminus_rho_jplus,
  jplus_rho_jminus,
};

inline constexpr std::array<CollectiveMap, 12> kCollectiveMaps = {
    CollectiveMap::minus_rho_plus, CollectiveMap::plus_rho_minus, CollectiveMap::plus_minus_rho,
    CollectiveMap::rho_plus_minus, CollectiveMap::minus_plus_rho, CollectiveMap::rho_minus_plus,
    CollectiveMap::jplus_rho,      CollectiveMap::rho_jplus,      CollectiveMap::jminus_rho,
    CollectiveMap::rho_jminus,     CollectiveMap::jminus_rho_jplus, CollectiveMap::jplus_rho_jminus,
};

inline std::string_view to_string(CollectiveMap m)
{
  switch (m) {
    case CollectiveMap::minus_rho_plus: return "sum s- rho s+";
    case CollectiveMap::plus_rho_minus: return "sum s+ rho s-";
    case CollectiveMap::plus_minus_rho: return "sum s+ s- rho";
    case CollectiveMap::rho_plus_minus: return "sum rho s+ s-";
    case CollectiveMap::minus_plus_rho: return "sum s- s+ rho";
    case CollectiveMap::rho_minus_plus: return "sum rho s- s+";
    case CollectiveMap::jplus_rho: return "J+ rho";
    case CollectiveMap::rho_jplus: return "rho J+";
    case CollectiveMap::jminus_rho: return "J- rho";
    case CollectiveMap::rho_jminus: return "rho J-";
    case CollectiveMap::jminus_rho_jplus: return "J- rho J+";
    default: return "J+ rho J-";
  }
}

namespace detail {

template <class S>
SymOpVector<S> ladder_sum(const SymOpVector<S>& v, std::initializer_list<Ladder> maps)
{
  SymOpVector<S> out(v.atoms());
  for (const auto& l : maps) out += apply_ladder(l.to, l.from, Side::left, v);
  return out;
}

}  // namespace detail

template <class S>
SymOpVector<S> apply_collective_map(CollectiveMap m, const SymOpVector<S>& v)
{
  using D = Dyad;
  switch (m) {
    case CollectiveMap::minus_rho_plus: return detail::ladder_sum(v, {{D::d00, D::d11}});
    case CollectiveMap::plus_rho_minus: return detail::ladder_sum(v, {{D::d11, D::d00}});
    case CollectiveMap::plus_minus_rho: return detail::ladder_sum(v, {{D::d10, D::d10}, {D::d11, D::d11}});
    case CollectiveMap::rho_plus_minus: return detail::ladder_sum(v, {{D::d01, D::d01}, {D::d11, D::d11}});
    case CollectiveMap::minus_plus_rho: return detail::ladder_sum(v, {{D::d01, D::d01}, {D::d00, D::d00}});
    case CollectiveMap::rho_minus_plus: return detail::ladder_sum(v, {{D::d10, D::d10}, {D::d00, D::d00}});
    case CollectiveMap::jplus_rho: return detail::ladder_sum(v, {{D::d10, D::d00}, {D::d11, D::d01}});
    case CollectiveMap::rho_jplus: return detail::ladder_sum(v, {{D::d10, D::d11}, {D::d00, D::d01}});
    case CollectiveMap::jminus_rho: return detail::ladder_sum(v, {{D::d00, D::d10}, {D::d01, D::d11}});
    case CollectiveMap::rho_jminus: return detail::ladder_sum(v, {{D::d11, D::d10}, {D::d01, D::d00}});
    case CollectiveMap::jminus_rho_jplus:
      return detail::ladder_sum(detail::ladder_sum(v, {{D::d10, D::d11}, {D::d00, D::d01}}),
                                {{D::d00, D::d10}, {D::d01, D::d11}});
    default:
      return detail::ladder_sum(detail::ladder_sum(v, {{D::d11, D::d10}, {D::d01, D::d00}}),
                                {{D::d10, D::d00}, {D::d11, D::d01}});
  }
}

}  // namespace permsym
