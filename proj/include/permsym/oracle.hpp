#pragma once

#include "permsym/symspace.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace permsym::oracle {

inline constexpr int kMaxAtoms = 6;

// Atom mu occupies bit (N - 1 - mu); bit set means excited.
struct FullState {
  int N = 0;
  Eigen::MatrixXcd rho;
};

class ResourceLimit : public std::length_error {
public:
  explicit ResourceLimit(const std::string& what) : std::length_error(what) {}
};

class IntegrationFailure : public std::runtime_error {
public:
  explicit IntegrationFailure(const std::string& what) : std::runtime_error(what) {}
};

inline void require_small(int N)
{
  if (N < 1) throw std::invalid_argument("oracle: N must be at least 1");
  if (N > kMaxAtoms) throw ResourceLimit("oracle: full Liouville space limited to N <= 6");
}

inline std::size_t dimension(int N) { return std::size_t{1} << N; }

// Dyad counts of the elementary operator |i><j|.
inline MultiIndex pattern(int N, std::size_t i, std::size_t j)
{
  MultiIndex m;
  for (int b = 0; b < N; ++b) {
    const bool ki = (i >> b) & 1u, kj = (j >> b) & 1u;
    m[ki ? (kj ? Dyad::d11 : Dyad::d10) : (kj ? Dyad::d01 : Dyad::d00)] += 1;
  }
  return m;
}

template <class S>
FullState embed(const SymOpVector<S>& v)
{
  const int N = v.atoms();
  require_small(N);
  const std::size_t d = dimension(N);
  FullState out{N, Eigen::MatrixXcd::Zero(d, d)};
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const MultiIndex m = pattern(N, i, j);
      auto it = v.terms().find(m);
      if (it == v.terms().end()) continue;
      out.rho(i, j) = scalar_cast<double>(it->second) * to_double(overlap_weight(m));
    }
  return out;
}

// Symmetric coordinates read from one representative entry per pattern.
inline SymOpVector<double> project(const FullState& s)
{
  SymOpVector<double> out(s.N);
  const std::size_t d = dimension(s.N);
  std::vector<bool> seen(basis_dimension(s.N), false);
  const auto basis = enumerate_basis(s.N);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const MultiIndex m = pattern(s.N, i, j);
      const auto pos = static_cast<std::size_t>(std::lower_bound(basis.begin(), basis.end(), m) - basis.begin());
      if (seen[pos]) continue;
      seen[pos] = true;
      out.add(m, s.rho(i, j).real() / to_double(overlap_weight(m)));
    }
  return out;
}

// Single-atom ladder actions on bit b.
inline Eigen::MatrixXcd lower_left(const Eigen::MatrixXcd& r, std::size_t b)  // sigma- rho
{
  Eigen::MatrixXcd o = Eigen::MatrixXcd::Zero(r.rows(), r.cols());
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    if (!(i & b)) o.row(i) = r.row(i | b);
  return o;
}
inline Eigen::MatrixXcd raise_left(const Eigen::MatrixXcd& r, std::size_t b)  // sigma+ rho
{
  Eigen::MatrixXcd o = Eigen::MatrixXcd::Zero(r.rows(), r.cols());
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    if (i & b) o.row(i) = r.row(i ^ b);
  return o;
}
inline Eigen::MatrixXcd raise_right(const Eigen::MatrixXcd& r, std::size_t b)  // rho sigma+
{
  Eigen::MatrixXcd o = Eigen::MatrixXcd::Zero(r.rows(), r.cols());
  for (Eigen::Index j = 0; j < r.cols(); ++j)
    if (!(j & b)) o.col(j) = r.col(j | b);
  return o;
}
inline Eigen::MatrixXcd lower_right(const Eigen::MatrixXcd& r, std::size_t b)  // rho sigma-
{
  Eigen::MatrixXcd o = Eigen::MatrixXcd::Zero(r.rows(), r.cols());
  for (Eigen::Index j = 0; j < r.cols(); ++j)
    if (j & b) o.col(j) = r.col(j ^ b);
  return o;
}

namespace detail {

template <class F>
Eigen::MatrixXcd sum_bits(int N, const Eigen::MatrixXcd& r, F f)
{
  Eigen::MatrixXcd o = Eigen::MatrixXcd::Zero(r.rows(), r.cols());
  for (int mu = 0; mu < N; ++mu) o += f(r, std::size_t{1} << (N - 1 - mu));
  return o;
}

inline Eigen::MatrixXcd jminus_left(int N, const Eigen::MatrixXcd& r) { return sum_bits(N, r, lower_left); }
inline Eigen::MatrixXcd jplus_left(int N, const Eigen::MatrixXcd& r) { return sum_bits(N, r, raise_left); }
inline Eigen::MatrixXcd jplus_right(int N, const Eigen::MatrixXcd& r) { return sum_bits(N, r, raise_right); }
inline Eigen::MatrixXcd jminus_right(int N, const Eigen::MatrixXcd& r) { return sum_bits(N, r, lower_right); }

// sum_mu n_mu rho and rho n_mu with n = sigma+ sigma-
inline Eigen::MatrixXcd number_left(int N, const Eigen::MatrixXcd& r)
{
  Eigen::MatrixXcd o = r;
  for (Eigen::Index i = 0; i < r.rows(); ++i) o.row(i) *= double(std::popcount(static_cast<unsigned>(i)));
  (void)N;
  return o;
}
inline Eigen::MatrixXcd number_right(int N, const Eigen::MatrixXcd& r)
{
  Eigen::MatrixXcd o = r;
  for (Eigen::Index j = 0; j < r.cols(); ++j) o.col(j) *= double(std::popcount(static_cast<unsigned>(j)));
  (void)N;
  return o;
}

}  // namespace detail

// Independent damping sum_mu D[sigma-_mu] at unit rate.
inline Eigen::MatrixXcd independent_part(int N, const Eigen::MatrixXcd& r)
{
  Eigen::MatrixXcd o = detail::sum_bits(N, r, [](const Eigen::MatrixXcd& x, std::size_t b) {
    return lower_left(raise_right(x, b), b);
  });
  o -= 0.5 * (detail::number_left(N, r) + detail::number_right(N, r));
  return o;
}

// Collective damping D[J-] at unit rate.
inline Eigen::MatrixXcd collective_part(int N, const Eigen::MatrixXcd& r)
{
  using namespace detail;
  Eigen::MatrixXcd o = jminus_left(N, jplus_right(N, r));
  o -= 0.5 * (jplus_left(N, jminus_left(N, r)) + jminus_right(N, jplus_right(N, r)));
  return o;
}

// Cross terms sum_{mu != nu} of sigma-_mu rho sigma+_nu - {sigma+_mu sigma-_nu, rho}/2 at unit rate.
inline Eigen::MatrixXcd pair_part(int N, const Eigen::MatrixXcd& r)
{
  Eigen::MatrixXcd o = Eigen::MatrixXcd::Zero(r.rows(), r.cols());
  for (int mu = 0; mu < N; ++mu)
    for (int nu = 0; nu < N; ++nu) {
      if (mu == nu) continue;
      const std::size_t bm = std::size_t{1} << (N - 1 - mu), bn = std::size_t{1} << (N - 1 - nu);
      o += lower_left(raise_right(r, bn), bm);
      o -= 0.5 * (raise_left(lower_left(r, bn), bm) + lower_right(raise_right(r, bm), bn));
    }
  return o;
}

// L_i(gamma10) + L_c(gamma_c)
inline FullState rhs(const FullState& s, const Rates& rates)
{
  return {s.N, rates.gamma10() * independent_part(s.N, s.rho) + rates.gamma_c * collective_part(s.N, s.rho)};
}

// L'_i(Gamma) + L'_c over distinct pairs; algebraically equal to rhs.
inline FullState rhs_pairwise(const FullState& s, const Rates& rates)
{
  return {s.N, rates.Gamma * independent_part(s.N, s.rho) + rates.gamma_c * pair_part(s.N, s.rho)};
}

// Full-space counterparts of the ladder-map identities.
inline Eigen::MatrixXcd apply_collective_map(CollectiveMap m, int N, const Eigen::MatrixXcd& r)
{
  using namespace detail;
  auto single = [&](auto f) { return sum_bits(N, r, f); };
  switch (m) {
    case CollectiveMap::minus_rho_plus:
      return single([](const Eigen::MatrixXcd& x, std::size_t b) { return lower_left(raise_right(x, b), b); });
    case CollectiveMap::plus_rho_minus:
      return single([](const Eigen::MatrixXcd& x, std::size_t b) { return raise_left(lower_right(x, b), b); });
    case CollectiveMap::plus_minus_rho:
      return single([](const Eigen::MatrixXcd& x, std::size_t b) { return raise_left(lower_left(x, b), b); });
    case CollectiveMap::rho_plus_minus:
      return single([](const Eigen::MatrixXcd& x, std::size_t b) { return lower_right(raise_right(x, b), b); });
    case CollectiveMap::minus_plus_rho:
      return single([](const Eigen::MatrixXcd& x, std::size_t b) { return lower_left(raise_left(x, b), b); });
    case CollectiveMap::rho_minus_plus:
      return single([](const Eigen::MatrixXcd& x, std::size_t b) { return raise_right(lower_right(x, b), b); });
    case CollectiveMap::jplus_rho: return jplus_left(N, r);
    case CollectiveMap::rho_jplus: return jplus_right(N, r);
    case CollectiveMap::jminus_rho: return jminus_left(N, r);
    case CollectiveMap::rho_jminus: return jminus_right(N, r);
    case CollectiveMap::jminus_rho_jplus: return jminus_left(N, jplus_right(N, r));
    default: return jplus_left(N, jminus_right(N, r));
  }
}

inline double excitation_number(const FullState& s)
{
  double p = 0.0;
  for (Eigen::Index i = 0; i < s.rho.rows(); ++i) p += std::popcount(static_cast<unsigned>(i)) * s.rho(i, i).real();
  return p;
}

inline std::complex<double> trace(const FullState& s) { return s.rho.trace(); }

// Average over all relabelings of the atoms.
inline FullState symmetrize(const FullState& s)
{
  std::vector<int> perm(s.N);
  std::iota(perm.begin(), perm.end(), 0);
  const std::size_t d = dimension(s.N);
  auto permute = [&](std::size_t x) {
    std::size_t y = 0;
    for (int mu = 0; mu < s.N; ++mu)
      if (x & (std::size_t{1} << (s.N - 1 - mu))) y |= std::size_t{1} << (s.N - 1 - perm[mu]);
    return y;
  };
  FullState out{s.N, Eigen::MatrixXcd::Zero(d, d)};
  int count = 0;
  do {
    std::vector<std::size_t> map(d);
    for (std::size_t x = 0; x < d; ++x) map[x] = permute(x);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) out.rho(map[i], map[j]) += s.rho(i, j);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  out.rho /= double(count);
  return out;
}

// Allocation-free evaluation of rhs for repeated use.
class RhsWorkspace {
public:
  RhsWorkspace(int N, const Rates& rates)
      : N_(N), d_(static_cast<Eigen::Index>(dimension(N))), g_(rates.gamma10()), c_(rates.gamma_c),
        a_(d_, d_), b_(d_, d_)
  {
    for (int mu = 0; mu < N; ++mu) bits_.push_back(Eigen::Index{1} << (N - 1 - mu));
  }

  void operator()(const Eigen::MatrixXcd& r, Eigen::MatrixXcd& out)
  {
    out.resize(d_, d_);
    // a = J- rho, b = rho J+
    for (Eigen::Index j = 0; j < d_; ++j)
      for (Eigen::Index i = 0; i < d_; ++i) {
        std::complex<double> sa = 0.0, sb = 0.0;
        for (auto bit : bits_) {
          if (!(i & bit)) sa += r(i | bit, j);
          if (!(j & bit)) sb += r(i, j | bit);
        }
        a_(i, j) = sa;
        b_(i, j) = sb;
      }
    for (Eigen::Index j = 0; j < d_; ++j)
      for (Eigen::Index i = 0; i < d_; ++i) {
        std::complex<double> jump = 0.0, coll_jump = 0.0, left = 0.0, right = 0.0;
        for (auto bit : bits_) {
          if (!(i & bit) && !(j & bit)) jump += r(i | bit, j | bit);
          if (!(j & bit)) coll_jump += a_(i, j | bit);
          if (i & bit) left += a_(i ^ bit, j);
          if (j & bit) right += b_(i, j ^ bit);
        }
        const double pops = std::popcount(static_cast<unsigned>(i)) + std::popcount(static_cast<unsigned>(j));
        out(i, j) = g_ * (jump - 0.5 * pops * r(i, j)) + c_ * (coll_jump - 0.5 * (left + right));
      }
  }

private:
  int N_;
  Eigen::Index d_;
  double g_, c_;
  Eigen::MatrixXcd a_, b_;
  std::vector<Eigen::Index> bits_;
};

// Fixed-step RK4; h <= min(1e-3/Gamma, smallest spacing/10).
inline std::vector<FullState> integrate_rk4(const FullState& s0, const std::vector<double>& times, const Rates& rates)
{
  require_small(s0.N);
  if (!std::is_sorted(times.begin(), times.end())) throw std::invalid_argument("integrate: times must be sorted");
  if (!times.empty() && times.front() < 0) throw std::invalid_argument("integrate: negative time");
  double hmax = 1e-3 / rates.Gamma;
  for (std::size_t k = 1; k < times.size(); ++k)
    if (times[k] > times[k - 1]) hmax = std::min(hmax, (times[k] - times[k - 1]) / 10);
  if (!(hmax > 1e-12 / rates.Gamma)) throw IntegrationFailure("integrate: step size underflow");

  RhsWorkspace f(s0.N, rates);
  std::vector<FullState> out;
  Eigen::MatrixXcd r = s0.rho, k1, k2, k3, k4, tmp;
  double now = 0.0;
  for (double target : times) {
    const double span = target - now;
    if (span > 0) {
      const long steps = static_cast<long>(std::ceil(span / hmax - 1e-9));
      const double h = span / double(steps);
      for (long k = 0; k < steps; ++k) {
        f(r, k1);
        tmp = r + 0.5 * h * k1;
        f(tmp, k2);
        tmp = r + 0.5 * h * k2;
        f(tmp, k3);
        tmp = r + h * k3;
        f(tmp, k4);
        r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      now = target;
    }
    out.push_back({s0.N, r});
  }
  return out;
}

// Dense generator on vec(rho) (column-major), built column by column from rhs.
inline Eigen::MatrixXcd liouvillian(int N, const Rates& rates)
{
  require_small(N);
  const Eigen::Index d = static_cast<Eigen::Index>(dimension(N));
  Eigen::MatrixXcd L(d * d, d * d);
  for (Eigen::Index k = 0; k < d * d; ++k) {
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(d, d);
    e(k % d, k / d) = 1.0;
    const Eigen::MatrixXcd img = rhs(FullState{N, e}, rates).rho;
    L.col(k) = Eigen::Map<const Eigen::VectorXcd>(img.data(), d * d);
  }
  return L;
}

// Propagation with the matrix exponential of the vectorized generator; practical for N <= 4.
inline std::vector<FullState> integrate_expm(const FullState& s0, const std::vector<double>& times, const Rates& rates)
{
  require_small(s0.N);
  if (!std::is_sorted(times.begin(), times.end())) throw std::invalid_argument("integrate: times must be sorted");
  const Eigen::Index d = s0.rho.rows();
  const Eigen::MatrixXcd L = liouvillian(s0.N, rates);
  std::vector<FullState> out;
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(s0.rho.data(), d * d);
  double now = 0.0;
  for (double target : times) {
    if (target < 0) throw std::invalid_argument("integrate: negative time");
    if (target > now) {
      const Eigen::MatrixXcd step = (L * (target - now)).exp();
      v = step * v;
      now = target;
    }
    out.push_back({s0.N, Eigen::Map<const Eigen::MatrixXcd>(v.data(), d, d)});
  }
  return out;
}

}  // namespace permsym::oracle
