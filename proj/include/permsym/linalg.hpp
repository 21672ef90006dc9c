#pragma once

#include "permsym/rational.hpp"
#include "permsym/surd.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

namespace permsym {

// Small dense matrix over an exact field (Rational or Surd).
template <class T>
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n)
  {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  template <class U>
  Matrix<U> cast() const
  {
    Matrix<U> m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = U((*this)(i, j));
    return m;
  }

  friend Matrix operator*(const Matrix& x, const Matrix& y)
  {
    if (x.cols_ != y.rows_) throw std::invalid_argument("matrix product shape mismatch");
    Matrix r(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        if (is_zero(x(i, k))) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += x(i, k) * y(k, j);
      }
    return r;
  }
  friend Matrix operator-(Matrix x, const Matrix& y)
  {
    for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] -= y.a_[i];
    return x;
  }
  friend bool operator==(const Matrix& x, const Matrix& y)
  {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> a_;
};

// Reduced row echelon form in place; returns pivot columns.
template <class T>
std::vector<std::size_t> rref(Matrix<T>& m)
{
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && is_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(p, j));
    const T inv = T(1) / m(r, c);
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      const T f = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m)
{
  const std::size_t n = m.rows();
  if (m.cols() != n) throw std::invalid_argument("inverse of non-square matrix");
  Matrix<T> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = T(1);
  }
  const auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] >= n) throw std::domain_error("inverse of singular matrix");
  Matrix<T> out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  return out;
}

// Basis of the right null space; each vector has a 1 at its free column.
template <class T>
std::vector<std::vector<T>> nullspace(Matrix<T> m)
{
  const auto piv = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<std::vector<T>> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<T> v(m.cols(), T(0));
    v[f] = T(1);
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(r, f);
    out.push_back(std::move(v));
  }
  return out;
}

// Monic characteristic polynomial det(x I - A), coefficients low to high (Faddeev-LeVerrier).
inline std::vector<Rational> characteristic_polynomial(const Matrix<Rational>& a)
{
  const std::size_t n = a.rows();
  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = 1;
  Matrix<Rational> m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix<Rational> am = a * m;
    for (std::size_t i = 0; i < n; ++i) am(i, i) += c[n - k + 1];
    m = am;
    Matrix<Rational> prod = a * m;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += prod(i, i);
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return c;
}

inline Rational evaluate(const std::vector<Rational>& p, const Rational& x)
{
  Rational acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Divide by (x - r); assumes r is a root.
inline std::vector<Rational> deflate(const std::vector<Rational>& p, const Rational& r)
{
  std::vector<Rational> q(p.size() - 1, Rational(0));
  Rational carry = 0;
  for (std::size_t i = p.size() - 1; i > 0; --i) {
    carry = carry * r + p[i];
    q[i - 1] = carry;
  }
  return q;
}

inline std::vector<Integer> divisors(Integer n)
{
  if (n < 0) n = -n;
  std::vector<Integer> out;
  for (Integer d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
    }
  return out;
}

struct PolynomialRoots {
  std::vector<std::pair<Rational, int>> rational;  // root, multiplicity
  std::vector<Rational> remainder;                  // monic, no rational roots
};

// Rational roots with multiplicity by the rational root test.
inline PolynomialRoots rational_roots(std::vector<Rational> p)
{
  PolynomialRoots out;
  auto record = [&](const Rational& r) {
    for (auto& [root, mult] : out.rational)
      if (root == r) {
        ++mult;
        return;
      }
    out.rational.emplace_back(r, 1);
  };
  while (p.size() > 1) {
    if (p[0] == 0) {
      record(Rational(0));
      p.erase(p.begin());
      continue;
    }
    Integer scale = 1;
    for (const auto& c : p) scale = boost::multiprecision::lcm(scale, denominator(c));
    const Integer lead = numerator(p.back() * Rational(scale));
    const Integer tail = numerator(p.front() * Rational(scale));
    bool found = false;
    for (const auto& num : divisors(tail)) {
      for (const auto& den : divisors(lead)) {
        for (int s : {1, -1}) {
          const Rational r = Rational(num * s) / Rational(den);
          if (evaluate(p, r) == 0) {
            record(r);
            p = deflate(p, r);
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found) break;
  }
  const Rational lead = p.back();
  for (auto& c : p) c /= lead;
  out.remainder = std::move(p);
  return out;
}

namespace detail {

inline void trim(std::vector<Rational>& p)
{
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

inline std::vector<Rational> make_monic(std::vector<Rational> p)
{
  trim(p);
  const Rational lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

inline std::vector<Rational> derivative(const std::vector<Rational>& p)
{
  std::vector<Rational> d(p.size() > 1 ? p.size() - 1 : 1, Rational(0));
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * Rational(static_cast<long>(i));
  return d;
}

// Quotient and remainder of a / b.
inline std::pair<std::vector<Rational>, std::vector<Rational>> divmod(std::vector<Rational> a, std::vector<Rational> b)
{
  trim(a);
  trim(b);
  if (b.size() == 1 && b[0] == 0) throw std::domain_error("polynomial division by zero");
  if (a.size() < b.size()) return {{Rational(0)}, a};
  std::vector<Rational> q(a.size() - b.size() + 1, Rational(0));
  for (std::size_t i = q.size(); i-- > 0;) {
    const Rational f = a[i + b.size() - 1] / b.back();
    q[i] = f;
    for (std::size_t j = 0; j < b.size(); ++j) a[i + j] -= f * b[j];
  }
  a.resize(b.size() - 1 ? b.size() - 1 : 1);
  trim(a);
  return {q, a};
}

inline bool is_zero_poly(const std::vector<Rational>& p)
{
  return std::all_of(p.begin(), p.end(), [](const Rational& c) { return c == 0; });
}

inline std::vector<Rational> gcd(std::vector<Rational> a, std::vector<Rational> b)
{
  while (!is_zero_poly(b)) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a);
}

}  // namespace detail

// Yun's square-free decomposition of a monic polynomial: p = prod f_i^i, f_i monic and square-free.
inline std::vector<std::pair<std::vector<Rational>, int>> squarefree_factors(const std::vector<Rational>& p)
{
  std::vector<std::pair<std::vector<Rational>, int>> out;
  if (p.size() <= 1) return out;
  auto a = detail::gcd(p, detail::derivative(p));
  auto b = detail::divmod(p, a).first;
  auto c = detail::divmod(detail::derivative(p), a).first;
  std::vector<Rational> d;
  for (int i = 1; b.size() > 1; ++i) {
    auto db = detail::derivative(b);
    d = c;
    d.resize(std::max(c.size(), db.size()), Rational(0));
    for (std::size_t k = 0; k < db.size(); ++k) d[k] -= db[k];
    detail::trim(d);
    a = detail::gcd(b, d);
    if (a.size() > 1) out.emplace_back(a, i);
    b = detail::divmod(b, a).first;
    c = detail::divmod(d, a).first;
  }
  for (auto& f : out) f.first = detail::make_monic(f.first);
  return out;
}

// Roots of a monic quadratic x^2 + b x + c with a real irrational pair.
inline std::pair<Surd, Surd> quadratic_roots(const std::vector<Rational>& p)
{
  if (p.size() != 3) throw std::invalid_argument("quadratic_roots: degree must be 2");
  const Rational half_b = p[1] / 2;
  const Rational disc = half_b * half_b - p[0];
  if (disc < 0) throw std::domain_error("quadratic_roots: complex pair");
  const Surd s = Surd::sqrt(disc);
  return {Surd(-half_b) + s, Surd(-half_b) - s};
}

}  // namespace permsym
