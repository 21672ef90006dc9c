#pragma once

#include "permsym/rational.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace permsym {

// Squarefree part: n = s^2 * d, returns {s, d}. n > 0.
inline std::pair<Integer, Integer> squarefree_split(Integer n)
{
  if (n <= 0) throw std::invalid_argument("squarefree_split: non-positive argument");
  Integer s = 1, d = 1;
  for (Integer p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) s *= p;
    if (e % 2) d *= p;
  }
  d *= n;
  return {s, d};
}

// a + b sqrt(d) with d squarefree; d == 1 means a plain rational (b kept zero).
class Surd {
public:
  Surd() = default;
  Surd(long v) : a_(v) {}
  Surd(Rational a) : a_(std::move(a)) {}
  Surd(Rational a, Rational b, Integer d) : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) { normalize(); }

  // sqrt(r) for rational r >= 0
  static Surd sqrt(const Rational& r)
  {
    if (r < 0) throw std::domain_error("Surd::sqrt of negative rational");
    if (r == 0) return Surd();
    const Integer num = numerator(r), den = denominator(r);
    auto [s, d] = squarefree_split(num * den);
    return Surd(Rational(0), Rational(s) / Rational(den), d);
  }

  const Rational& rational_part() const { return a_; }
  const Rational& surd_part() const { return b_; }
  const Integer& radicand() const { return d_; }
  bool is_rational() const { return b_ == 0; }

  double value() const
  {
    return to_double(a_) + to_double(b_) * std::sqrt(d_.convert_to<double>());
  }

  Surd conjugate() const { return Surd(a_, -b_, d_); }

  Surd& operator+=(const Surd& o)
  {
    const Integer d = common(o);
    a_ += o.a_;
    b_ += o.b_;
    d_ = d;
    normalize();
    return *this;
  }
  Surd& operator-=(const Surd& o) { return *this += -o; }
  Surd& operator*=(const Surd& o)
  {
    const Integer d = common(o);
    Rational a = a_ * o.a_ + b_ * o.b_ * Rational(d);
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(a);
    b_ = std::move(b);
    d_ = d;
    normalize();
    return *this;
  }
  Surd& operator/=(const Surd& o)
  {
    const Rational norm = o.a_ * o.a_ - o.b_ * o.b_ * Rational(o.d_);
    if (norm == 0) throw std::domain_error("Surd division by zero");
    *this *= o.conjugate();
    a_ /= norm;
    b_ /= norm;
    return *this;
  }
  Surd operator-() const { return Surd(-a_, -b_, d_); }

  friend Surd operator+(Surd x, const Surd& y) { return x += y; }
  friend Surd operator-(Surd x, const Surd& y) { return x -= y; }
  friend Surd operator*(Surd x, const Surd& y) { return x *= y; }
  friend Surd operator/(Surd x, const Surd& y) { return x /= y; }
  friend bool operator==(const Surd& x, const Surd& y)
  {
    return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_ == 0 || x.d_ == y.d_);
  }

  std::string str() const
  {
    if (b_ == 0) return a_.str();
    return a_.str() + " + " + b_.str() + "*sqrt(" + d_.str() + ")";
  }
  friend std::ostream& operator<<(std::ostream& os, const Surd& s) { return os << s.str(); }

private:
  Integer common(const Surd& o) const
  {
    if (b_ == 0) return o.d_;
    if (o.b_ == 0 || o.d_ == d_) return d_;
    throw std::domain_error("Surd arithmetic across different radicands");
  }
  void normalize()
  {
    if (d_ == 1) {
      a_ += b_;
      b_ = 0;
    }
    if (b_ == 0) d_ = 1;
  }

  Rational a_ = 0;
  Rational b_ = 0;
  Integer d_ = 1;
};

inline bool is_zero(const Surd& s) { return s.rational_part() == 0 && s.surd_part() == 0; }

template <class S>
S scalar_cast(const Surd& s)
{
  if constexpr (std::is_same_v<S, Surd>)
    return s;
  else
    return S(s.value());
}

}  // namespace permsym
