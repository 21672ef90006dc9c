#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>
#include <type_traits>

namespace permsym {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline Integer factorial(int n)
{
  if (n < 0) throw std::invalid_argument("factorial of negative integer");
  Integer r;
  mpz_fac_ui(r.backend().data(), static_cast<unsigned long>(n));
  return r;
}

// C(n, k), zero outside 0 <= k <= n.
inline Integer binomial(int n, int k)
{
  if (n < 0 || k < 0 || k > n) return Integer(0);
  Integer r;
  mpz_bin_uiui(r.backend().data(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

inline Rational make_rational(long p, long q = 1) { return Rational(p) / Rational(q); }

inline bool is_zero(const Rational& r) { return r == 0; }
inline bool is_zero(double d) { return d == 0.0; }

inline int sign_power(int k) { return (k % 2 == 0) ? 1 : -1; }

template <class S>
S scalar_cast(const Rational& r)
{
  if constexpr (std::is_same_v<S, Rational>)
    return r;
  else
    return r.template convert_to<S>();
}

template <class S>
S scalar_cast(const Integer& r)
{
  if constexpr (std::is_same_v<S, Rational>)
    return Rational(r);
  else
    return r.template convert_to<S>();
}

template <class S>
S scalar_cast(double d)
{
  if constexpr (std::is_same_v<S, Rational>)
    return Rational(d);
  else
    return S(d);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace permsym
