#pragma once

#include "permsym/perturb.hpp"
#include "permsym/symspace.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace permsym {

class SingularParameter : public std::domain_error {
public:
  explicit SingularParameter(const std::string& what) : std::domain_error(what) {}
};

// Switch to an analytic limit when a denominator factor is below this times Gamma.
inline constexpr double kLimitEpsilon = 1e-9;
// Below this (relative) the generic form is evaluated in extended precision.
inline constexpr double kCancellationGuard = 1e-3;

namespace closed_detail {

using Wide = boost::multiprecision::cpp_bin_float_50;

// Generic closed forms, g = gamma10, c = gamma_c.
template <class T>
T generic(int M, StateKind kind, int N, const T& G, const T& c, const T& t)
{
  using std::exp;
  const T g = G - c;
  const T n = T(N);
  const T sub = exp(-(G - c) * t);
  const T sup = exp(-(G + (n - 1) * c) * t);
  if (M == 1) return kind == StateKind::dicke ? sup : (n - 1) / n * sub + sup / n;
  if (M == 2 && kind == StateKind::dicke) {
    const T den = n * (g + (n - 2) * c) * (g + 2 * (n - 1) * c);
    return 2 / den *
           (((n - 2) * g * c + g * g) * sub +
            (g * c * (3 * n * n - 5 * n + 2) + (n - 1) * g * g + 2 * n * (n - 1) * (n - 1) * c * c) * sup -
            2 * n * (n - 1) * c * c * exp(-2 * (G + (n - 2) * c) * t));
  }
  if (M == 2) {
    const T a = g + (n - 2) * c, b = g + 2 * (n - 1) * c, d = g - 2 * c;
    return 2 * (((n - 1) / n - 2 * c * (g + 2 * (n - 2) * c) / (n * a * b)) * sub +
                (1 / n + 2 * c * (g + (n - 4) * c) / (n * d * a)) * sup -
                4 * c * c * exp(-2 * (G + (n - 2) * c) * t) / (n * a * b) -
                2 * (n - 2) * c * c * exp(-(2 * G + (n - 4) * c) * t) / (n * d * a));
  }
  if (kind == StateKind::dicke) {
    const T T1 = 4 * (n - 2) * c * c * c * (g + 3 * (n - 2) * c) * exp(-(3 * G + (3 * n - 9) * c) * t) /
                 ((g + (n - 4) * c) * (g + (n - 3) * c) * (g + 2 * (n - 2) * c) * (2 * g + 3 * (n - 2) * c));
    const T T2 = -4 * g * (n - 2) * c * c * exp(-(2 * G + (n - 4) * c) * t) /
                 (n * (g - 2 * c) * (g + (n - 2) * c) * (g + 2 * (n - 2) * c));
    const T T3 = -4 * (n - 2) * (n - 1) * (g + n * c) * c * c * exp(-2 * (G + (n - 2) * c) * t) /
                 (n * (g + (n - 4) * c) * (g + (n - 2) * c) * (g + 2 * (n - 1) * c));
    const T T4 = 2 * g * (2 * g * g + (5 * n - 6) * g * c + (n - 2) * (3 * n - 4) * c * c) * sub /
                 (n * (g + (n - 2) * c) * (2 * g + 3 * (n - 2) * c) * (g + 2 * (n - 1) * c));
    const T T5 = (n - 2) * (g * g * g + (2 * n - 3) * g * g * c + (n - 4) * (n - 1) * g * c * c - 2 * n * (n - 1) * c * c * c) *
                 sup / (n * (g - 2 * c) * (g + (n - 3) * c) * (g + (n - 2) * c));
    return 3 * (T1 + T2 + T3 + T4 + T5);
  }
  const T c2 = c * c, c3 = c2 * c, c4 = c3 * c, c5 = c4 * c;
  const T g2 = g * g, g3 = g2 * g, g4 = g3 * g, g5 = g4 * g;
  const T T1 = 4 * (n - 4) * (n - 3) * c3 * exp(-(3 * G + (n - 7) * c) * t) /
               ((n - 2) * (n - 1) * (g - 2 * c) * (g - 2 * c) * (2 * g + (n - 4) * c));
  const T T2 = 16 * (n - 3) * (g + (n - 6) * c) * c3 * exp(-(3 * G + (2 * n - 9) * c) * t) /
               (n * (n - 2) * (g - 4 * c) * (2 * g + (n - 6) * c) * (g + (n - 4) * c) * (g + (n - 3) * c));
  const T T3 = 24 * (g + 3 * (n - 2) * c) * c3 * exp(-3 * (G + (n - 3) * c) * t) /
               (n * (n - 1) * (g + (n - 4) * c) * (g + (n - 3) * c) * (g + 2 * (n - 2) * c) * (2 * g + 3 * (n - 2) * c));
  const T T4 = -8 * (g2 + (n - 4) * c * g - 12 * c2) * c2 * exp(-2 * (G + (n - 2) * c) * t) /
               (n * (g - 4 * c) * (g + (n - 4) * c) * (g + (n - 2) * c) * (g + 2 * (n - 1) * c));
  const T T5 = -4 *
               ((n - 2) * g3 + (12 + n * (3 * n - 14)) * c * g2 + 2 * (n * (14 + n * (n - 8)) + 4) * c2 * g -
                8 * (n - 3) * (n - 2) * c3) *
               c2 * exp(-(2 * G + (n - 4) * c) * t) /
               (n * (g - 2 * c) * (g - 2 * c) * (g + (n - 4) * c) * (g + (n - 2) * c) * (g + 2 * (n - 2) * c));
  const T T6 = (2 * g5 + (5 * n - 16) * c * g4 + (26 + n * (4 * n - 27)) * c2 * g3 + (n * (12 + n * (n - 11)) + 44) * c3 * g2 -
                8 * (3 + n * (n - 7)) * c4 * g + 24 * (n - 6) * c5) /
               (n * (g - 2 * c) * (g - 2 * c) * (2 * g + (n - 6) * c) * (g + (n - 3) * c) * (g + (n - 2) * c)) * sup;
  const T T7 =
      sub /
      (n * (2 * g + (n - 4) * c) * (g + (n - 3) * c) * (g + (n - 2) * c) * (2 * g + 3 * (n - 2) * c) * (g + 2 * (n - 1) * c)) *
      (4 * (n - 1) * g5 + 8 * (3 * n * (n - 3) + 4) * c * g4 + (n * (5 * n * (11 * n - 57) + 378) - 52) * c2 * g3 +
       6 * (n - 4) * (n - 3) * (n - 2) * (n * n * n - 4 * n * n + n - 2) * c5 +
       (n * (3 * n * (n * (20 * n - 151) + 357) - 730) - 88) * c3 * g2 +
       (n - 3) * (n * (n * (n * (31 * n - 221) + 446) - 192) - 16) * c4 * g);
  return 3 * (T1 + T2 + T3 + T4 + T5 + T6 + T7);
}

// Linear factors a*g + b*c appearing in denominators.
struct Factor {
  double a;
  double b;
};

inline std::vector<Factor> denominator_factors(int M, StateKind kind, int N)
{
  const double n = N;
  if (M == 1) return {};
  if (M == 2 && kind == StateKind::dicke) return {{1, n - 2}, {1, 2 * (n - 1)}};
  if (M == 2) return {{1, n - 2}, {1, 2 * (n - 1)}, {1, -2}};
  if (kind == StateKind::dicke)
    return {{1, n - 4}, {1, n - 3}, {1, 2 * (n - 2)}, {2, 3 * (n - 2)}, {1, -2}, {1, n - 2}, {1, 2 * (n - 1)}};
  return {{1, -2}, {2, n - 4}, {1, -4}, {2, n - 6}, {1, n - 4}, {1, n - 3},
          {1, 2 * (n - 2)}, {2, 3 * (n - 2)}, {1, n - 2}, {1, 2 * (n - 1)}};
}

// (a + b x + b2 x^2) e^{-r x} with x = gamma_c t.
struct LimitTerm {
  double r;
  double a;
  double b = 0.0;
  double b2 = 0.0;
};

using LimitTable = std::vector<LimitTerm>;

// gamma10 = 0
inline std::optional<LimitTable> table_g0(int M, StateKind kind, int N)
{
  const double n = N;
  const bool dicke = kind == StateKind::dicke;
  if (M == 2 && N == 2) return LimitTable{{2, 2, 2}};
  if (M == 2 && dicke) return LimitTable{{n, 2 * (n - 1) / (n - 2)}, {2 * (n - 1), -2 / (n - 2)}};
  if (M == 2)
    return LimitTable{{0, 2 * (n * n - 2 * n - 1) / (n * (n - 1))},
                      {n, 4 / (n * (n - 2))},
                      {2 * (n - 1), -4 / (n * (n - 2) * (n - 1))},
                      {n - 2, 2 / n}};
  if (M == 3 && N == 3) return LimitTable{{3, -3, 12}, {4, 6}};
  if (M == 3 && N == 4 && dicke) return LimitTable{{6, -6, -6}, {4, 9}};
  if (M == 3 && N == 4) return LimitTable{{0, 0.75}, {2, 1.5, 1.5}, {6, -1.5, -1.5}, {4, 2.25}};
  if (M == 3 && dicke)
    return LimitTable{{3 * (n - 2), 6 / ((n - 4) * (n - 3))}, {2 * (n - 1), -6 / (n - 4)}, {n, 3 * (n - 1) / (n - 3)}};
  if (M == 3)
    return LimitTable{{n - 4, 3 * (n - 3) / ((n - 2) * (n - 1))},
                      {2 * (n - 3), -12 / (n * (n - 4) * (n - 2))},
                      {3 * (n - 2), 36 / (n * (n - 4) * (n - 3) * (n - 2) * (n - 1))},
                      {2 * (n - 1), -36 / (n * (n - 4) * (n - 2) * (n - 1))},
                      {n - 2, 12 * (n - 3) / (n * (n - 4) * (n - 2))},
                      {n, 18 / (n * (n - 3) * (n - 2))},
                      {0, 3 * (n * n * n - 4 * n * n + n - 2) / (n * (n - 2) * (n - 1))}};
  return std::nullopt;
}

// gamma10 = 2 gamma_c
inline std::optional<LimitTable> table_g2c(int M, StateKind kind, int N)
{
  const double n = N, n2 = n * n, n3 = n2 * n;
  if (M == 2 && kind == StateKind::mixed)
    return LimitTable{{2, 2 * (n - 1) * (n2 - 2) / n3}, {n + 2, 2 * (n + 2) / n2, 4 * (n - 2) / n2}, {2 * (n + 1), -4 / n3}};
  if (M == 3 && kind == StateKind::dicke)
    return LimitTable{
        {3 * n, 6 * (3 * n - 4) / ((n - 1) * (n - 1) * (3 * n - 2))},
        {n + 2, 3 * (n - 2) * (n3 + 2 * n2 - n - 4) / (n2 * (n - 1) * (n - 1)), 12 * (n - 2) / (n2 * (n - 1))},
        {2 * (n + 1), -6 * (n - 1) * (n + 2) / n3},
        {2, 6 * (3 * n2 + 4) / (n3 * (3 * n - 2))}};
  if (M == 3) {
    const double d1 = n - 1, d2 = n - 2;
    const double a = 3 *
                     (std::pow(n, 8) - 5 * std::pow(n, 7) + 5 * std::pow(n, 6) - 3 * std::pow(n, 5) + 66 * std::pow(n, 4) -
                      284 * n3 + 680 * n2 - 832 * n + 384) /
                     (n3 * d2 * d2 * d2 * d1 * d1 * d1);
    const double b = 12 * (std::pow(n, 5) - 6 * std::pow(n, 4) + 5 * n3 + 42 * n2 - 116 * n + 80) / (n2 * d2 * d2 * d1 * d1);
    const double b2 = 12 * (n - 4) * (n - 3) / (n * d2 * d1);
    return LimitTable{
        {n + 2, a, b, b2},
        {2 * n, -24 * (n - 4) * (n - 3) / (n * d2 * d2 * d2 * d1)},
        {3 * n, 36 * (3 * n - 4) / (n * d2 * d1 * d1 * d1 * (3 * n - 2))},
        {2 * (n + 1), 12 * (n - 8) / (n3 * d2)},
        {2, 3 * (3 * std::pow(n, 5) - 8 * std::pow(n, 4) - 5 * n3 + 6 * n2 + 84 * n - 128) / (n3 * d1 * (3 * n - 2))}};
  }
  return std::nullopt;
}

// gamma10 = 4 gamma_c
inline std::optional<LimitTable> table_g4c(int M, StateKind kind, int N)
{
  if (M != 3 || kind != StateKind::mixed) return std::nullopt;
  const double n = N, n2 = n * n, n3 = n2 * n;
  return LimitTable{
      {n + 8, 3 * (n - 4) * (n - 3) / ((n - 2) * (n - 1) * (n + 4))},
      {2 * (n + 3), -12 * (n2 * n2 + 7 * n3 - 22 * n2 + 4 * n + 56) / (n2 * (n - 2) * (n + 1) * (n + 1) * (n + 2) * (n + 2)),
       -48 * (n - 3) / (n2 * (n + 1) * (n + 2))},
      {3 * (n + 2), 36 * (3 * n - 2) / (n3 * (n - 1) * (n + 1) * (3 * n + 2))},
      {n + 6, -12 * (n - 2) * (n2 - n - 3) / (n3 * (n + 2))},
      {n + 4, 6 * (2 * n3 + 6 * n2 - n + 10) / (n * (n + 1) * (n + 2) * (n + 2))},
      {4, 3 * (3 * std::pow(n, 6) + 23 * std::pow(n, 5) + 41 * std::pow(n, 4) - 63 * n3 - 120 * n2 - 20 * n - 80) /
              (n * (n + 1) * (n + 1) * (n + 2) * (n + 4) * (3 * n + 2))}};
}

inline double evaluate(const LimitTable& table, double c, double t)
{
  const double x = c * t;
  double acc = 0.0;
  for (const auto& term : table) acc += (term.a + term.b * x + term.b2 * x * x) * std::exp(-term.r * x);
  return acc;
}

}  // namespace closed_detail

enum class ClosedFormBranch { generic, extended_precision, limit_g0, limit_g2c, limit_g4c };

inline std::string_view to_string(ClosedFormBranch b)
{
  switch (b) {
    case ClosedFormBranch::generic: return "generic";
    case ClosedFormBranch::extended_precision: return "extended-precision";
    case ClosedFormBranch::limit_g0: return "limit gamma10=0";
    case ClosedFormBranch::limit_g2c: return "limit gamma10=2gamma_c";
    default: return "limit gamma10=4gamma_c";
  }
}

// Which evaluation path p_closed_form takes; throws SingularParameter if none applies.
inline ClosedFormBranch closed_form_branch(int M, StateKind kind, int N, const Rates& rates)
{
  using namespace closed_detail;
  if (M < 1 || M > 3) throw std::domain_error("p_closed_form: closed forms exist for M = 1, 2, 3 only");
  if (M > N) throw std::invalid_argument("p_closed_form: need M <= N");
  if (M == 1) return ClosedFormBranch::generic;
  const double G = rates.Gamma, g = rates.gamma10(), c = rates.gamma_c;
  const auto where = [&] {
    return "M=" + std::to_string(M) + " " + std::string(to_string(kind)) + " N=" + std::to_string(N) +
           " gamma_c/Gamma=" + std::to_string(c / G);
  };
  if (std::abs(g) < kLimitEpsilon * G) {
    if (table_g0(M, kind, N)) return ClosedFormBranch::limit_g0;
    throw SingularParameter("no gamma10 = 0 limit for " + where());
  }
  double smallest = INFINITY;
  for (const auto& f : denominator_factors(M, kind, N)) smallest = std::min(smallest, std::abs(f.a * g + f.b * c));
  if (smallest < kLimitEpsilon * G) {
    if (std::abs(g - 2 * c) < kLimitEpsilon * G && table_g2c(M, kind, N)) return ClosedFormBranch::limit_g2c;
    if (std::abs(g - 4 * c) < kLimitEpsilon * G && table_g4c(M, kind, N)) return ClosedFormBranch::limit_g4c;
    throw SingularParameter("closed form singular without a limit branch for " + where());
  }
  if (smallest < kCancellationGuard * G) return ClosedFormBranch::extended_precision;
  return ClosedFormBranch::generic;
}

// Mean excitation number from the exact closed forms, M <= 3.
inline double p_closed_form(int M, StateKind kind, int N, const Rates& rates, double t)
{
  using namespace closed_detail;
  if (t < 0) throw std::invalid_argument("p_closed_form: negative time");
  switch (closed_form_branch(M, kind, N, rates)) {
    case ClosedFormBranch::generic: return generic<double>(M, kind, N, rates.Gamma, rates.gamma_c, t);
    case ClosedFormBranch::extended_precision:
      return generic<Wide>(M, kind, N, Wide(rates.Gamma), Wide(rates.gamma_c), Wide(t)).convert_to<double>();
    case ClosedFormBranch::limit_g0: return evaluate(*table_g0(M, kind, N), rates.gamma_c, t);
    case ClosedFormBranch::limit_g2c: return evaluate(*table_g2c(M, kind, N), rates.gamma_c, t);
    default: return evaluate(*table_g4c(M, kind, N), rates.gamma_c, t);
  }
}

}  // namespace permsym
