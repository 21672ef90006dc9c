#pragma once

#include "permsym/closed_form.hpp"
#include "permsym/exact.hpp"
#include "permsym/oracle.hpp"
#include "permsym/perturb.hpp"
#include "permsym/states.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace permsym {

enum class Method { closed, expm, perturbative, oracle, reference };

inline std::string_view to_string(Method m)
{
  switch (m) {
    case Method::closed: return "closed";
    case Method::expm: return "expm";
    case Method::perturbative: return "perturbative";
    case Method::oracle: return "oracle";
    default: return "reference";
  }
}

inline Method parse_method(std::string_view s)
{
  for (Method m : {Method::closed, Method::expm, Method::perturbative, Method::oracle, Method::reference})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

class MethodUnavailable : public std::domain_error {
public:
  explicit MethodUnavailable(const std::string& what) : std::domain_error(what) {}
};

struct DecayCurve {
  std::vector<double> times;
  std::vector<double> values;
  Method method = Method::expm;
};

// n points from 0 to t_max inclusive.
inline std::vector<double> uniform_grid(double t_max, int samples)
{
  if (samples < 2) throw std::invalid_argument("grid needs at least 2 samples");
  if (!(t_max > 0)) throw std::invalid_argument("grid needs t_max > 0");
  std::vector<double> g(samples);
  for (int k = 0; k < samples; ++k) g[k] = t_max * k / (samples - 1);
  return g;
}

inline DecayCurve decay_curve(int M, StateKind kind, int N, const Rates& rates, const std::vector<double>& grid,
                              Method method)
{
  if (grid.empty()) throw std::invalid_argument("decay_curve: empty grid");
  require_excitations(N, M);
  DecayCurve curve{grid, {}, method};
  curve.values.reserve(grid.size());
  switch (method) {
    case Method::closed:
      if (M > 3) throw MethodUnavailable("closed forms exist for M <= 3 only");
      for (double t : grid) curve.values.push_back(p_closed_form(M, kind, N, rates, t));
      break;
    case Method::expm: curve.values = p_expm(M, kind, N, rates, grid); break;
    case Method::perturbative:
      if (M > 4) throw MethodUnavailable("perturbative forms exist for M <= 4 only");
      for (double t : grid) curve.values.push_back(p_perturbative(M, kind, N, rates, t));
      break;
    case Method::oracle: {
      if (N > oracle::kMaxAtoms) throw MethodUnavailable("oracle limited to N <= 6");
      const auto states = oracle::integrate_rk4(oracle::embed(initial_state(kind, N, M)), grid, rates);
      for (const auto& s : states) curve.values.push_back(oracle::excitation_number(s));
      break;
    }
    case Method::reference:
      for (double t : grid) curve.values.push_back(M * std::exp(-rates.Gamma * t));
      break;
  }
  return curve;
}

}  // namespace permsym
