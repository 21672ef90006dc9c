#pragma once

#include "permsym/permsym.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace permsym::cli {

// Invalid configuration; names the offending field.
class UsageError : public std::invalid_argument {
public:
  UsageError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field(std::move(field))
  {
  }
  std::string field;
};

class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  int N = 10;
  int M = 3;
  StateKind kind = StateKind::mixed;
  double gc_ratio = 0.5;  // gamma_c / Gamma
  double t_max = 10.0;    // units of 1/Gamma
  int samples = 201;
  std::vector<Method> methods = {Method::closed, Method::expm, Method::reference};
  std::string out;
};

inline std::vector<Method> parse_methods(const std::string& list)
{
  std::vector<Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(parse_method(item));
    } catch (const std::invalid_argument& e) {
      throw UsageError("methods", e.what());
    }
  }
  if (out.empty()) throw UsageError("methods", "at least one method is required");
  return out;
}

inline void validate(const RunConfig& c)
{
  if (c.N < 1) throw UsageError("n", "must be at least 1");
  if (c.M < 1 || c.M > c.N) throw UsageError("m", "need 1 <= m <= n");
  if (!(c.gc_ratio >= 0 && c.gc_ratio <= 1)) throw UsageError("gc-ratio", "need 0 <= gc-ratio <= 1");
  if (!(c.t_max > 0)) throw UsageError("tmax", "must be positive");
  if (c.samples < 2) throw UsageError("samples", "need at least 2");
  if (c.methods.empty()) throw UsageError("methods", "at least one method is required");
}

// One curve per method, in the configured order.
inline std::vector<DecayCurve> run_curves(const RunConfig& c)
{
  validate(c);
  const Rates rates = rates_from_ratio(c.gc_ratio);
  const auto grid = uniform_grid(c.t_max, c.samples);
  std::vector<DecayCurve> curves(c.methods.size());
  parallel_for(c.methods.size(), [&](std::size_t i) { curves[i] = decay_curve(c.M, c.kind, c.N, rates, grid, c.methods[i]); });
  return curves;
}

inline std::string format_value(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Rows ordered by time, then by method order.
inline void write_csv(std::ostream& os, const std::vector<DecayCurve>& curves)
{
  os << "t,method,P\n";
  if (curves.empty()) return;
  for (std::size_t k = 0; k < curves.front().times.size(); ++k)
    for (const auto& c : curves)
      os << format_value(c.times[k]) << ',' << to_string(c.method) << ',' << format_value(c.values[k]) << '\n';
}

inline nlohmann::json metadata(const RunConfig& c, double seconds)
{
  nlohmann::json methods = nlohmann::json::array();
  for (Method m : c.methods) methods.push_back(std::string(to_string(m)));
  nlohmann::json j = {{"N", c.N},
                      {"M", c.M},
                      {"kind", std::string(to_string(c.kind))},
                      {"gamma_c_over_Gamma", c.gc_ratio},
                      {"t_max", c.t_max},
                      {"samples", c.samples},
                      {"methods", methods},
                      {"csv", c.out},
                      {"threads", thread_count()},
                      {"seconds", seconds}};
  if (c.M <= 3) {
    try {
      j["closed_form_branch"] = std::string(to_string(closed_form_branch(c.M, c.kind, c.N, rates_from_ratio(c.gc_ratio))));
    } catch (const SingularParameter&) {
      j["closed_form_branch"] = "singular";
    }
  }
  return j;
}

// Writes the CSV to c.out and run metadata to c.out + ".json".
inline void cmd_curve(const RunConfig& c)
{
  if (c.out.empty()) throw UsageError("out", "output path is required");
  const auto start = std::chrono::steady_clock::now();
  const auto curves = run_curves(c);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ofstream csv(c.out);
  if (!csv) throw IoError("cannot open " + c.out + " for writing");
  write_csv(csv, curves);
  if (!csv) throw IoError("failed writing " + c.out);
  std::ofstream meta(c.out + ".json");
  if (!meta) throw IoError("cannot open " + c.out + ".json for writing");
  meta << metadata(c, seconds).dump(2) << '\n';
}

// Damping labels within excitation order m_max, with lambda in units of gamma10.
inline void cmd_basis(std::ostream& os, int N, int m_max, bool vectors)
{
  if (N < 1) throw UsageError("n", "must be at least 1");
  if (m_max < 0 || m_max > N) throw UsageError("m-max", "need 0 <= m-max <= n");
  os << "label,alpha,delta,n,excitation_order,lambda_over_gamma10" << (vectors ? ",right_eigenvector" : "") << '\n';
  for (const auto& l : damping_labels(N)) {
    if (excitation_order(l, N) > m_max) continue;
    os << to_string(l) << ',' << l.alpha << ',' << l.delta << ',' << l.n << ',' << excitation_order(l, N) << ','
       << to_string(Rational(-decay_units(l, N)));
    if (vectors) {
      os << ",\"";
      bool first = true;
      for (const auto& [idx, c] : right_eigenvector(l, N)) {
        os << (first ? "" : " + ") << to_string(c) << "*Q(" << idx.n00 << ',' << idx.n01 << ',' << idx.n10 << ','
           << idx.n11 << ')';
        first = false;
      }
      os << '"';
    }
    os << '\n';
  }
}

// Prints one line per check; returns the number of failures.
inline int cmd_verify(std::ostream& os, const verify::Options& opt, const std::string& only = {})
{
  std::vector<verify::CheckResult> results;
  if (only == "lc_oracle") results.push_back(verify::lc_oracle(opt.flipped_lc_term));
  else if (!only.empty()) throw UsageError("only", "unknown check '" + only + "'");
  else results = verify::run(opt);
  int failures = 0;
  std::vector<std::string> failed;
  for (const auto& r : results) {
    const std::string tag = r.criterion ? "criterion " + std::to_string(r.criterion) : "check";
    os << (r.passed ? "PASS " : "FAIL ") << tag << ": " << r.name << " [" << r.detail << "] ("
       << format_value(r.seconds) << " s)\n";
    if (!r.passed) {
      ++failures;
      failed.push_back(r.name);
    }
  }
  if (failures) {
    os << "failed:";
    for (const auto& f : failed) os << ' ' << '"' << f << '"';
    os << '\n';
  }
  return failures;
}

}  // namespace permsym::cli
