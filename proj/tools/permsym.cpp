#include "cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

// Expands `curve --config FILE` into the file's entries placed before the remaining flags.
std::vector<std::string> with_config_entries(int argc, char** argv)
{
  std::vector<std::string> in(argv, argv + argc), out;
  std::string path;
  std::size_t at = 0;
  for (std::size_t i = 1; i < in.size(); ++i) {
    if (in[i] == "--config" && i + 1 < in.size()) path = in[(at = i) + 1];
    else if (in[i].rfind("--config=", 0) == 0) path = in[at = i].substr(9);
  }
  if (path.empty() || in.size() < 2 || in[1] != "curve") return in;
  out = {in[0], in[1]};
  for (const auto& item : CLI::ConfigINI().from_file(path)) {
    if (!item.parents.empty() || item.name == "++" || item.name == "--")
      throw std::invalid_argument("config: sections are not supported in " + path);
    std::string value;
    for (const auto& v : item.inputs) value += (value.empty() ? "" : ",") + v;
    out.push_back("--" + item.name);
    out.push_back(value);
  }
  for (std::size_t i = 2; i < in.size(); ++i) {
    if (i == at) {
      if (in[i] == "--config") ++i;
      continue;
    }
    out.push_back(in[i]);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv)
{
  using namespace permsym;
  CLI::App app{"Collective decay of N two-level atoms in the permutation-symmetric subspace"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  cli::RunConfig cfg;
  std::string kind = "mixed", methods = "closed,expm,reference";
  auto* curve = app.add_subcommand("curve", "Mean excitation number P(t) as CSV (t,method,P)");
  std::string config_path;
  curve->add_option("--config", config_path, "key=value file; command-line flags take precedence");
  curve->add_option("--n", cfg.N, "Number of atoms")->capture_default_str();
  curve->add_option("--m", cfg.M, "Initial excitations")->capture_default_str();
  curve->add_option("--kind", kind, "Initial state: mixed or dicke")->capture_default_str();
  curve->add_option("--gc-ratio", cfg.gc_ratio, "gamma_c / Gamma")->capture_default_str();
  curve->add_option("--tmax", cfg.t_max, "Final time in units of 1/Gamma")->capture_default_str();
  curve->add_option("--samples", cfg.samples, "Grid points on [0, tmax]")->capture_default_str();
  curve->add_option("--methods", methods, "Comma list of closed,expm,perturbative,oracle,reference")
      ->capture_default_str();
  curve->add_option("--out", cfg.out, "CSV path; metadata goes to <out>.json")->required();

  int basis_n = 3, basis_m = -1;
  bool vectors = false;
  auto* basis = app.add_subcommand("basis", "Damping labels and eigenvalues as CSV");
  basis->add_option("--n", basis_n, "Number of atoms")->capture_default_str();
  basis->add_option("--m-max", basis_m, "Keep labels with (N - alpha) + delta <= m-max (default N)");
  basis->add_flag("--vectors", vectors, "Append right eigenvectors in the symmetric basis");

  std::string level = "quick", only;
  int flip = -1;
  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance checks");
  verify_cmd->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
  verify_cmd->add_option("--flip-lc-term", flip, "Flip the sign of one L_c term (fault injection)")->group("");
  verify_cmd->add_option("--only", only, "Run a single named check (lc_oracle)")->group("");

  std::vector<std::string> args;
  try {
    args = with_config_entries(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }
  std::vector<const char*> argp;
  for (const auto& a : args) argp.push_back(a.c_str());
  CLI11_PARSE(app, static_cast<int>(argp.size()), argp.data());

  try {
    if (*curve) {
      cfg.kind = parse_state_kind(kind);
      cfg.methods = cli::parse_methods(methods);
      cli::cmd_curve(cfg);
    } else if (*basis) {
      cli::cmd_basis(std::cout, basis_n, basis_m < 0 ? basis_n : basis_m, vectors);
    } else if (*verify_cmd) {
      verify::Options opt;
      opt.level = level == "full" ? verify::Level::full : verify::Level::quick;
      if (flip >= 0) opt.flipped_lc_term = static_cast<std::size_t>(flip);
      return cli::cmd_verify(std::cout, opt, only) == 0 ? 0 : 1;
    }
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
