// canon: direct and inverse spectral computations for 2x2 canonical systems.
//
// Curves go to --out (CSV, default stdout). The JSON summary goes to
// --summary, or to stdout when the CSV was written to a file, else stderr.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "canon/error.hpp"
#include "canon/io.hpp"
#include "canon/isp.hpp"
#include "canon/rh.hpp"
#include "canon/system.hpp"
#include "canon/toeplitz.hpp"
#include "canon/validate.hpp"

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

struct Outputs {
  std::string csv_path;
  std::string summary_path;
};

void add_outputs(CLI::App* cmd, Outputs& out) {
  cmd->add_option("--out", out.csv_path, "CSV output path (default stdout)");
  cmd->add_option("--summary", out.summary_path, "JSON summary path");
}

void emit(const Outputs& out, const std::string& csv, const json& summary) {
  if (out.csv_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(out.csv_path);
    if (!f) throw canon::DomainError("cannot write " + out.csv_path);
    f << csv;
  }
  const std::string text = summary.dump(2) + "\n";
  if (!out.summary_path.empty()) {
    std::ofstream f(out.summary_path);
    if (!f) throw canon::DomainError("cannot write " + out.summary_path);
    f << text;
  } else if (!out.csv_path.empty()) {
    std::cout << text;
  } else {
    std::cerr << text;
  }
}

void check_t_range(double tmin, double tmax, int steps) {
  if (!(tmin > 0.0) || !(tmax > tmin)) throw canon::DomainError("need 0 < tmin < tmax");
  if (steps < 2) throw canon::DomainError("need --steps >= 2");
}

int run_direct(const std::string& hamiltonian, const std::string& t_text, const std::string& z_text, double tol,
               const Outputs& out) {
  const auto H = canon::io::load_hamiltonian(hamiltonian);
  const auto ts = canon::io::parse_grid(t_text);
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts[i] < 0.0 || (i > 0 && ts[i] <= ts[i - 1])) throw canon::DomainError("t values must be >= 0 and increasing");
  std::vector<std::complex<double>> zs;
  for (double z : canon::io::parse_grid(z_text)) zs.emplace_back(z, 0.0);
  const auto samples = canon::system::transfer_matrix_batch(H, ts, zs, tol);

  std::ostringstream csv;
  canon::system::write_transfer_csv(csv, samples);
  double det = 0.0;
  for (const auto& s : samples) det = std::max(det, s.det_error());
  emit(out, csv.str(), {{"hamiltonian", H.describe()}, {"samples", samples.size()}, {"tol", tol}, {"max_det_error", det}});
  return 0;
}

int run_inverse(const std::string& measure_arg, double tmin, double tmax, int steps, int N, double cfree,
                const Outputs& out) {
  check_t_range(tmin, tmax, steps);
  const auto m = canon::io::load_measure(measure_arg);
  std::vector<double> ts;
  for (int i = 0; i < steps; ++i) ts.push_back(tmin + (tmax - tmin) * i / (steps - 1));
  const auto h11 = canon::isp::recover_h11(m, ts, N);
  const auto g = canon::isp::recover_offdiagonal(m, ts, N);
  std::vector<double> h12;
  for (double v : g) h12.push_back(v + cfree);
  const auto H = canon::isp::assemble_hamiltonian(ts, h11, h12, cfree);

  std::ostringstream csv;
  canon::isp::write_hamiltonian_csv(csv, H);
  json summary{{"measure", m.describe()},
               {"N", N},
               {"free_constant_C", cfree},
               {"max_det_error", H.max_det_error()},
               {"h11_relative_spread", H.h11_relative_spread()}};
  if (const auto* h = std::get_if<canon::measure::Homogeneous>(&m.variant())) {
    const auto s = canon::isp::homogeneous_closed_form(h->c1, h->c2, cfree, ts, N);
    summary["homogeneous"] = {{"C1", s.C1}, {"h11", s.h11}, {"C2", s.C2}, {"log_fit_r2", s.fit.r2}};
    summary["discrepancies"] = {
        {{"quantity", "h11"}, {"repo", s.h11}, {"published_display", s.h11_published_display}},
        {{"quantity", "C2"}, {"repo", s.C2}, {"published_display", s.C2_published_display}, {"published_formula", s.C2_published_formula}},
        {{"quantity", "h22"}, {"repo", "(1 + h12^2)/h11"}, {"published_display", "1 - h12^2"}}};
  }
  emit(out, csv.str(), summary);
  return 0;
}

int run_rh(double c1, double c2, double t, int grid, const Outputs& out) {
  if (grid < 1) throw canon::DomainError("need --grid >= 1");
  const auto sol = canon::rh::solve_constant_rh(canon::rh::RHProblem::for_measure(c1, c2, t));
  std::ostringstream csv;
  canon::rh::write_psi_csv(csv, sol, grid);
  const double h11 = canon::rh::h11_from_rh(c1, c2);
  emit(out, csv.str(),
       {{"c1", c1},
        {"c2", c2},
        {"t", t},
        {"G", sol.problem.G},
        {"g", sol.problem.g},
        {"integral_psi", {sol.integral_psi.real(), sol.integral_psi.imag()}},
        {"k0", sol.integral_psi.real() / std::sqrt(2.0 * kPi)},
        {"h11_repo", h11},
        {"h11_published_display", canon::rh::h11_without_normalization(c1, c2)}});
  return 0;
}

int run_toeplitz(const std::string& measure_arg, double t, int N, const Outputs& out) {
  const auto m = canon::io::load_measure(measure_arg);
  const auto sol = canon::toeplitz::solve_truncated(m, t, N);
  std::ostringstream csv;
  canon::toeplitz::write_psi_csv(csv, sol);
  emit(out, csv.str(),
       {{"measure", m.describe()},
        {"t", t},
        {"N", N},
        {"k0", sol.k0},
        {"k0_imag", sol.k0_imag},
        {"residual", sol.residual},
        {"cond_estimate", sol.cond_estimate}});
  return 0;
}

int run_validate(std::optional<double> strict, bool as_json) {
  const auto report = canon::validate::run_acceptance({strict});
  if (as_json)
    std::cout << canon::validate::to_json(report).dump(2) << '\n';
  else
    canon::validate::write_text(std::cout, report);
  for (const auto& c : report.criteria)
    if (!c.pass()) std::cerr << "criterion " << c.id << " " << c.name << " failed: " << c.first_failure() << '\n';
  return report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direct and inverse spectral problems for 2x2 canonical systems"};
  app.require_subcommand(1);

  Outputs out;
  std::string model, t_text = "1", z_text = "-4:4:9";
  double tol = 1e-10;
  auto* direct = app.add_subcommand("direct", "Transfer matrix M(t, z) of a Hamiltonian");
  direct->add_option("--hamiltonian", model, "Hamiltonian JSON (inline or path)")->required();
  direct->add_option("--t", t_text, "times: list a,b,c or grid a:b:n");
  direct->add_option("--z-grid", z_text, "real spectral parameters: list or grid");
  direct->add_option("--tol", tol, "integrator tolerance")->check(CLI::Range(1e-12, 1e-4));
  add_outputs(direct, out);

  double tmin = 0.5, tmax = 2.0, cfree = 0.0;
  int steps = 16, N = 512;
  auto* inverse = app.add_subcommand("inverse", "Hamiltonian from a spectral measure");
  inverse->add_option("--measure", model, "measure JSON (inline or path)")->required();
  inverse->add_option("--tmin", tmin);
  inverse->add_option("--tmax", tmax);
  inverse->add_option("--steps", steps, "number of t points");
  inverse->add_option("--N", N, "collocation nodes")->check(CLI::Range(16, 8192));
  inverse->add_option("--cfree", cfree, "free constant added to h12");
  add_outputs(inverse, out);

  double c1 = 2.0, c2 = 1.0, t = 1.0;
  int grid = 200;
  auto* rhcmd = app.add_subcommand("rh", "Constant-jump Riemann-Hilbert solution for rho = c1 + c2 sign(x)");
  rhcmd->add_option("--c1", c1);
  rhcmd->add_option("--c2", c2);
  rhcmd->add_option("--t", t);
  rhcmd->add_option("--grid", grid, "number of psi samples");
  add_outputs(rhcmd, out);

  auto* toep = app.add_subcommand("toeplitz", "Truncated Toeplitz equation by collocation");
  toep->add_option("--measure", model, "measure JSON (inline or path)")->required();
  toep->add_option("--t", t);
  toep->add_option("--N", N, "collocation nodes")->check(CLI::Range(16, 8192));
  add_outputs(toep, out);

  std::optional<double> strict;
  bool as_json = false;
  auto* val = app.add_subcommand("validate", "Run the acceptance suite");
  val->add_option("--strict", strict, "cap every error tolerance at this value");
  val->add_flag("--json", as_json, "JSON report");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*direct) return run_direct(model, t_text, z_text, tol, out);
    if (*inverse) return run_inverse(model, tmin, tmax, steps, N, cfree, out);
    if (*rhcmd) return run_rh(c1, c2, t, grid, out);
    if (*toep) return run_toeplitz(model, t, N, out);
    return run_validate(strict, as_json);
  } catch (const std::exception& e) {
    std::cerr << "canon: " << e.what() << '\n';
    return 2;
  }
}
