#include "canon/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "canon/debranges.hpp"
#include "canon/error.hpp"
#include "canon/isp.hpp"
#include "canon/measure.hpp"
#include "canon/rh.hpp"
#include "canon/system.hpp"
#include "canon/toeplitz.hpp"

namespace canon::validate {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

constexpr double kBesselM[] = {0.25, 0.5, 0.75};
constexpr double kBesselZ[] = {-4.0, -1.0, -0.5, 0.5, 1.0, 4.0};
constexpr double kBesselT[] = {0.5, 1.0, 2.0};
constexpr double kOdeTol = 1e-11;

using measure::SpectralMeasure;

Check at_most(std::string label, double value, double tol) { return {std::move(label), value, tol, Bound::AtMost}; }

Check at_least(std::string label, double value, double threshold) {
  return {std::move(label), value, threshold, Bound::AtLeast, false};
}

Check holds(std::string label, bool ok) { return {std::move(label), ok ? 1.0 : 0.0, 1.0, Bound::AtLeast, false}; }

double rel(double a, double ref) { return std::abs(a - ref) / std::abs(ref); }

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
  return v;
}

Criterion bessel_direct() {
  Criterion c{1, "bessel_direct_solve", {}};
  double worst = 0.0;
  for (double m : kBesselM) {
    const system::HamiltonianSpec H{system::DiagonalPower{m}};
    for (double z : kBesselZ)
      for (double t : kBesselT) {
        const auto s = system::transfer_matrix(H, t, z, kOdeTol);
        const auto cf = system::bessel_closed_form(m, t, z);
        worst = std::max({worst, rel(s.A.real(), cf.A), rel(s.C.real(), cf.C)});
      }
  }
  c.checks.push_back(at_most("max rel err of A and C vs closed form", worst, 1e-6));
  return c;
}

Criterion conservation() {
  Criterion c{2, "transfer_matrix_conservation", {}};
  double det = 0.0, at_zero = 0.0;
  for (double m : kBesselM) {
    const system::HamiltonianSpec H{system::DiagonalPower{m}};
    for (double t : kBesselT) {
      for (double z : kBesselZ) det = std::max(det, system::transfer_matrix(H, t, z, kOdeTol).det_error());
      const auto s = system::transfer_matrix(H, t, 0.0, kOdeTol);
      at_zero = std::max({at_zero, std::abs(s.A - 1.0), std::abs(s.B), std::abs(s.C), std::abs(s.D - 1.0)});
    }
  }
  c.checks.push_back(at_most("max |det M - 1|", det, 1e-8));
  c.checks.push_back(at_most("max |M(t,0) - I|", at_zero, 0.0));
  return c;
}

Criterion beta_identity() {
  Criterion c{3, "rh_beta_identity", {}};
  double worst = 0.0;
  for (double D : {-2.0, -1.0, -0.1, 0.1, 1.0, 2.0})
    for (double t : kBesselT) {
      const double ref = rh::integral_inv_x(t, D);
      const auto q = rh::integral_inv_x_quadrature(t, D);
      worst = std::max(worst, std::abs(q - ref) / std::abs(ref));
    }
  c.checks.push_back(at_most("max rel err of int 1/X+ vs 2tD/(e^D-1)", worst, 1e-8));
  return c;
}

Criterion toeplitz_rh() {
  Criterion c{4, "toeplitz_rh_agreement", {}};
  double worst = 0.0;
  const std::pair<double, double> cases[] = {{1.0, 0.0}, {2.0, 1.0}, {2.0, -1.0}, {1.0, 0.5}};
  for (auto [c1, c2] : cases)
    for (double t : kBesselT) {
      const auto p = rh::RHProblem::for_measure(c1, c2, t);
      const double ref = p.g * rh::integral_inv_x(t, p.D) / kSqrt2Pi;
      const double k0 = toeplitz::solve_truncated(SpectralMeasure::homogeneous(c1, c2), t, 512).k0;
      worst = std::max(worst, rel(k0, ref));
    }
  c.checks.push_back(at_most("max rel err of k_t(0), N=512", worst, 1e-4));
  return c;
}

Criterion normalization() {
  Criterion c{5, "h11_normalization", {}};
  const std::vector<double> ts{0.5, 1.0, 2.0};
  double leb = 0.0, hom = 0.0;
  for (double h : isp::recover_h11(SpectralMeasure::lebesgue(), ts, 512)) leb = std::max(leb, std::abs(h - 1.0));
  const double ref = 0.5 * std::log(3.0);
  for (double h : isp::recover_h11(SpectralMeasure::homogeneous(2.0, 1.0), ts, 512))
    hom = std::max(hom, std::abs(h - ref));
  c.checks.push_back(at_most("Lebesgue max |h11 - 1|", leb, 1e-8));
  c.checks.push_back(at_most("(2,1) max |h11 - log(3)/2|", hom, 1e-3));
  return c;
}

Criterion scaling() {
  Criterion c{6, "kernel_scaling_laws", {}};
  double bessel = 0.0, wrong = std::numeric_limits<double>::infinity();
  for (double m : kBesselM) {
    const double nu = 0.5 * (1.0 + m);
    auto k = [m](double t, double z) { return debranges::bessel_kernel(m, t, z); };
    bessel = std::max(bessel, debranges::homogeneity_residual(k, nu - 1.0));
    wrong = std::min(wrong, debranges::homogeneity_residual(k, nu - 0.5));
  }
  c.checks.push_back(at_most("free kernel residual", debranges::homogeneity_residual(debranges::free_kernel, std::nullopt), 1e-9));
  c.checks.push_back(at_most("Bessel kernel residual, order nu-1", bessel, 1e-9));
  c.checks.push_back(at_least("wrong-order control residual", wrong, 0.1));
  return c;
}

Criterion bessel_inverse() {
  Criterion c{7, "bessel_inverse", {}};
  const auto ts = linspace(0.25, 2.0, 36);
  double worst = 0.0;
  for (double m : kBesselM) {
    const auto h = isp::recover_h11([m](double t) { return debranges::bessel_kernel(m, t, 0.0); }, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) worst = std::max(worst, rel(h[i], std::pow(ts[i], m)));
  }
  c.checks.push_back(at_most("max rel err of h11 vs t^m", worst, 1e-5));
  return c;
}

Criterion offdiagonal() {
  Criterion c{8, "offdiagonal_structure", {}};
  const auto m = SpectralMeasure::homogeneous(2.0, 1.0);
  std::vector<double> ts(std::begin(isp::kLogFitTimes), std::end(isp::kLogFitTimes)), ls;
  for (double t : ts) ls.push_back(isp::l_at_zero(m, t, 512));
  c.checks.push_back(at_least("R^2 of l_t(0)/t vs log t", isp::fit_log_t(ts, ls).r2, 0.9999));

  const double jump = m.density(1.0) - m.density(-1.0);
  double b = 0.0;
  for (double t : ts) b = std::max(b, std::abs(isp::b_integral_quadrature(m, t) + jump * std::log(t)));
  c.checks.push_back(at_most("max |B + [rho(1)-rho(-1)] log t|", b, 1e-6));

  double even = 0.0;
  for (const auto& e : {SpectralMeasure::lebesgue(), SpectralMeasure::homogeneous(2.0, 0.0)})
    for (double g : isp::recover_offdiagonal(e, ts, 512, 0.1)) even = std::max(even, std::abs(g));
  c.checks.push_back(at_most("even measures max |g|", even, 1e-8));
  return c;
}

Criterion assembled() {
  Criterion c{9, "assembled_hamiltonian", {}};
  const std::vector<double> ts{0.5, 1.0, 2.0};
  double det = 0.0, spread = 0.0;
  for (auto [c1, c2] : {std::pair{2.0, 1.0}, std::pair{1.0, 0.5}}) {
    const auto m = SpectralMeasure::homogeneous(c1, c2);
    const auto H = isp::assemble_hamiltonian(ts, isp::recover_h11(m, ts, 512), isp::recover_offdiagonal(m, ts, 512, 0.1));
    det = std::max(det, H.max_det_error());
    spread = std::max(spread, H.h11_relative_spread());
  }
  c.checks.push_back(at_most("max |det H - 1|", det, 1e-12));
  c.checks.push_back(at_most("h11 relative spread", spread, 1e-4));

  const double shift = 0.7;
  const auto base = isp::homogeneous_closed_form(2.0, 1.0, 0.0, ts, 512);
  const auto moved = isp::homogeneous_closed_form(2.0, 1.0, shift, ts, 512);
  double h11_change = 0.0, h12_shift = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    h11_change = std::max(h11_change, std::abs(moved.hamiltonian.h11[i] - base.hamiltonian.h11[i]));
    h12_shift = std::max(h12_shift, std::abs(moved.hamiltonian.h12[i] - base.hamiltonian.h12[i] - shift));
  }
  c.checks.push_back(at_most("Cfree change of h11", h11_change, 0.0));
  c.checks.push_back(at_most("Cfree shift error of h12", h12_shift, 1e-14));
  return c;
}

Criterion pw_classifier() {
  Criterion c{10, "pw_sampling_classifier", {}};
  const double ts[] = {0.5, 1.0};
  bool hom = true, quasi = true;
  for (auto [c1, c2] : {std::pair{1.0, 0.0}, std::pair{2.0, 1.0}, std::pair{1.0, -0.5}})
    hom = hom && measure::is_pw_sampling(SpectralMeasure::homogeneous(c1, c2), ts, 64.0).sampling;
  for (double nu : {-0.9, -0.75, -0.25, -0.1})
    quasi = quasi && !measure::is_pw_sampling(SpectralMeasure::quasi_homogeneous(nu, 1.0, 1.0), ts, 64.0).sampling;
  const bool flat = measure::is_pw_sampling(SpectralMeasure::quasi_homogeneous(-0.5, 2.0, 1.0), ts, 64.0).sampling;
  c.checks.push_back(holds("homogeneous measures certified", hom));
  c.checks.push_back(holds("quasi-homogeneous nu != -1/2 rejected", quasi));
  c.checks.push_back(holds("quasi-homogeneous nu = -1/2 certified", flat));
  return c;
}

std::string fmt(double x, int digits = 3) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

}  // namespace

bool Criterion::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& k) { return k.pass(); });
}

std::string Criterion::first_failure() const {
  for (const auto& k : checks)
    if (!k.pass()) return k.label;
  return {};
}

bool Report::pass() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.pass(); });
}

Criterion run_criterion(int id, const Options& opt) {
  using Fn = Criterion (*)();
  static constexpr Fn table[] = {bessel_direct, conservation,  beta_identity, toeplitz_rh, normalization,
                                 scaling,       bessel_inverse, offdiagonal,   assembled,   pw_classifier};
  if (id < 1 || id > kCriterionCount) throw DomainError("no acceptance criterion " + std::to_string(id));
  const auto start = std::chrono::steady_clock::now();
  Criterion c = table[id - 1]();
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (opt.strict)
    for (auto& k : c.checks)
      if (k.error_tolerance) k.tolerance = std::min(k.tolerance, *opt.strict);
  return c;
}

std::vector<Discrepancy> constant_discrepancies() {
  const double c1 = 2.0, c2 = 1.0, L = std::log((c1 + c2) / (c1 - c2));
  const double h11 = rh::h11_closed(c1, c2);
  const double C1 = h11 / kPi;  // k_1(0)
  const double C2 = C1 * 2.0 * c2;
  const double h12 = -C2;  // at t = e with Cfree = 0
  std::vector<Discrepancy> d;
  d.push_back({"h11", h11, rh::h11_without_normalization(c1, c2), "published display is sqrt(2 pi) times the repo value"});
  d.push_back({"C2", C2, L / kSqrt2Pi, "repo C2 = k_1(0) [rho(1) - rho(-1)] = log(3)/pi; published display log(3)/sqrt(2 pi)"});
  d.push_back({"C2_formula", C2, C2 / kPi,
               "published formula (1/pi) C1 [rho(1) - rho(-1)] with C1 = k_1(0) is pi times smaller; equal when C1 is read as h11"});
  d.push_back({"h22(t=e)", (1.0 + h12 * h12) / h11, (1.0 - h12 * h12) / h11,
               "repo h22 = (1 + h12^2)/h11 so det H = 1; published form is 1 - h12^2"});
  return d;
}

Report run_acceptance(const Options& opt) {
  Report r;
  r.strict = opt.strict;
  for (int id = 1; id <= kCriterionCount; ++id) r.criteria.push_back(run_criterion(id, opt));
  r.discrepancies = constant_discrepancies();
  return r;
}

void write_text(std::ostream& os, const Report& r) {
  for (const auto& c : r.criteria) {
    os << (c.pass() ? "PASS " : "FAIL ") << c.id << ' ' << c.name << ':';
    for (std::size_t i = 0; i < c.checks.size(); ++i) {
      const auto& k = c.checks[i];
      os << (i ? "; " : " ") << k.label << " = " << fmt(k.value, k.bound == Bound::AtLeast ? 10 : 3) << (k.bound == Bound::AtMost ? " <= " : " >= ")
         << fmt(k.tolerance);
      if (!k.pass()) os << " [failed]";
    }
    os << " (" << fmt(c.seconds) << " s)\n";
  }
  for (const auto& d : r.discrepancies)
    os << "DISCREPANCY " << d.quantity << ": repo " << fmt(d.repo) << ", published " << fmt(d.published) << " (" << d.relation
       << ")\n";
  os << (r.pass() ? "all criteria passed" : "acceptance failed") << '\n';
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json j;
  j["pass"] = r.pass();
  j["strict"] = r.strict ? nlohmann::json(*r.strict) : nlohmann::json(nullptr);
  for (const auto& c : r.criteria) {
    nlohmann::json jc{{"id", c.id}, {"name", c.name}, {"pass", c.pass()}, {"seconds", c.seconds}};
    for (const auto& k : c.checks)
      jc["checks"].push_back({{"label", k.label},
                              {"value", k.value},
                              {"tolerance", k.tolerance},
                              {"bound", k.bound == Bound::AtMost ? "at_most" : "at_least"},
                              {"pass", k.pass()}});
    j["criteria"].push_back(jc);
  }
  for (const auto& d : r.discrepancies)
    j["discrepancies"].push_back(
        {{"quantity", d.quantity}, {"repo", d.repo}, {"published", d.published}, {"relation", d.relation}});
  return j;
}

}  // namespace canon::validate
