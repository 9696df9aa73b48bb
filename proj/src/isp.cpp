#include "canon/isp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "canon/error.hpp"

namespace canon::isp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

using boost::math::quadrature::gauss_kronrod;
using cplx = std::complex<double>;

struct StepDensity {
  double c1 = 0.0;  // (rho(+inf) + rho(-inf)) / 2
  double c2 = 0.0;  // (rho(+inf) - rho(-inf)) / 2
};

StepDensity step_part(const measure::SpectralMeasure& m) {
  return {0.5 * (m.tail_plus() + m.tail_minus()), 0.5 * (m.tail_plus() - m.tail_minus())};
}

double sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

double RecoveredHamiltonian::max_det_error() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    worst = std::max(worst, std::abs(h11[i] * h22[i] - h12[i] * h12[i] - 1.0));
  return worst;
}

double RecoveredHamiltonian::h11_relative_spread() const {
  if (h11.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(h11.begin(), h11.end());
  double mean = 0.0;
  for (double v : h11) mean += v;
  mean /= static_cast<double>(h11.size());
  return (*hi - *lo) / mean;
}

system::HamiltonianSpec RecoveredHamiltonian::to_spec() const {
  return system::HamiltonianSpec(system::Tabulated{t_grid, h11, h12, h22});
}

double pi_derivative(const TraceFunction& f, double t, double dt) {
  if (!(dt > 0.0 && t > dt)) throw DomainError("pi_derivative: need 0 < dt < t");
  const double d_full = (f(t + dt) - f(t - dt)) / (2.0 * dt);
  const double d_half = (f(t + 0.5 * dt) - f(t - 0.5 * dt)) / dt;
  return kPi * (4.0 * d_half - d_full) / 3.0;
}

double default_step(std::span<const double> t_grid) {
  if (t_grid.empty()) throw DomainError("default_step: empty grid");
  double step = 0.5 * t_grid.front();
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
    const double gap = t_grid[i + 1] - t_grid[i];
    if (!(gap > 0.0)) throw DomainError("default_step: grid must be increasing");
    step = std::min(step, gap);
  }
  if (!(step > 0.0)) throw DomainError("default_step: grid must be positive");
  return step;
}

std::vector<double> recover_h11(const TraceFunction& k0_of_t, std::span<const double> t_grid,
                                std::optional<double> dt) {
  const double h = dt.value_or(default_step(t_grid));
  std::vector<double> out;
  for (double t : t_grid) {
    const double pts[] = {t - h, t - 0.5 * h, t, t + 0.5 * h, t + h};
    double vals[5];
    for (int i = 0; i < 5; ++i) vals[i] = k0_of_t(pts[i]);
    for (int i = 1; i < 5; ++i) {
      if (vals[i] < vals[i - 1]) {
        std::ostringstream os;
        os << "recover_h11: k_t(0) decreases between t = " << pts[i - 1] << " and t = " << pts[i];
        throw NumericalError(os.str());
      }
    }
    const double d_full = (vals[4] - vals[0]) / (2.0 * h);
    const double d_half = (vals[3] - vals[1]) / h;
    out.push_back(kPi * (4.0 * d_half - d_full) / 3.0);
  }
  return out;
}

std::vector<double> recover_h11(const measure::SpectralMeasure& m, std::span<const double> t_grid, int N,
                                std::optional<double> dt) {
  return recover_h11([&](double t) { return toeplitz::solve_truncated(m, t, N).k0; }, t_grid, dt);
}

double generalized_hilbert_at_zero(const measure::SpectralMeasure& m, const toeplitz::PsiSolution& sol) {
  const auto& g = sol.grid;
  if (g.N % 2 != 0) throw DomainError("generalized_hilbert_at_zero: N must be even (no node at 0)");
  const StepDensity step = step_part(m);

  cplx sum{0.0, 0.0};
  for (int j = 0; j < g.N; ++j) {
    const double xi = g.nodes[j];
    const cplx c = g.weights[j] * sol.values[j];
    // p.v. int (e^{i xi s} - 1)/s ds = i pi sign(xi);
    // int sign(s)[(e^{i xi s} - 1)/s + s/(1 + s^2)] ds = 2(-gamma - log|xi|)
    sum += c * (step.c1 * cplx(0.0, kPi * sign(xi)) + step.c2 * 2.0 * (-kEulerGamma - std::log(std::abs(xi))));
  }
  double value = sum.real() / (kPi * kSqrt2Pi);

  if (const auto* gd = std::get_if<measure::GeneralDensity>(&m.variant())) {
    if (!gd->remainder_support)
      throw UnsupportedVariant("generalized_hilbert_at_zero: density without a compact remainder support");
    const double k0 = sol.kernel(0.0).real();
    auto integrand = [&](double s) {
      const double r = m.density(s) - step.c1 - step.c2 * sign(s);
      const double k = sol.kernel(s).real();
      return ((k - k0) / s + s * k0 / (1.0 + s * s)) * r;
    };
    const auto [a, b] = *gd->remainder_support;
    double rem = 0.0;
    if (a < 0.0) rem += gauss_kronrod<double, 31>::integrate(integrand, a, std::min(b, 0.0), 15, 1e-12);
    if (b > 0.0) rem += gauss_kronrod<double, 31>::integrate(integrand, std::max(a, 0.0), b, 15, 1e-12);
    value += rem / kPi;
  }
  return value;
}

HilbertQuadrature generalized_hilbert_quadrature(const measure::SpectralMeasure& m, const TraceFunction& k_eval,
                                                 double k0, double t, double tol, std::optional<double> R_opt) {
  if (!(t > 0.0)) throw DomainError("generalized_hilbert_quadrature: t must be positive");
  const double R = R_opt.value_or(std::max(50.0, 20.0 / t));
  const double rp = m.tail_plus(), rm = m.tail_minus();

  auto integrand = [&](double s) {
    const double k = k_eval(s);
    return ((k - k0) / s + s * k0 / (1.0 + s * s)) * m.density(s);
  };
  auto kernel_mass = [&](double s) {
    const double k = k_eval(s);
    return k * k * m.density(s);
  };
  // panels of width ~ 1/t keep the oscillation resolved
  const int panels = std::max(2, static_cast<int>(std::ceil(2.0 * R * t)));
  double inner = 0.0, mass = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = -R + 2.0 * R * i / panels, b = -R + 2.0 * R * (i + 1) / panels;
    inner += gauss_kronrod<double, 31>::integrate(integrand, a, b, 8, 1e-12);
    mass += gauss_kronrod<double, 31>::integrate(kernel_mass, a, b, 8, 1e-12);
  }
  // int_R^inf -k0/(s(1 + s^2)) ds = -(k0/2) log(1 + 1/R^2), mirrored on the left
  const double tail_k0 = 0.5 * k0 * std::log1p(1.0 / (R * R)) * (rm - rp);
  const double tail_mass = std::max(0.0, k0 - mass);
  const double bound = std::sqrt(tail_mass * (rp + rm) / R) / kPi;

  HilbertQuadrature out{(inner + tail_k0) / kPi, R, bound};
  if (bound > tol) {
    std::ostringstream os;
    os << "generalized_hilbert_quadrature: tail bound " << bound << " exceeds tolerance " << tol << " at R = " << R;
    throw NumericalError(os.str());
  }
  return out;
}

double l_at_zero(const measure::SpectralMeasure& m, double t, int N) {
  return generalized_hilbert_at_zero(m, toeplitz::solve_truncated(m, t, N));
}

std::vector<double> recover_offdiagonal(const measure::SpectralMeasure& m, std::span<const double> t_grid, int N,
                                        std::optional<double> dt) {
  const double h = dt.value_or(default_step(t_grid));
  std::vector<double> out;
  for (double t : t_grid) out.push_back(pi_derivative([&](double s) { return l_at_zero(m, s, N); }, t, h));
  return out;
}

LogFit fit_log_t(std::span<const double> t, std::span<const double> l) {
  if (t.size() != l.size() || t.size() < 2) throw DomainError("fit_log_t: need >= 2 matching samples");
  const double n = static_cast<double>(t.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double x = std::log(t[i]), y = l[i] / t[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
  LogFit fit;
  fit.slope = cxy / vx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r2 = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
  return fit;
}

double b_integral_quadrature(const measure::SpectralMeasure& m, double t) {
  if (!(t > 0.0)) throw DomainError("b_integral_quadrature: t must be positive");
  auto f = [&](double s) { return s * (1.0 / (s * s + t * t) - 1.0 / (1.0 + s * s)) * m.density(s); };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cuts{-inf, -std::max(1.0, t), -std::min(1.0, t), 0.0, std::min(1.0, t), std::max(1.0, t), inf};
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) sum += gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 20, 1e-13);
  return sum;
}

RecoveredHamiltonian assemble_hamiltonian(std::span<const double> t_grid, std::span<const double> h11,
                                          std::span<const double> h12, double free_constant_C) {
  if (t_grid.size() != h11.size() || t_grid.size() != h12.size())
    throw InvalidModel("assemble_hamiltonian: column lengths differ");
  RecoveredHamiltonian H;
  H.free_constant_C = free_constant_C;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(h11[i] > 0.0)) {
      std::ostringstream os;
      os << "assemble_hamiltonian: h11 must be positive, got " << h11[i] << " at t = " << t_grid[i];
      throw InvalidModel(os.str());
    }
    H.t_grid.push_back(t_grid[i]);
    H.h11.push_back(h11[i]);
    H.h12.push_back(h12[i]);
    H.h22.push_back((1.0 + h12[i] * h12[i]) / h11[i]);
  }
  return H;
}

system::HamiltonianSpec HomogeneousSolution::spec() const {
  return system::HamiltonianSpec(system::HomogeneousISP{h11, hamiltonian.free_constant_C, C2});
}

HomogeneousSolution homogeneous_closed_form(double c1, double c2, double free_constant_C,
                                            std::span<const double> t_grid, int N) {
  const auto m = measure::SpectralMeasure::homogeneous(c1, c2);
  HomogeneousSolution s;
  s.C1 = toeplitz::solve_truncated(m, 1.0, N).k0;
  s.h11 = kPi * s.C1;

  std::vector<double> ts(std::begin(kLogFitTimes), std::end(kLogFitTimes)), ls;
  for (double t : ts) ls.push_back(l_at_zero(m, t, N));
  s.fit = fit_log_t(ts, ls);
  s.C2 = -kPi * s.fit.slope;

  const double L = std::log((c1 + c2) / (c1 - c2));
  s.h11_published_display = c2 == 0.0 ? std::sqrt(2.0 * kPi) / c1 : std::sqrt(kPi / 2.0) * L / c2;
  s.C2_published_display = L / kSqrt2Pi;
  s.C2_published_formula = s.C1 * (m.density(1.0) - m.density(-1.0)) / kPi;

  std::vector<double> h11(t_grid.size(), s.h11), h12;
  for (double t : t_grid) h12.push_back(free_constant_C - s.C2 * std::log(t));
  s.hamiltonian = assemble_hamiltonian(t_grid, h11, h12, free_constant_C);
  return s;
}

void write_hamiltonian_csv(std::ostream& os, const RecoveredHamiltonian& H) {
  char buf[160];
  os << "t,h11,h12,h22\n";
  for (std::size_t i = 0; i < H.t_grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", H.t_grid[i], H.h11[i], H.h12[i], H.h22[i]);
    os << buf;
  }
}

}  // namespace canon::isp
