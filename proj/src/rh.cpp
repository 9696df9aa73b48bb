#include "canon/rh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "canon/error.hpp"

namespace canon::rh {
namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

using boost::math::quadrature::gauss_kronrod;

// int_{-inf}^{inf} f(u) du split at u0. Every integrand here carries the
// factor sech^2(u/2) relative to its value near u0, so 40 units past either
// side of [min(u0, 0), max(u0, 0)] leave a tail below 1e-17.
cplx integrate_line(const std::function<cplx(double)>& f, double u0) {
  constexpr double kReach = 40.0;
  const double lo = std::min(u0, 0.0) - kReach;
  const double hi = std::max(u0, 0.0) + kReach;
  const cplx left = gauss_kronrod<double, 61>::integrate(f, lo, u0, 15, 1e-13);
  const cplx right = gauss_kronrod<double, 61>::integrate(f, u0, hi, 15, 1e-13);
  return left + right;
}

double s_of_u(double t, double u) { return t * std::tanh(0.5 * u); }
double ds_du(double t, double u) {
  const double c = std::cosh(0.5 * u);
  return 0.5 * t / (c * c);
}
double u_of_s(double t, double s) { return std::log((t + s) / (t - s)); }

// g / X^+ at the point with coordinate u.
cplx f_of_u(const RHProblem& p, double u) {
  return p.g * std::exp(-0.5 * p.D) * std::exp(-kI * (p.D * u / (2.0 * kPi)));
}

// int_{-t}^{t} f(s)/(s - z) ds. For z on the cut this is the principal
// value. The singularity is removed by subtracting f at the nearest cut point.
cplx cauchy_integral(const RHProblem& p, cplx z, bool on_cut) {
  const double t = p.t;
  const double x0 = std::clamp(z.real(), -t * (1.0 - 1e-12), t * (1.0 - 1e-12));
  const double u0 = u_of_s(t, x0);
  const cplx f0 = f_of_u(p, u0);
  auto integrand = [&](double u) -> cplx {
    const double s = s_of_u(t, u);
    const cplx diff = s - z;
    if (diff == 0.0) return 0.0;
    return (f_of_u(p, u) - f0) / diff * ds_du(t, u);
  };
  const cplx regular = integrate_line(integrand, u0);
  const cplx log_term = on_cut ? cplx(std::log((t - z.real()) / (t + z.real())), 0.0)
                               : std::log((z - t) / (z + t));
  return regular + f0 * log_term;
}

}  // namespace

RHProblem RHProblem::make(double t, double G, double g) {
  if (!(t > 0.0)) throw DomainError("RH problem: t must be positive");
  if (!(G > 0.0)) throw DomainError("RH problem: jump constant G must be positive");
  return RHProblem{t, G, g, std::log(G)};
}

RHProblem RHProblem::for_measure(double c1, double c2, double t) {
  if (!(c1 > std::abs(c2))) throw DomainError("RH problem: requires c1 > |c2|");
  return make(t, (c1 + c2) / (c1 - c2), 1.0 / (std::sqrt(2.0 * kPi) * (c1 - c2)));
}

cplx x_function(const RHProblem& p, cplx z) {
  if (z.imag() == 0.0 && std::abs(z.real()) <= p.t) throw DomainError("x_function: z lies on the cut [-t, t]");
  return std::exp(p.D / (2.0 * kPi * kI) * std::log((z - p.t) / (z + p.t)));
}

cplx x_plus(const RHProblem& p, double s) {
  if (!(std::abs(s) < p.t)) throw DomainError("x_plus: s must lie in (-t, t)");
  const double L = std::log((p.t - s) / (p.t + s));
  return std::exp(p.D * (0.5 + L / (2.0 * kPi * kI)));
}

cplx x_minus(const RHProblem& p, double s) { return x_plus(p, s) / p.G; }

RHSolution solve_constant_rh(const RHProblem& p) {
  RHSolution sol;
  sol.problem = p;
  const double inv_2pi = 1.0 / (2.0 * kPi);
  sol.X = [p](cplx z) { return x_function(p, z); };
  sol.Phi = [p, inv_2pi](cplx z) {
    return x_function(p, z) * cauchy_integral(p, z, false) * inv_2pi / kI;
  };
  auto principal = [p, inv_2pi](double x) { return cauchy_integral(p, x, true) * inv_2pi / kI; };
  auto f = [p](double x) { return p.g / x_plus(p, x); };
  sol.Phi_plus = [p, principal, f](double x) { return x_plus(p, x) * (principal(x) + 0.5 * f(x)); };
  sol.Phi_minus = [p, principal, f](double x) { return x_minus(p, x) * (principal(x) - 0.5 * f(x)); };
  sol.psi = [p, principal, f](double x) {
    const double inv_G = 1.0 / p.G;
    return x_plus(p, x) * ((1.0 - inv_G) * principal(x) + 0.5 * (1.0 + inv_G) * f(x));
  };
  sol.integral_psi = p.g * integral_inv_x_quadrature(p.t, p.D);
  return sol;
}

double integral_inv_x(double t, double D) {
  if (!(t > 0.0)) throw DomainError("integral_inv_x: t must be positive");
  if (D == 0.0) return 2.0 * t;
  return 2.0 * t * D / std::expm1(D);
}

cplx integral_inv_x_quadrature(double t, double D) {
  if (!(t > 0.0)) throw DomainError("integral_inv_x_quadrature: t must be positive");
  const RHProblem p{t, std::exp(D), 1.0, D};
  return integrate_line([&](double u) { return f_of_u(p, u) * ds_du(t, u); }, 0.0);
}

double beta_factor(double D) {
  if (D == 0.0) return 1.0;
  return D / (2.0 * std::sinh(0.5 * D));
}

cplx beta_integral_quadrature(double D) {
  // w = e^v: w^k dw / (1 + w)^2 = e^{k v} sech^2(v/2) / 4 dv
  const cplx k = kI * (D / (2.0 * kPi));
  return integrate_line(
      [&](double v) {
        const double c = std::cosh(0.5 * v);
        return std::exp(k * v) * (0.25 / (c * c));
      },
      0.0);
}

double h11_from_rh(double c1, double c2) {
  const RHProblem p = RHProblem::for_measure(c1, c2, 1.0);
  // k_t(0) = g I(t, D) / sqrt(2 pi) is linear in t
  const double dI_dt = integral_inv_x(1.0, p.D);
  return kPi * p.g * dI_dt / std::sqrt(2.0 * kPi);
}

double h11_closed(double c1, double c2) {
  if (!(c1 > std::abs(c2))) throw DomainError("h11_closed: requires c1 > |c2|");
  if (c2 == 0.0) return 1.0 / c1;
  return std::atanh(c2 / c1) / c2;
}

double h11_without_normalization(double c1, double c2) { return std::sqrt(2.0 * kPi) * h11_closed(c1, c2); }

void write_psi_csv(std::ostream& os, const RHSolution& sol, int N) {
  if (N < 1) throw DomainError("write_psi_csv: N must be positive");
  const double t = sol.problem.t;
  char buf[128];
  os << "s,re_psi,im_psi\n";
  for (int j = 0; j < N; ++j) {
    const double s = -t + 2.0 * t * (j + 0.5) / N;
    const cplx v = sol.psi(s);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s, v.real(), v.imag());
    os << buf;
  }
}

}  // namespace canon::rh
