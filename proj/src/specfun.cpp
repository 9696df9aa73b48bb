#include "canon/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "canon/error.hpp"

namespace canon::specfun {
namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Series/asymptotic switch for J_nu and F_nu.
constexpr double kSeriesLimit = 12.0;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::nearbyint(x); }

bool is_integer(double x) { return x == std::nearbyint(x); }

double lanczos_gamma(double x) {
  // valid for x >= 0.5
  x -= 1.0;
  double a = kLanczosCoeffs[0];
  const double t = x + kLanczosG + 0.5;
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) a += kLanczosCoeffs[i] / (x + static_cast<double>(i));
  // split the power to keep t^(x+1/2) finite a little longer
  const double half = std::pow(t, 0.5 * (x + 0.5));
  return std::sqrt(2.0 * kPi) * half * (half * std::exp(-t)) * a;
}

// Sum_k (-1)^k (x/2)^{2k} / (k! Gamma(k+nu+1)) and, when requested, its
// x-derivative. Both are entire in x.
struct SeriesValue {
  double value = 0.0;
  double derivative = 0.0;
};

SeriesValue reduced_series(double nu, double x) {
  const double q = 0.25 * x * x;  // (x/2)^2
  double power = 1.0;              // (x/2)^{2k} / k!
  SeriesValue out;
  for (int k = 0; k < 300; ++k) {
    if (k > 0) power *= q / static_cast<double>(k);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double term = sign * power * rgamma(k + nu + 1.0);
    out.value += term;
    // d/dx (x/2)^{2k} = k (x/2)^{2k-1}, i.e. term * 2k / x
    if (k > 0 && x != 0.0) out.derivative += term * 2.0 * k / x;
    const bool past_peak = k > q && (k + nu + 1.0) > 1.0;
    if (past_peak && std::abs(term) <= 1e-17 * std::abs(out.value)) break;
  }
  return out;
}

// Hankel asymptotic expansion, x > 0 large.
double bessel_j_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 0.0;
  double q = 0.0;
  double a = 1.0;  // a_k / x^k
  double prev = INFINITY;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      a *= (mu - odd * odd) / (8.0 * k * x);
    }
    const double mag = std::abs(a);
    if (k > nu + 1.0 && mag > prev) break;  // series started to diverge
    const int phase = k % 4;
    if (phase == 0) p += a;
    else if (phase == 1) q += a;
    else if (phase == 2) p -= a;
    else q -= a;
    if (mag < 1e-17) break;
    prev = mag;
  }
  const double omega = x - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(omega) - q * std::sin(omega));
}

}  // namespace

double sinpi(double x) {
  double r = std::fmod(x, 2.0);
  if (r > 1.0) r -= 2.0;
  if (r < -1.0) r += 2.0;
  if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
  if (r > 0.5) return std::sin(kPi * (1.0 - r));
  if (r < -0.5) return -std::sin(kPi * (1.0 + r));
  return std::sin(kPi * r);
}

double gamma(double x) {
  if (std::isnan(x)) return x;
  if (is_nonpositive_integer(x)) throw DomainError("gamma: pole at nonpositive integer " + std::to_string(x));
  if (x < 0.5) return kPi / (sinpi(x) * lanczos_gamma(1.0 - x));
  return lanczos_gamma(x);
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x < 0.5) return sinpi(x) * lanczos_gamma(1.0 - x) / kPi;
  if (x > 171.0) return 0.0;
  return 1.0 / lanczos_gamma(x);
}

double f_nu(double nu, double x) {
  const double ax = std::abs(x);
  if (ax <= kSeriesLimit) return std::pow(2.0, -nu) * reduced_series(nu, ax).value;
  return bessel_j_asymptotic(nu, ax) / std::pow(ax, nu);
}

double f_nu_derivative(double nu, double x) {
  const double ax = std::abs(x);
  double d = 0.0;
  if (ax <= kSeriesLimit) {
    d = std::pow(2.0, -nu) * reduced_series(nu, ax).derivative;
  } else {
    d = -ax * f_nu(nu + 1.0, ax);
  }
  return x < 0.0 ? -d : d;  // F_nu is even
}

double bessel_j(double nu, double x) {
  if (std::isnan(x) || std::isnan(nu)) return NAN;
  if (x < 0.0) {
    if (!is_integer(nu)) throw DomainError("bessel_j: negative argument requires integer order");
    const double v = bessel_j(nu, -x);
    return (static_cast<long long>(std::nearbyint(nu)) % 2 == 0) ? v : -v;
  }
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0 || is_integer(nu)) return 0.0;
    throw DomainError("bessel_j: J_nu(0) is unbounded for negative non-integer order");
  }
  if (x <= kSeriesLimit) return std::pow(x, nu) * f_nu(nu, x);
  return bessel_j_asymptotic(nu, x);
}

double BesselODEParams::identity_residual() const {
  const double r1 = std::abs(a - (1.0 - 2.0 * alpha));
  const double r2 = std::abs(b - (alpha * alpha - beta * beta * nu_squared));
  const double r3 = std::abs(c * c - beta * beta * kappa * kappa);
  return std::max({r1, r2, r3});
}

BesselODEParams bessel_parameter_map(double a, double b, double c, double beta) {
  if (!(beta > 0.0)) throw DomainError("bessel_parameter_map: beta must be positive");
  if (c == 0.0) throw DomainError("bessel_parameter_map: c must be nonzero");
  BesselODEParams p;
  p.a = a;
  p.b = b;
  p.c = c;
  p.beta = beta;
  p.alpha = 0.5 * (1.0 - a);
  p.kappa = std::abs(c) / beta;
  p.nu_squared = (p.alpha * p.alpha - b) / (beta * beta);
  return p;
}

}  // namespace canon::specfun
