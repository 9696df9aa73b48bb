#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "canon/error.hpp"
#include "canon/rh.hpp"
#include "canon/toeplitz.hpp"

using namespace canon::toeplitz;
using canon::measure::SpectralMeasure;
using boost::math::quadrature::gauss_kronrod;

namespace {

const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

double rh_k0(double c1, double c2, double t) {
  const auto p = canon::rh::RHProblem::for_measure(c1, c2, t);
  return p.g * canon::rh::integral_inv_x(t, p.D) / kSqrt2Pi;
}

// (1/pi) p.v. int_{-t}^{t} v(s)/(s - x) ds by subtraction.
double pv_oracle(const std::function<double(double)>& v, double t, double x) {
  const double vx = v(x);
  auto f = [&](double s) { return s == x ? 0.0 : (v(s) - vx) / (s - x); };
  const double a = gauss_kronrod<double, 61>::integrate(f, -t, x, 15, 1e-13);
  const double b = gauss_kronrod<double, 61>::integrate(f, x, t, 15, 1e-13);
  return (a + b + vx * std::log((t - x) / (t + x))) / std::numbers::pi;
}

// int k_t(x)^2 rho(x) dx over the line; the tail beyond R uses
// k_t(x)^2 ~ sin^2 / (pi x)^2 averaged to k-independent 1/(2 pi^2 x^2) times the
// squared amplitude estimated at R, which is below the test tolerance anyway.
double kernel_norm_squared(const PsiSolution& sol, const SpectralMeasure& m, double R) {
  auto f = [&](double x) { return std::norm(sol.kernel(x)) * m.density(x); };
  double sum = 0.0;
  const double step = 2.0;
  for (double a = -R; a < R; a += step) sum += gauss_kronrod<double, 21>::integrate(f, a, a + step, 0, 0);
  return sum;
}

}  // namespace

TEST_CASE("Chebyshev grid and Fejer weights") {
  const auto g = CollocationGrid::chebyshev(1.5, 64);
  double total = 0.0;
  for (int j = 0; j < g.N; ++j) {
    CHECK(g.weights[j] > 0.0);
    CHECK(g.nodes[j] == doctest::Approx(-g.nodes[g.N - 1 - j]).epsilon(1e-15));
    if (j > 0) CHECK(g.nodes[j] > g.nodes[j - 1]);
    total += g.weights[j];
  }
  CHECK(std::abs(total - 3.0) < 1e-12);
  double moment = 0.0;
  for (int j = 0; j < g.N; ++j) moment += g.weights[j] * std::pow(g.nodes[j], 10);
  CHECK(moment == doctest::Approx(2.0 * std::pow(1.5, 11) / 11.0).epsilon(1e-12));
  CHECK_THROWS_AS(CollocationGrid::chebyshev(1.0, 8), canon::DomainError);
}

TEST_CASE("finite Hilbert transform") {
  const double t = 1.0;
  const auto g = CollocationGrid::chebyshev(t, 256);
  const std::vector<double> ones(g.N, 1.0);
  const auto h1 = finite_hilbert_apply(g, ones);
  for (int i = 0; i < g.N; ++i)
    CHECK(h1[i] == doctest::Approx(std::log((t - g.nodes[i]) / (t + g.nodes[i])) / std::numbers::pi).scale(1.0));

  // v(s) = s at x = 0 gives 2/pi up to the constant end cells
  std::vector<double> lin(g.nodes);
  const auto row = finite_hilbert_row(g, 0.0);
  double at0 = 0.0;
  for (int j = 0; j < g.N; ++j) at0 += row[j] * lin[j];
  CHECK(at0 == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-4));

  // the linear interpolant converges at second order in the cell width
  auto v = [](double s) { return std::exp(s) * std::cos(3.0 * s); };
  const auto g2 = CollocationGrid::chebyshev(t, 4096);
  std::vector<double> vals;
  for (double x : g2.nodes) vals.push_back(v(x));
  const auto hv = finite_hilbert_apply(g2, vals);
  for (int i = 0; i < g2.N; i += 151) {
    if (std::abs(g2.nodes[i]) > 0.9) continue;
    CHECK(std::abs(hv[i] - pv_oracle(v, t, g2.nodes[i])) < 1e-6);
  }
}

TEST_CASE("Lebesgue measure: indicator solution") {
  for (double t : {0.5, 2.0}) {
    const auto sol = solve_truncated(SpectralMeasure::lebesgue(), t, 64);
    for (const auto& v : sol.values) CHECK(std::abs(v - 1.0 / kSqrt2Pi) < 1e-14);
    CHECK(sol.k0 == doctest::Approx(t / std::numbers::pi).epsilon(1e-13));
    CHECK(std::abs(sol.kernel(1.3) - std::sin(1.3 * t) / (std::numbers::pi * 1.3)) < 1e-10);
  }
}

TEST_CASE("agreement with the RH closed form") {
  const double c1 = 2.0, c2 = 1.0, t = 1.0;
  const auto sol = solve_truncated(SpectralMeasure::homogeneous(c1, c2), t, 256);
  CHECK(sol.residual < 1e-10);
  const auto rh = canon::rh::solve_constant_rh(canon::rh::RHProblem::for_measure(c1, c2, t));
  for (int j = 0; j < sol.grid.N; j += 11) {
    const double x = sol.grid.nodes[j];
    if (std::abs(x) > 0.9 * t) continue;
    CHECK(std::abs(sol.values[j] - rh.psi(x)) < 1e-3);
  }

  // accuracy degrades as |c2|/c1 -> 1; the family stops at |c2| = 0.9 c1
  for (double a : {1.0, 2.0}) {
    for (double b : {0.0, 0.5, -0.5, 0.9 * a, -0.9 * a}) {
      const auto s = solve_truncated(SpectralMeasure::homogeneous(a, b), 1.0, 512);
      CHECK(std::abs(s.k0 - rh_k0(a, b, 1.0)) <= 1e-4 * rh_k0(a, b, 1.0));
      CHECK(std::abs(s.k0_imag) < 1e-10);
    }
  }
}

TEST_CASE("refinement and off-node residual") {
  const auto m = SpectralMeasure::homogeneous(2.0, 1.0);
  const double k1 = solve_truncated(m, 1.0, 128).k0;
  const double k2 = solve_truncated(m, 1.0, 256).k0;
  const double k4 = solve_truncated(m, 1.0, 512).k0;
  CHECK(std::abs(k2 - k1) <= 10.0 * std::abs(k4 - k2));
  CHECK(std::abs(k4 - k2) < std::abs(k2 - k1));
  const auto sol = solve_truncated(m, 1.0, 512);
  CHECK(equation_residual(m, sol) <= 1e-3);
}

TEST_CASE("general density with a regular kernel") {
  // symmetric bump on top of Lebesgue measure
  const auto bump = SpectralMeasure::table({-2.0, -0.5, 0.5, 2.0}, {1.0, 3.0, 3.0, 1.0}, 1.0, 1.0);
  const auto sol = solve_truncated(bump, 1.0, 256);
  CHECK(sol.residual < 1e-10);
  for (int j = 0; j < sol.grid.N; ++j) {
    CHECK(std::abs(sol.values[j].imag()) < 1e-8);
    CHECK(std::abs(sol.values[j] - sol.values[sol.grid.N - 1 - j]) < 1e-8);
  }
  // reproducing property: ||k_t||^2 in L^2(mu) equals k_t(0)
  const double norm2 = kernel_norm_squared(sol, bump, 400.0);
  CHECK(norm2 == doctest::Approx(sol.k0).epsilon(2e-3));
  CHECK(sol.k0 < 1.0 / std::numbers::pi);  // more mass, smaller kernel

  const auto skew = SpectralMeasure::table({-1.0, 0.0, 1.5}, {0.5, 2.0, 1.2}, 1.5, 0.7);
  const auto s2 = solve_truncated(skew, 1.0, 256);
  CHECK(kernel_norm_squared(s2, skew, 400.0) == doctest::Approx(s2.k0).epsilon(2e-3));
  CHECK(std::abs(s2.k0_imag) < 1e-6);

  CHECK_THROWS_AS(solve_truncated(SpectralMeasure::quasi_homogeneous(-0.3, 1, 1), 1.0, 64),
                  canon::UnsupportedVariant);
}

TEST_CASE("psi CSV") {
  std::ostringstream os;
  write_psi_csv(os, solve_truncated(SpectralMeasure::lebesgue(), 1.0, 16));
  CHECK(os.str().rfind("x,re_psi,im_psi,weight\n", 0) == 0);
}
