#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "canon/error.hpp"
#include "canon/rh.hpp"

using namespace canon::rh;
using boost::math::quadrature::gauss_kronrod;

namespace {

const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

// (1/pi) p.v. int_{-t}^{t} psi(s)/(s - x) ds by subtraction and adaptive
// quadrature directly in s.
cplx hilbert_oracle(const std::function<cplx(double)>& psi, double t, double x) {
  const cplx px = psi(x);
  auto f = [&](double s) -> cplx { return s == x ? cplx(0.0) : (psi(s) - px) / (s - x); };
  const cplx a = gauss_kronrod<double, 31>::integrate(f, -t, x, 12, 1e-9);
  const cplx b = gauss_kronrod<double, 31>::integrate(f, x, t, 12, 1e-9);
  return (a + b + px * std::log((t - x) / (t + x))) / std::numbers::pi;
}

}  // namespace

TEST_CASE("problem data for a homogeneous measure") {
  const auto p = RHProblem::for_measure(2.0, 1.0, 1.0);
  CHECK(p.G == doctest::Approx(3.0));
  CHECK(p.D == doctest::Approx(std::log(3.0)));
  CHECK(p.g == doctest::Approx(1.0 / kSqrt2Pi));
  CHECK_THROWS_AS(RHProblem::for_measure(1.0, 1.0, 1.0), canon::DomainError);
  CHECK_THROWS_AS(RHProblem::make(0.0, 1.0, 1.0), canon::DomainError);
}

TEST_CASE("X function") {
  const auto trivial = RHProblem::make(1.0, 1.0, 0.3);
  CHECK(std::abs(x_function(trivial, {0.2, 0.5}) - 1.0) < 1e-15);

  const auto p = RHProblem::make(1.5, 3.0, 0.2);
  CHECK(std::abs(x_function(p, {1e8, 1e7}) - 1.0) < 1e-7);
  CHECK_THROWS_AS(x_function(p, 0.3), canon::DomainError);
  for (double s : {-1.2, -0.3, 0.0, 0.8, 1.4}) {
    const cplx up = x_function(p, {s, 1e-10});
    const cplx down = x_function(p, {s, -1e-10});
    CHECK(std::abs(x_plus(p, s) - up) < 1e-8);
    CHECK(std::abs(x_minus(p, s) - down) < 1e-8);
    CHECK(std::abs(x_plus(p, s)) == doctest::Approx(std::exp(0.5 * p.D)));
    CHECK(std::abs(x_plus(p, s) / x_minus(p, s) - p.G) < 1e-13);
  }
  // Cauchy-Riemann: dX/dx = -i dX/dy off the cut
  const double h = 1e-5;
  for (cplx z : {cplx{0.3, 0.4}, cplx{-2.0, -0.7}, cplx{2.5, 0.0}}) {
    const cplx dx = (x_function(p, z + h) - x_function(p, z - h)) / (2 * h);
    const cplx dy = (x_function(p, z + cplx(0, h)) - x_function(p, z - cplx(0, h))) / (2 * h);
    CHECK(std::abs(dx + cplx(0, 1) * dy) < 1e-6);
  }
}

TEST_CASE("Lebesgue measure gives the indicator solution") {
  const auto sol = solve_constant_rh(RHProblem::for_measure(1.0, 0.0, 2.0));
  for (double s : {-1.9, -0.5, 0.0, 1.3}) CHECK(std::abs(sol.psi(s) - 1.0 / kSqrt2Pi) < 1e-13);
  CHECK(sol.integral_psi.real() == doctest::Approx(4.0 / kSqrt2Pi).epsilon(1e-12));
}

TEST_CASE("jump relation and Plemelj difference") {
  const auto p = RHProblem::for_measure(2.0, 1.0, 1.0);
  const auto sol = solve_constant_rh(p);
  for (double x : {0.0, -0.6, 0.85}) {
    const cplx up = sol.Phi({x, 1e-9});
    const cplx down = sol.Phi({x, -1e-9});
    CHECK(std::abs(up - p.G * down - p.g) < 1e-6);
    CHECK(std::abs(up - sol.Phi_plus(x)) < 1e-6);
    CHECK(std::abs(down - sol.Phi_minus(x)) < 1e-6);
    CHECK(std::abs(sol.psi(x) - (sol.Phi_plus(x) - sol.Phi_minus(x))) < 1e-13);
  }
  CHECK(std::abs(sol.Phi({1e6, 0.0})) < 1e-6);
}

TEST_CASE("psi solves the truncated Toeplitz equation") {
  for (auto [c1, c2] : {std::pair{2.0, 1.0}, {1.0, -0.5}}) {
    const double t = 1.0;
    const auto sol = solve_constant_rh(RHProblem::for_measure(c1, c2, t));
    for (double x : {-0.7, 0.0, 0.45}) {
      const cplx H = hilbert_oracle(sol.psi, t, x);
      const cplx lhs = kSqrt2Pi * (c1 * sol.psi(x) + cplx(0, 1) * c2 * H);
      CHECK(std::abs(lhs - 1.0) < 1e-4);
      // the opposite sign convention for the Hilbert term is not satisfied
      const cplx wrong = kSqrt2Pi * (c1 * sol.psi(x) - cplx(0, 1) * c2 * H);
      CHECK(std::abs(wrong - 1.0) > 1e-2);
    }
  }
}

TEST_CASE("integral of 1/X+ and the Beta factor") {
  CHECK(integral_inv_x(1.0, 0.0) == 2.0);
  CHECK(integral_inv_x(1.0, -std::log(3.0)) == doctest::Approx(3.2958369).epsilon(1e-7));
  for (double D = -3.0; D <= 3.0; D += 0.25) {
    for (double t : {0.5, 1.0, 2.0}) {
      const cplx q = integral_inv_x_quadrature(t, D);
      CHECK(std::abs(q.real() - integral_inv_x(t, D)) <= 1e-8 * integral_inv_x(t, D));
      CHECK(std::abs(q.imag()) < 1e-10);
    }
    const cplx J = beta_integral_quadrature(D);
    CHECK(std::abs(J - beta_factor(D)) < 1e-10);
    CHECK(2.0 * std::exp(-0.5 * D) * beta_factor(D) == doctest::Approx(integral_inv_x(1.0, D)).epsilon(1e-13));
  }
}

TEST_CASE("h11 from the RH solution") {
  CHECK(h11_from_rh(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(h11_from_rh(1.0, 1e-9) == doctest::Approx(1.0));
  CHECK(h11_from_rh(2.0, 1.0) == doctest::Approx(0.5493061).epsilon(1e-7));
  CHECK(h11_from_rh(2.0, -1.0) == doctest::Approx(h11_from_rh(2.0, 1.0)).epsilon(1e-14));
  for (auto [c1, c2] : {std::pair{2.0, 1.0}, {1.0, 0.5}, {3.0, -2.9}})
    CHECK(h11_from_rh(c1, c2) == doctest::Approx(h11_closed(c1, c2)).epsilon(1e-13));
  CHECK(h11_without_normalization(2.0, 1.0) ==
        doctest::Approx(std::sqrt(std::numbers::pi / 2.0) * std::log(3.0)).epsilon(1e-13));

  // pi d/dt of k_t(0) = int psi_t / sqrt(2 pi) from two solved problems
  const double c1 = 2.0, c2 = 1.0;
  const auto a = solve_constant_rh(RHProblem::for_measure(c1, c2, 0.5));
  const auto b = solve_constant_rh(RHProblem::for_measure(c1, c2, 2.0));
  const double slope = (b.integral_psi.real() - a.integral_psi.real()) / 1.5 / kSqrt2Pi;
  CHECK(std::abs(std::numbers::pi * slope - h11_closed(c1, c2)) < 1e-9);
}

TEST_CASE("psi CSV") {
  std::ostringstream os;
  write_psi_csv(os, solve_constant_rh(RHProblem::for_measure(1.0, 0.0, 1.0)), 4);
  CHECK(os.str().rfind("s,re_psi,im_psi\n-0.75,", 0) == 0);
}
