#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "canon/error.hpp"
#include "canon/isp.hpp"
#include "canon/rh.hpp"

using namespace canon::isp;
using canon::measure::SpectralMeasure;
namespace sys = canon::system;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> g;
  for (int i = 0; i <= n; ++i) g.push_back(a + (b - a) * i / n);
  return g;
}

}  // namespace

TEST_CASE("Richardson derivative") {
  auto f = [](double t) { return t * t * t + std::sin(t); };
  CHECK(pi_derivative(f, 1.0, 0.1) == doctest::Approx(kPi * (3.0 + std::cos(1.0))).epsilon(1e-6));
  CHECK_THROWS_AS(pi_derivative(f, 0.05, 0.1), canon::DomainError);
  const std::vector<double> g{0.5, 0.75, 1.5};
  CHECK(default_step(g) == doctest::Approx(0.25));
}

TEST_CASE("h11 from analytic kernel traces") {
  const auto ts = grid(0.25, 2.0, 35);
  const auto leb = recover_h11([](double t) { return t / kPi; }, ts);
  for (double h : leb) CHECK(h == doctest::Approx(1.0).epsilon(1e-12));
  for (double m : {0.25, 0.5, 0.75}) {
    const double nu = 0.5 * (1.0 + m);
    const auto h = recover_h11([nu](double t) { return std::pow(t, 2 * nu) / (2 * nu * kPi); }, ts);
    for (std::size_t i = 0; i < ts.size(); ++i)
      CHECK(std::abs(h[i] - std::pow(ts[i], m)) <= 1e-5 * std::pow(ts[i], m));
  }
  CHECK_THROWS_AS(recover_h11([](double t) { return std::cos(t); }, ts), canon::NumericalError);
}

TEST_CASE("h11 from Toeplitz traces") {
  const std::vector<double> ts{0.5, 1.0, 2.0};
  for (double h : recover_h11(SpectralMeasure::lebesgue(), ts, 64)) CHECK(std::abs(h - 1.0) < 1e-8);
  const auto h = recover_h11(SpectralMeasure::homogeneous(2.0, 1.0), ts, 512);
  const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
  CHECK((*hi - *lo) / *lo < 1e-4);
  CHECK(std::abs(h[1] - 0.5 * std::log(3.0)) < 1e-3);
  CHECK(std::abs(h[1] - canon::rh::h11_from_rh(2.0, 1.0)) < 1e-3);
}

TEST_CASE("generalized Hilbert transform at zero") {
  const auto even = SpectralMeasure::homogeneous(1.5, 0.0);
  CHECK(std::abs(l_at_zero(even, 1.0, 128)) < 1e-12);
  const auto bump = SpectralMeasure::table({-2.0, -0.5, 0.5, 2.0}, {1.0, 3.0, 3.0, 1.0}, 1.0, 1.0);
  CHECK(std::abs(l_at_zero(bump, 1.0, 128)) < 1e-8);

  // spectral route against the real-space route with its own error bound
  const auto m = SpectralMeasure::homogeneous(2.0, 1.0);
  const auto sol = canon::toeplitz::solve_truncated(m, 1.0, 512);
  const double spectral = generalized_hilbert_at_zero(m, sol);
  auto k = [&](double s) { return sol.kernel(s).real(); };
  const auto q = generalized_hilbert_quadrature(m, k, sol.k0, 1.0, 0.05, 400.0);
  CHECK(q.tail_bound > 0.0);
  CHECK(std::abs(q.value - spectral) <= q.tail_bound + 1e-4);
  // the default radius cannot certify 1e-6
  CHECK_THROWS_AS(generalized_hilbert_quadrature(m, k, sol.k0, 1.0), canon::NumericalError);

  const auto skew = SpectralMeasure::table({-1.0, 0.0, 1.5}, {0.5, 2.0, 1.2}, 1.5, 0.7);
  const auto s2 = canon::toeplitz::solve_truncated(skew, 1.0, 256);
  auto k2 = [&](double s) { return s2.kernel(s).real(); };
  const auto q2 = generalized_hilbert_quadrature(skew, k2, s2.k0, 1.0, 0.05, 400.0);
  CHECK(std::abs(q2.value - generalized_hilbert_at_zero(skew, s2)) <= q2.tail_bound + 1e-4);
}

TEST_CASE("log-t structure of l_t(0) and the off-diagonal entry") {
  const auto m = SpectralMeasure::homogeneous(2.0, 1.0);
  std::vector<double> ts(std::begin(kLogFitTimes), std::end(kLogFitTimes)), ls;
  for (double t : ts) ls.push_back(l_at_zero(m, t, 512));
  const auto fit = fit_log_t(ts, ls);
  CHECK(fit.r2 >= 0.9999);
  const double C1 = canon::toeplitz::solve_truncated(m, 1.0, 512).k0;
  // slope = -C1 [rho(1) - rho(-1)] / pi
  CHECK(fit.slope == doctest::Approx(-C1 * 2.0 / kPi).epsilon(1e-3));

  std::vector<double> lr;
  for (double t : ts) lr.push_back(l_at_zero(SpectralMeasure::homogeneous(2.0, -1.0), t, 512));
  CHECK(fit_log_t(ts, lr).slope == doctest::Approx(-fit.slope).epsilon(1e-9));

  const auto g = recover_offdiagonal(m, ts, 512, 0.1);
  const double step = g[1] - g[0];
  CHECK(step == doctest::Approx(-C1 * 2.0 * std::log(2.0)).epsilon(1e-3));
  CHECK(g[2] - g[1] == doctest::Approx(step).epsilon(1e-4));
  CHECK(g[3] - g[2] == doctest::Approx(step).epsilon(1e-4));

  for (double v : recover_offdiagonal(SpectralMeasure::lebesgue(), ts, 64, 0.1)) CHECK(std::abs(v) < 1e-8);
}

TEST_CASE("B integral") {
  const auto m = SpectralMeasure::homogeneous(2.0, 1.0);
  for (double t : {0.5, 2.0}) CHECK(std::abs(b_integral_quadrature(m, t) + 2.0 * std::log(t)) < 1e-6);
  CHECK(std::abs(b_integral_quadrature(SpectralMeasure::lebesgue(), 3.0)) < 1e-10);
}

TEST_CASE("assembly") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pos(0.1, 5.0), any(-3.0, 3.0);
  std::vector<double> t, a, b;
  for (int i = 0; i < 50; ++i) {
    t.push_back(0.1 * (i + 1));
    a.push_back(pos(rng));
    b.push_back(any(rng));
  }
  const auto H = assemble_hamiltonian(t, a, b);
  CHECK(H.max_det_error() < 1e-12);
  const std::vector<double> ones(50, 1.0), zeros(50, 0.0);
  const auto id = assemble_hamiltonian(t, ones, zeros);
  for (double v : id.h22) CHECK(v == 1.0);
  a[3] = 0.0;
  CHECK_THROWS_AS(assemble_hamiltonian(t, a, b), canon::InvalidModel);
}

TEST_CASE("homogeneous closed form") {
  const auto ts = grid(0.5, 3.0, 10);
  const auto leb = homogeneous_closed_form(1.0, 0.0, 0.0, ts, 64);
  CHECK(leb.h11 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(leb.C2) < 1e-10);
  CHECK(leb.hamiltonian.h11_relative_spread() == 0.0);

  const auto s = homogeneous_closed_form(2.0, 1.0, 0.0, std::vector<double>{1.0, std::exp(1.0)}, 512);
  CHECK(s.hamiltonian.h12[0] == 0.0);
  CHECK(s.hamiltonian.h12[1] == doctest::Approx(-s.C2));
  CHECK(s.h11 == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-4));
  CHECK(s.C2 == doctest::Approx(std::log(3.0) / kPi).epsilon(1e-3));
  CHECK(s.C2_published_display == doctest::Approx(std::log(3.0) / std::sqrt(2 * kPi)));
  CHECK(s.h11_published_display == doctest::Approx(std::sqrt(2 * kPi) * 0.5 * std::log(3.0)));
  CHECK(s.hamiltonian.max_det_error() < 1e-14);

  const auto shifted = homogeneous_closed_form(2.0, 1.0, 0.7, std::vector<double>{1.0, std::exp(1.0)}, 512);
  for (int i = 0; i < 2; ++i) {
    CHECK(shifted.hamiltonian.h11[i] == s.hamiltonian.h11[i]);
    CHECK(shifted.hamiltonian.h12[i] == doctest::Approx(s.hamiltonian.h12[i] + 0.7).epsilon(1e-15));
  }
}

TEST_CASE("recovered Hamiltonian reproduces the kernel of the measure") {
  // Integrate the recovered system and compare k_1(z) = C(1, z)/(pi z) with
  // the Toeplitz kernel of the measure. The free constant is a shear and
  // must not matter; the opposite log slope must fail.
  const auto m = SpectralMeasure::homogeneous(2.0, 1.0);
  const auto sol = canon::toeplitz::solve_truncated(m, 1.0, 512);
  const std::vector<double> one{1.0};
  for (double Cf : {0.0, 0.7}) {
    const auto s = homogeneous_closed_form(2.0, 1.0, Cf, one, 512);
    const auto H = s.spec();
    const sys::HamiltonianSpec wrong{sys::HomogeneousISP{s.h11, Cf, -s.C2}};
    for (double z : {0.5, 1.5, 3.0}) {
      const double k_ref = sol.kernel(z).real();
      const double k = sys::transfer_matrix(H, 1.0, z, 1e-11).C.real() / (kPi * z);
      CHECK(std::abs(k - k_ref) <= 1e-4 * std::abs(k_ref));
      const double kw = sys::transfer_matrix(wrong, 1.0, z, 1e-11).C.real() / (kPi * z);
      CHECK(std::abs(kw - k_ref) > 1e-3 * std::abs(k_ref));
    }
  }
}

TEST_CASE("Hamiltonian CSV") {
  const std::vector<double> t{1.0}, a{2.0}, b{0.0};
  std::ostringstream os;
  write_hamiltonian_csv(os, assemble_hamiltonian(t, a, b));
  CHECK(os.str() == "t,h11,h12,h22\n1,2,0,0.5\n");
}
