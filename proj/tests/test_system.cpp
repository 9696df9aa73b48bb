#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "canon/error.hpp"
#include "canon/system.hpp"

using namespace canon::system;
using canon::DomainError;
using canon::InvalidModel;

namespace {

// J_nu(x) for nu > -1 from the standard library (reflection for negative order).
double std_bessel_j(double nu, double x) {
  if (nu >= 0.0) return std::cyl_bessel_j(nu, x);
  const double mu = -nu;
  return std::cos(mu * std::numbers::pi) * std::cyl_bessel_j(mu, x) -
         std::sin(mu * std::numbers::pi) * std::cyl_neumann(mu, x);
}

// (A, C) of the diagonal power system from J_{nu-1}, J_nu with
// A(0) = 1 and C ~ z t^{2 nu} / (2 nu).
std::pair<double, double> bessel_oracle(double m, double t, double z) {
  const double nu = 0.5 * (1.0 + m);
  const double x = std::abs(z * t);
  const double g = std::pow(2.0, nu - 1.0) * std::tgamma(nu);
  const double A = g * std_bessel_j(nu - 1.0, x) / std::pow(x, nu - 1.0);
  const double C = g * std::pow(t, 2.0 * nu) * z * std_bessel_j(nu, x) / std::pow(x, nu);
  return {A, C};
}

}  // namespace

TEST_CASE("model validation") {
  CHECK_THROWS_AS(HamiltonianSpec(DiagonalPower{1.0}), InvalidModel);
  CHECK_THROWS_AS(HamiltonianSpec(DiagonalPower{0.0}), InvalidModel);
  CHECK_THROWS_AS(HamiltonianSpec(HomogeneousISP{0.0, 0.0, 0.0}), InvalidModel);
  CHECK_THROWS_AS(HamiltonianSpec(Tabulated{{0, 1}, {1, 1}, {2, 0}, {1, 1}}), InvalidModel);
  CHECK_THROWS_AS(HamiltonianSpec(Tabulated{{0, 0}, {1, 1}, {0, 0}, {1, 1}}), InvalidModel);
  CHECK_NOTHROW(HamiltonianSpec(Tabulated{{0, 1}, {1, 1}, {1, 1}, {1, 1}}));
  const HamiltonianSpec id{Identity{}};
  CHECK_THROWS_AS(transfer_matrix(id, 1.0, 1.0, 1e-14), DomainError);
  CHECK_THROWS_AS(transfer_matrix(id, -1.0, 1.0), DomainError);
}

TEST_CASE("free system") {
  const HamiltonianSpec id{Identity{}};
  for (double t : {0.3, 1.0, 5.0})
    for (double z : {-3.0, 0.5, 2.0, 20.0}) {
      const auto s = transfer_matrix(id, t, z);
      CHECK(s.A.real() == doctest::Approx(std::cos(t * z)).epsilon(1e-8).scale(1.0));
      CHECK(s.B.real() == doctest::Approx(-std::sin(t * z)).epsilon(1e-8).scale(1.0));
      CHECK(s.C.real() == doctest::Approx(std::sin(t * z)).epsilon(1e-8).scale(1.0));
      CHECK(s.D.real() == doctest::Approx(std::cos(t * z)).epsilon(1e-8).scale(1.0));
      CHECK(s.det_error() < 1e-8);
    }
}

TEST_CASE("z = 0 gives the identity") {
  for (const HamiltonianSpec& H : {HamiltonianSpec{DiagonalPower{0.5}}, HamiltonianSpec{HomogeneousISP{0.7, 1.0, 0.3}},
                                   HamiltonianSpec{Identity{}}}) {
    const auto s = transfer_matrix(H, 2.0, 0.0);
    CHECK(s.A == std::complex<double>(1.0));
    CHECK(s.B == std::complex<double>(0.0));
    CHECK(s.C == std::complex<double>(0.0));
    CHECK(s.D == std::complex<double>(1.0));
  }
}

TEST_CASE("Bessel closed form against the standard library and the ODE") {
  for (double m : {0.25, 0.5, 0.75}) {
    const HamiltonianSpec H{DiagonalPower{m}};
    for (double z : {-4.0, -1.0, -0.5, 0.5, 1.0, 4.0}) {
      for (double t : {0.5, 1.0, 2.0}) {
        const auto cf = bessel_closed_form(m, t, z);
        const auto [A_ref, C_ref] = bessel_oracle(m, t, z);
        CHECK(cf.A == doctest::Approx(A_ref).epsilon(1e-12));
        CHECK(cf.C == doctest::Approx(C_ref).epsilon(1e-12));
        const auto s = transfer_matrix(H, t, z, 1e-11);
        CHECK(std::abs(s.A.real() - cf.A) <= 1e-6 * std::abs(cf.A));
        CHECK(std::abs(s.C.real() - cf.C) <= 1e-6 * std::abs(cf.C));
        CHECK(s.det_error() < 1e-8);
      }
    }
    const auto z0 = bessel_closed_form(m, 0.0, 3.0);
    CHECK(z0.A == doctest::Approx(1.0));
    CHECK(z0.C == 0.0);
  }
}

TEST_CASE("determinant, reality and conjugation") {
  const std::vector<HamiltonianSpec> models{HamiltonianSpec{DiagonalPower{0.4}},
                                            HamiltonianSpec{HomogeneousISP{0.549, 0.2, 0.35}},
                                            HamiltonianSpec{Tabulated{{0, 1, 3, 5}, {1, 2, 0.5, 1}, {0, 0.5, -0.2, 0},
                                                                      {1, 1, 3, 2}}}};
  for (const auto& H : models) {
    for (double z : {-20.0, -3.0, 0.7, 10.0, 20.0}) {
      for (double t : {0.5, 2.0, 5.0}) CHECK(transfer_matrix(H, t, z).det_error() < 1e-8);
    }
    const std::complex<double> z{1.5, 0.4};
    const auto a = transfer_matrix(H, 2.0, z);
    const auto b = transfer_matrix(H, 2.0, std::conj(z));
    CHECK(std::abs(a.A - std::conj(b.A)) < 1e-12);
    CHECK(std::abs(a.C - std::conj(b.C)) < 1e-12);
    CHECK(a.det_error() < 1e-8);
  }
}

TEST_CASE("cocycle property") {
  const HamiltonianSpec H{HomogeneousISP{0.549, 0.1, 0.35}};
  const double tol = 1e-10;
  for (double z : {-2.0, 3.0}) {
    const auto m1 = transfer_matrix(H, 1.0, z, tol);
    const auto m12 = transfer_matrix_between(H, 1.0, 3.0, z, tol);
    const auto m2 = transfer_matrix(H, 3.0, z, tol);
    const auto A = m12.A * m1.A + m12.B * m1.C;
    const auto C = m12.C * m1.A + m12.D * m1.C;
    const double scale = 1.0 + std::abs(m2.A) + std::abs(m2.C);
    CHECK(std::abs(A - m2.A) < 20 * tol * scale);
    CHECK(std::abs(C - m2.C) < 20 * tol * scale);
  }
}

TEST_CASE("second-order form of the Bessel system") {
  // C'' - (m/t) C' + z^2 C = 0, checked on the integrated path
  const double m = 0.5, z = 2.0, h = 1e-3;
  const HamiltonianSpec H{DiagonalPower{m}};
  for (double t : {0.7, 1.3}) {
    std::vector<double> ts{t - 2 * h, t - h, t, t + h, t + 2 * h};
    const auto path = transfer_matrix_path(H, ts, z, 1e-12);
    double c[5];
    for (int i = 0; i < 5; ++i) c[i] = path[i].C.real();
    const double d1 = (c[0] - 8 * c[1] + 8 * c[3] - c[4]) / (12 * h);
    const double d2 = (-c[0] + 16 * c[1] - 30 * c[2] + 16 * c[3] - c[4]) / (12 * h * h);
    CHECK(std::abs(d2 - (m / t) * d1 + z * z * c[2]) < 1e-5);
  }
}

TEST_CASE("tabulated identity reproduces the free system") {
  const HamiltonianSpec H{Tabulated{{0.0, 0.7, 2.0}, {1, 1, 1}, {0, 0, 0}, {1, 1, 1}}};
  const auto s = transfer_matrix(H, 2.0, 1.7);
  CHECK(s.A.real() == doctest::Approx(std::cos(3.4)).epsilon(1e-9));
  CHECK(s.C.real() == doctest::Approx(std::sin(3.4)).epsilon(1e-9));
  CHECK_THROWS_AS(transfer_matrix(H, 2.5, 1.0), DomainError);
}

TEST_CASE("integrated h11") {
  CHECK(integrated_h11(HamiltonianSpec{DiagonalPower{0.5}}, 4.0) == doctest::Approx(std::pow(4.0, 1.5) / 1.5));
  const HamiltonianSpec tab{Tabulated{{1.0, 2.0, 4.0}, {2, 4, 0}, {0, 0, 0}, {1, 1, 1}}};
  CHECK(integrated_h11(tab, 3.0) == doctest::Approx(2.0 + 3.0 + 3.0));
}

TEST_CASE("det normalization") {
  const HamiltonianSpec dp{DiagonalPower{0.3}};
  CHECK(std::holds_alternative<DiagonalPower>(det_normalize(dp, 1.0).variant()));
  CHECK(std::holds_alternative<Identity>(det_normalize(HamiltonianSpec{Identity{}}, 1.0).variant()));

  const HamiltonianSpec d41{Tabulated{{0.0, 1.0}, {4, 4}, {0, 0}, {1, 1}}};
  const auto n = det_normalize(d41, 1.0, 10);
  const auto& tab = std::get<Tabulated>(n.variant());
  CHECK(tab.t.back() == doctest::Approx(2.0));
  CHECK(tab.t[5] == doctest::Approx(1.0));
  for (std::size_t i = 0; i < tab.t.size(); ++i) {
    CHECK(tab.h11[i] == doctest::Approx(2.0));
    CHECK(tab.h22[i] == doctest::Approx(0.5));
  }
  // time change leaves the spectral data alone: M at matching times agrees
  const auto a = transfer_matrix(d41, 1.0, 1.3);
  const auto b = transfer_matrix(n, 2.0, 1.3);
  CHECK(a.A.real() == doctest::Approx(b.A.real()).epsilon(1e-9));
  CHECK(a.C.real() == doctest::Approx(b.C.real()).epsilon(1e-9));

  const HamiltonianSpec degenerate{Tabulated{{0.0, 1.0}, {1, 1}, {1, 1}, {1, 1}}};
  CHECK_THROWS_AS(det_normalize(degenerate, 1.0), DomainError);
}

TEST_CASE("CSV output") {
  const HamiltonianSpec H{Identity{}};
  const std::vector<TransferMatrixSample> s{transfer_matrix(H, 1.0, 2.0)};
  std::ostringstream os;
  write_transfer_csv(os, s);
  CHECK(os.str().rfind("t,re_z,im_z,A,B,C,D,det_err\n", 0) == 0);
  const std::vector<TransferMatrixSample> c{transfer_matrix(H, 1.0, {2.0, 1.0})};
  CHECK_THROWS_AS(write_transfer_csv(os, c), DomainError);
}
