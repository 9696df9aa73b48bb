#pragma once

// Scalar Riemann-Hilbert problem with constant jump on [-t, t]:
//   Phi^+(x) = G Phi^-(x) + g,  x in (-t, t),  Phi(infinity) = 0,
// solved in closed form through X(z) = exp[(D / 2 pi i) log((z - t)/(z + t))],
// D = log G. For a homogeneous measure it produces psi_t and int psi_t.

#include <complex>
#include <functional>
#include <iosfwd>
#include <span>

namespace canon::rh {

using cplx = std::complex<double>;

struct RHProblem {
  double t = 1.0;
  double G = 1.0;
  double g = 0.0;
  double D = 0.0;

  /// Validates t > 0, G > 0 and fills D.
  static RHProblem make(double t, double G, double g);

  /// Jump data of the truncated Toeplitz equation for rho = c1 + c2 sign(x).
  /// With Hf(x) = (1/pi) p.v. int f(s)/(s - x) ds the equation reads
  /// sqrt(2 pi)[c1 psi + i c2 H psi] = 1, and psi = Phi^+ - Phi^-,
  /// H psi = i(Phi^+ + Phi^-) turn it into
  ///   G = (c1 + c2)/(c1 - c2),  g = 1/(sqrt(2 pi)(c1 - c2)).
  static RHProblem for_measure(double c1, double c2, double t);
};

/// X off the cut; throws DomainError for z in [-t, t].
cplx x_function(const RHProblem& p, cplx z);

/// Boundary values from above and below at s in (-t, t).
cplx x_plus(const RHProblem& p, double s);
cplx x_minus(const RHProblem& p, double s);

struct RHSolution {
  RHProblem problem;
  std::function<cplx(cplx)> X;
  std::function<cplx(cplx)> Phi;  // off the cut
  std::function<cplx(double)> Phi_plus;
  std::function<cplx(double)> Phi_minus;
  std::function<cplx(double)> psi;  // Phi^+ - Phi^- on (-t, t)
  cplx integral_psi;                // g int 1/X^+ by quadrature
};

/// Phi = X (1/2 pi i) int g / (X^+(s)(s - z)) ds. The Cauchy integrals are
/// taken in the variable u = log((t + s)/(t - s)), where 1/X^+ becomes
/// e^{-D/2} e^{-i D u / 2 pi} and ds = (t/2) sech^2(u/2) du.
RHSolution solve_constant_rh(const RHProblem& p);

/// int_{-t}^{t} ds / X^+(s) = 2 t D / (e^D - 1), equal to 2t at D = 0.
double integral_inv_x(double t, double D);

/// Same integral by adaptive quadrature in u; the imaginary part vanishes
/// analytically and is returned as a check.
cplx integral_inv_x_quadrature(double t, double D);

/// J = Gamma(1 + k) Gamma(1 - k), k = i D / 2 pi, equal to D / (2 sinh(D/2)).
double beta_factor(double D);

/// J = int_0^infinity w^k / (1 + w)^2 dw by quadrature.
cplx beta_integral_quadrature(double D);

/// pi d/dt k_t(0) with k_t(0) = (1/sqrt(2 pi)) g I(t, D):
/// (1/(2 c2)) log((c1 + c2)/(c1 - c2)), 1/c1 at c2 = 0.
double h11_from_rh(double c1, double c2);

/// Same constant written as atanh(c2/c1)/c2.
double h11_closed(double c1, double c2);

/// sqrt(pi/2) (1/c2) log((c1 + c2)/(c1 - c2)), the value obtained when the
/// 1/sqrt(2 pi) between int psi_t and k_t(0) is dropped; sqrt(2 pi) times
/// h11_closed.
double h11_without_normalization(double c1, double c2);

/// Header s,re_psi,im_psi at N midpoints of (-t, t).
void write_psi_csv(std::ostream& os, const RHSolution& sol, int N);

}  // namespace canon::rh
