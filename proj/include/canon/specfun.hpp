#pragma once

// Special functions used by the closed-form solutions of the Bessel
// canonical system: Gamma, Bessel J of real order, and the entire
// function F_nu defined by J_nu(x) = x^nu F_nu(x).

namespace canon::specfun {

/// Gamma function. Throws DomainError at 0, -1, -2, ...
double gamma(double x);

/// 1/Gamma(x); entire, so returns 0 at the poles of Gamma.
double rgamma(double x);

/// sin(pi x) with exact zeros at the integers.
double sinpi(double x);

/// Bessel function of the first kind J_nu(x) for real nu.
/// Negative x is only accepted for integer nu.
double bessel_j(double nu, double x);

/// F_nu(x) = J_nu(x) / x^nu, evaluated from its even power series near the
/// origin. Defined for every real x.
double f_nu(double nu, double x);

/// dF_nu/dx by the term-wise differentiated series (equals -x F_{nu+1}(x)).
double f_nu_derivative(double nu, double x);

/// Parameters of the substitution y(t) = t^alpha F(kappa t^beta) that maps
/// Bessel's equation of order nu onto t^2 y'' + a t y' + (b + c^2 t^{2 beta}) y = 0.
struct BesselODEParams {
  double alpha = 0.0;
  double beta = 1.0;
  double kappa = 1.0;
  double nu_squared = 0.0;
  double a = 1.0;
  double b = 0.0;
  double c = 1.0;

  /// Largest violation of a = 1 - 2 alpha, b = alpha^2 - beta^2 nu^2,
  /// c^2 = beta^2 kappa^2.
  double identity_residual() const;
};

/// Solves the three identities for (alpha, kappa, nu^2) given (a, b, c, beta).
/// Requires beta > 0 and c != 0.
BesselODEParams bessel_parameter_map(double a, double b, double c, double beta);

}  // namespace canon::specfun
