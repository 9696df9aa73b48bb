#pragma once

// Inverse spectral problem: h11 = pi d/dt k_t(0), h12 = g = pi d/dt l_t(0)
// with l_t = (generalized Hilbert transform of k_t)(0), h22 = (1 + h12^2)/h11.

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "canon/measure.hpp"
#include "canon/system.hpp"
#include "canon/toeplitz.hpp"

namespace canon::isp {

using TraceFunction = std::function<double(double)>;

struct RecoveredHamiltonian {
  std::vector<double> t_grid;
  std::vector<double> h11;
  std::vector<double> h12;
  std::vector<double> h22;
  double free_constant_C = 0.0;

  /// max |h11 h22 - h12^2 - 1| over the grid.
  double max_det_error() const;
  /// (max - min) / mean of h11.
  double h11_relative_spread() const;
  system::HamiltonianSpec to_spec() const;
};

/// pi times the derivative of f at t: central differences with steps dt and
/// dt/2 combined by Richardson extrapolation. Needs t > dt.
double pi_derivative(const TraceFunction& f, double t, double dt);

/// Default stencil width: min(smallest grid spacing, t_min / 2).
double default_step(std::span<const double> t_grid);

/// Analytic route: k0_of_t is a kernel trace t -> k_t(0). Throws
/// NumericalError if the trace decreases across a stencil.
std::vector<double> recover_h11(const TraceFunction& k0_of_t, std::span<const double> t_grid,
                                std::optional<double> dt = std::nullopt);

/// Toeplitz route: k_t(0) from solve_truncated at the stencil times.
std::vector<double> recover_h11(const measure::SpectralMeasure& m, std::span<const double> t_grid, int N = 512,
                                std::optional<double> dt = std::nullopt);

/// l_t(0) = (1/pi) int [(k_t(s) - k_t(0))/s + s k_t(0)/(1 + s^2)] rho(s) ds for
/// the Toeplitz solution, k_t(s) = (1/sqrt(2 pi)) sum_j w_j psi_j e^{i x_j s}.
/// The step part rho_inf + rho_odd sign(s) integrates in closed form per
/// exponential (i pi sign(x_j) and 2(-gamma - log|x_j|)), the compactly
/// supported remainder by adaptive quadrature. Requires an even N.
double generalized_hilbert_at_zero(const measure::SpectralMeasure& m, const toeplitz::PsiSolution& sol);

struct HilbertQuadrature {
  double value = 0.0;
  double R = 0.0;
  /// Cauchy-Schwarz bound on the neglected int_{|s|>R} k_t(s)/s rho(s) ds /pi.
  double tail_bound = 0.0;
};

/// Real-space route: adaptive quadrature on [-R, R], R = max(50, 20/t) unless
/// given, closed-form k0 tails for the constant tail densities, and a
/// Cauchy-Schwarz bound on the remaining k_t(s)/s tail using
/// int_{|s|>R} k^2 rho = k_t(0) - int_{-R}^{R} k^2 rho. Throws NumericalError
/// when the bound exceeds tol.
HilbertQuadrature generalized_hilbert_quadrature(const measure::SpectralMeasure& m, const TraceFunction& k_eval,
                                                 double k0, double t, double tol = 1e-6,
                                                 std::optional<double> R = std::nullopt);

/// l_t(0) via solve_truncated(m, t, N) and the spectral route.
double l_at_zero(const measure::SpectralMeasure& m, double t, int N = 512);

/// g(t) = pi d/dt l_t(0) with the recover_h11 stencil.
std::vector<double> recover_offdiagonal(const measure::SpectralMeasure& m, std::span<const double> t_grid,
                                        int N = 512, std::optional<double> dt = std::nullopt);

struct LogFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
};

/// Least squares of l_t(0)/t against log t.
LogFit fit_log_t(std::span<const double> t, std::span<const double> l);

/// B(t) = int s [1/(s^2 + t^2) - 1/(1 + s^2)] rho(s) ds by quadrature.
double b_integral_quadrature(const measure::SpectralMeasure& m, double t);

/// h22 = (1 + h12^2)/h11; throws InvalidModel for h11 <= 0.
RecoveredHamiltonian assemble_hamiltonian(std::span<const double> t_grid, std::span<const double> h11,
                                          std::span<const double> h12, double free_constant_C = 0.0);

/// Regression times used to extract the log slope of l_t(0).
inline constexpr double kLogFitTimes[] = {0.5, 1.0, 2.0, 4.0};

struct HomogeneousSolution {
  RecoveredHamiltonian hamiltonian;
  double C1 = 0.0;         // k_1(0)
  double h11 = 0.0;        // pi C1
  double C2 = 0.0;         // h12 = Cfree - C2 log t
  LogFit fit;              // l_t(0)/t = intercept + slope log t, C2 = -pi slope
  double h11_published_display = 0.0;  // sqrt(pi/2)(1/c2) log((c1+c2)/(c1-c2))
  double C2_published_display = 0.0;   // (1/sqrt(2 pi)) log((c1+c2)/(c1-c2))
  double C2_published_formula = 0.0;   // (1/pi) C1 [rho(1) - rho(-1)]

  /// The det-normalized model h11, Cfree - C2 log t, (1 + h12^2)/h11.
  system::HamiltonianSpec spec() const;
};

/// Hamiltonian of rho = c1 + c2 sign(x) from Toeplitz solutions: C1 at t = 1,
/// C2 from the log-t regression of l_t(0) over kLogFitTimes.
HomogeneousSolution homogeneous_closed_form(double c1, double c2, double free_constant_C,
                                            std::span<const double> t_grid, int N = 512);

/// Header t,h11,h12,h22.
void write_hamiltonian_csv(std::ostream& os, const RecoveredHamiltonian& H);

}  // namespace canon::isp
