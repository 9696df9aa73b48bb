#pragma once

// Reproducing kernels of the de Branges chain built from the entries A, C
// of the transfer matrix, kernel traces at the origin, and the scaling
// laws of homogeneous and quasi-homogeneous chains.

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "canon/system.hpp"

namespace canon::debranges {

using RealFunction = std::function<double(double)>;
/// k_t(z) = K_t(0, z) as a function of (t, z).
using KernelEvaluator = std::function<double(double t, double z)>;

/// (1/pi) (A(z) C(lambda) - C(z) A(lambda)) / (lambda - z). On the diagonal
/// the limit (1/pi)(A C' - C A')(z) is taken by central differences with
/// step 1e-5 (1 + |z|).
double reproducing_kernel(const RealFunction& A, const RealFunction& C, double lambda, double z);

struct KernelTrace {
  std::vector<double> t_grid;
  std::vector<double> k0;  // k_t(0)
  std::vector<double> l0;  // generalized Hilbert transform of k_t at 0; may be empty

  /// Increasing grid, positive nondecreasing k0, matching lengths.
  /// Throws InvalidModel.
  void validate() const;
};

/// k_t(0) = C_z(t, 0) / pi from the z-derivative of the transfer matrix at
/// z = 0, which is int_0^t h11.
KernelTrace kernel_trace_direct(const system::HamiltonianSpec& H, std::span<const double> t_grid);

/// Same quantity from integrated A, C at z = +-h by the diagonal
/// difference quotient; slower and less accurate, used as a cross-check.
KernelTrace kernel_trace_from_transfer(const system::HamiltonianSpec& H, std::span<const double> t_grid,
                                       double tol = 1e-11);

/// sin(t z) / (pi z).
double free_kernel(double t, double z);

/// g_nu t^{2 nu} F_nu(z t) / pi, nu = (1 + m) / 2.
double bessel_kernel(double m, double t, double z);

/// Probe grid for homogeneity_residual(). All probes satisfy |t z| < pi so
/// the free kernel stays away from its zeros.
inline constexpr double kScalingProbeT[] = {0.5, 2.0, 3.0};
inline constexpr double kScalingProbeZ[] = {-1.0, -0.4, 0.0, 0.3, 0.9};

/// max |k_t(z) - s(t) k_1(t z)| / |k_t(z)| over the probe grid, with
/// s(t) = t^{2 + 2 nu}; nu_order empty means homogeneous (nu = -1/2).
double homogeneity_residual(const KernelEvaluator& k, std::optional<double> nu_order);

/// Trace version at z = 0: needs t = 1 on the grid.
double homogeneity_residual(const KernelTrace& trace, std::optional<double> nu_order);

/// Header t,k0,l0; l0 cells are empty when the trace has none.
void write_kernel_trace_csv(std::ostream& os, const KernelTrace& trace);

}  // namespace canon::debranges
