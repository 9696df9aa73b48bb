#include "canon/debranges.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "canon/error.hpp"
#include "canon/specfun.hpp"

namespace canon::debranges {

double reproducing_kernel(const RealFunction& A, const RealFunction& C, double lambda, double z) {
  constexpr double inv_pi = std::numbers::inv_pi;
  if (lambda != z) return inv_pi * (A(z) * C(lambda) - C(z) * A(lambda)) / (lambda - z);
  const double h = 1e-5 * (1.0 + std::abs(z));
  const double dA = (A(z + h) - A(z - h)) / (2.0 * h);
  const double dC = (C(z + h) - C(z - h)) / (2.0 * h);
  return inv_pi * (A(z) * dC - C(z) * dA);
}

void KernelTrace::validate() const {
  if (t_grid.size() != k0.size() || (!l0.empty() && l0.size() != k0.size()))
    throw InvalidModel("kernel trace: column lengths differ");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw InvalidModel("kernel trace: t must be positive");
    if (!(k0[i] > 0.0)) throw InvalidModel("kernel trace: k0 must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw InvalidModel("kernel trace: t must be increasing");
    if (i > 0 && k0[i] < k0[i - 1] * (1.0 - 1e-12)) throw InvalidModel("kernel trace: k0 must be nondecreasing");
  }
}

KernelTrace kernel_trace_direct(const system::HamiltonianSpec& H, std::span<const double> t_grid) {
  KernelTrace trace;
  for (double t : t_grid) {
    trace.t_grid.push_back(t);
    trace.k0.push_back(system::integrated_h11(H, t) * std::numbers::inv_pi);
  }
  trace.validate();
  return trace;
}

KernelTrace kernel_trace_from_transfer(const system::HamiltonianSpec& H, std::span<const double> t_grid,
                                       double tol) {
  std::vector<double> sorted(t_grid.begin(), t_grid.end());
  const double h = 1e-5;
  const auto plus = system::transfer_matrix_path(H, sorted, h, tol);
  const auto minus = system::transfer_matrix_path(H, sorted, -h, tol);
  KernelTrace trace;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    // A is even and C odd in z, with A(0) = 1 and C(0) = 0
    const double dC = (plus[i].C.real() - minus[i].C.real()) / (2.0 * h);
    trace.t_grid.push_back(sorted[i]);
    trace.k0.push_back(dC * std::numbers::inv_pi);
  }
  trace.validate();
  return trace;
}

double free_kernel(double t, double z) {
  if (z == 0.0) return t * std::numbers::inv_pi;
  return std::sin(t * z) / (std::numbers::pi * z);
}

double bessel_kernel(double m, double t, double z) {
  const double nu = 0.5 * (1.0 + m);
  return system::bessel_g(nu) * std::pow(t, 2.0 * nu) * specfun::f_nu(nu, z * t) * std::numbers::inv_pi;
}

double homogeneity_residual(const KernelEvaluator& k, std::optional<double> nu_order) {
  const double nu = nu_order.value_or(-0.5);
  double worst = 0.0;
  for (double t : kScalingProbeT) {
    const double s = std::pow(t, 2.0 + 2.0 * nu);
    for (double z : kScalingProbeZ) {
      const double lhs = k(t, z);
      worst = std::max(worst, std::abs(lhs - s * k(1.0, t * z)) / std::abs(lhs));
    }
  }
  return worst;
}

double homogeneity_residual(const KernelTrace& trace, std::optional<double> nu_order) {
  const auto it = std::find_if(trace.t_grid.begin(), trace.t_grid.end(),
                               [](double t) { return std::abs(t - 1.0) <= 1e-12; });
  if (it == trace.t_grid.end()) throw DomainError("homogeneity_residual: trace must contain t = 1");
  const double k1 = trace.k0[static_cast<std::size_t>(it - trace.t_grid.begin())];
  const double nu = nu_order.value_or(-0.5);
  double worst = 0.0;
  for (std::size_t i = 0; i < trace.t_grid.size(); ++i) {
    const double s = std::pow(trace.t_grid[i], 2.0 + 2.0 * nu);
    worst = std::max(worst, std::abs(trace.k0[i] - s * k1) / trace.k0[i]);
  }
  return worst;
}

void write_kernel_trace_csv(std::ostream& os, const KernelTrace& trace) {
  char buf[128];
  os << "t,k0,l0\n";
  for (std::size_t i = 0; i < trace.t_grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,", trace.t_grid[i], trace.k0[i]);
    os << buf;
    if (!trace.l0.empty()) {
      std::snprintf(buf, sizeof buf, "%.17g", trace.l0[i]);
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace canon::debranges
