#pragma once

// Spectral measures rho(x) dx on the real line: homogeneous and
// quasi-homogeneous families, general densities with step asymptotes,
// the Fourier-side decomposition of mu-hat, and the delta-capacity test
// for PW-sampling.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace canon::measure {

using cplx = std::complex<double>;

/// rho(x) = c1 + c2 sign(x), c1 > |c2|.
struct Homogeneous {
  double c1 = 1.0;
  double c2 = 0.0;
};

/// rho(x) = rho_plus x^{1+2nu} (x > 0), rho_minus |x|^{1+2nu} (x < 0), nu in (-1, 0).
struct QuasiHomogeneous {
  double nu = -0.5;
  double rho_plus = 1.0;
  double rho_minus = 1.0;
};

/// Positive density with constant limits at +-infinity.
struct GeneralDensity {
  std::function<double(double)> rho;
  double rho_at_plus_inf = 1.0;
  double rho_at_minus_inf = 1.0;
  /// Fourier transform of rho minus its step asymptote (same 1/sqrt(2 pi)
  /// normalization as mu-hat). Empty when not available.
  std::function<cplx(double)> regular_kernel;
  /// Exact mass of [a, b); quadrature of rho is used when empty.
  std::function<double(double, double)> mass;
  /// Interval outside of which rho coincides with its step asymptote.
  std::optional<std::pair<double, double>> remainder_support;
};

struct Interval {
  double left = 0.0;
  double right = 0.0;
  double length() const { return right - left; }
};

class SpectralMeasure {
 public:
  using Variant = std::variant<Homogeneous, QuasiHomogeneous, GeneralDensity>;

  /// Validates the variant invariants; throws InvalidModel.
  explicit SpectralMeasure(Variant v);

  static SpectralMeasure lebesgue() { return SpectralMeasure(Homogeneous{1.0, 0.0}); }
  static SpectralMeasure homogeneous(double c1, double c2) { return SpectralMeasure(Homogeneous{c1, c2}); }
  static SpectralMeasure quasi_homogeneous(double nu, double rho_plus, double rho_minus) {
    return SpectralMeasure(QuasiHomogeneous{nu, rho_plus, rho_minus});
  }
  /// Piecewise-linear density on the nodes x, constant tails outside. The
  /// regular kernel, exact masses and remainder support are filled in.
  static SpectralMeasure table(std::vector<double> x, std::vector<double> rho, double tail_plus, double tail_minus);

  const Variant& variant() const { return variant_; }

  double density(double x) const;
  /// mu([a, b)), a <= b.
  double mass(double a, double b) const;

  /// Constant step asymptote rho(+-inf); throws UnsupportedVariant for
  /// quasi-homogeneous measures.
  double tail_plus() const;
  double tail_minus() const;

  std::string describe() const;

 private:
  Variant variant_;
};

double density_at(const SpectralMeasure& m, double x);

enum class MeasureClass { Homogeneous, QuasiHomogeneous, General };

struct Classification {
  MeasureClass kind = MeasureClass::General;
  /// Order of quasi-homogeneity; -1/2 for homogeneous, NaN for general.
  double nu = 0.0;
};

/// Probe grid for classify(): scalings t and points x.
inline constexpr double kClassifyScales[] = {2.0, 3.0, 0.5};
inline constexpr double kClassifyPoints[] = {-2.0, -1.0, 1.0, 2.0};
inline constexpr double kClassifyTolerance = 1e-9;

Classification classify(const SpectralMeasure& m);

/// mu-hat = delta_coeff * delta + pv_coeff * p.v. 1/(i tau) + regular_kernel.
///
/// With Hf(x) = (1/pi) p.v. int f(s)/(s - x) ds, convolution with mu-hat acts as
///   psi * mu-hat = delta_coeff psi + i pi pv_coeff H psi + regular_kernel * psi.
struct FourierKernelDecomposition {
  double delta_coeff = 0.0;
  double pv_coeff = 0.0;
  std::function<cplx(double)> regular_kernel;  // empty means identically zero

  bool has_regular_kernel() const { return static_cast<bool>(regular_kernel); }
};

/// Throws UnsupportedVariant for quasi-homogeneous measures and for general
/// densities without a regular kernel.
FourierKernelDecomposition fourier_kernel(const SpectralMeasure& m);

struct CapacityReport {
  Interval interval;
  double delta = 0.0;
  int capacity = 0;
  std::vector<Interval> witness_intervals;  // [left, right), disjoint, increasing
};

/// Greedy packing of disjoint delta-massive intervals meeting `interval`,
/// scanned inside [left - W, right + W] with W = max(delta, |interval|).
/// Stops early once `stop_at` witnesses are found.
CapacityReport delta_capacity(const SpectralMeasure& m, Interval interval, double delta,
                              std::optional<int> stop_at = std::nullopt);

/// Checks length, mass, disjointness and intersection of every witness.
bool verify_capacity_report(const SpectralMeasure& m, const CapacityReport& report, double rel_tol = 1e-9);

struct PwCertificate {
  double t = 0.0;
  double delta = 0.0;
  double L = 0.0;
};

struct PwSamplingReport {
  bool sampling = false;
  bool condition_i = false;
  bool condition_ii = false;
  /// max over far probes of mu(x, x+1) divided by the max near the origin
  double unit_mass_ratio = 0.0;
  std::vector<PwCertificate> certificates;
  std::optional<std::string> first_failure;
};

/// Probe design for is_pw_sampling().
inline constexpr double kPwProbeCenters[] = {0.0, 1e2, -1e2, 1e4, -1e4, 1e6, -1e6, 1e8, -1e8};
inline constexpr double kPwUnitMassRatioBound = 10.0;
inline constexpr int kPwDeltaLadderSize = 11;  // delta = 2^0 ... 2^-10

/// Finite certificate for the two-condition characterization of PW-sampling
/// measures: (i) bounded unit-interval mass, (ii) for each t some (L, delta)
/// with C_delta(I) >= t |I| on every probe interval of length in [L, L_max].
PwSamplingReport is_pw_sampling(const SpectralMeasure& m, std::span<const double> t_list, double L_max);

}  // namespace canon::measure
