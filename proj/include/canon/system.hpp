#pragma once

// Canonical systems Omega X' = z H X on the half line: Hamiltonian models,
// transfer-matrix integration, det-normalization and the closed-form
// Bessel solutions.

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace canon::system {

using cplx = std::complex<double>;

struct Identity {};

/// H = diag(t^m, t^-m), m in (0, 1).
struct DiagonalPower {
  double m = 0.5;
};

/// h11 = C1, h12 = Cconst - C2 log t, h22 = (1 + h12^2) / C1 (det H = 1).
struct HomogeneousISP {
  double C1 = 1.0;
  double Cconst = 0.0;
  double C2 = 0.0;
};

/// Entries tabulated on an increasing grid, linear in between. Constant
/// extension below the first node.
struct Tabulated {
  std::vector<double> t;
  std::vector<double> h11;
  std::vector<double> h12;
  std::vector<double> h22;
};

struct Entries {
  double h11 = 1.0;
  double h12 = 0.0;
  double h22 = 1.0;
  double det() const { return h11 * h22 - h12 * h12; }
};

class HamiltonianSpec {
 public:
  using Variant = std::variant<Identity, DiagonalPower, HomogeneousISP, Tabulated>;

  /// Checks positive semidefiniteness and parameter ranges; throws InvalidModel.
  explicit HamiltonianSpec(Variant v);

  const Variant& variant() const { return variant_; }
  Entries entries(double t) const;

  /// Largest t the model is defined on (infinity except for tables).
  double horizon() const;
  /// True when H has an integrable singularity at t = 0.
  bool singular_at_zero() const;

  std::string describe() const;

 private:
  Variant variant_;
};

struct TransferMatrixSample {
  double t = 0.0;
  cplx z{0.0, 0.0};
  cplx A{1.0, 0.0}, B{0.0, 0.0}, C{0.0, 0.0}, D{1.0, 0.0};

  cplx det() const { return A * D - B * C; }
  double det_error() const { return std::abs(det() - 1.0); }
};

/// Seed times used to start integration away from a singular origin.
inline constexpr double kDiagonalPowerSeed = 1e-6;
inline constexpr double kHomogeneousISPSeed = 1e-10;

/// M(t_end, z) for M' = -z Omega H M, M(0) = I, by Dormand-Prince 5(4).
/// tol in [1e-12, 1e-4] bounds the scaled local error per step.
TransferMatrixSample transfer_matrix(const HamiltonianSpec& H, double t_end, cplx z, double tol = 1e-10);

/// Propagator from t1 to t2 (t2 >= t1 > 0, or t1 = 0).
TransferMatrixSample transfer_matrix_between(const HamiltonianSpec& H, double t1, double t2, cplx z,
                                             double tol = 1e-10);

/// M at each t of an increasing list from one integration pass.
std::vector<TransferMatrixSample> transfer_matrix_path(const HamiltonianSpec& H, std::span<const double> t_list,
                                                       cplx z, double tol = 1e-10);

/// All (t, z) pairs, t-major.
std::vector<TransferMatrixSample> transfer_matrix_batch(const HamiltonianSpec& H, std::span<const double> t_list,
                                                        std::span<const cplx> z_list, double tol = 1e-10);

/// int_0^t h11, which equals dC/dz at z = 0.
double integrated_h11(const HamiltonianSpec& H, double t);

/// Change of time s = int_0^t sqrt(det H). Models with det H = 1 are returned
/// unchanged; other models come back tabulated on `samples` + 1 points of [0, T].
HamiltonianSpec det_normalize(const HamiltonianSpec& H, double T, int samples = 400);

struct BesselPair {
  double A = 1.0;
  double C = 0.0;
};

/// g_nu = 2^{nu-1} Gamma(nu).
double bessel_g(double nu);

/// A = g_nu F_{nu-1}(z t), C = g_nu t^{2 nu} z F_nu(z t), nu = (1 + m)/2.
BesselPair bessel_closed_form(double m, double t, double z);

/// Header t,re_z,im_z,A,B,C,D,det_err. The entries are real only for real z,
/// so samples at nonreal z are rejected with DomainError.
void write_transfer_csv(std::ostream& os, std::span<const TransferMatrixSample> samples);

}  // namespace canon::system
