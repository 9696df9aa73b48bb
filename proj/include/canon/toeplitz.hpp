#pragma once

// Collocation solver for the truncated Toeplitz equation
//   psi * mu-hat = 1 on (-t, t),  psi = 0 outside,
// with mu-hat = a delta + b p.v. 1/(i tau) + kappa. psi is represented by
// its values at Chebyshev points, interpolated linearly in between and
// held constant on the two end cells.

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "canon/measure.hpp"

namespace canon::toeplitz {

using cplx = std::complex<double>;

struct CollocationGrid {
  double t = 1.0;
  int N = 0;
  std::vector<double> nodes;    // -t cos((2j - 1) pi / 2N), increasing
  std::vector<double> weights;  // Fejer's first rule, sum 2t

  /// Throws DomainError unless t > 0 and N >= 16.
  static CollocationGrid chebyshev(double t, int N);
};

/// Coefficients c_j with (1/pi) p.v. int_{-t}^{t} v(s)/(s - x) ds = sum c_j v_j
/// for the interpolant of node values v. Cells touching x are integrated
/// exactly against the log kernel.
std::vector<double> finite_hilbert_row(const CollocationGrid& grid, double x);

/// Rows of finite_hilbert_row at every node.
Eigen::MatrixXd finite_hilbert_matrix(const CollocationGrid& grid);

std::vector<cplx> finite_hilbert_apply(const CollocationGrid& grid, std::span<const cplx> values);
std::vector<double> finite_hilbert_apply(const CollocationGrid& grid, std::span<const double> values);

struct PsiSolution {
  CollocationGrid grid;
  std::vector<cplx> values;
  double k0 = 0.0;          // Re (1/sqrt(2 pi)) sum w_j psi_j
  double k0_imag = 0.0;     // should vanish
  double residual = 0.0;    // max |collocation equation - 1| at the nodes
  double cond_estimate = 0.0;

  /// Interpolated psi at x in [-t, t]; 0 outside.
  cplx value_at(double x) const;
  /// k_t(z) = (1/sqrt(2 pi)) int psi(s) e^{i s z} ds by the grid quadrature.
  cplx kernel(double z) const;
};

/// Assembles a I + i pi b H + [kappa(x_i - x_j) w_j] and solves by LU.
/// Throws UnsupportedVariant when fourier_kernel() does, NumericalError when
/// the matrix is numerically singular.
PsiSolution solve_truncated(const measure::SpectralMeasure& m, double t, int N);

/// max |(psi * mu-hat)(x) - 1| at the midpoints between consecutive nodes
/// with |x| <= fraction * t, using the interpolant of psi.
double equation_residual(const measure::SpectralMeasure& m, const PsiSolution& sol, double fraction = 0.9);

/// Header x,re_psi,im_psi,weight.
void write_psi_csv(std::ostream& os, const PsiSolution& sol);

}  // namespace canon::toeplitz
