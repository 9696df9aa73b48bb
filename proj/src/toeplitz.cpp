#include "canon/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "canon/error.hpp"

namespace canon::toeplitz {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

// log|y| with log 0 := 0. A node that coincides with x appears in the two
// adjacent cells with opposite signs, so the principal value drops it.
double log_abs(double y) { return y == 0.0 ? 0.0 : std::log(std::abs(y)); }

template <class T>
std::vector<T> apply_rows(const CollocationGrid& grid, std::span<const T> values) {
  if (static_cast<int>(values.size()) != grid.N) throw DomainError("finite_hilbert_apply: size mismatch");
  std::vector<T> out(values.size());
  for (int i = 0; i < grid.N; ++i) {
    const auto row = finite_hilbert_row(grid, grid.nodes[i]);
    T sum{};
    for (int j = 0; j < grid.N; ++j) sum += row[j] * values[j];
    out[i] = sum;
  }
  return out;
}

// (psi * mu-hat)(x) for the interpolant, without the right-hand side.
cplx apply_operator(const measure::FourierKernelDecomposition& fk, const PsiSolution& sol, double x) {
  const auto& g = sol.grid;
  const auto row = finite_hilbert_row(g, x);
  cplx hilbert{0.0, 0.0};
  for (int j = 0; j < g.N; ++j) hilbert += row[j] * sol.values[j];
  cplx out = fk.delta_coeff * sol.value_at(x) + cplx(0.0, kPi * fk.pv_coeff) * hilbert;
  if (fk.has_regular_kernel())
    for (int j = 0; j < g.N; ++j) out += fk.regular_kernel(x - g.nodes[j]) * g.weights[j] * sol.values[j];
  return out;
}

}  // namespace

CollocationGrid CollocationGrid::chebyshev(double t, int N) {
  if (!(t > 0.0)) throw DomainError("collocation grid: t must be positive");
  if (N < 16) throw DomainError("collocation grid: N must be at least 16");
  CollocationGrid g;
  g.t = t;
  g.N = N;
  for (int j = 1; j <= N; ++j) {
    const double theta = (2.0 * j - 1.0) * kPi / (2.0 * N);
    double s = 0.0;
    for (int k = 1; k <= N / 2; ++k) s += std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
    g.nodes.push_back(-t * std::cos(theta));
    g.weights.push_back(2.0 * t / N * (1.0 - 2.0 * s));
  }
  return g;
}

std::vector<double> finite_hilbert_row(const CollocationGrid& grid, double x) {
  const auto& xs = grid.nodes;
  const int N = grid.N;
  std::vector<double> c(N, 0.0);
  auto I0 = [x](double a, double b) { return log_abs(b - x) - log_abs(a - x); };
  // end cells carry the constant end values
  c[0] += I0(-grid.t, xs[0]);
  c[N - 1] += I0(xs[N - 1], grid.t);
  for (int j = 0; j + 1 < N; ++j) {
    const double a = xs[j], b = xs[j + 1];
    const double i0 = I0(a, b);
    const double i1 = (b - a) + (x - a) * i0;  // int (s - a)/(s - x) ds
    const double slope_part = i1 / (b - a);
    c[j] += i0 - slope_part;
    c[j + 1] += slope_part;
  }
  for (double& v : c) v /= kPi;
  return c;
}

Eigen::MatrixXd finite_hilbert_matrix(const CollocationGrid& grid) {
  Eigen::MatrixXd H(grid.N, grid.N);
  for (int i = 0; i < grid.N; ++i) {
    const auto row = finite_hilbert_row(grid, grid.nodes[i]);
    for (int j = 0; j < grid.N; ++j) H(i, j) = row[j];
  }
  return H;
}

std::vector<cplx> finite_hilbert_apply(const CollocationGrid& grid, std::span<const cplx> values) {
  return apply_rows(grid, values);
}

std::vector<double> finite_hilbert_apply(const CollocationGrid& grid, std::span<const double> values) {
  return apply_rows(grid, values);
}

cplx PsiSolution::value_at(double x) const {
  const auto& xs = grid.nodes;
  if (std::abs(x) > grid.t) return 0.0;
  if (x <= xs.front()) return values.front();
  if (x >= xs.back()) return values.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return values[j - 1] + w * (values[j] - values[j - 1]);
}

cplx PsiSolution::kernel(double z) const {
  cplx sum{0.0, 0.0};
  for (int j = 0; j < grid.N; ++j) sum += grid.weights[j] * values[j] * std::exp(cplx(0.0, grid.nodes[j] * z));
  return sum / kSqrt2Pi;
}

PsiSolution solve_truncated(const measure::SpectralMeasure& m, double t, int N) {
  const auto fk = measure::fourier_kernel(m);
  PsiSolution sol;
  sol.grid = CollocationGrid::chebyshev(t, N);
  const auto& g = sol.grid;

  Eigen::MatrixXcd A(N, N);
  const cplx hilbert_coeff(0.0, kPi * fk.pv_coeff);
  for (int i = 0; i < N; ++i) {
    const auto row = finite_hilbert_row(g, g.nodes[i]);
    for (int j = 0; j < N; ++j) {
      cplx a = hilbert_coeff * row[j];
      if (i == j) a += fk.delta_coeff;
      if (fk.has_regular_kernel()) a += fk.regular_kernel(g.nodes[i] - g.nodes[j]) * g.weights[j];
      A(i, j) = a;
    }
  }
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  const double rcond = lu.rcond();
  sol.cond_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(rcond > 1e-14)) {
    std::ostringstream os;
    os << "solve_truncated: collocation matrix is numerically singular (condition estimate " << sol.cond_estimate
       << ")";
    throw NumericalError(os.str());
  }
  const Eigen::VectorXcd rhs = Eigen::VectorXcd::Ones(N);
  const Eigen::VectorXcd psi = lu.solve(rhs);
  sol.residual = (A * psi - rhs).cwiseAbs().maxCoeff();
  sol.values.assign(psi.data(), psi.data() + N);

  cplx integral{0.0, 0.0};
  for (int j = 0; j < N; ++j) integral += g.weights[j] * sol.values[j];
  sol.k0 = integral.real() / kSqrt2Pi;
  sol.k0_imag = integral.imag() / kSqrt2Pi;
  return sol;
}

double equation_residual(const measure::SpectralMeasure& m, const PsiSolution& sol, double fraction) {
  const auto fk = measure::fourier_kernel(m);
  const auto& xs = sol.grid.nodes;
  double worst = 0.0;
  for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
    const double x = 0.5 * (xs[j] + xs[j + 1]);
    if (std::abs(x) > fraction * sol.grid.t) continue;
    worst = std::max(worst, std::abs(apply_operator(fk, sol, x) - 1.0));
  }
  return worst;
}

void write_psi_csv(std::ostream& os, const PsiSolution& sol) {
  char buf[160];
  os << "x,re_psi,im_psi,weight\n";
  for (int j = 0; j < sol.grid.N; ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", sol.grid.nodes[j], sol.values[j].real(),
                  sol.values[j].imag(), sol.grid.weights[j]);
    os << buf;
  }
}

}  // namespace canon::toeplitz
