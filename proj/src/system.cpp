#include "canon/system.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "canon/error.hpp"
#include "canon/specfun.hpp"

namespace canon::system {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using State = std::array<cplx, 4>;  // A, B, C, D

void validate_entries(const Entries& e, double t) {
  const double scale = std::max({1.0, std::abs(e.h11), std::abs(e.h22)});
  if (!(e.h11 >= 0.0 && e.h22 >= 0.0 && e.det() >= -1e-12 * scale * scale)) {
    std::ostringstream os;
    os << "Hamiltonian is not positive semidefinite at t = " << t << " (h11=" << e.h11 << ", h12=" << e.h12
       << ", h22=" << e.h22 << ")";
    throw InvalidModel(os.str());
  }
}

void validate(const HamiltonianSpec::Variant& v) {
  std::visit(Overloaded{
                 [](const Identity&) {},
                 [](const DiagonalPower& d) {
                   if (!(d.m > 0.0 && d.m < 1.0))
                     throw InvalidModel("diagonal power Hamiltonian requires m in (0, 1)");
                 },
                 [](const HomogeneousISP& h) {
                   if (!(h.C1 > 0.0)) throw InvalidModel("homogeneous ISP Hamiltonian requires C1 > 0");
                   if (!std::isfinite(h.Cconst) || !std::isfinite(h.C2))
                     throw InvalidModel("homogeneous ISP Hamiltonian requires finite constants");
                 },
                 [](const Tabulated& tab) {
                   const std::size_t n = tab.t.size();
                   if (n < 2 || tab.h11.size() != n || tab.h12.size() != n || tab.h22.size() != n)
                     throw InvalidModel("tabulated Hamiltonian needs >= 2 nodes and equal-length columns");
                   if (tab.t.front() < 0.0) throw InvalidModel("tabulated Hamiltonian: t must be nonnegative");
                   for (std::size_t i = 0; i < n; ++i) {
                     if (i + 1 < n && !(tab.t[i + 1] > tab.t[i]))
                       throw InvalidModel("tabulated Hamiltonian: t must be strictly increasing");
                     validate_entries({tab.h11[i], tab.h12[i], tab.h22[i]}, tab.t[i]);
                   }
                 },
             },
             v);
}

State rhs(const HamiltonianSpec& H, double t, const State& y, cplx z) {
  const Entries e = H.entries(t);
  return {-z * (e.h12 * y[0] + e.h22 * y[2]), -z * (e.h12 * y[1] + e.h22 * y[3]),
          z * (e.h11 * y[0] + e.h12 * y[2]), z * (e.h11 * y[1] + e.h12 * y[3])};
}

// Dormand-Prince 5(4) from t0 to t1 on a smooth stretch of H.
void dopri(const HamiltonianSpec& H, State& y, double t0, double t1, cplx z, double tol) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  // difference between the 5th and embedded 4th order weights
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double span = t1 - t0;
  if (span <= 0.0) return;
  double h = std::min(span, 0.01 * std::max(t0, 1e-3 * span));
  if (std::abs(z) > 0.0) h = std::min(h, 0.5 / std::abs(z));
  double t = t0;
  State k1 = rhs(H, t, y, z);
  long steps = 0;
  while (t < t1) {
    if (t + h > t1 || t1 - (t + h) < 1e-12 * h) h = t1 - t;
    auto stage = [&](std::initializer_list<std::pair<double, const State*>> terms) {
      State s = y;
      for (auto [a, k] : terms)
        for (int i = 0; i < 4; ++i) s[i] += h * a * (*k)[i];
      return s;
    };
    const State k2 = rhs(H, t + c2 * h, stage({{a21, &k1}}), z);
    const State k3 = rhs(H, t + c3 * h, stage({{a31, &k1}, {a32, &k2}}), z);
    const State k4 = rhs(H, t + c4 * h, stage({{a41, &k1}, {a42, &k2}, {a43, &k3}}), z);
    const State k5 = rhs(H, t + c5 * h, stage({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), z);
    const State k6 = rhs(H, t + h, stage({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}), z);
    const State y5 = stage({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = rhs(H, t + h, y5, z);
    double err = 0.0;
    for (int i = 0; i < 4; ++i) {
      const cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      err = std::max(err, std::abs(e) / (tol * (1.0 + std::max(std::abs(y[i]), std::abs(y5[i])))));
    }
    if (!std::isfinite(err)) throw NumericalError("transfer_matrix: non-finite state during integration");
    if (err <= 1.0) {
      t = (h == t1 - t) ? t1 : t + h;
      y = y5;
      k1 = k7;  // first-same-as-last
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= factor;
    if (h < 1e-15 * std::max(t, 1e-300) || ++steps > 20000000) {
      std::ostringstream os;
      os << "transfer_matrix: step size underflow at t = " << t;
      throw NumericalError(os.str());
    }
  }
}

// Integrates across [t0, t1], stopping at table nodes where H has kinks.
void integrate(const HamiltonianSpec& H, State& y, double t0, double t1, cplx z, double tol) {
  std::vector<double> stops{t0};
  if (const auto* tab = std::get_if<Tabulated>(&H.variant()))
    for (double node : tab->t)
      if (node > t0 + 1e-12 * t1 && node < t1 * (1.0 - 1e-12)) stops.push_back(node);
  stops.push_back(t1);
  for (std::size_t i = 0; i + 1 < stops.size(); ++i) dopri(H, y, stops[i], stops[i + 1], z, tol);
}

// M(t0) for a small t0 from the Picard expansion M = I + z N1 + z^2 N2,
// N1 = -Omega int_0^t0 H.
std::pair<double, State> seed(const HamiltonianSpec& H, double t_end, cplx z) {
  const State identity{1.0, 0.0, 0.0, 1.0};
  return std::visit(
      Overloaded{
          [&](const DiagonalPower& d) {
            const double eps = std::min(kDiagonalPowerSeed, t_end);
            const double m = d.m;
            const double s11 = std::pow(eps, m + 1.0) / (m + 1.0);
            const double s22 = std::pow(eps, 1.0 - m) / (1.0 - m);
            const cplx z2 = z * z;
            return std::pair{eps, State{1.0 - z2 * eps * eps / (2.0 * (m + 1.0)), -z * s22, z * s11,
                                        1.0 - z2 * eps * eps / (2.0 * (1.0 - m))}};
          },
          [&](const HomogeneousISP& h) {
            const double eps = std::min(kHomogeneousISPSeed, t_end);
            const double L = std::log(eps);
            const double int_log = eps * L - eps;                   // int_0^eps log t
            const double int_log2 = eps * (L * L - 2.0 * L + 2.0);  // int_0^eps log^2 t
            const double s11 = h.C1 * eps;
            const double s12 = h.Cconst * eps - h.C2 * int_log;
            const double s22 = ((1.0 + h.Cconst * h.Cconst) * eps - 2.0 * h.Cconst * h.C2 * int_log +
                                h.C2 * h.C2 * int_log2) /
                               h.C1;
            return std::pair{eps, State{1.0 - z * s12, -z * s22, z * s11, 1.0 + z * s12}};
          },
          [&](const auto&) { return std::pair{0.0, identity}; },
      },
      H.variant());
}

TransferMatrixSample make_sample(double t, cplx z, const State& y) {
  TransferMatrixSample s;
  s.t = t;
  s.z = z;
  s.A = y[0];
  s.B = y[1];
  s.C = y[2];
  s.D = y[3];
  if (z.imag() == 0.0) {
    s.A = s.A.real();
    s.B = s.B.real();
    s.C = s.C.real();
    s.D = s.D.real();
  }
  return s;
}

void check_tol(double tol) {
  if (!(tol >= 1e-12 && tol <= 1e-4)) throw DomainError("transfer_matrix: tol must lie in [1e-12, 1e-4]");
}

void check_horizon(const HamiltonianSpec& H, double t) {
  if (t > H.horizon() * (1.0 + 1e-14)) {
    std::ostringstream os;
    os << "transfer_matrix: t = " << t << " beyond the Hamiltonian's horizon " << H.horizon();
    throw DomainError(os.str());
  }
}

}  // namespace

HamiltonianSpec::HamiltonianSpec(Variant v) : variant_(std::move(v)) { validate(variant_); }

Entries HamiltonianSpec::entries(double t) const {
  return std::visit(Overloaded{
                        [](const Identity&) { return Entries{1.0, 0.0, 1.0}; },
                        [t](const DiagonalPower& d) { return Entries{std::pow(t, d.m), 0.0, std::pow(t, -d.m)}; },
                        [t](const HomogeneousISP& h) {
                          const double g = h.Cconst - h.C2 * std::log(t);
                          return Entries{h.C1, g, (1.0 + g * g) / h.C1};
                        },
                        [t](const Tabulated& tab) {
                          if (t <= tab.t.front()) return Entries{tab.h11.front(), tab.h12.front(), tab.h22.front()};
                          if (t >= tab.t.back()) return Entries{tab.h11.back(), tab.h12.back(), tab.h22.back()};
                          const auto it = std::upper_bound(tab.t.begin(), tab.t.end(), t);
                          const std::size_t j = static_cast<std::size_t>(it - tab.t.begin());
                          const double w = (t - tab.t[j - 1]) / (tab.t[j] - tab.t[j - 1]);
                          auto lerp = [&](const std::vector<double>& v) { return v[j - 1] + w * (v[j] - v[j - 1]); };
                          return Entries{lerp(tab.h11), lerp(tab.h12), lerp(tab.h22)};
                        },
                    },
                    variant_);
}

double HamiltonianSpec::horizon() const {
  if (const auto* tab = std::get_if<Tabulated>(&variant_)) return tab->t.back();
  return std::numeric_limits<double>::infinity();
}

bool HamiltonianSpec::singular_at_zero() const {
  return std::holds_alternative<DiagonalPower>(variant_) ||
         (std::holds_alternative<HomogeneousISP>(variant_) && std::get<HomogeneousISP>(variant_).C2 != 0.0);
}

std::string HamiltonianSpec::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Identity&) { os << "identity"; },
                 [&](const DiagonalPower& d) { os << "diagonal_power(m=" << d.m << ")"; },
                 [&](const HomogeneousISP& h) {
                   os << "homogeneous_isp(C1=" << h.C1 << ", C=" << h.Cconst << ", C2=" << h.C2 << ")";
                 },
                 [&](const Tabulated& tab) {
                   os << "table(" << tab.t.size() << " nodes on [" << tab.t.front() << ", " << tab.t.back() << "])";
                 },
             },
             variant_);
  return os.str();
}

TransferMatrixSample transfer_matrix(const HamiltonianSpec& H, double t_end, cplx z, double tol) {
  if (!(t_end > 0.0)) throw DomainError("transfer_matrix: t_end must be positive");
  const double t = t_end;
  return transfer_matrix_path(H, std::span<const double>(&t, 1), z, tol).front();
}

TransferMatrixSample transfer_matrix_between(const HamiltonianSpec& H, double t1, double t2, cplx z, double tol) {
  check_tol(tol);
  if (t1 == 0.0) return transfer_matrix(H, t2, z, tol);
  if (!(t1 > 0.0 && t2 >= t1)) throw DomainError("transfer_matrix_between: need 0 < t1 <= t2");
  check_horizon(H, t2);
  State y{1.0, 0.0, 0.0, 1.0};
  integrate(H, y, t1, t2, z, tol);
  return make_sample(t2, z, y);
}

std::vector<TransferMatrixSample> transfer_matrix_path(const HamiltonianSpec& H, std::span<const double> t_list,
                                                       cplx z, double tol) {
  check_tol(tol);
  std::vector<TransferMatrixSample> out;
  if (t_list.empty()) return out;
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] >= 0.0)) throw DomainError("transfer_matrix_path: times must be nonnegative");
    if (i > 0 && t_list[i] < t_list[i - 1]) throw DomainError("transfer_matrix_path: times must be nondecreasing");
  }
  check_horizon(H, t_list.back());

  State y{1.0, 0.0, 0.0, 1.0};
  double t = 0.0;
  bool started = false;
  for (double target : t_list) {
    if (target == 0.0) {
      out.push_back(make_sample(0.0, z, y));
      continue;
    }
    if (!started) {
      auto [t0, y0] = seed(H, target, z);
      t = t0;
      y = y0;
      started = true;
    }
    integrate(H, y, t, target, z, tol);
    t = target;
    out.push_back(make_sample(target, z, y));
  }
  return out;
}

std::vector<TransferMatrixSample> transfer_matrix_batch(const HamiltonianSpec& H, std::span<const double> t_list,
                                                        std::span<const cplx> z_list, double tol) {
  std::vector<double> sorted(t_list.begin(), t_list.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::vector<TransferMatrixSample>> per_z;
  for (cplx z : z_list) per_z.push_back(transfer_matrix_path(H, sorted, z, tol));
  std::vector<TransferMatrixSample> out;
  for (double t : t_list) {
    const std::size_t i = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
    for (const auto& row : per_z) out.push_back(row[i]);
  }
  return out;
}

double integrated_h11(const HamiltonianSpec& H, double t) {
  if (!(t >= 0.0)) throw DomainError("integrated_h11: t must be nonnegative");
  check_horizon(H, t);
  return std::visit(Overloaded{
                        [t](const Identity&) { return t; },
                        [t](const DiagonalPower& d) { return std::pow(t, d.m + 1.0) / (d.m + 1.0); },
                        [t](const HomogeneousISP& h) { return h.C1 * t; },
                        [t](const Tabulated& tab) {
                          // constant below the first node, trapezoids above
                          double sum = tab.h11.front() * std::min(t, tab.t.front());
                          for (std::size_t i = 0; i + 1 < tab.t.size() && tab.t[i] < t; ++i) {
                            const double b = std::min(t, tab.t[i + 1]);
                            const double hb = tab.h11[i] + (tab.h11[i + 1] - tab.h11[i]) * (b - tab.t[i]) /
                                                               (tab.t[i + 1] - tab.t[i]);
                            sum += 0.5 * (tab.h11[i] + hb) * (b - tab.t[i]);
                          }
                          return sum;
                        },
                    },
                    H.variant());
}

HamiltonianSpec det_normalize(const HamiltonianSpec& H, double T, int samples) {
  if (!std::holds_alternative<Tabulated>(H.variant())) return H;  // det H = 1 already
  if (!(T > 0.0)) throw DomainError("det_normalize: T must be positive");
  if (samples < 1) throw DomainError("det_normalize: samples must be positive");
  check_horizon(H, T);

  auto sqrt_det = [&](double t) {
    const double d = H.entries(t).det();
    return std::sqrt(std::max(d, 0.0));
  };
  Tabulated out;
  double s = 0.0;
  double prev = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double t = T * i / samples;
    if (i > 0)
      s += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(sqrt_det, prev, t, 10, 1e-13);
    const Entries e = H.entries(t);
    const double d = e.det();
    if (!(d > 0.0)) {
      std::ostringstream os;
      os << "det_normalize: degenerate determinant at t = " << t;
      throw DomainError(os.str());
    }
    const double r = std::sqrt(d);
    out.t.push_back(s);
    out.h11.push_back(e.h11 / r);
    out.h12.push_back(e.h12 / r);
    out.h22.push_back(e.h22 / r);
    prev = t;
  }
  return HamiltonianSpec(std::move(out));
}

double bessel_g(double nu) { return std::exp2(nu - 1.0) * specfun::gamma(nu); }

BesselPair bessel_closed_form(double m, double t, double z) {
  if (!(m > 0.0 && m < 1.0)) throw DomainError("bessel_closed_form: m must lie in (0, 1)");
  if (!(t >= 0.0)) throw DomainError("bessel_closed_form: t must be nonnegative");
  const double nu = 0.5 * (1.0 + m);
  const double g = bessel_g(nu);
  return {g * specfun::f_nu(nu - 1.0, z * t), g * std::pow(t, 2.0 * nu) * z * specfun::f_nu(nu, z * t)};
}

void write_transfer_csv(std::ostream& os, std::span<const TransferMatrixSample> samples) {
  char buf[512];
  os << "t,re_z,im_z,A,B,C,D,det_err\n";
  for (const auto& s : samples) {
    if (s.z.imag() != 0.0) throw DomainError("write_transfer_csv: entries are real only for real z");
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.z.real(), s.z.imag(),
                  s.A.real(), s.B.real(), s.C.real(), s.D.real(), s.det_error());
    os << buf;
  }
}

}  // namespace canon::system
