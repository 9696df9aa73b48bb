#include "canon/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "canon/error.hpp"

namespace canon::measure {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double sign(double x) { return (x > 0.0) - (x < 0.0); }

// int_a^b s^{q-1} ds scaled by q, for 0 <= a <= b: b^q - a^q without
// cancellation when b is close to a.
double power_difference(double a, double b, double q) {
  if (a <= 0.0) return std::pow(b, q);
  return std::pow(a, q) * std::expm1(q * std::log1p((b - a) / a));
}

double quasi_mass(const QuasiHomogeneous& m, double a, double b) {
  const double q = 2.0 + 2.0 * m.nu;  // exponent of the primitive
  auto half_line = [q](double lo, double hi) { return power_difference(lo, hi, q) / q; };
  double total = 0.0;
  if (b > 0.0) total += m.rho_plus * half_line(std::max(a, 0.0), b);
  if (a < 0.0) total += m.rho_minus * half_line(std::max(-b, 0.0), -a);
  return total;
}

// A segment of the table remainder r = rho - step, linear on [a, b].
struct LinearPiece {
  double a, b, ra, rb;
};

// (1/sqrt(2 pi)) int_a^b (ra + (rb - ra)(x - a)/(b - a)) e^{-i tau x} dx
cplx linear_piece_transform(const LinearPiece& p, double tau) {
  const double len = p.b - p.a;
  if (len <= 0.0) return {0.0, 0.0};
  if (std::abs(tau) * len < 0.5) {
    // 8-point Gauss-Legendre on the piece
    static const double nodes[] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                   -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                   0.7966664774136267,  0.9602898564975363};
    static const double weights[] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                     0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                     0.2223810344533745, 0.1012285362903763};
    cplx sum{0.0, 0.0};
    for (int k = 0; k < 8; ++k) {
      const double u = 0.5 * (nodes[k] + 1.0);
      const double x = p.a + u * len;
      const double r = p.ra + (p.rb - p.ra) * u;
      sum += weights[k] * r * std::exp(cplx(0.0, -tau * x));
    }
    return sum * (0.5 * len) / kSqrt2Pi;
  }
  const cplx i(0.0, 1.0);
  const cplx ea = std::exp(-i * tau * p.a);
  const cplx eb = std::exp(-i * tau * p.b);
  const cplx i0 = (ea - eb) / (i * tau);                         // int e^{-i tau x}
  const cplx i1 = len * eb / (-i * tau) + (ea - eb) / ((i * tau) * (i * tau));  // int (x - a) e^{-i tau x}
  const double slope = (p.rb - p.ra) / len;
  return (p.ra * i0 + slope * i1) / kSqrt2Pi;
}

void validate(const SpectralMeasure::Variant& v) {
  std::visit(Overloaded{
                 [](const Homogeneous& h) {
                   if (!(h.c1 > std::abs(h.c2)))
                     throw InvalidModel("homogeneous measure requires c1 > |c2|");
                 },
                 [](const QuasiHomogeneous& q) {
                   if (!(q.nu > -1.0 && q.nu < 0.0))
                     throw InvalidModel("quasi-homogeneous measure requires nu in (-1, 0)");
                   if (!(q.rho_plus > 0.0 && q.rho_minus > 0.0))
                     throw InvalidModel("quasi-homogeneous measure requires positive rho(+-1)");
                 },
                 [](const GeneralDensity& g) {
                   if (!g.rho) throw InvalidModel("general density requires an evaluator");
                   if (!(g.rho_at_plus_inf > 0.0 && g.rho_at_minus_inf > 0.0))
                     throw InvalidModel("general density requires positive asymptotic constants");
                   for (int k = -80; k <= 80; ++k) {
                     const double x = 0.25 * k + 0.0123;
                     const double r = g.rho(x);
                     if (!(r > 0.0) || !std::isfinite(r))
                       throw InvalidModel("general density must be positive and finite; fails at x = " +
                                          std::to_string(x));
                   }
                 },
             },
             v);
}

}  // namespace

SpectralMeasure::SpectralMeasure(Variant v) : variant_(std::move(v)) { validate(variant_); }

SpectralMeasure SpectralMeasure::table(std::vector<double> x, std::vector<double> rho, double tail_plus,
                                       double tail_minus) {
  if (x.size() < 2 || x.size() != rho.size()) throw InvalidModel("table measure: need >= 2 nodes and matching rho");
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (!(x[i + 1] > x[i])) throw InvalidModel("table measure: nodes must be strictly increasing");
  for (double r : rho)
    if (!(r > 0.0)) throw InvalidModel("table measure: density values must be positive");
  if (!(tail_plus > 0.0 && tail_minus > 0.0)) throw InvalidModel("table measure: tails must be positive");

  auto density = [x, rho, tail_plus, tail_minus](double s) {
    if (s > x.back()) return tail_plus;
    if (s < x.front()) return tail_minus;
    const auto it = std::upper_bound(x.begin(), x.end(), s);
    if (it == x.end()) return rho.back();
    const std::size_t j = static_cast<std::size_t>(it - x.begin());
    const double w = (s - x[j - 1]) / (x[j] - x[j - 1]);
    return rho[j - 1] + w * (rho[j] - rho[j - 1]);
  };

  // Exact integral of a piecewise-linear density with constant tails.
  auto mass = [x, density, tail_plus, tail_minus](double a, double b) {
    if (b <= a) return 0.0;
    double total = 0.0;
    if (a < x.front()) total += tail_minus * (std::min(b, x.front()) - a);
    if (b > x.back()) total += tail_plus * (b - std::max(a, x.back()));
    const double lo = std::max(a, x.front());
    const double hi = std::min(b, x.back());
    if (hi > lo) {
      std::vector<double> pts{lo};
      for (double node : x)
        if (node > lo && node < hi) pts.push_back(node);
      pts.push_back(hi);
      for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += 0.5 * (density(pts[i]) + density(pts[i + 1])) * (pts[i + 1] - pts[i]);
    }
    return total;
  };

  // Remainder r = rho - (c1 + c2 sign x) is piecewise linear on the table
  // nodes, constant between the table and the origin, zero elsewhere.
  const double c1 = 0.5 * (tail_plus + tail_minus);
  const double c2 = 0.5 * (tail_plus - tail_minus);
  auto remainder = [&](double s, double side) {
    // side selects the one-sided limit at breakpoints
    const double rho_s = (s == x.front() && side < 0) ? tail_minus
                         : (s == x.back() && side > 0) ? tail_plus
                                                       : density(s);
    const double sgn = (s > 0.0 || (s == 0.0 && side > 0)) ? 1.0 : -1.0;
    return rho_s - c1 - c2 * sgn;
  };
  const double lo = std::min(x.front(), 0.0);
  const double hi = std::max(x.back(), 0.0);
  std::vector<double> breaks{lo, hi, 0.0};
  breaks.insert(breaks.end(), x.begin(), x.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<LinearPiece> pieces;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    pieces.push_back({a, b, remainder(a, +1.0), remainder(b, -1.0)});
  }
  auto kernel = [pieces](double tau) {
    cplx sum{0.0, 0.0};
    for (const auto& p : pieces) sum += linear_piece_transform(p, tau);
    return sum;
  };

  GeneralDensity g;
  g.rho = density;
  g.rho_at_plus_inf = tail_plus;
  g.rho_at_minus_inf = tail_minus;
  g.regular_kernel = kernel;
  g.mass = mass;
  g.remainder_support = std::make_pair(lo, hi);
  return SpectralMeasure(std::move(g));
}

double SpectralMeasure::density(double x) const {
  return std::visit(Overloaded{
                        [x](const Homogeneous& h) { return h.c1 + h.c2 * sign(x); },
                        [x](const QuasiHomogeneous& q) {
                          const double p = 1.0 + 2.0 * q.nu;
                          if (x > 0.0) return q.rho_plus * std::pow(x, p);
                          if (x < 0.0) return q.rho_minus * std::pow(-x, p);
                          if (p > 0.0) return 0.0;
                          if (p < 0.0) return std::numeric_limits<double>::infinity();
                          return 0.5 * (q.rho_plus + q.rho_minus);
                        },
                        [x](const GeneralDensity& g) { return g.rho(x); },
                    },
                    variant_);
}

double SpectralMeasure::mass(double a, double b) const {
  if (!(b > a)) return 0.0;
  return std::visit(Overloaded{
                        [a, b](const Homogeneous& h) {
                          const double neg = std::max(0.0, std::min(b, 0.0) - a);
                          const double pos = std::max(0.0, b - std::max(a, 0.0));
                          return (h.c1 - h.c2) * neg + (h.c1 + h.c2) * pos;
                        },
                        [a, b](const QuasiHomogeneous& q) { return quasi_mass(q, a, b); },
                        [a, b](const GeneralDensity& g) {
                          if (g.mass) return g.mass(a, b);
                          using boost::math::quadrature::gauss_kronrod;
                          return gauss_kronrod<double, 31>::integrate(g.rho, a, b, 15, 1e-12);
                        },
                    },
                    variant_);
}

double SpectralMeasure::tail_plus() const {
  return std::visit(Overloaded{
                        [](const Homogeneous& h) { return h.c1 + h.c2; },
                        [](const QuasiHomogeneous&) -> double {
                          throw UnsupportedVariant("quasi-homogeneous measures have no constant tail");
                        },
                        [](const GeneralDensity& g) { return g.rho_at_plus_inf; },
                    },
                    variant_);
}

double SpectralMeasure::tail_minus() const {
  return std::visit(Overloaded{
                        [](const Homogeneous& h) { return h.c1 - h.c2; },
                        [](const QuasiHomogeneous&) -> double {
                          throw UnsupportedVariant("quasi-homogeneous measures have no constant tail");
                        },
                        [](const GeneralDensity& g) { return g.rho_at_minus_inf; },
                    },
                    variant_);
}

std::string SpectralMeasure::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Homogeneous& h) { os << "homogeneous(c1=" << h.c1 << ", c2=" << h.c2 << ")"; },
                 [&](const QuasiHomogeneous& q) {
                   os << "quasi(nu=" << q.nu << ", rho+=" << q.rho_plus << ", rho-=" << q.rho_minus << ")";
                 },
                 [&](const GeneralDensity& g) {
                   os << "density(rho+inf=" << g.rho_at_plus_inf << ", rho-inf=" << g.rho_at_minus_inf << ")";
                 },
             },
             variant_);
  return os.str();
}

double density_at(const SpectralMeasure& m, double x) { return m.density(x); }

Classification classify(const SpectralMeasure& m) {
  if (const auto* q = std::get_if<QuasiHomogeneous>(&m.variant())) {
    if (std::abs(1.0 + 2.0 * q->nu) <= kClassifyTolerance) return {MeasureClass::Homogeneous, -0.5};
    return {MeasureClass::QuasiHomogeneous, q->nu};
  }
  if (std::holds_alternative<Homogeneous>(m.variant())) return {MeasureClass::Homogeneous, -0.5};

  // rho(t x) = t^{1+2 nu} rho(x): estimate the exponent on every probe and
  // require a single value.
  std::vector<double> exponents;
  for (double x : kClassifyPoints) {
    for (double t : kClassifyScales) {
      const double num = m.density(t * x);
      const double den = m.density(x);
      if (!(num > 0.0 && den > 0.0)) return {MeasureClass::General, std::nan("")};
      exponents.push_back(std::log(num / den) / std::log(t));
    }
  }
  const double p0 = exponents.front();
  for (double p : exponents) {
    if (std::abs(p - p0) > kClassifyTolerance * std::max(1.0, std::abs(p0)))
      return {MeasureClass::General, std::nan("")};
  }
  if (std::abs(p0) <= kClassifyTolerance) return {MeasureClass::Homogeneous, -0.5};
  return {MeasureClass::QuasiHomogeneous, 0.5 * (p0 - 1.0)};
}

FourierKernelDecomposition fourier_kernel(const SpectralMeasure& m) {
  return std::visit(Overloaded{
                        [](const Homogeneous& h) {
                          return FourierKernelDecomposition{kSqrt2Pi * h.c1, std::sqrt(2.0 / kPi) * h.c2, {}};
                        },
                        [](const QuasiHomogeneous&) -> FourierKernelDecomposition {
                          throw UnsupportedVariant(
                              "fourier_kernel: quasi-homogeneous measures have no locally integrable transform");
                        },
                        [](const GeneralDensity& g) {
                          if (!g.regular_kernel)
                            throw UnsupportedVariant("fourier_kernel: general density lacks a regular kernel");
                          const double c1 = 0.5 * (g.rho_at_plus_inf + g.rho_at_minus_inf);
                          const double c2 = 0.5 * (g.rho_at_plus_inf - g.rho_at_minus_inf);
                          return FourierKernelDecomposition{kSqrt2Pi * c1, std::sqrt(2.0 / kPi) * c2,
                                                            g.regular_kernel};
                        },
                    },
                    m.variant());
}

namespace {

// Smallest b in (c, limit] with mu([c, b)) >= delta.
std::optional<double> reach_right(const SpectralMeasure& m, double c, double delta, double limit) {
  if (m.mass(c, limit) < delta) return std::nullopt;
  double lo = c;
  double hi = std::min(limit, c + delta);
  while (m.mass(c, hi) < delta) {
    lo = hi;
    hi = std::min(limit, c + 2.0 * (hi - c));
  }
  auto f = [&](double b) { return m.mass(c, b) - delta; };
  boost::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return r.second;
}

// Largest a in [limit, e) with mu([a, e)) >= delta.
std::optional<double> reach_left(const SpectralMeasure& m, double e, double delta, double limit) {
  if (m.mass(limit, e) < delta) return std::nullopt;
  double hi = e;
  double lo = std::max(limit, e - delta);
  while (m.mass(lo, e) < delta) {
    hi = lo;
    lo = std::max(limit, e - 2.0 * (e - lo));
  }
  auto f = [&](double a) { return m.mass(a, e) - delta; };
  boost::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
  return r.first;
}

}  // namespace

CapacityReport delta_capacity(const SpectralMeasure& m, Interval interval, double delta, std::optional<int> stop_at) {
  if (!(delta > 0.0)) throw InvalidModel("delta_capacity: delta must be positive");
  if (!(interval.right > interval.left)) throw InvalidModel("delta_capacity: interval must be nondegenerate");

  CapacityReport report{interval, delta, 0, {}};
  const double width = std::max(delta, interval.length());
  const double window_lo = interval.left - width;
  const double window_hi = interval.right + width;
  const double eta = 1e-9 * std::max({1.0, interval.length(), delta});
  const int limit = stop_at.value_or(std::numeric_limits<int>::max());

  double cursor = window_lo;
  // First witness ends just inside the interval, as far left as possible.
  const double first_end = interval.left + eta;
  if (auto a = reach_left(m, first_end, delta, window_lo)) {
    report.witness_intervals.push_back({std::min(*a, first_end - delta), first_end});
    cursor = first_end;
  }
  while (cursor <= interval.right && static_cast<int>(report.witness_intervals.size()) < limit) {
    const auto b = reach_right(m, cursor, delta, window_hi);
    if (!b) break;
    const double end = std::max(*b, cursor + delta);
    if (end > window_hi) break;
    report.witness_intervals.push_back({cursor, end});
    cursor = end;
  }
  report.capacity = static_cast<int>(report.witness_intervals.size());
  return report;
}

bool verify_capacity_report(const SpectralMeasure& m, const CapacityReport& report, double rel_tol) {
  const double d = report.delta;
  double prev_right = -std::numeric_limits<double>::infinity();
  for (const auto& w : report.witness_intervals) {
    if (w.length() < d * (1.0 - rel_tol)) return false;
    if (m.mass(w.left, w.right) < d * (1.0 - rel_tol)) return false;
    if (w.left < prev_right) return false;
    if (!(w.right > report.interval.left && w.left <= report.interval.right)) return false;
    prev_right = w.right;
  }
  return static_cast<int>(report.witness_intervals.size()) == report.capacity;
}

PwSamplingReport is_pw_sampling(const SpectralMeasure& m, std::span<const double> t_list, double L_max) {
  if (t_list.empty()) throw InvalidModel("is_pw_sampling: t_list must be nonempty");
  if (!(L_max > 0.0)) throw InvalidModel("is_pw_sampling: L_max must be positive");
  PwSamplingReport report;

  // (i) mu(x, x+1) bounded: compare far probes against the origin region.
  double near = 0.0;
  for (double x = -10.0; x <= 10.0; x += 0.5) near = std::max(near, m.mass(x, x + 1.0));
  double far = near;
  for (double c : kPwProbeCenters) far = std::max({far, m.mass(c, c + 1.0), m.mass(c - 1.0, c)});
  report.unit_mass_ratio = (near > 0.0) ? far / near : std::numeric_limits<double>::infinity();
  report.condition_i = std::isfinite(far) && report.unit_mass_ratio <= kPwUnitMassRatioBound;
  if (!report.condition_i) {
    std::ostringstream os;
    os << "condition (i): unit-interval mass grows by factor " << report.unit_mass_ratio << " across probes";
    report.first_failure = os.str();
  }

  // (ii) C_delta(I) >= t |I| for every probe interval of length in [L, L_max].
  const double L = 0.25 * L_max;
  const double lengths[] = {L, 0.5 * L_max, L_max};
  report.condition_ii = true;
  for (double t : t_list) {
    bool found = false;
    std::string failure;
    for (int k = 0; k < kPwDeltaLadderSize && !found; ++k) {
      const double delta = std::ldexp(1.0, -k);
      bool ok = true;
      for (double c : kPwProbeCenters) {
        for (double len : lengths) {
          const Interval probe{c - 0.5 * len, c + 0.5 * len};
          const int need = static_cast<int>(std::ceil(t * len));
          const auto cap = delta_capacity(m, probe, delta, need);
          if (cap.capacity < need) {
            std::ostringstream os;
            os << "condition (ii): t=" << t << " delta=" << delta << " I=[" << probe.left << ", " << probe.right
               << "] capacity " << cap.capacity << " < " << need;
            failure = os.str();
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
      if (ok) {
        report.certificates.push_back({t, delta, L});
        found = true;
      }
    }
    if (!found) {
      report.condition_ii = false;
      if (!report.first_failure) report.first_failure = failure;
    }
  }
  report.sampling = report.condition_i && report.condition_ii;
  return report;
}

}  // namespace canon::measure
