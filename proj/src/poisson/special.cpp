#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "stoprule/errors.hpp"
#include "stoprule/poisson.hpp"
#include "stoprule/summation.hpp"

namespace stoprule::poisson {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kQuadTol = 1e-14;  // 1e-15 sits at the rounding floor of the Kronrod error estimate

template <class F>
double integrate_finite(F f, double lo, double hi) {
  if (lo == hi) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 12, kQuadTol);
}

template <class F>
double integrate_to_infinity(F f, double lo) {
  thread_local boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(f, lo, std::numeric_limits<double>::infinity(), 1e-14);
}

// Endpoint behaviour like t^{a-1} at lo defeats Gauss-Kronrod.
template <class F>
double integrate_endpoint(F f, double lo, double hi) {
  if (lo == hi) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, lo, hi, 1e-15);
}

}  // namespace

double erf(double x) { return std::erf(x); }
double erfc(double x) { return std::erfc(x); }

double expint_e1(double x) {
  if (!(x > 0.0)) throw DomainError("expint_e1 needs x > 0");
  if (std::isinf(x)) return 0.0;
  constexpr double eps = 1e-16;
  if (x < 1.0) {
    // -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    double term = 1.0;
    CompensatedSum sum;
    for (int k = 1; k < 100; ++k) {
      term *= -x / k;
      const double t = term / k;
      sum.add(t);
      if (std::fabs(t) < eps * std::fabs(sum.value())) break;
    }
    return -kEulerGamma - std::log(x) - sum.value();
  }
  // modified Lentz evaluation of the continued fraction
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h * std::exp(-x);
}

double gamma_incomplete(double a, double b, double c) {
  if (!std::isfinite(a) || std::isnan(b) || std::isnan(c)) throw DomainError("gamma_incomplete: non-finite argument");
  if (b < 0.0 || c < b) throw DomainError("gamma_incomplete needs 0 <= b <= c");
  if (b == c) return 0.0;
  auto plain = [a](double t) { return t == 0.0 ? 0.0 : std::exp(-t) * std::pow(t, a - 1.0); };
  auto over = [&](double lo, double hi) {
    return std::isinf(hi) ? integrate_to_infinity(plain, lo) : integrate_finite(plain, lo, hi);
  };
  if (b > 0.0 || a == std::floor(a)) {
    if (b == 0.0 && a <= 0.0) throw DomainError("gamma_incomplete diverges at 0 for a <= 0");
    return over(b, c);
  }
  if (a > 1.0) {
    const double split = std::min(c, 1.0);
    const double head = integrate_endpoint(plain, 0.0, split);
    return c > 1.0 ? head + over(1.0, c) : head;
  }
  if (a <= 0.0) throw DomainError("gamma_incomplete diverges at 0 for a <= 0");
  // 0 < a < 1 from 0: u = t^a removes the t^{a-1} singularity on [0, 1]
  const double split = std::min(c, 1.0);
  const double inv = 1.0 / a;
  const double head = integrate_finite([inv](double u) { return std::exp(-std::pow(u, inv)); }, 0.0,
                                       std::pow(split, a)) / a;
  return c > 1.0 ? head + over(1.0, c) : head;
}

double ein_rect(double z) {
  if (!(z >= 0.0)) throw DomainError("box area must be >= 0");
  // sum_{k>=1} z^k / (k k!)
  double term = 1.0;
  CompensatedSum sum;
  for (int k = 1; k < 2000; ++k) {
    term *= z / k;
    const double t = term / k;
    sum.add(t);
    if (k > z && t < 1e-17 * sum.value()) break;
  }
  return sum.value();
}

namespace {

// int_0^{sqrt(2z)} sqrt(pi/2) e^{u^2/2 - shift} erf(u/sqrt 2) du
double tri_box(double z, double shift) {
  if (!(z >= 0.0)) throw DomainError("box area must be >= 0");
  if (z == 0.0) return 0.0;
  const double root_half_pi = std::sqrt(M_PI / 2.0);
  return integrate_finite(
      [&](double u) { return root_half_pi * std::exp(0.5 * u * u - shift) * std::erf(u / M_SQRT2); }, 0.0,
      std::sqrt(2.0 * z));
}

}  // namespace

double box_integral_tri(double z) { return tri_box(z, 0.0); }

double J_rect(double z) {
  if (!(z >= 0.0)) throw DomainError("J_rect needs z >= 0");
  if (z == 0.0) return 1.0;
  return -std::expm1(-z) / z;
}

double D_rect(double z) {
  if (!(z >= 0.0)) throw DomainError("D_rect needs z >= 0");
  if (z <= 50.0) return std::exp(-z) * ein_rect(z);
  // e^{-z} Ei(z) - e^{-z}(ln z + gamma), asymptotic series for e^{-z} Ei(z)
  CompensatedSum s;
  double term = 1.0 / z;
  for (int k = 1; k < 200; ++k) {
    s.add(term);
    const double next = term * k / z;
    if (next >= term || next < 1e-18 * s.value()) break;
    term = next;
  }
  return s.value() - std::exp(-z) * (std::log(z) + kEulerGamma);
}

double J_tri(double z) {
  if (!(z >= 0.0)) throw DomainError("J_tri needs z >= 0");
  if (z < 1e-3) {
    // sum_k (-z)^k / (k! (2k+1))
    return 1.0 - z / 3.0 + z * z / 10.0 - z * z * z / 42.0 + z * z * z * z / 216.0;
  }
  const double r = std::sqrt(z);
  return std::sqrt(M_PI) * std::erf(r) / (2.0 * r);
}

double D_tri(double z) {
  if (!(z >= 0.0)) throw DomainError("D_tri needs z >= 0");
  return tri_box(z, z);
}

double J(Geometry g, double z) { return g == Geometry::Rect ? J_rect(z) : J_tri(z); }
double D(Geometry g, double z) { return g == Geometry::Rect ? D_rect(z) : D_tri(z); }

std::string_view to_string(Geometry g) { return g == Geometry::Rect ? "rect" : "tri"; }

Geometry parse_geometry(std::string_view name) {
  if (name == "rect" || name == "rectangular") return Geometry::Rect;
  if (name == "tri" || name == "triangular") return Geometry::Tri;
  throw DomainError("unknown geometry '" + std::string(name) + "'");
}

}  // namespace stoprule::poisson
