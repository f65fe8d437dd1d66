#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "stoprule/errors.hpp"

namespace stoprule {

struct RootReport {
  double root = 0.0;
  double residual = 0.0;
  double lo = 0.0;  // final bracket
  double hi = 0.0;
  int iterations = 0;
};

struct RootOptions {
  double xtol = 0.0;      // absolute bracket tolerance added to 4*eps*|x|
  double ftol = 1e-12;    // accepted |f(root)|; <= 0 disables the check
  int max_iterations = 200;
};

// Brent's method (zeroin) on a sign-changing bracket [lo, hi]. Iterates until
// the bracket collapses to machine precision, then requires |f| <= ftol.
template <class F>
RootReport find_root(F&& f, double lo, double hi, const RootOptions& opt = {}) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (!(lo <= hi)) throw DomainError("find_root: empty bracket");
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (std::isnan(fa) || std::isnan(fb)) throw DomainError("find_root: NaN at bracket end");

  auto finish = [&](double x, double fx, double blo, double bhi, int it) {
    if (blo > bhi) std::swap(blo, bhi);
    RootReport r{x, fx, blo, bhi, it};
    if (opt.ftol > 0.0 && !(std::fabs(fx) <= opt.ftol)) {
      throw PrecisionError("find_root: residual " + std::to_string(fx) + " exceeds tolerance at x = " +
                           std::to_string(x));
    }
    return r;
  };

  if (fa == 0.0) return finish(a, fa, a, a, 0);
  if (fb == 0.0) return finish(b, fb, b, b, 0);
  if ((fa > 0.0) == (fb > 0.0)) {
    throw DomainError("find_root: f(lo) and f(hi) have the same sign");
  }

  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::fabs(b) + 0.5 * opt.xtol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol || fb == 0.0) return finish(b, fb, b, c, it);

    if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
      // inverse quadratic interpolation, secant when only two points
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      const double min1 = 3.0 * xm * q - std::fabs(tol * q);
      const double min2 = std::fabs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::fabs(d) > tol ? d : (xm > 0.0 ? tol : -tol);
    fb = f(b);
    if (std::isnan(fb)) throw DomainError("find_root: NaN inside bracket");
  }
  throw PrecisionError("find_root: no convergence within " + std::to_string(opt.max_iterations) + " iterations");
}

}  // namespace stoprule
