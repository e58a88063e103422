#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace magnus {

using OdeState = std::vector<double>;
using OdeRhs = std::function<void(double, const OdeState &, OdeState &)>;

struct IVPSystem {
  std::string name;
  int dimension = 1;
  OdeRhs rhs;
  OdeState initial;
  double blowup_threshold = 1e8;
};

struct BlowupResult {
  double radius = 0;
  double est_error = 0;  // from tolerance halving
};

namespace detail {

inline double state_inf_norm(const OdeState &y) {
  double m = 0;
  for (double v : y) m = std::max(m, std::abs(v));
  return m;
}

// One Cash-Karp RK45 step; returns embedded error estimate (inf norm).
inline double rk45_step(const OdeRhs &rhs, double x, const OdeState &y,
                        double h, OdeState &out) {
  static const double a2 = 1.0 / 5, a3 = 3.0 / 10, a4 = 3.0 / 5, a5 = 1.0,
                      a6 = 7.0 / 8;
  static const double b21 = 1.0 / 5;
  static const double b31 = 3.0 / 40, b32 = 9.0 / 40;
  static const double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
  static const double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27,
                      b54 = 35.0 / 27;
  static const double b61 = 1631.0 / 55296, b62 = 175.0 / 512,
                      b63 = 575.0 / 13824, b64 = 44275.0 / 110592,
                      b65 = 253.0 / 4096;
  static const double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594,
                      c6 = 512.0 / 1771;
  static const double d1 = c1 - 2825.0 / 27648, d3 = c3 - 18575.0 / 48384,
                      d4 = c4 - 13525.0 / 55296, d5 = -277.0 / 14336,
                      d6 = c6 - 1.0 / 4;
  std::size_t n = y.size();
  OdeState k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), tmp(n);
  rhs(x, y, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * b21 * k1[i];
  rhs(x + a2 * h, tmp, k2);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + h * (b31 * k1[i] + b32 * k2[i]);
  rhs(x + a3 * h, tmp, k3);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + h * (b41 * k1[i] + b42 * k2[i] + b43 * k3[i]);
  rhs(x + a4 * h, tmp, k4);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + h * (b51 * k1[i] + b52 * k2[i] + b53 * k3[i] + b54 * k4[i]);
  rhs(x + a5 * h, tmp, k5);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + h * (b61 * k1[i] + b62 * k2[i] + b63 * k3[i] +
                         b64 * k4[i] + b65 * k5[i]);
  rhs(x + a6 * h, tmp, k6);
  out.resize(n);
  double err = 0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = y[i] + h * (c1 * k1[i] + c3 * k3[i] + c4 * k4[i] + c6 * k6[i]);
    double e = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                    d6 * k6[i]);
    err = std::max(err, std::abs(e));
  }
  return err;
}

inline bool state_ok(const OdeState &y, double threshold) {
  for (double v : y)
    if (!std::isfinite(v) || std::abs(v) > threshold) return false;
  return true;
}

// Integrates until the solution can no longer be continued below the
// threshold; returns the escape coordinate.  Blow-up shows up either as the
// state exceeding the threshold (bisected to the crossing) or as step-size
// collapse at a finite-time singularity of the RHS.
inline double escape_coordinate(const IVPSystem &sys, double tol) {
  double x = 0, h = 1e-4;
  OdeState y = sys.initial, ynew;
  const double hmin = 1e-14;
  for (;;) {
    if (h < hmin) return x;  // stalled against a singularity
    bool ok = true;
    double err = 0;
    try {
      err = rk45_step(sys.rhs, x, y, h, ynew);
      ok = state_ok(ynew, sys.blowup_threshold) && std::isfinite(err);
    } catch (const std::domain_error &) {
      ok = false;
    }
    if (!ok) {
      // Bisect the step until the endpoint stays below threshold.
      double lo = 0, hi = h;
      for (int it = 0; it < 200 && (hi - lo) > hmin; ++it) {
        double mid = 0.5 * (lo + hi);
        bool mid_ok = true;
        OdeState ymid;
        try {
          rk45_step(sys.rhs, x, y, mid, ymid);
          mid_ok = state_ok(ymid, sys.blowup_threshold);
        } catch (const std::domain_error &) {
          mid_ok = false;
        }
        if (mid_ok)
          lo = mid;
        else
          hi = mid;
      }
      return x + lo;
    }
    if (err > tol) {
      h *= std::max(0.1, 0.9 * std::pow(tol / err, 0.25));
      continue;
    }
    x += h;
    y = ynew;
    if (err > 0) h *= std::min(5.0, 0.9 * std::pow(tol / err, 0.2));
  }
}

}  // namespace detail

inline BlowupResult blowup_radius(const IVPSystem &sys, double tol = 1e-12) {
  BlowupResult r;
  r.radius = detail::escape_coordinate(sys, tol);
  double refined = detail::escape_coordinate(sys, tol * 0.5);
  r.est_error = std::abs(refined - r.radius);
  r.radius = refined;
  return r;
}

}  // namespace magnus
