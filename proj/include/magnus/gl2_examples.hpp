#pragma once

#include <magnus/gl2.hpp>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace magnus {

// arccos(1 - w); the direct call loses half the digits below w ~ 1e-8
// because 1 - w rounds, so small w switches to the sqrt expansion.
inline double acos_1m(double w) {
  if (w >= 1e-4)
    return std::acos(1 - w);
  return std::sqrt(2 * w) *
         (1 + w * (1.0 / 12 +
                   w * (3.0 / 160 + w * (5.0 / 896 + w * 35.0 / 18432))));
}

// arcosh(1 + u) without forming 1 + u.
inline double ach_1p(double u) {
  return std::log1p(u + std::sqrt(u * (u + 2)));
}

// AC, AS, AT evaluated at x = -1 + e; for small e, 1 - x^2 is kept as
// e(2 - e) and acos itself is safe (the result is near pi, not near 0).
// Away from the pole the plain evaluators already cover every branch.
inline double ac_nm1(double e) {
  if (e <= 0) throw std::domain_error("ac_nm1: need e > 0");
  if (e >= 0.5) return ac(-1 + e);
  return std::acos(-1 + e) / std::sqrt(e * (2 - e));
}

inline double as_nm1(double e) {
  if (e >= 0.5) return as_fn(-1 + e);
  double a = ac_nm1(e);
  return std::sqrt((a * a - 1) / (e * (2 - e)));
}

inline double at_nm1(double e) {
  if (e >= 0.5) return at_fn(-1 + e);
  return (ac_nm1(e) - 1) / as_nm1(e);
}

// n-th left Magnus term of the borderline rotating measure on [0, pi]:
// zero at n = 1, then pi binom(2m, m)/4^m times I (n = 2m) or -K (n = 2m+1).
inline Mat2 moan_term(int n) {
  if (n < 1) throw std::domain_error("moan_term: need n >= 1");
  if (n == 1) return Mat2::zero();
  int m = n / 2;
  double c = 1;
  for (int i = 1; i <= m; ++i) c *= (2.0 * i - 1) / (2.0 * i);
  return n % 2 == 0 ? (c * kPi) * mat_I() : (-c * kPi) * mat_K();
}

inline double moan_term_norm(int n) { return norm2(moan_term(n)); }

// Log norm of exp(beta I) exp(alpha K): disk data (cosh a cos b,
// cosh a sin b, sinh a), determinant one.
inline double skewlox_norm(double alpha, double beta) {
  return ac(std::cosh(alpha) * std::cos(beta)) *
         (std::sinh(alpha) + std::cosh(alpha) * std::abs(std::sin(beta)));
}

// Log norm of exp(beta I)(Id + (alpha/2)(I + K)).
inline double skewelli_norm(double alpha, double beta) {
  double a = std::cos(beta) - (alpha / 2) * std::sin(beta);
  return ac(a) * (std::abs(std::sin(beta) + (alpha / 2) * std::cos(beta)) +
                  alpha / 2);
}

// The tail forms below take s = pi - p and avoid all cancelling
// differences; each equals the printed norm formula of its family.

// Borderline measure scaled by t = p/pi:
// pi (1/sqrt(1-t^2) - 1)(1 + t) = pi^{3/2} sqrt(2 - s/pi)/sqrt(s) - 2 pi + s.
inline double critical_norm_tail(double s) {
  return std::pow(kPi, 1.5) * std::sqrt(2 - s / kPi) / std::sqrt(s) -
         2 * kPi + s;
}

// AC(cos p + p sin p)(sin p - p cos p + p) at p = pi - s.
inline double parabolic_norm_tail(double s) {
  double e = 2 * std::pow(std::sin(s / 2), 2) + (kPi - s) * std::sin(s);
  double factor = std::sin(s) + (kPi - s) * (1 + std::cos(s));
  return ac_nm1(e) * factor;
}

// Development with sin t = p/pi at p = pi - s.
inline double hyperbolic_norm_tail(double s) {
  double p = kPi - s;
  double u = s * (2 * kPi - s) / kPi;         // pi - p sin t
  double c = std::sqrt(s * (2 * kPi - s)) / kPi;  // cos t
  double pc = p * c;
  double shc = std::sinh(pc) / c;
  double e = 2 * std::pow(std::sin(u / 2), 2) -
             2 * std::cos(u) * std::pow(std::sinh(pc / 2), 2) +
             (p / kPi) * shc * std::sin(u);
  double b = std::sin(u) * std::cosh(pc) + std::cos(u) * (p / kPi) * shc;
  return ac_nm1(e) * (std::abs(b) + shc);
}

// Skew-loxodromic pair alpha = p - pi + cbrt(pi^2 s), beta = pi - cbrt(pi^2 s).
inline double skewlox_path_tail(double s) {
  double m = std::cbrt(kPi * kPi * s);
  double e = 2 * std::pow(std::sin(m / 2), 2) -
             2 * std::cos(m) * std::pow(std::sinh((m - s) / 2), 2);
  double f = std::sinh(m - s) + std::cosh(m - s) * std::sin(m);
  return ac_nm1(e) * f;
}

// Constrained maximisers at fixed AC argument x = -1 + e; gap = pi - p.
struct RidgePoint {
  double gap;
  double value;
};

// cosh(alpha) = (AC + sqrt(disc))/(2(1 - x AS)),
// cos(beta) = (AC - sqrt(disc))/(2 AS), disc = AC^2 - 4x(1 - x AS)AS.
// All combinations below are rationalized for x = -1 + e, e -> 0.
inline RidgePoint skewlox_ridge(double e) {
  double x = -1 + e;
  double acv = ac_nm1(e), asv = as_nm1(e);
  double disc = acv * acv - 4 * x * (1 - x * asv) * asv;
  double sq = std::sqrt(disc);
  double ax = -x;  // = |x|, x < 0 on the tail
  double u = ((acv - 2) + (acv * acv - 4 * x * asv) / (sq + 2 * ax * asv)) /
             (2 * (1 - x * asv));
  double alpha = ach_1p(u);
  double w = ((acv - 2 * ax) +
              (acv * acv + 4 * ax * asv +
               4 * x * x * asv * asv * e * (2 - e)) /
                  (sq + 2 * x * x * asv)) /
             (acv + sq);
  double gap = acos_1m(w) - alpha;
  double value =
      acv * (std::sqrt(u * (u + 2)) + (1 + u) * std::sqrt(w * (2 - w)));
  return {gap, value};
}

// alpha = 2 AT/sqrt(1 - (x + AT)^2), cos(beta) = x + AT.
inline RidgePoint skewelli_ridge(double e) {
  double acv = ac_nm1(e), atv = at_nm1(e);
  double w = e + atv;  // 1 + cos(beta)
  double alpha = 2 * atv / std::sqrt(w * (2 - w));
  double gap = acos_1m(w) - alpha;
  double value = acv * (std::sqrt(w * (2 - w)) + (alpha / 2) * w);
  return {gap, value};
}

struct PowerFit {
  double exponent;
  double constant;
};

// Least squares for value = C * parameter^exponent on log-log axes.
inline PowerFit fit_powerlaw(const std::vector<std::array<double, 2>> &rows) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(rows.size());
  for (const auto &r : rows) {
    double lx = std::log(r[0]), ly = std::log(r[1]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double intercept = (sy - slope * sx) / n;
  return {slope, std::exp(intercept)};
}

struct AsympSeries {
  std::string label;
  std::vector<std::array<double, 2>> rows;  // (gap parameter, value)
  PowerFit fit;
};

namespace detail {

inline std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

template <class F>
AsympSeries make_series(const std::string &label, double lo, double hi, int n,
                        F &&eval) {
  AsympSeries s;
  s.label = label;
  for (double t : geometric_grid(lo, hi, n)) s.rows.push_back(eval(t));
  s.fit = fit_powerlaw(s.rows);
  return s;
}

}  // namespace detail

// Tail tables and fitted leading behaviour for the blow-up families.
inline std::vector<AsympSeries> example_asymptotics(const std::string &name) {
  using detail::make_series;
  auto direct = [](auto f) {
    return [f](double s) { return std::array<double, 2>{s, f(s)}; };
  };
  if (name == "critical")
    return {make_series("norm", 1e-9, 1e-6, 25, direct(critical_norm_tail))};
  if (name == "parabolic")
    return {make_series("norm", 1e-9, 1e-6, 25, direct(parabolic_norm_tail))};
  if (name == "hyperbolic")
    return {make_series("norm", 1e-9, 1e-6, 25, direct(hyperbolic_norm_tail))};
  if (name == "skew-loxodromic") {
    auto ridge = [](double e) {
      RidgePoint r = skewlox_ridge(e);
      return std::array<double, 2>{r.gap, r.value};
    };
    return {make_series("path", 1e-11, 1e-8, 25, direct(skewlox_path_tail)),
            make_series("ridge", 1e-10, 1e-6, 25, ridge)};
  }
  if (name == "skew-elliptic") {
    auto ridge = [](double e) {
      RidgePoint r = skewelli_ridge(e);
      return std::array<double, 2>{r.gap, r.value};
    };
    return {make_series("ridge", 1e-10, 1e-6, 25, ridge)};
  }
  throw std::domain_error("example_asymptotics: unknown name " + name);
}

}  // namespace magnus
