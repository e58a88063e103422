#pragma once

#include <magnus/mat2.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace magnus {

// Closed disk in the plane; centers carry sign (chiral) or are reflected
// into the upper half plane (principal).
struct Disk {
  double center_re = 0, center_im = 0, radius = 0;
};

inline Disk chiral_disk(const Mat2 &m) {
  QuatSplit q = quat_split(m);
  return {q.at, q.bt, std::hypot(q.ct, q.dt)};
}

inline int chirality(const Mat2 &m) {
  QuatSplit q = quat_split(m);
  return q.bt >= 0 ? 1 : -1;
}

inline Disk principal_disk(const Mat2 &m) {
  Disk d = chiral_disk(m);
  d.center_im = std::abs(d.center_im);
  return d;
}

// AC(x): arccos(x)/sqrt(1-x^2) below 1, arcosh(x)/sqrt(x^2-1) above,
// analytic across 1.  Defined for x > -1.
inline double ac(double x) {
  if (x <= -1) throw std::domain_error("ac: argument must exceed -1");
  double u = x - 1;
  if (std::abs(u) < 1e-4)
    return 1 +
           u * (-1.0 / 3 +
                u * (2.0 / 15 +
                     u * (-2.0 / 35 +
                          u * (8.0 / 315 + u * (-8.0 / 693 + u * 16.0 / 3003)))));
  if (x < 1) return std::acos(x) / std::sqrt((1 - x) * (1 + x));
  return std::acosh(x) / std::sqrt((x - 1) * (x + 1));
}

// AS = sqrt((AC^2-1)/(1-x^2)); the ratio is positive on both sides of 1.
inline double as_fn(double x) {
  if (x <= -1) throw std::domain_error("as_fn: argument must exceed -1");
  double u = x - 1;
  if (std::abs(u) < 1e-4) {
    double s3 = std::sqrt(3.0);
    return s3 * (1.0 / 3 +
                 u * (-8.0 / 45 +
                      u * (436.0 / 4725 +
                           u * (-3352.0 / 70875 +
                                u * (394118.0 / 16372125 +
                                     u * (-17705104.0 / 1451165625))))));
  }
  double a = ac(x);
  return std::sqrt((a * a - 1) / ((1 - x) * (1 + x)));
}

// AT = (AC-1)/AS, vanishing at 1.
inline double at_fn(double x) {
  if (x <= -1) throw std::domain_error("at_fn: argument must exceed -1");
  double u = x - 1;
  if (std::abs(u) < 1e-4) {
    double s3 = std::sqrt(3.0);
    return s3 * u *
           (-1.0 / 3 +
            u * (-2.0 / 45 +
                 u * (2.0 / 175 +
                      u * (-248.0 / 70875 + u * (19526.0 / 16372125)))));
  }
  return (ac(x) - 1) / as_fn(x);
}

// The principal matrix logarithm exists iff the spectrum misses (-inf, 0]:
// for real 2x2 that is det > 0 together with tr/(2 sqrt det) > -1.
inline Mat2 log2x2(const Mat2 &m) {
  double det = m.det();
  if (det <= 0)
    throw std::domain_error("log2x2: determinant must be positive");
  double s = std::sqrt(det);
  double y = m.tr() / (2 * s);
  if (y <= -1)
    throw std::domain_error(
        "log2x2: spectrum meets the negative half-axis (trace condition)");
  double half_tr = m.tr() / 2;
  Mat2 r = std::log(s) * Mat2::identity() +
           (ac(y) / s) * (m - half_tr * Mat2::identity());
  return r;
}

// Norm and signed co-norm of log A straight from the disk data of A.
// Requires the disk D((a,b), r) to avoid the cut (-inf, 0].
struct LogNorms {
  double norm;
  double conorm;
};

inline LogNorms log_norms_from_disk(double a, double b, double r) {
  double s2 = a * a + b * b - r * r;
  bool avoids = s2 > 0 && (a >= 0 || std::abs(b) > r);
  if (!avoids)
    throw std::domain_error(
        "log_norms_from_disk: disk meets the negative half-axis");
  double s = std::sqrt(s2);
  double acv = ac(a / s);
  double f_ca = std::hypot(std::log(s), b * acv / s);
  double f_rd = r * acv / s;
  return {f_ca + f_rd, f_ca - f_rd};
}

// Rotating-frame development: solves dA/dtheta A^{-1} = exp(b theta I) a K
// exp(-b theta I) with A(0) = Id, evaluated at theta = 1 for a = p, b = w.
inline Mat2 dev_w(double p, double w) {
  double x = (p - w) * (p + w);
  Mat2 core = ccc(x) * Mat2::identity() + sss(x) * (-w * mat_I() + p * mat_K());
  return rotation(w) * core;
}

// Straight-line elliptic development.
inline Mat2 dev_e(double p, double w) {
  Mat2 core = Mat2::identity() - w * mat_I() + w * mat_K();
  return rotation(p) * core;
}

inline Disk maximal_disk(double p, double t) {
  if (!(p > 0 && p < kPi))
    throw std::domain_error("maximal_disk: need p in (0, pi)");
  if (!(t >= -kPi / 2 - 1e-12 && t <= kPi / 2 + 1e-12))
    throw std::domain_error("maximal_disk: need t in [-pi/2, pi/2]");
  return chiral_disk(dev_w(p, p * std::sin(t)));
}

namespace detail {

// Objective along the disk boundary: z(phi) = c + r e^{i phi},
// f(phi) = ln^2 |z| + theta(phi)^2 with theta a fixed continuous branch.
// Returns {ln rho, theta} near a reference sample (theta continued from it).
struct BoundaryEval {
  double lnrho;
  double theta;
};

inline BoundaryEval boundary_eval(const Disk &d, double phi, double theta_ref,
                                  double phi_ref) {
  std::complex<double> c(d.center_re, d.center_im);
  std::complex<double> z = c + d.radius * std::exp(std::complex<double>(0, phi));
  std::complex<double> zr =
      c + d.radius * std::exp(std::complex<double>(0, phi_ref));
  // Within one coarse grid cell the argument moves by less than pi,
  // so the principal difference continues the branch.
  double theta = theta_ref + std::arg(z / zr);
  return {std::log(std::abs(z)), theta};
}

// d/dphi of ln^2 rho + (theta + shift)^2.
inline double boundary_deriv(const Disk &d, double phi, double theta_ref,
                             double phi_ref, double shift) {
  std::complex<double> c(d.center_re, d.center_im);
  std::complex<double> e = std::exp(std::complex<double>(0, phi));
  std::complex<double> z = c + d.radius * e;
  std::complex<double> v = std::complex<double>(0, 1) * (d.radius * e) / z;
  BoundaryEval b = boundary_eval(d, phi, theta_ref, phi_ref);
  return 2 * b.lnrho * v.real() + 2 * (b.theta + shift) * v.imag();
}

struct MPCandidate {
  double value = -1;
  double log_re = 0;  // real part of log at the maximizer
  double log_im = 0;  // lifted imaginary part at the maximizer
};

}  // namespace detail

// Magnus exponent MP(A): the sup of |log z| over the chiral disk, taken
// along the branch of log that is continuous on the disk and minimal among
// the 2 pi k lifts.  Valid while the value stays below 2 pi.
struct MPResult {
  double value;
  // Direction of log at the maximizer; p e^{it} = log z*.
  double t;
  bool point;
};

inline MPResult mp_search_disk(const Disk &d) {
  double dist0 = std::hypot(d.center_re, d.center_im);
  if (dist0 <= d.radius * (1 + 1e-14))
    throw std::domain_error("magnus_exponent: disk contains 0");
  if (d.radius < 1e-12 * std::max(1.0, dist0)) {
    double lnrho = std::log(dist0);
    double theta = std::atan2(d.center_im, d.center_re);
    double v = std::hypot(lnrho, theta);
    if (v >= 2 * kPi)
      throw std::domain_error("magnus_exponent: exceeds the covered range");
    return {v, std::atan2(theta, lnrho), true};
  }

  const int n = 4096;
  std::vector<double> lnrho(n), theta(n);
  {
    std::complex<double> c(d.center_re, d.center_im);
    double prev = 0;
    for (int j = 0; j < n; ++j) {
      double phi = 2 * kPi * j / n;
      std::complex<double> z =
          c + d.radius * std::exp(std::complex<double>(0, phi));
      lnrho[j] = std::log(std::abs(z));
      double raw = std::arg(z);
      if (j == 0) {
        theta[0] = raw;
      } else {
        double dtheta = raw - prev;
        while (dtheta > kPi) dtheta -= 2 * kPi;
        while (dtheta < -kPi) dtheta += 2 * kPi;
        theta[j] = theta[j - 1] + dtheta;
      }
      prev = raw;
    }
  }

  detail::MPCandidate best;
  bool any_valid = false;
  for (int k = -2; k <= 2; ++k) {
    double shift = 2 * kPi * k;
    detail::MPCandidate cand;
    for (int j = 0; j < n; ++j) {
      int jm = (j + n - 1) % n, jp = (j + 1) % n;
      auto f = [&](int i) {
        double th = theta[i] + shift;
        return lnrho[i] * lnrho[i] + th * th;
      };
      if (f(j) < f(jm) || f(j) < f(jp)) continue;
      // Local maximum on the grid; polish the critical point of the
      // derivative inside the bracketing cell pair.
      double phi_ref = 2 * kPi * j / n;
      double h = 2 * kPi / n;
      double lo = phi_ref - h, hi = phi_ref + h;
      double glo =
          detail::boundary_deriv(d, lo, theta[j], phi_ref, shift);
      double ghi =
          detail::boundary_deriv(d, hi, theta[j], phi_ref, shift);
      double phi_star = phi_ref;
      if (glo > 0 && ghi < 0) {
        for (int it = 0; it < 80; ++it) {
          double mid = (lo + hi) / 2;
          double gm =
              detail::boundary_deriv(d, mid, theta[j], phi_ref, shift);
          if (gm > 0)
            lo = mid;
          else
            hi = mid;
        }
        phi_star = (lo + hi) / 2;
      }
      detail::BoundaryEval b =
          detail::boundary_eval(d, phi_star, theta[j], phi_ref);
      double th = b.theta + shift;
      double val = std::hypot(b.lnrho, th);
      if (val > cand.value) {
        cand.value = val;
        cand.log_re = b.lnrho;
        cand.log_im = th;
      }
    }
    if (cand.value < 0) continue;
    if (cand.value < 2 * kPi && (!any_valid || cand.value < best.value)) {
      best = cand;
      any_valid = true;
    }
  }
  if (!any_valid)
    throw std::domain_error("magnus_exponent: exceeds the covered range");
  return {best.value, std::atan2(best.log_im, best.log_re), false};
}

inline double magnus_exponent(const Mat2 &m) {
  return mp_search_disk(chiral_disk(m)).value;
}

enum class MagnusClass {
  identity,
  quasicomplex,
  elliptic,
  parabolic,
  hyperbolic,
  loxodromic
};

inline std::string magnus_class_str(MagnusClass c) {
  switch (c) {
    case MagnusClass::identity: return "identity";
    case MagnusClass::quasicomplex: return "quasicomplex";
    case MagnusClass::elliptic: return "elliptic";
    case MagnusClass::parabolic: return "parabolic";
    case MagnusClass::hyperbolic: return "hyperbolic";
    case MagnusClass::loxodromic: return "loxodromic";
  }
  return "?";
}

// Unit-determinant trichotomy: the disk meets the unit circle at angles
// 2 arctan((r +- b)/(a+1)); it is hyperbolic-or-parabolic iff the larger
// angle does not exceed the radius.  atan2 keeps the test meaningful on
// the lifted branch where a + 1 < 0.
inline MagnusClass classify(const Mat2 &m) {
  Disk d = chiral_disk(m);
  mp_search_disk(d);  // domain gate
  if (d.radius < 1e-12) {
    if (std::abs(d.center_re - 1) < 1e-12 && std::abs(d.center_im) < 1e-12)
      return MagnusClass::identity;
    return MagnusClass::quasicomplex;
  }
  if (std::abs(m.det() - 1) > 1e-9) return MagnusClass::loxodromic;
  double phi_max =
      2 * std::atan2(d.radius + std::abs(d.center_im), d.center_re + 1);
  if (std::abs(phi_max - d.radius) <= 1e-9) return MagnusClass::parabolic;
  return phi_max < d.radius ? MagnusClass::hyperbolic : MagnusClass::elliptic;
}

// Normal form A = e^{p1 cos t} [ exp(p sin t I)(cosh(p2 cos t) Id
//   - rho sin t I) + rho F ], rho = sinh(p2 cos t)/cos t, p = p1 + p2,
// F = -sin(beta) J + cos(beta) K.
struct NormalForm {
  double p1 = 0, p2 = 0, t = 0, beta = 0;
  bool f_used = false;
};

inline Mat2 nw_build(const NormalForm &nf) {
  double c = std::cos(nf.t), s = std::sin(nf.t);
  double p = nf.p1 + nf.p2;
  double y = nf.p2 * c;
  double rho = nf.p2 * sss(y * y);      // sinh(p2 c)/c
  double ch = ccc(y * y);               // cosh(p2 c)
  Mat2 rot_part = rotation(p * s) * (ch * Mat2::identity() - rho * s * mat_I());
  Mat2 f = -std::sin(nf.beta) * mat_J() + std::cos(nf.beta) * mat_K();
  return std::exp(nf.p1 * c) * (rot_part + rho * f);
}

inline NormalForm normal_form(const Mat2 &m) {
  Disk d = chiral_disk(m);
  if (d.radius < 1e-12 && std::abs(d.center_re - 1) < 1e-12 &&
      std::abs(d.center_im) < 1e-12)
    throw std::domain_error("normal_form: identity has no direction");
  MPResult mp = mp_search_disk(d);
  NormalForm nf;
  double t = mp.t;
  if (t < 0) t += 2 * kPi;
  nf.t = t;
  if (mp.point) {
    nf.p1 = mp.value;
    nf.p2 = 0;
    nf.beta = 0;
    nf.f_used = false;
    return nf;
  }
  double p = mp.value;
  double c = std::cos(mp.t);
  double p2;
  if (std::abs(c) < 1e-12) {
    p2 = d.radius;
  } else {
    double q = 2 * d.radius * c * std::exp(-p * c);
    q = std::min(q, 1 - 1e-300);
    p2 = -std::log1p(-q) / (2 * c);
  }
  p2 = std::clamp(p2, 0.0, p);
  nf.p2 = p2;
  nf.p1 = p - p2;
  QuatSplit q = quat_split(m);
  nf.beta = std::atan2(-q.ct, q.dt);
  nf.f_used = true;
  return nf;
}

}  // namespace magnus
