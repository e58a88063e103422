#pragma once

#include <array>
#include <cmath>
#include <string>

namespace magnus {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Real 2x2 matrix, row-major [[a, b], [c, d]].
struct Mat2 {
  double a = 0, b = 0, c = 0, d = 0;

  static Mat2 identity() { return {1, 0, 0, 1}; }
  static Mat2 zero() { return {0, 0, 0, 0}; }

  double tr() const { return a + d; }
  double det() const { return a * d - b * c; }
  Mat2 transpose() const { return {a, c, b, d}; }
};

inline Mat2 operator+(const Mat2 &x, const Mat2 &y) {
  return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
}

inline Mat2 operator-(const Mat2 &x, const Mat2 &y) {
  return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
}

inline Mat2 operator-(const Mat2 &x) { return {-x.a, -x.b, -x.c, -x.d}; }

inline Mat2 operator*(double s, const Mat2 &x) {
  return {s * x.a, s * x.b, s * x.c, s * x.d};
}

inline Mat2 operator*(const Mat2 &x, double s) { return s * x; }

inline Mat2 operator*(const Mat2 &x, const Mat2 &y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
          x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline Mat2 mat_inverse(const Mat2 &x) {
  double det = x.det();
  return {x.d / det, -x.b / det, -x.c / det, x.a / det};
}

// Entrywise max-abs distance; used for residual checks.
inline double mat_dist(const Mat2 &x, const Mat2 &y) {
  return std::max(std::max(std::abs(x.a - y.a), std::abs(x.b - y.b)),
                  std::max(std::abs(x.c - y.c), std::abs(x.d - y.d)));
}

// Basis of the quaternion-like split: every A decomposes uniquely as
// at*Id + bt*Itilde + ct*Jtilde + dt*Ktilde with
// Itilde^2 = -Id, Jtilde^2 = Ktilde^2 = Id.
inline Mat2 mat_I() { return {0, -1, 1, 0}; }
inline Mat2 mat_J() { return {1, 0, 0, -1}; }
inline Mat2 mat_K() { return {0, 1, 1, 0}; }

// Components of the split.  (at, bt) is the rotation (complex) part,
// (ct, dt) the reflection part.
struct QuatSplit {
  double at, bt, ct, dt;
};

inline QuatSplit quat_split(const Mat2 &x) {
  return {(x.a + x.d) / 2, (x.c - x.b) / 2, (x.a - x.d) / 2, (x.b + x.c) / 2};
}

inline Mat2 quat_join(const QuatSplit &q) {
  return {q.at + q.ct, q.dt - q.bt, q.dt + q.bt, q.at - q.ct};
}

inline Mat2 rotation(double alpha) {
  double c = std::cos(alpha), s = std::sin(alpha);
  return {c, -s, s, c};
}

// Operator (spectral) norm: |rotation part| + |reflection part|.
inline double norm2(const Mat2 &x) {
  return (std::hypot(x.a + x.d, x.c - x.b) +
          std::hypot(x.a - x.d, x.b + x.c)) /
         2;
}

// Signed smallest singular value; norm2 * conorm_signed = det.
inline double conorm_signed(const Mat2 &x) {
  return (std::hypot(x.a + x.d, x.c - x.b) -
          std::hypot(x.a - x.d, x.b + x.c)) /
         2;
}

// CCC(x) = cosh(sqrt x) continued through x < 0 as cos(sqrt -x);
// SSS(x) = sinh(sqrt x)/sqrt x continued as sin(sqrt -x)/sqrt(-x).
// Both are entire; the series branch avoids the 0/0 at the seam.
inline double ccc(double x) {
  if (std::abs(x) < 1e-4)
    return 1 + x * (1.0 / 2 + x * (1.0 / 24 + x * (1.0 / 720 + x / 40320)));
  return x > 0 ? std::cosh(std::sqrt(x)) : std::cos(std::sqrt(-x));
}

inline double sss(double x) {
  if (std::abs(x) < 1e-4)
    return 1 + x * (1.0 / 6 + x * (1.0 / 120 + x * (1.0 / 5040 + x / 362880)));
  if (x > 0) {
    double r = std::sqrt(x);
    return std::sinh(r) / r;
  }
  double r = std::sqrt(-x);
  return std::sin(r) / r;
}

// Closed-form exponential: split off the trace, square the traceless part
// to a scalar x = ct^2 + dt^2 - bt^2, then exp(A) = e^at (CCC(x) Id + SSS(x) T).
inline Mat2 exp2x2(const Mat2 &m) {
  QuatSplit q = quat_split(m);
  Mat2 t = quat_join({0, q.bt, q.ct, q.dt});
  double x = q.ct * q.ct + q.dt * q.dt - q.bt * q.bt;
  double e = std::exp(q.at);
  return e * (ccc(x) * Mat2::identity() + sss(x) * t);
}

inline std::string mat_str(const Mat2 &x) {
  return "[[" + std::to_string(x.a) + ", " + std::to_string(x.b) + "], [" +
         std::to_string(x.c) + ", " + std::to_string(x.d) + "]]";
}

}  // namespace magnus
