#pragma once

#include <cmath>
#include <stdexcept>

namespace magnus {

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F &f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol,
                            int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  // the relative floor stops refinement once the Richardson difference is
  // machine noise for the local magnitude (sharp-peak tails hit this long
  // before the absolute tolerance can)
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol ||
      std::abs(delta) <= 1e-15 * (std::abs(left) + std::abs(right)))
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol,
                              depth - 1);
}

}  // namespace detail

// Adaptive Simpson with Richardson correction; absolute tolerance.
template <typename F>
double integrate(const F &f, double a, double b, double tol = 1e-10,
                 int max_depth = 40) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
    throw std::domain_error("integrate: non-finite integrand sample");
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol,
                                      max_depth);
}

// Splits at interior points where the integrand needs refinement anchors
// (removable singularities, symmetry axes).
template <typename F>
double integrate_split(const F &f, double a, double mid, double b,
                       double tol = 1e-10) {
  return integrate(f, a, mid, 0.5 * tol) + integrate(f, mid, b, 0.5 * tol);
}

// Composite Simpson with a fixed panel count.  For integrands whose values
// carry roundoff noise an adaptive rule would chase; the noise averages out
// in the sum instead.
template <typename F>
double integrate_fixed(const F &f, double a, double b, int panels) {
  double h = (b - a) / (2 * panels);
  double s = f(a) + f(b);
  for (int i = 1; i < 2 * panels; ++i)
    s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3;
}

}  // namespace magnus
