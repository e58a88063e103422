#pragma once

#include <magnus/rational.hpp>

#include <stdexcept>
#include <vector>

namespace magnus {

// Truncated power series with exact rational coefficients.  c[j] is the
// coefficient of x^j; all arithmetic truncates at the length of the result.
struct RationalSeries {
  std::vector<Rat> c;

  RationalSeries() = default;
  explicit RationalSeries(std::size_t n) : c(n, Rat(0)) {}

  std::size_t length() const { return c.size(); }
  Rat at(std::size_t j) const { return j < c.size() ? c[j] : Rat(0); }

  double eval(double x) const {
    double r = 0;
    for (std::size_t j = c.size(); j-- > 0;) r = r * x + to_double(c[j]);
    return r;
  }
};

inline RationalSeries rs_add(const RationalSeries &a, const RationalSeries &b) {
  RationalSeries r(std::max(a.length(), b.length()));
  for (std::size_t j = 0; j < r.length(); ++j) r.c[j] = a.at(j) + b.at(j);
  return r;
}

inline RationalSeries rs_sub(const RationalSeries &a, const RationalSeries &b) {
  RationalSeries r(std::max(a.length(), b.length()));
  for (std::size_t j = 0; j < r.length(); ++j) r.c[j] = a.at(j) - b.at(j);
  return r;
}

inline RationalSeries rs_mul(const RationalSeries &a, const RationalSeries &b,
                             std::size_t n) {
  RationalSeries r(n);
  for (std::size_t i = 0; i < a.length() && i < n; ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.length() && i + j < n; ++j)
      r.c[i + j] += a.c[i] * b.c[j];
  }
  return r;
}

// g(f(x)) truncated to length n; requires f(0) = 0.
inline RationalSeries rs_compose(const RationalSeries &g,
                                 const RationalSeries &f, std::size_t n) {
  if (f.at(0) != 0) throw std::invalid_argument("composition needs f(0) = 0");
  RationalSeries r(n);
  for (std::size_t j = g.length(); j-- > 0;) {
    r = rs_mul(r, f, n);
    r.c[0] += g.c[j];
  }
  return r;
}

inline RationalSeries rs_derivative(const RationalSeries &a) {
  if (a.length() <= 1) return RationalSeries(1);
  RationalSeries r(a.length() - 1);
  for (std::size_t j = 1; j < a.length(); ++j) r.c[j - 1] = Rat(j) * a.c[j];
  return r;
}

}  // namespace magnus
