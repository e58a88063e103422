#pragma once

#include <magnus/rational.hpp>

#include <vector>

namespace magnus {

// Dense univariate polynomial over Q, coefficient i belongs to t^i.
using RatPoly = std::vector<Rat>;

inline void rp_trim(RatPoly &p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline RatPoly rp_add(const RatPoly &a, const RatPoly &b) {
  RatPoly r(std::max(a.size(), b.size()), Rat(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  rp_trim(r);
  return r;
}

inline RatPoly rp_mul(const RatPoly &a, const RatPoly &b) {
  if (a.empty() || b.empty()) return {};
  RatPoly r(a.size() + b.size() - 1, Rat(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  rp_trim(r);
  return r;
}

inline RatPoly rp_scale(RatPoly a, const Rat &s) {
  for (auto &c : a) c *= s;
  rp_trim(a);
  return a;
}

inline RatPoly rp_pow(const RatPoly &a, unsigned e) {
  RatPoly r{Rat(1)};
  for (unsigned i = 0; i < e; ++i) r = rp_mul(r, a);
  return r;
}

inline Rat rp_eval(const RatPoly &p, const Rat &x) {
  Rat r = 0;
  for (size_t i = p.size(); i-- > 0;) r = r * x + p[i];
  return r;
}

// Exact integral over [0,1].
inline Rat rp_integrate01(const RatPoly &p) {
  Rat r = 0;
  for (size_t i = 0; i < p.size(); ++i) r += p[i] / Rat(i + 1);
  return r;
}

}  // namespace magnus
