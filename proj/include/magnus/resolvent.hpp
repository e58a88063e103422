#pragma once

#include <magnus/magnus_core.hpp>
#include <magnus/ncpoly.hpp>

#include <map>
#include <numeric>
#include <vector>

namespace magnus {

// Polynomial in an interpolation parameter with noncommutative-polynomial
// coefficients; index = power of lambda.
using LambdaPoly = std::vector<NCPolynomial>;

inline void lp_trim(LambdaPoly &p) {
  while (!p.empty() && p.back().terms().empty()) p.pop_back();
}

inline LambdaPoly lp_add(const LambdaPoly &a, const LambdaPoly &b) {
  LambdaPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  lp_trim(r);
  return r;
}

inline LambdaPoly lp_mul(const LambdaPoly &a, const LambdaPoly &b) {
  if (a.empty() || b.empty()) return {};
  LambdaPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  lp_trim(r);
  return r;
}

// Multiplies by a scalar polynomial in lambda given by rational coefficients.
inline LambdaPoly lp_mul_scalar(const LambdaPoly &a,
                                const std::vector<Rat> &s) {
  if (a.empty() || s.empty()) return {};
  LambdaPoly r(a.size() + s.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < s.size(); ++j) {
      NCPolynomial t = a[i];
      t *= s[j];
      r[i + j] += t;
    }
  lp_trim(r);
  return r;
}

inline NCPolynomial lp_eval(const LambdaPoly &p, const Rat &lambda) {
  NCPolynomial r;
  Rat pw(1);
  for (const auto &c : p) {
    NCPolynomial t = c;
    t *= pw;
    r += t;
    pw *= lambda;
  }
  return r;
}

inline NCPolynomial lp_integrate01(const LambdaPoly &p) {
  NCPolynomial r;
  for (size_t i = 0; i < p.size(); ++i) {
    NCPolynomial t = p[i];
    t *= Rat(1, i + 1);
    r += t;
  }
  return r;
}

// Interpolated permutation sum sum_sigma lambda^asc (lambda-1)^des
// X_sigma(1)...X_sigma(n) over the listed variables, expanded in powers of
// lambda.
inline LambdaPoly resolvent_on_vars(const std::vector<int> &vars) {
  int k = static_cast<int>(vars.size());
  LambdaPoly r(k);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    int des = 0;
    for (int i = 0; i + 1 < k; ++i)
      if (perm[i] > perm[i + 1]) ++des;
    int asc = k - 1 - des;
    Word w(k);
    for (int i = 0; i < k; ++i) w[i] = vars[perm[i]];
    for (int j = 0; j <= des; ++j) {
      Rat c(binomial(des, j) * ((des - j) % 2 ? -1 : 1));
      r[asc + j].add_term(w, c);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  lp_trim(r);
  return r;
}

inline LambdaPoly resolvent_poly(int k, int cap = kDefaultMuCap) {
  if (k < 1) throw std::domain_error("resolvent_poly: k < 1");
  if (k > cap)
    throw resource_error("resolvent_poly: k exceeds cap " +
                         std::to_string(cap));
  std::vector<int> vars(k);
  std::iota(vars.begin(), vars.end(), 1);
  return resolvent_on_vars(vars);
}

// Splitting recursion with the largest variable distinguished:
// R(I) = lambda R(I') X + (lambda-1) X R(I')
//      + lambda(lambda-1) sum_{I1 disjoint-union I2 = I'} R(I1) X R(I2)
// where X is the largest element of I and I' = I minus X, both parts of the
// split nonempty.  Only relative order matters, so the recursion applies to
// any variable subset.
inline LambdaPoly resolvent_recursive(const std::vector<int> &vars) {
  static std::map<std::vector<int>, LambdaPoly> cache;
  auto it = cache.find(vars);
  if (it != cache.end()) return it->second;
  LambdaPoly r;
  int n = static_cast<int>(vars.size());
  if (n == 0) throw std::domain_error("resolvent_recursive: empty");
  if (n == 1) {
    r = {NCPolynomial::variable(vars[0])};
  } else {
    std::vector<int> rest(vars.begin(), vars.end() - 1);
    NCPolynomial xn = NCPolynomial::variable(vars.back());
    LambdaPoly rr = resolvent_recursive(rest);
    LambdaPoly right;  // R(I') X
    for (const auto &c : rr) right.push_back(c * xn);
    LambdaPoly left;  // X R(I')
    for (const auto &c : rr) left.push_back(xn * c);
    std::vector<Rat> lambda{Rat(0), Rat(1)};
    std::vector<Rat> lambda_m1{Rat(-1), Rat(1)};
    r = lp_add(lp_mul_scalar(right, lambda), lp_mul_scalar(left, lambda_m1));
    std::vector<Rat> ll1{Rat(0), Rat(-1), Rat(1)};  // lambda(lambda-1)
    int m = n - 1;
    for (int mask = 1; mask + 1 < (1 << m); ++mask) {
      std::vector<int> i1, i2;
      for (int b = 0; b < m; ++b)
        (mask >> b & 1 ? i1 : i2).push_back(rest[b]);
      LambdaPoly mid = lp_mul(resolvent_recursive(i1), {xn});
      mid = lp_mul(mid, resolvent_recursive(i2));
      r = lp_add(r, lp_mul_scalar(mid, ll1));
    }
  }
  cache[vars] = r;
  return r;
}

}  // namespace magnus
