#pragma once

#include <magnus/rational.hpp>
#include <magnus/ratpoly.hpp>

#include <map>
#include <vector>

namespace magnus {

// Eulerian number A(n, m): permutations of n with m descents.
// Insertion recursion A(n,m) = (m+1)A(n-1,m) + (n-m)A(n-1,m-1).
inline Int eulerian(unsigned n, unsigned m) {
  static std::vector<std::vector<Int>> rows{{}, {Int(1)}};
  while (rows.size() <= n) {
    unsigned k = static_cast<unsigned>(rows.size());
    const auto &prev = rows[k - 1];
    std::vector<Int> row(k, Int(0));
    for (unsigned j = 0; j < k; ++j) {
      Int v = 0;
      if (j < prev.size()) v += Int(j + 1) * prev[j];
      if (j >= 1 && j - 1 < prev.size()) v += Int(k - j) * prev[j - 1];
      row[j] = v;
    }
    rows.push_back(std::move(row));
  }
  if (n == 0 || m >= n) return 0;
  return rows[n][m];
}

// Bivariate Eulerian polynomial G_n(u,v) = (1/n!) sum_m A(n,m) u^m v^{n-1-m},
// as a map (u-degree, v-degree) -> coefficient.
inline std::map<std::pair<int, int>, Rat> eulerian_poly(unsigned n) {
  std::map<std::pair<int, int>, Rat> g;
  Rat inv_fact = Rat(1, factorial(n));
  for (unsigned m = 0; m < n; ++m)
    g[{static_cast<int>(m), static_cast<int>(n - 1 - m)}] =
        Rat(eulerian(n, m)) * inv_fact;
  return g;
}

// G_n(t-1, t) expanded as a univariate polynomial in t.
inline RatPoly eulerian_poly_t(unsigned n) {
  RatPoly r;
  Rat inv_fact = Rat(1, factorial(n));
  RatPoly t_minus_1{Rat(-1), Rat(1)};
  for (unsigned m = 0; m < n; ++m) {
    RatPoly term = rp_pow(t_minus_1, m);
    RatPoly tpow(n - m, Rat(0));
    tpow[n - 1 - m] = Rat(eulerian(n, m)) * inv_fact;
    r = rp_add(r, rp_mul(term, tpow));
  }
  return r;
}

}  // namespace magnus
