#pragma once

#include <magnus/rational.hpp>

#include <vector>

namespace magnus {

// Bernoulli numbers B_j with B_1 = -1/2, via the standard recursion
// B_j = -sum_{k<j} C(j,k) B_k / (j+1-k).
inline Rat bernoulli(unsigned j) {
  static std::vector<Rat> cache{Rat(1)};
  while (cache.size() <= j) {
    unsigned n = static_cast<unsigned>(cache.size());
    Rat s = 0;
    for (unsigned k = 0; k < n; ++k)
      s += Rat(binomial(n, k)) * cache[k] / Rat(n + 1 - k);
    cache.push_back(-s);
  }
  return cache[j];
}

// beta_j = B_j / j!, the Taylor coefficients of x/(e^x - 1).
inline Rat beta_coeff(unsigned j) { return bernoulli(j) / Rat(factorial(j)); }

}  // namespace magnus
