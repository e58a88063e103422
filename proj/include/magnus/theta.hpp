#pragma once

#include <magnus/eulerian.hpp>
#include <magnus/rational.hpp>

#include <vector>

namespace magnus {

// k-th Maclaurin coefficient of the majorant series for the single-step
// logarithm: sum_m A(k,m) m! (k-1-m)! / (k!)^2.  Equals the l1 mass of the
// degree-k commutator divided by k!.
inline Rat theta_coefficient(int k) {
  if (k < 1) throw std::domain_error("theta_coefficient: k < 1");
  Rat s(0);
  Int kf = factorial(k);
  for (int m = 0; m <= k - 1; ++m)
    s += Rat(eulerian(k, m) * factorial(m) * factorial(k - 1 - m), kf * kf);
  return s;
}

inline std::vector<Rat> theta_series(int kmax) {
  std::vector<Rat> v;
  for (int k = 1; k <= kmax; ++k) v.push_back(theta_coefficient(k));
  return v;
}

}  // namespace magnus
