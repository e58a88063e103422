#pragma once

#include <magnus/eulerian.hpp>
#include <magnus/ratpoly.hpp>
#include <magnus/word.hpp>

#include <stdexcept>

namespace magnus {

// Integrand whose unit-interval integral is the coefficient of the word in
// log(exp X exp Y): (t-1)^des t^asc prod_i G_{k_i}(t-1,t), the product over
// maximal runs of equal letters, des/asc counted over adjacent letter pairs.
inline RatPoly goldberg_integrand(const Word &w) {
  if (w.empty()) throw std::domain_error("goldberg_integrand: empty word");
  int des = 0, asc = 0;
  for (size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i] > w[i + 1]) ++des;
    if (w[i] < w[i + 1]) ++asc;
  }
  RatPoly p{Rat(1)};
  RatPoly t_minus_1{Rat(-1), Rat(1)};
  RatPoly t{Rat(0), Rat(1)};
  p = rp_mul(p, rp_pow(t_minus_1, des));
  p = rp_mul(p, rp_pow(t, asc));
  size_t i = 0;
  while (i < w.size()) {
    size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    p = rp_mul(p, eulerian_poly_t(static_cast<int>(j - i)));
    i = j;
  }
  return p;
}

inline Rat goldberg_coefficient(const Word &w) {
  return rp_integrate01(goldberg_integrand(w));
}

// Word built from alternating runs, first run in letter X (=1) when
// first_is_x, otherwise Y (=2).
inline Word word_from_runs(const std::vector<int> &runs, bool first_is_x) {
  Word w;
  int letter = first_is_x ? 1 : 2;
  for (int r : runs) {
    if (r < 1) throw std::domain_error("word_from_runs: run length < 1");
    for (int i = 0; i < r; ++i) w.push_back(letter);
    letter = 3 - letter;
  }
  return w;
}

}  // namespace magnus
