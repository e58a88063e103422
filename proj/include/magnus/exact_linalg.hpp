#pragma once

#include <magnus/rational.hpp>

#include <optional>
#include <vector>

namespace magnus {

using RatMatrix = std::vector<std::vector<Rat>>;

inline int rank_exact(RatMatrix m) {
  if (m.empty()) return 0;
  std::size_t rows = m.size(), cols = m[0].size();
  int rank = 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    Rat inv = Rat(1) / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
    ++rank;
  }
  return rank;
}

// Solves the square system M x = rhs; empty optional when singular.
inline std::optional<std::vector<Rat>> solve_exact(RatMatrix m,
                                                   std::vector<Rat> rhs) {
  std::size_t n = m.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[c]);
    std::swap(rhs[piv], rhs[c]);
    Rat inv = Rat(1) / m[c][c];
    for (std::size_t j = c; j < n; ++j) m[c][j] *= inv;
    rhs[c] *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
      rhs[i] -= f * rhs[c];
    }
  }
  return rhs;
}

}  // namespace magnus
