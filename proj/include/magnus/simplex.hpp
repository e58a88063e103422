#pragma once

#include <magnus/rational.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace magnus {

// Two-phase dense simplex for min c^T x, A x = b, x >= 0.  Scalar is Rat
// (exact, Bland's rule) or double (Dantzig with a Bland fallback).  Rows may
// be linearly dependent; artificials for dependent rows simply stay basic at
// level zero.
template <typename T>
struct SimplexResult {
  bool feasible = false;
  bool bounded = true;
  T objective{};
  std::vector<T> x;     // structural variables only
  std::vector<T> dual;  // one multiplier per row
  std::vector<int> basis;
};

template <typename T>
class SimplexSolver {
 public:
  SimplexSolver(std::vector<std::vector<T>> A, std::vector<T> b,
                std::vector<T> c, T eps)
      : m_(A.size()), n_(c.size()), eps_(eps), cost_(std::move(c)) {
    if (b.size() != m_) throw std::invalid_argument("simplex: b size");
    rows_.assign(m_, std::vector<T>(n_ + m_ + 1, T(0)));
    basis_.resize(m_);
    flipped_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (A[i].size() != n_) throw std::invalid_argument("simplex: A shape");
      bool neg = b[i] < T(0);
      flipped_[i] = neg;
      for (std::size_t j = 0; j < n_; ++j)
        rows_[i][j] = neg ? -A[i][j] : A[i][j];
      rows_[i][n_ + i] = T(1);
      rows_[i].back() = neg ? -b[i] : b[i];
      basis_[i] = static_cast<int>(n_ + i);
    }
  }

  SimplexResult<T> solve(std::size_t max_iter = 0) {
    // Phase 1: drive artificials to zero.
    std::vector<T> phase1(n_ + m_, T(0));
    for (std::size_t j = n_; j < n_ + m_; ++j) phase1[j] = T(1);
    build_cost_row(phase1);
    SimplexResult<T> res;
    if (!iterate(n_ + m_, max_iter)) {
      res.bounded = false;
      return res;
    }
    T phase1_obj = current_objective(phase1);
    if (phase1_obj > eps_) return res;  // infeasible
    // Phase 2: original costs, artificials barred from entering.
    std::vector<T> phase2(n_ + m_, T(0));
    for (std::size_t j = 0; j < n_; ++j) phase2[j] = cost_[j];
    build_cost_row(phase2);
    if (!iterate(n_, max_iter)) {
      res.feasible = true;
      res.bounded = false;
      return res;
    }
    res.feasible = true;
    res.x.assign(n_, T(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < static_cast<int>(n_)) res.x[basis_[i]] = rows_[i].back();
    res.objective = T(0);
    for (std::size_t j = 0; j < n_; ++j) res.objective += cost_[j] * res.x[j];
    // Multipliers are for the sign-normalized rows; undo the flips.
    res.dual.resize(m_);
    for (std::size_t i = 0; i < m_; ++i)
      res.dual[i] = flipped_[i] ? cost_row_[n_ + i] : -cost_row_[n_ + i];
    res.basis = basis_;
    return res;
  }

 private:
  void build_cost_row(const std::vector<T> &c) {
    cost_row_.assign(n_ + m_ + 1, T(0));
    for (std::size_t j = 0; j < n_ + m_; ++j) cost_row_[j] = c[j];
    for (std::size_t i = 0; i < m_; ++i) {
      const T &cb = c[basis_[i]];
      if (cb == T(0)) continue;
      for (std::size_t j = 0; j <= n_ + m_; ++j)
        cost_row_[j] -= cb * rows_[i][j];
    }
  }

  T current_objective(const std::vector<T> &c) const {
    T obj(0);
    for (std::size_t i = 0; i < m_; ++i)
      if (c[basis_[i]] != T(0)) obj += c[basis_[i]] * rows_[i].back();
    return obj;
  }

  // Returns false on unboundedness.
  bool iterate(std::size_t allowed_cols, std::size_t max_iter) {
    std::size_t iters = 0;
    bool bland = eps_ == T(0);
    for (;;) {
      if (max_iter && iters++ > max_iter) bland = true;  // anti-cycling
      int enter = -1;
      if (bland) {
        for (std::size_t j = 0; j < allowed_cols; ++j)
          if (cost_row_[j] < -eps_) {
            enter = static_cast<int>(j);
            break;
          }
      } else {
        T best = -eps_;
        for (std::size_t j = 0; j < allowed_cols; ++j)
          if (cost_row_[j] < best) {
            best = cost_row_[j];
            enter = static_cast<int>(j);
          }
      }
      if (enter < 0) return true;
      int leave = -1;
      T best_ratio{};
      for (std::size_t i = 0; i < m_; ++i) {
        if (rows_[i][enter] <= eps_) continue;
        T ratio = rows_[i].back() / rows_[i][enter];
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = static_cast<int>(i);
          best_ratio = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(static_cast<std::size_t>(leave), static_cast<std::size_t>(enter));
    }
  }

  void pivot(std::size_t r, std::size_t j) {
    T inv = T(1) / rows_[r][j];
    for (auto &v : rows_[r]) v *= inv;
    rows_[r][j] = T(1);
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      T f = rows_[i][j];
      if (f == T(0)) continue;
      for (std::size_t col = 0; col <= n_ + m_; ++col)
        rows_[i][col] -= f * rows_[r][col];
      rows_[i][j] = T(0);
    }
    T f = cost_row_[j];
    if (f != T(0)) {
      for (std::size_t col = 0; col <= n_ + m_; ++col)
        cost_row_[col] -= f * rows_[r][col];
      cost_row_[j] = T(0);
    }
    basis_[r] = static_cast<int>(j);
  }

  std::size_t m_, n_;
  T eps_;
  std::vector<T> cost_;
  std::vector<std::vector<T>> rows_;
  std::vector<T> cost_row_;
  std::vector<int> basis_;
  std::vector<bool> flipped_;
};

inline SimplexResult<Rat> simplex_exact(const std::vector<std::vector<Rat>> &A,
                                        const std::vector<Rat> &b,
                                        const std::vector<Rat> &c) {
  SimplexSolver<Rat> s(A, b, c, Rat(0));
  return s.solve();
}

inline SimplexResult<double> simplex_float(
    const std::vector<std::vector<double>> &A, const std::vector<double> &b,
    const std::vector<double> &c, double eps = 1e-9) {
  SimplexSolver<double> s(A, b, c, eps);
  return s.solve(50000);
}

}  // namespace magnus
