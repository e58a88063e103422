#pragma once

#include <magnus/eulerian.hpp>
#include <magnus/magnus_core.hpp>
#include <magnus/mat2.hpp>
#include <magnus/resolvent.hpp>

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace magnus {

// Piecewise-constant control: steps run in listed order, each pair holding
// the density and the duration.  The chronological product with the first
// step leftmost is rexp; lexp stacks later steps on the left.
template <class C, class Time = double>
struct StepMeasure {
  std::vector<std::pair<C, Time>> steps;
};

using ExactMeasure = StepMeasure<NCPolynomial, Rat>;
using MatMeasure = StepMeasure<Mat2, double>;

inline constexpr int kExactTermCap = 8;
inline constexpr int kExactStepCap = 4;
inline constexpr int kMatMagnusCap = 12;
inline constexpr int kMatResolventCap = 24;

template <class C, class Time>
StepMeasure<C, Time> concat(StepMeasure<C, Time> a,
                            const StepMeasure<C, Time> &b) {
  a.steps.insert(a.steps.end(), b.steps.begin(), b.steps.end());
  return a;
}

template <class C, class Time>
StepMeasure<C, Time> reversed(StepMeasure<C, Time> phi) {
  std::reverse(phi.steps.begin(), phi.steps.end());
  return phi;
}

inline double total_mass(const MatMeasure &phi) {
  double s = 0;
  for (const auto &[M, T] : phi.steps) s += T * norm2(M);
  return s;
}

inline Mat2 rexp(const MatMeasure &phi) {
  Mat2 A = Mat2::identity();
  for (const auto &[M, T] : phi.steps) A = A * exp2x2(T * M);
  return A;
}

inline Mat2 lexp(const MatMeasure &phi) {
  Mat2 A = Mat2::identity();
  for (const auto &[M, T] : phi.steps) A = exp2x2(T * M) * A;
  return A;
}

// Chronological product in the free algebra, truncated at total degree N.
inline NCPolynomial rexp_trunc(const ExactMeasure &phi, int N) {
  NCPolynomial A(Rat(1), N);
  for (const auto &[M, T] : phi.steps) A = A * truncated_exp(M * T, N);
  return A;
}

namespace detail {

template <class F>
void for_each_weak_composition(int k, int m, F &&fn) {
  std::vector<int> j(m, 0);
  auto rec = [&](auto &&self, int idx, int rem) -> void {
    if (idx == m - 1) {
      j[idx] = rem;
      fn(j);
      return;
    }
    for (int v = 0; v <= rem; ++v) {
      j[idx] = v;
      self(self, idx + 1, rem - v);
    }
  };
  if (m > 0) rec(rec, 0, k);
}

inline void check_exact_caps(const ExactMeasure &phi, int k,
                             const char *where) {
  if (k < 1) throw std::domain_error(std::string(where) + ": k must be >= 1");
  if (k > kExactTermCap)
    throw resource_error(std::string(where) + ": k exceeds cap " +
                         std::to_string(kExactTermCap));
  if (phi.steps.empty())
    throw std::domain_error(std::string(where) + ": empty measure");
  if (static_cast<int>(phi.steps.size()) > kExactStepCap)
    throw resource_error(std::string(where) + ": step count exceeds cap " +
                         std::to_string(kExactStepCap));
}

inline Rat rat_pow(Rat base, int e) {
  Rat r(1);
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Sums coeff(j) mu_k / R^lambda_k over argument lists that repeat step i
// exactly j_i times in chronological order; the simplex volume of such a
// slot assignment is prod T_i^{j_i} / j_i!.
template <class TermFn>
NCPolynomial time_ordered_sum(const ExactMeasure &phi, int k, TermFn &&term) {
  int m = static_cast<int>(phi.steps.size());
  NCPolynomial r;
  for_each_weak_composition(k, m, [&](const std::vector<int> &j) {
    Rat coeff(1);
    std::vector<NCPolynomial> args;
    for (int i = 0; i < m; ++i) {
      if (j[i] == 0) continue;
      coeff *= rat_pow(phi.steps[i].second, j[i]) * Rat(1, factorial(j[i]));
      for (int c = 0; c < j[i]; ++c) args.push_back(phi.steps[i].first);
    }
    if (args.empty()) return;
    r += term(args) * coeff;
  });
  return r;
}

}  // namespace detail

// Interpolated permutation sum over an argument list: the analogue of
// resolvent_on_vars with polynomial slots and a fixed rational lambda.
inline NCPolynomial resolvent_on_args(const std::vector<NCPolynomial> &args,
                                      const Rat &lambda) {
  int k = static_cast<int>(args.size());
  if (k == 0) throw std::domain_error("resolvent_on_args: empty arguments");
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  NCPolynomial r;
  do {
    int des = 0;
    for (int i = 0; i + 1 < k; ++i)
      if (perm[i] > perm[i + 1]) ++des;
    int asc = k - 1 - des;
    Rat c = detail::rat_pow(lambda, asc) * detail::rat_pow(lambda - 1, des);
    if (c != 0) {
      NCPolynomial term(c);
      for (int i = 0; i < k; ++i) term = term * args[perm[i]];
      r += term;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return r;
}

// k-th right Magnus term of the measure, exactly in the free algebra.
inline NCPolynomial magnus_term(const ExactMeasure &phi, int k) {
  detail::check_exact_caps(phi, k, "magnus_term");
  return detail::time_ordered_sum(
      phi, k, [](const std::vector<NCPolynomial> &a) {
        return magnus_commutator_on(a);
      });
}

// k-th interpolated term at a fixed rational lambda, exactly.
inline NCPolynomial resolvent_term(const ExactMeasure &phi, int k,
                                   const Rat &lambda) {
  detail::check_exact_caps(phi, k, "resolvent_term");
  return detail::time_ordered_sum(
      phi, k, [&](const std::vector<NCPolynomial> &a) {
        return resolvent_on_args(a, lambda);
      });
}

namespace detail {

// Internal ascent polynomial of a run of r equal letters:
// sum_m E(r, m) lambda^m (lambda - 1)^(r-1-m).
inline double run_poly(int r, double lambda) {
  double s = 0;
  for (int m = 0; m <= r - 1; ++m)
    s += to_double(eulerian(r, m)) * std::pow(lambda, m) *
         std::pow(lambda - 1, r - 1 - m);
  return s;
}

// R^lambda_k of a step measure by dynamic programming over run structure.
// State (j, r): words whose current letter lies in step j with a run of
// length r; the stored matrix excludes the pending run's weight.  Closing
// a run multiplies by T_j^r/r! run_poly(r) and the boundary factor lambda
// (time ascent) or lambda - 1 (descent).  Cost O(k^2 m^2) matrix products,
// against k! for the permutation sum.
inline Mat2 resolvent_dp(const MatMeasure &phi, int k, double lambda) {
  int m = static_cast<int>(phi.steps.size());
  std::vector<double> fact(k + 1, 1);
  for (int i = 1; i <= k; ++i) fact[i] = fact[i - 1] * i;
  std::vector<std::vector<double>> powT(m, std::vector<double>(k + 1, 1));
  for (int i = 0; i < m; ++i)
    for (int r = 1; r <= k; ++r)
      powT[i][r] = powT[i][r - 1] * phi.steps[i].second;
  auto run_weight = [&](int i, int r) {
    return powT[i][r] / fact[r] * run_poly(r, lambda);
  };

  // G[j][r], r = 1..len, padded with a flag for emptiness via zero matrix:
  // zero states cost nothing extra to propagate at these sizes.
  std::vector<std::vector<Mat2>> G(m, std::vector<Mat2>(k + 1, Mat2::zero()));
  for (int j = 0; j < m; ++j) G[j][1] = phi.steps[j].first;
  for (int len = 1; len < k; ++len) {
    std::vector<std::vector<Mat2>> N(m,
                                     std::vector<Mat2>(k + 1, Mat2::zero()));
    for (int j = 0; j < m; ++j)
      for (int r = 1; r <= len; ++r) {
        const Mat2 &g = G[j][r];
        if (g.a == 0 && g.b == 0 && g.c == 0 && g.d == 0) continue;
        N[j][r + 1] = N[j][r + 1] + g * phi.steps[j].first;
        double w = run_weight(j, r);
        for (int j2 = 0; j2 < m; ++j2) {
          if (j2 == j) continue;
          double f = w * (j2 > j ? lambda : lambda - 1);
          if (f == 0) continue;
          N[j2][1] = N[j2][1] + (g * phi.steps[j2].first) * f;
        }
      }
    G.swap(N);
  }
  Mat2 R = Mat2::zero();
  for (int j = 0; j < m; ++j)
    for (int r = 1; r <= k; ++r) {
      const Mat2 &g = G[j][r];
      if (g.a == 0 && g.b == 0 && g.c == 0 && g.d == 0) continue;
      R = R + g * run_weight(j, r);
    }
  return R;
}

// Gauss-Legendre nodes and weights on [0, 1]; Newton from Chebyshev
// initial guesses on the symmetric interval.
inline const std::vector<std::pair<double, double>> &gauss_legendre01(int n) {
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::pair<double, double>> nw(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nw[i] = {0.5 * (1 - x), 1.0 / ((1 - x * x) * dp * dp)};
  }
  return cache.emplace(n, std::move(nw)).first->second;
}

inline void check_mat_caps(const MatMeasure &phi, int k, int cap,
                           const char *where) {
  if (k < 1) throw std::domain_error(std::string(where) + ": k must be >= 1");
  if (k > cap)
    throw resource_error(std::string(where) + ": k exceeds cap " +
                         std::to_string(cap));
  if (phi.steps.empty())
    throw std::domain_error(std::string(where) + ": empty measure");
}

}  // namespace detail

inline Mat2 resolvent_term(const MatMeasure &phi, int k, double lambda) {
  detail::check_mat_caps(phi, k, kMatResolventCap, "resolvent_term");
  return detail::resolvent_dp(phi, k, lambda);
}

// k-th right Magnus term: the lambda integral of R^lambda_k, which is a
// polynomial of degree k-1 in lambda, so ceil(k/2) nodes integrate exactly.
inline Mat2 magnus_term(const MatMeasure &phi, int k) {
  detail::check_mat_caps(phi, k, kMatMagnusCap, "magnus_term");
  Mat2 r = Mat2::zero();
  for (const auto &[x, w] : detail::gauss_legendre01((k + 1) / 2))
    r = r + detail::resolvent_dp(phi, k, x) * w;
  return r;
}

struct MagnusPartialSum {
  Mat2 sum;
  std::vector<double> term_norms;  // index k-1
};

inline MagnusPartialSum magnus_partial_sum(const MatMeasure &phi, int K) {
  MagnusPartialSum r{Mat2::zero(), {}};
  for (int k = 1; k <= K; ++k) {
    Mat2 t = magnus_term(phi, k);
    r.sum = r.sum + t;
    r.term_norms.push_back(norm2(t));
  }
  return r;
}

// Residual of (lambda Id + (1-lambda) A) sum_k R_k = A - Id at truncation
// K; at lambda = 1 the sum telescopes to the forward moments of rexp, at
// lambda = 0 to Id - A^{-1}.
inline double resolvent_identity_check(const MatMeasure &phi, double lambda,
                                       int K) {
  Mat2 A = rexp(phi);
  Mat2 S = Mat2::zero();
  for (int k = 1; k <= K; ++k) S = S + resolvent_term(phi, k, lambda);
  Mat2 resid = (Mat2::identity() * lambda + A * (1 - lambda)) * S -
               (A - Mat2::identity());
  return norm2(resid);
}

// Exact analogue in the free algebra, truncated at total degree N.  For
// degree-one step densities the k-th term is degree-homogeneous, so the
// truncated residual vanishes identically when the identity holds.
inline NCPolynomial resolvent_identity_residual(const ExactMeasure &phi,
                                                const Rat &lambda, int N) {
  NCPolynomial A = rexp_trunc(phi, N);
  NCPolynomial S;
  for (int k = 1; k <= N; ++k) S += resolvent_term(phi, k, lambda);
  S.set_degree_cap(N);
  NCPolynomial one(Rat(1), N);
  NCPolynomial resid =
      (one * lambda + A * (Rat(1) - lambda)) * S - (A - one);
  resid.set_degree_cap(N);
  return resid;
}

// Exact partial sum of right Magnus terms up to order N.
inline NCPolynomial magnus_partial_sum(const ExactMeasure &phi, int N) {
  NCPolynomial r;
  for (int k = 1; k <= N; ++k) r += magnus_term(phi, k);
  return r;
}

// Residual of the prefix contraction: replacing phi by the single step
// carrying its truncated logarithm leaves the logarithm of phi.psi
// unchanged through total degree N.  psi may be empty.
inline NCPolynomial contraction_identity_residual(const ExactMeasure &phi,
                                                  const ExactMeasure &psi,
                                                  int N) {
  for (const auto &[M, T] : phi.steps)
    if (M.coeff(Word{}) != 0)
      throw std::domain_error(
          "contraction_identity_residual: step has constant term");
  for (const auto &[M, T] : psi.steps)
    if (M.coeff(Word{}) != 0)
      throw std::domain_error(
          "contraction_identity_residual: step has constant term");
  ExactMeasure whole = psi.steps.empty() ? phi : concat(phi, psi);
  NCPolynomial lhs = magnus_partial_sum(whole, N);
  NCPolynomial contracted = magnus_partial_sum(phi, N);
  contracted.set_degree_cap(N);
  ExactMeasure sub;
  sub.steps.push_back({contracted, Rat(1)});
  sub.steps.insert(sub.steps.end(), psi.steps.begin(), psi.steps.end());
  NCPolynomial rhs = magnus_partial_sum(sub, N);
  NCPolynomial resid = lhs - rhs;
  resid.set_degree_cap(N);
  return resid;
}

// Evaluates a polynomial on concrete matrices; variable i maps to args[i-1].
inline Mat2 poly_eval_mat2(const NCPolynomial &p,
                           const std::vector<Mat2> &args) {
  Mat2 r = Mat2::zero();
  for (const auto &[w, c] : p.terms()) {
    Mat2 t = Mat2::identity();
    for (int v : w) {
      if (v < 1 || v > static_cast<int>(args.size()))
        throw std::domain_error("poly_eval_mat2: variable out of range");
      t = t * args[v - 1];
    }
    r = r + t * to_double(c);
  }
  return r;
}

}  // namespace magnus
