#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <magnus/gl2.hpp>
#include <magnus/gl2_examples.hpp>
#include <magnus/timeordered.hpp>

#include <cmath>
#include <random>

using namespace magnus;

namespace {

std::mt19937_64 &rng() {
  static std::mt19937_64 g(20240917);
  return g;
}

double uni(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

Mat2 random_mat() {
  return {uni(-1, 1), uni(-1, 1), uni(-1, 1), uni(-1, 1)};
}

// Random measure with the requested step count, scaled to total mass.
MatMeasure random_measure(int steps, double mass) {
  MatMeasure phi;
  for (int i = 0; i < steps; ++i) phi.steps.push_back({random_mat(), uni(0.2, 1)});
  double scale = mass / total_mass(phi);
  for (auto &[M, T] : phi.steps) T *= scale;
  return phi;
}

ExactMeasure two_unit_steps() {
  ExactMeasure phi;
  phi.steps.push_back({NCPolynomial::variable(1), Rat(1)});
  phi.steps.push_back({NCPolynomial::variable(2), Rat(1)});
  return phi;
}

// Midpoint discretization of the borderline rotating density on [0, pi].
MatMeasure moan_measure(int n) {
  MatMeasure phi;
  for (int j = 0; j < n; ++j) {
    double th = (j + 0.5) * kPi / n;
    phi.steps.push_back(
        {{-std::sin(2 * th), std::cos(2 * th), std::cos(2 * th),
          std::sin(2 * th)},
         kPi / n});
  }
  return phi;
}

double mat_scale(const Mat2 &x) {
  return std::max({1.0, std::fabs(x.a), std::fabs(x.b), std::fabs(x.c),
                   std::fabs(x.d)});
}

}  // namespace

TEST_CASE("single steps and caps") {
  ExactMeasure one;
  one.steps.push_back({NCPolynomial::variable(1), Rat(1)});
  CHECK(magnus_term(one, 1) == NCPolynomial::variable(1));
  for (int k = 2; k <= 4; ++k) CHECK(magnus_term(one, k).is_zero());

  MatMeasure m;
  Mat2 X = random_mat();
  m.steps.push_back({X, 0.7});
  CHECK(mat_dist(magnus_term(m, 1), 0.7 * X) < 1e-14);
  for (int k = 2; k <= 5; ++k)
    CHECK(norm2(magnus_term(m, k)) < 1e-13);
  CHECK(mat_dist(rexp(m), exp2x2(0.7 * X)) < 1e-13);

  CHECK_THROWS_AS(magnus_term(one, 0), std::domain_error);
  CHECK_THROWS_AS(magnus_term(one, kExactTermCap + 1), resource_error);
  CHECK_THROWS_AS(magnus_term(m, kMatMagnusCap + 1), resource_error);
  CHECK_THROWS_AS(resolvent_term(m, kMatResolventCap + 1, 0.5),
                  resource_error);
  ExactMeasure five;
  for (int i = 1; i <= 5; ++i)
    five.steps.push_back({NCPolynomial::variable(i), Rat(1)});
  CHECK_THROWS_AS(magnus_term(five, 2), resource_error);
  CHECK_THROWS_AS(magnus_term(MatMeasure{}, 1), std::domain_error);
}

TEST_CASE("two unit steps reproduce the discrete composition terms") {
  ExactMeasure phi = two_unit_steps();
  for (int k = 1; k <= 6; ++k) CHECK(magnus_term(phi, k) == bch_term(k));
}

TEST_CASE("interpolated two-step terms match the hand expansion") {
  ExactMeasure phi = two_unit_steps();
  auto X = NCPolynomial::variable(1);
  auto Y = NCPolynomial::variable(2);
  for (Rat lam : {Rat(0), Rat(1), Rat(1, 2), Rat(1, 3)}) {
    NCPolynomial expect = lam * (X * Y) + (lam - 1) * (Y * X) +
                          (2 * lam - 1) * Rat(1, 2) * (X * X + Y * Y);
    CHECK(resolvent_term(phi, 2, lam) == expect);
  }

  // Endpoints: lambda = 1 gives the forward chronological moments, lambda
  // = 0 the signed reversed ones.
  NCPolynomial A = rexp_trunc(phi, 4);
  NCPolynomial B = rexp_trunc(reversed(phi), 4);
  for (int k = 1; k <= 4; ++k) {
    CHECK(resolvent_term(phi, k, Rat(1)) == A.homogeneous_part(k));
    CHECK(resolvent_term(phi, k, Rat(0)) ==
          B.homogeneous_part(k) * Rat(k % 2 ? 1 : -1));
  }
}

TEST_CASE("matrix terms cross-validate the free-algebra route") {
  // Same measure in both carriers: exact terms evaluated on the matrices
  // must agree with the run-structure programming at every order.
  std::vector<Rat> durs = {Rat(1, 2), Rat(1, 3), Rat(3, 4)};
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<Mat2> mats = {random_mat(), random_mat(), random_mat()};
    ExactMeasure ex;
    MatMeasure mm;
    for (int i = 0; i < 3; ++i) {
      ex.steps.push_back({NCPolynomial::variable(i + 1), durs[i]});
      mm.steps.push_back({mats[i], to_double(durs[i])});
    }
    for (int k = 1; k <= 6; ++k) {
      Mat2 want = poly_eval_mat2(magnus_term(ex, k), mats);
      Mat2 got = magnus_term(mm, k);
      CHECK(mat_dist(got, want) < 1e-12 * mat_scale(want));
    }
    for (int k = 1; k <= 5; ++k) {
      Mat2 want = poly_eval_mat2(resolvent_term(ex, k, Rat(1, 3)), mats);
      Mat2 got = resolvent_term(mm, k, 1.0 / 3);
      CHECK(mat_dist(got, want) < 1e-12 * mat_scale(want));
    }
  }
}

TEST_CASE("quadrature order matches the polynomial degree") {
  // R^lambda_k has degree k-1 in lambda; ceil(k/2) nodes are already
  // exact, so doubling the node count must not move the answer.
  MatMeasure phi = random_measure(4, 1.5);
  for (int k : {3, 6, 9, 12}) {
    Mat2 coarse = magnus_term(phi, k);
    Mat2 fine = Mat2::zero();
    for (const auto &[x, w] : detail::gauss_legendre01(k))
      fine = fine + detail::resolvent_dp(phi, k, x) * w;
    CHECK(mat_dist(coarse, fine) < 1e-13 * mat_scale(coarse));
  }
}

TEST_CASE("resolvent partial sums solve the interpolation identity") {
  ExactMeasure ex;
  ex.steps.push_back({NCPolynomial::variable(1), Rat(1, 2)});
  ex.steps.push_back({NCPolynomial::variable(2), Rat(1)});
  CHECK(resolvent_identity_residual(ex, Rat(1, 3), 4).is_zero());
  CHECK(resolvent_identity_residual(ex, Rat(1), 4).is_zero());
  CHECK(resolvent_identity_residual(ex, Rat(0), 4).is_zero());

  for (int rep = 0; rep < 5; ++rep) {
    MatMeasure phi = random_measure(3, 1.0);
    CHECK(resolvent_identity_check(phi, 0.5, 20) < 1e-8);
    CHECK(resolvent_identity_check(phi, 0.3, 20) < 1e-8);
  }
}

TEST_CASE("borderline rotating measure discretized") {
  for (int n : {16, 64}) {
    MatMeasure phi = moan_measure(n);
    CHECK(norm2(magnus_term(phi, 1)) < 1e-12);
  }
  double err16 = std::fabs(norm2(magnus_term(moan_measure(16), 2)) - kPi / 2);
  double err64 = std::fabs(norm2(magnus_term(moan_measure(64), 2)) - kPi / 2);
  CHECK(err64 < 0.05);
  CHECK(err64 < err16);
  // Higher terms approach the closed-form norms as well.
  MatMeasure phi = moan_measure(64);
  for (int k : {3, 4, 5})
    CHECK(std::fabs(norm2(magnus_term(phi, k)) - moan_term_norm(k)) < 0.02);
}

TEST_CASE("partial sums reconstruct the logarithm") {
  for (int rep = 0; rep < 20; ++rep) {
    MatMeasure phi = random_measure(3, 0.5);
    MagnusPartialSum ps = magnus_partial_sum(phi, 8);
    Mat2 L = log2x2(rexp(phi));
    CHECK(norm2(ps.sum - L) < 1e-6);
    CHECK(ps.term_norms.back() < 1e-4);
  }
}

TEST_CASE("left expansion of the divergent composition grows") {
  // Boost by 0.3 then rotation by pi: the product has two negative
  // eigenvalues and no real logarithm, so the expansion must diverge.
  double alpha = 0.3;
  MatMeasure phi;
  phi.steps.push_back({alpha * mat_K(), 1.0});
  phi.steps.push_back({kPi * mat_I(), 1.0});
  Mat2 A = lexp(phi);
  CHECK(mat_dist(A, -1.0 * exp2x2(alpha * mat_K())) < 1e-13);
  CHECK(A.tr() < -2);

  // Terms alternate between a rotation-dominant and a boost-dominant
  // component; each parity class grows strictly once the transient ends.
  MatMeasure rev = reversed(phi);
  std::vector<double> norms(13, 0);
  for (int k = 1; k <= 12; ++k) norms[k] = norm2(magnus_term(rev, k));
  for (int k = 5; k + 2 <= 12; ++k) CHECK(norms[k + 2] > norms[k]);
  CHECK(norms[11] > norms[5]);
  CHECK(norms[12] > 2 * norms[6]);
}

TEST_CASE("prefix contraction is exact") {
  ExactMeasure phi, psi;
  phi.steps.push_back({NCPolynomial::variable(1), Rat(1, 2)});
  phi.steps.push_back({NCPolynomial::variable(2), Rat(1)});
  CHECK(contraction_identity_residual(phi, psi, 5).is_zero());

  ExactMeasure xa, xb;
  xa.steps.push_back({NCPolynomial::variable(1), Rat(1, 4)});
  xb.steps.push_back({NCPolynomial::variable(1), Rat(3, 4)});
  CHECK(contraction_identity_residual(xa, xb, 4).is_zero());

  ExactMeasure pre, post;
  pre.steps.push_back({NCPolynomial::variable(1), Rat(1)});
  pre.steps.push_back({NCPolynomial::variable(2), Rat(1, 2)});
  post.steps.push_back({NCPolynomial::variable(3), Rat(1)});
  CHECK(contraction_identity_residual(pre, post, 5).is_zero());

  ExactMeasure bad;
  bad.steps.push_back({NCPolynomial(Rat(2)), Rat(1)});
  CHECK_THROWS_AS(contraction_identity_residual(bad, psi, 3),
                  std::domain_error);
}

TEST_CASE("measure calculus invariances") {
  MatMeasure phi = random_measure(2, 1.2);
  MatMeasure psi = random_measure(2, 0.8);

  // Concatenation is a chronological homomorphism.
  CHECK(mat_dist(rexp(concat(phi, psi)), rexp(phi) * rexp(psi)) < 1e-13);
  CHECK(mat_dist(lexp(concat(phi, psi)), lexp(psi) * lexp(phi)) < 1e-13);

  // Splitting a step in two leaves every term unchanged.
  MatMeasure split;
  for (const auto &[M, T] : phi.steps) {
    split.steps.push_back({M, T / 2});
    split.steps.push_back({M, T / 2});
  }
  for (int k = 1; k <= 6; ++k)
    CHECK(mat_dist(magnus_term(split, k), magnus_term(phi, k)) <
          1e-13 * mat_scale(magnus_term(phi, k)));

  // Conjugating the measure conjugates the terms.
  Mat2 g = {1.3, 0.4, -0.2, 0.9};
  Mat2 gi = mat_inverse(g);
  MatMeasure conj;
  for (const auto &[M, T] : phi.steps) conj.steps.push_back({g * M * gi, T});
  for (int k = 1; k <= 6; ++k)
    CHECK(mat_dist(magnus_term(conj, k), g * magnus_term(phi, k) * gi) <
          1e-11);

  // Reversed negated steps invert the chronological product.
  MatMeasure inv;
  for (const auto &[M, T] : phi.steps) inv.steps.push_back({-1.0 * M, T});
  inv = reversed(inv);
  CHECK(mat_dist(rexp(phi) * rexp(inv), Mat2::identity()) < 1e-13);

  // Exact split invariance with rational durations.
  ExactMeasure ex, exsplit;
  ex.steps.push_back({NCPolynomial::variable(1), Rat(2, 3)});
  ex.steps.push_back({NCPolynomial::variable(2), Rat(1, 2)});
  for (const auto &[M, T] : ex.steps) {
    exsplit.steps.push_back({M, T * Rat(1, 2)});
    exsplit.steps.push_back({M, T * Rat(1, 2)});
  }
  for (int k = 1; k <= 4; ++k)
    CHECK(magnus_term(ex, k) == magnus_term(exsplit, k));
}

TEST_CASE("exponent bound over the covered range") {
  // Chronological exponentials of measures with mass below pi stay inside
  // the covered region: the Magnus exponent never exceeds the mass.
  for (int rep = 0; rep < 200; ++rep) {
    int steps = 1 + static_cast<int>(uni(0, 3.999));
    double mass = uni(0.05, kPi - 0.05);
    MatMeasure phi = random_measure(steps, mass);
    double mp = magnus_exponent(lexp(phi));
    CHECK(mp <= mass + 1e-9);
  }
}
