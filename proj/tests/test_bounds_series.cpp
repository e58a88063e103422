#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <magnus/bounds.hpp>
#include <magnus/eulerian.hpp>
#include <magnus/resolvent.hpp>
#include <magnus/theta.hpp>

#include <cmath>
#include <complex>
#include <vector>

using namespace magnus;

namespace {

double closed_beta_tilde(double x) {
  return 2 + x / 2 - 0.5 * x / std::tan(0.5 * x);
}

double series_beta_tilde(double x) {
  double s = 0;
  for (int j = 12; j >= 0; --j) s = s * x + to_double(rat_abs(beta_coeff(j)));
  return s;
}

}  // namespace

TEST_CASE("pair generating function: basic values and symmetry") {
  CHECK(euler_G(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(euler_G(0.5, 0.5) == doctest::Approx(2.0).epsilon(1e-12));  // 1/(1-u)
  CHECK_THROWS_AS(euler_G(1.0, 1.0), std::domain_error);
  for (double u : {0.2, 0.7, -0.4}) {
    for (double v : {0.1, 0.9, -1.3}) {
      CHECK(euler_G(u, v) == doctest::Approx(euler_G(v, u)).epsilon(1e-13));
    }
  }
}

TEST_CASE("pair generating function: Taylor coefficients are descent counts") {
  // Coefficient extraction on circles of radius 1/2, 32 points per axis.
  const int K = 32;
  const double r = 0.5;
  std::vector<std::vector<std::complex<double>>> grid(K);
  for (int j = 0; j < K; ++j) {
    grid[j].resize(K);
    std::complex<double> u = std::polar(r, 2 * kPi * j / K);
    for (int l = 0; l < K; ++l) {
      std::complex<double> v = std::polar(r, 2 * kPi * l / K);
      grid[j][l] = euler_G(u, v);
    }
  }
  for (int a = 0; a + 1 <= 6; ++a) {
    for (int b = 0; a + b + 1 <= 6; ++b) {
      std::complex<double> acc = 0;
      for (int j = 0; j < K; ++j)
        for (int l = 0; l < K; ++l)
          acc += grid[j][l] *
                 std::polar(1.0, -2 * kPi * (a * j + b * l) / K);
      double coeff = acc.real() / (K * K * std::pow(r, a + b));
      int n = a + b + 1;
      double expect = to_double(Rat(eulerian(n, a), factorial(n)));
      CHECK(coeff == doctest::Approx(expect).epsilon(1e-8));
      CHECK(std::abs(acc.imag()) / (K * K) < 1e-12);
    }
  }
}

TEST_CASE("uniform-measure norm function: series agreement and divergence") {
  CHECK(theta_numeric(0) == 0);
  for (double x : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
    double series = 0;
    for (int k = 25; k >= 1; --k)
      series = series * x + to_double(theta_coefficient(k));
    series *= x;
    CHECK(std::abs(theta_numeric(x) - series) < 1e-6);
  }
  CHECK(std::isfinite(theta_numeric(1.999)));
  CHECK(std::isinf(theta_numeric(2.0)));
  CHECK(std::isinf(theta_numeric(3.5)));
  CHECK_THROWS_AS(theta_numeric(-0.1), std::domain_error);
}

TEST_CASE("pairwise majorant g: exact midpoint case and branch continuity") {
  for (double x : {0.3, 1.0, 2.0, 3.0})
    CHECK(g_lambda(0.5, x) ==
          doctest::Approx(2 * std::tan(0.5 * x)).epsilon(1e-12));
  // lambda = 0 solves g' = 1 + g
  for (double x : {0.5, 2.0, 5.0})
    CHECK(g_lambda(0.0, x) == doctest::Approx(std::expm1(x)).epsilon(1e-12));
  // discriminant-zero point: both neighbouring branches meet the rational form
  double lam0 = (2 - std::sqrt(2.0)) / 4;
  double expect = 4 * 1.0 / (4 - std::sqrt(2.0));
  CHECK(g_lambda(lam0, 1.0) == doctest::Approx(expect).epsilon(1e-6));
  CHECK(g_lambda(lam0 + 1e-7, 1.0) == doctest::Approx(expect).epsilon(1e-5));
  CHECK(g_lambda(lam0 - 1e-7, 1.0) == doctest::Approx(expect).epsilon(1e-5));
  CHECK_THROWS_AS(g_lambda(0.5, kPi), std::domain_error);
  CHECK_THROWS_AS(g_lambda(0.5, 3.2), std::domain_error);
  CHECK_THROWS_AS(g_lambda(-0.1, 1.0), std::domain_error);
}

TEST_CASE("log-convexity endpoint h and its minimum") {
  CHECK(h_lambda(0.5) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(std::isinf(h_lambda(0.0)));
  CHECK(std::isinf(h_lambda(1.0)));
  CHECK(h_lambda((2 - std::sqrt(2.0)) / 4) ==
        doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-7));
  CHECK(std::abs(c1() - 2.7014) < 1e-3);
  // the minimum is an interior improvement over both printed branch corners
  CHECK(c1() < 2 * std::sqrt(2.0));
  CHECK(c1() < kPi);
  CHECK_THROWS_AS(h_lambda(1.2), std::domain_error);
}

TEST_CASE("two-factor product bound: closed form and divergence signal") {
  double t = 2 * std::tan(0.5);
  double expect = (2 * t + t * t) / (1 - t * t / 4);
  CHECK(bch_resolvent_bound(0.5, 1.0, 1.0) ==
        doctest::Approx(expect).epsilon(1e-12));
  // past g = 2 at the midpoint parameter the denominator condition fails
  CHECK(std::isinf(bch_resolvent_bound(0.5, 1.6, 1.6)));
  // splitting the minimizing budget keeps the bound finite
  double lo = 0.15, hi = 0.5, best = lo;
  for (double l = lo; l <= hi; l += 1e-3)
    if (h_lambda(l) < h_lambda(best)) best = l;
  double half = 0.5 * c1() - 1e-3;
  CHECK(std::isfinite(bch_resolvent_bound(best, half, half)));
}

TEST_CASE("delayed majorant: closed forms, inverse, continuation identity") {
  for (double x : {0.3, 1.0, 1.9})
    CHECK(resolvent_majorant(0.5, x) ==
          doctest::Approx(2 * x / (2 - x)).epsilon(1e-10));
  for (double x : {0.3, 1.0, 3.0})
    CHECK(resolvent_majorant(0.0, x) ==
          doctest::Approx(std::expm1(x)).epsilon(1e-10));
  CHECK(resolvent_majorant_pole(0.5) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(resolvent_majorant_pole(0.3) ==
        doctest::Approx(std::log(0.3 / 0.7) / (0.6 - 1)).epsilon(1e-12));
  CHECK(std::isinf(resolvent_majorant(0.5, 2.0)));
  CHECK(std::isinf(resolvent_majorant(0.5, 2.5)));

  // bracketed inverse against the separated closed form
  for (double lam : {0.2, 0.35, 0.8}) {
    for (double g : {0.5, 2.0, 10.0}) {
      double expect = std::log((1 + lam * g) / (1 + (1 - lam) * g)) /
                      (2 * lam - 1);
      double got = resolvent_majorant_inverse(lam, g);
      CHECK(got == doctest::Approx(expect).epsilon(1e-10));
      CHECK(resolvent_majorant(lam, got) == doctest::Approx(g).epsilon(1e-8));
    }
  }
  CHECK(resolvent_majorant_inverse(0.5, 3.0) ==
        doctest::Approx(2 * 3.0 / (2 + 3.0)).epsilon(1e-10));

  for (double y : {0.2, 1.0})
    CHECK(ghat_lambda(0.3, 0.0, y) ==
          doctest::Approx(resolvent_majorant(0.3, y)).epsilon(1e-12));
  // continuing for a while and then further equals continuing at once
  double mid = resolvent_majorant(0.3, 0.7);
  CHECK(ghat_lambda(0.3, mid, 0.5) ==
        doctest::Approx(resolvent_majorant(0.3, 1.2)).epsilon(1e-8));
  CHECK(std::isinf(ghat_lambda(0.3, mid, 5.0)));
}

TEST_CASE("delayed majorant equals the time-ordered coefficient mass") {
  // 1/n! times the lambda-evaluated coefficient l1 mass, summed against x^n,
  // reproduces the scalar majorant; the two routes share no code.
  double lam = 0.3, x = 0.3;
  double sum = 0;
  for (int n = 1; n <= 8; ++n) {
    LambdaPoly p = resolvent_poly(n);
    std::map<Word, double, WordLess> vals;
    for (std::size_t j = 0; j < p.size(); ++j)
      for (const auto &[w, c] : p[j].terms())
        vals[w] += to_double(c) * std::pow(lam, static_cast<double>(j));
    double mass = 0;
    for (const auto &[w, v] : vals) mass += std::abs(v);
    sum += mass / to_double(Rat(factorial(n))) * std::pow(x, n);
  }
  CHECK(std::abs(sum - resolvent_majorant(lam, x)) < 1e-6);
}

TEST_CASE("even Bernoulli-mass function: values and branch overlap") {
  CHECK(beta_tilde(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(beta_tilde(kPi) == doctest::Approx(2 + kPi / 2).epsilon(1e-13));
  CHECK(std::isinf(beta_tilde(2 * kPi)));
  CHECK(std::isinf(beta_tilde(7.0)));
  // the series and closed-form branches agree across the switch-over
  for (double x : {2e-4, 5e-4, 9e-4, 1.1e-3, 2e-3, 5e-3}) {
    CHECK(std::abs(series_beta_tilde(x) - closed_beta_tilde(x)) < 1e-12);
    CHECK(std::abs(beta_tilde(x) - series_beta_tilde(x)) < 1e-12);
  }
  // all coefficients enter with positive sign; degree 4 in particular
  RationalSeries b = beta_tilde_series(8);
  CHECK(b.at(0) == Rat(1));
  CHECK(b.at(1) == Rat(1, 2));
  CHECK(b.at(2) == Rat(1, 12));
  CHECK(b.at(3) == Rat(0));
  CHECK(b.at(4) == Rat(1, 720));
  CHECK(b.at(6) == Rat(1, 30240));
  for (std::size_t j = 0; j < 8; ++j) CHECK(b.at(j) >= 0);
}

TEST_CASE("majorizing series: recursion values") {
  RationalSeries psi = psi_series(8);
  CHECK(psi.at(0) == Rat(0));
  CHECK(psi.at(1) == Rat(1));
  CHECK(psi.at(2) == Rat(1, 4));
  CHECK(psi.at(3) == Rat(5, 72));
  CHECK(psi.at(4) == Rat(11, 576));
  CHECK(psi.at(5) == Rat(479, 86400));
  CHECK(psi.at(6) == Rat(1769, 1036800));
  CHECK_THROWS_AS(psi_series(32), std::domain_error);
}

TEST_CASE("minimal-mass series and its forced low-order defect") {
  RationalSeries th = theta_lie_series(7);
  CHECK(th.at(1) == Rat(1));
  CHECK(th.at(2) == Rat(1, 4));
  CHECK(th.at(3) == Rat(1, 18));
  CHECK(th.at(4) == Rat(1, 72));
  CHECK(th.at(5) == Rat(1, 300));
  CHECK(th.at(6) == Rat(37, 43200));
  CHECK_THROWS_AS(theta_lie_series(8), std::domain_error);

  RationalSeries d6 = delta6_series();
  CHECK(d6.at(0) == Rat(0));
  CHECK(d6.at(1) == Rat(0));
  CHECK(d6.at(2) == Rat(1, 24));
  CHECK(d6.at(3) == Rat(1, 72));
  CHECK(d6.at(4) == Rat(53, 8640));
  CHECK(d6.at(5) == Rat(11, 4320));

  // majorization with equality exactly at degrees 1 and 2
  RationalSeries psi = psi_series(7);
  CHECK(psi.at(1) == th.at(1));
  CHECK(psi.at(2) == th.at(2));
  for (std::size_t k = 3; k <= 6; ++k) CHECK(psi.at(k) > th.at(k));
}

TEST_CASE("forced-coefficient series matches the minimal mass through 6") {
  RationalSeries ph = psi_hat_series(21), psi = psi_series(21),
                 th = theta_lie_series(7);
  for (std::size_t k = 0; k <= 6; ++k) CHECK(ph.at(k) == th.at(k));
  for (std::size_t k = 7; k <= 20; ++k) {
    CHECK(ph.at(k) >= 0);
    CHECK(ph.at(k) <= psi.at(k));
  }
}

TEST_CASE("zeta-tail mass: decomposition, value at the first pole, derivative") {
  CHECK(ring_beta(0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ring_beta(2 * kPi) == doctest::Approx(1.5).epsilon(1e-10));
  // splitting off the N = 2 pole reproduces the full quadratic-and-up mass
  for (double x : {0.5, 1.0, 2.0, 3.0, 4.5, 6.0, 6.2}) {
    double full = closed_beta_tilde(x) - 1 - 0.5 * x;
    double split = ring_beta(x) + 2 * x * x / (4 * kPi * kPi - x * x);
    CHECK(split == doctest::Approx(full).epsilon(1e-9));
  }
  for (double x : {1.0, 3.0, 5.0, 7.0, 9.0, 11.0}) {
    double h = 1e-5;
    double fd = (ring_beta(x + h) - ring_beta(x - h)) / (2 * h);
    CHECK(ring_beta_prime(x) == doctest::Approx(fd).epsilon(1e-7));
  }
  CHECK_THROWS_AS(ring_beta(13.0), std::domain_error);
  CHECK_THROWS_AS(ring_beta_prime(4 * kPi), std::domain_error);
}

TEST_CASE("quadratic-and-up derivative: branch overlap") {
  for (double x : {5e-3, 8e-3, 1.2e-2, 2e-2}) {
    double h = 1e-4;
    double fd =
        ((closed_beta_tilde(x + h) - 1 - 0.5 * (x + h)) -
         (closed_beta_tilde(x - h) - 1 - 0.5 * (x - h))) /
        (2 * h);
    CHECK(detail::beta_tt_prime(x) == doctest::Approx(fd).epsilon(1e-6));
  }
  double closed = detail::beta_tt_prime(1.1e-2);
  double series = 1.1e-2 / 6 + std::pow(1.1e-2, 3) / 180;
  CHECK(std::abs(closed - series) < 1e-12);
}

TEST_CASE("second-order integrand: overlap and positivity") {
  for (double x : {5e-3, 9e-3, 1.1e-2, 2e-2}) {
    double c = 1 / std::tan(0.5 * x);
    double direct = 2 + 0.5 * x + 1 / x - 2 * c - 0.75 * x * c + 0.75 * x * c * c;
    CHECK(std::abs(method2_f(x) - direct) < 1e-10);
  }
  CHECK(method2_f(0) == doctest::Approx(0.5).epsilon(1e-14));
  for (double x = 0.1; x < 2 * kPi; x += 0.1) CHECK(method2_f(x) > 0);
}
