#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <magnus/magnus_core.hpp>
#include <magnus/resolvent.hpp>

#include <numeric>

using namespace magnus;

TEST_CASE("two-variable interpolant by hand") {
  auto r2 = resolvent_poly(2);
  REQUIRE(r2.size() == 2);
  NCPolynomial c0;
  c0.add_term({2, 1}, Rat(-1));
  NCPolynomial c1;
  c1.add_term({1, 2}, Rat(1));
  c1.add_term({2, 1}, Rat(1));
  CHECK(r2[0] == c0);
  CHECK(r2[1] == c1);
}

TEST_CASE("endpoint evaluations pick out the extreme orders") {
  for (int k = 1; k <= 5; ++k) {
    Word up(k), down(k);
    std::iota(up.begin(), up.end(), 1);
    for (int i = 0; i < k; ++i) down[i] = k - i;
    auto rp = resolvent_poly(k);
    CHECK(lp_eval(rp, Rat(1)) == NCPolynomial::monomial(up, Rat(1)));
    CHECK(lp_eval(rp, Rat(0)) ==
          NCPolynomial::monomial(down, Rat(k % 2 ? 1 : -1)));
  }
}

TEST_CASE("parameter integral recovers the commutator") {
  for (int k = 1; k <= 6; ++k) {
    auto rp = resolvent_poly(k);
    CHECK(lp_integrate01(rp) == magnus_commutator_direct(k));
  }
}

TEST_CASE("splitting recursion agrees with the permutation sum") {
  for (int k = 1; k <= 6; ++k) {
    std::vector<int> vars(k);
    std::iota(vars.begin(), vars.end(), 1);
    auto rec = resolvent_recursive(vars);
    auto direct = resolvent_poly(k);
    lp_trim(rec);
    REQUIRE(rec.size() == direct.size());
    for (size_t i = 0; i < rec.size(); ++i) CHECK(rec[i] == direct[i]);
  }
}

TEST_CASE("midpoint evaluation is the symmetrized sum") {
  // At lambda = 1/2 every permutation carries weight +-(1/2)^(k-1).
  auto r3 = lp_eval(resolvent_poly(3), Rat(1, 2));
  CHECK(r3.coeff({1, 2, 3}) == Rat(1, 4));
  CHECK(r3.coeff({3, 2, 1}) == Rat(1, 4));
  CHECK(r3.coeff({2, 1, 3}) == Rat(-1, 4));
}
