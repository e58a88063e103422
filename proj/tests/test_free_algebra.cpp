#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <magnus/lie_expr.hpp>
#include <magnus/ncpoly.hpp>
#include <magnus/parse.hpp>

#include <random>

using namespace magnus;

namespace {

std::mt19937 rng(20260823);

Rat random_rat() {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
  return Rat(num(rng), den(rng));
}

Word random_word(int max_len, int alphabet) {
  std::uniform_int_distribution<int> len(0, max_len), letter(1, alphabet);
  Word w(len(rng));
  for (auto &v : w) v = letter(rng);
  return w;
}

NCPolynomial random_poly(int terms, int max_len = 4, int alphabet = 3) {
  NCPolynomial p;
  for (int i = 0; i < terms; ++i) p.add_term(random_word(max_len, alphabet), random_rat());
  return p;
}

}  // namespace

TEST_CASE("basis products and distributivity") {
  auto X1 = NCPolynomial::variable(1);
  auto X2 = NCPolynomial::variable(2);
  CHECK((X1 * X2).coeff({1, 2}) == 1);
  CHECK((X1 * X2).terms().size() == 1);

  auto sq = (X1 + X2) * (X1 + X2);
  CHECK(sq.coeff({1, 1}) == 1);
  CHECK(sq.coeff({1, 2}) == 1);
  CHECK(sq.coeff({2, 1}) == 1);
  CHECK(sq.coeff({2, 2}) == 1);
  CHECK(sq.terms().size() == 4);
}

TEST_CASE("multiplication is associative on random triples") {
  for (int i = 0; i < 20; ++i) {
    auto a = random_poly(4), b = random_poly(4), c = random_poly(4);
    CHECK((a * b) * c == a * (b * c));
  }
}

TEST_CASE("l1 norm is submultiplicative on random inputs") {
  for (int i = 0; i < 100; ++i) {
    auto a = random_poly(5), b = random_poly(5);
    CHECK(l1_norm(a * b) <= l1_norm(a) * l1_norm(b));
  }
}

TEST_CASE("commutator identities") {
  auto X1 = NCPolynomial::variable(1);
  auto X2 = NCPolynomial::variable(2);
  auto X3 = NCPolynomial::variable(3);
  auto c = commutator(X1, X2);
  CHECK(c.coeff({1, 2}) == 1);
  CHECK(c.coeff({2, 1}) == -1);

  auto p = random_poly(5);
  CHECK(commutator(p, p).is_zero());

  auto jac = commutator(commutator(X1, X2), X3) +
             commutator(commutator(X2, X3), X1) +
             commutator(commutator(X3, X1), X2);
  CHECK(jac.is_zero());
}

TEST_CASE("truncated exp and log") {
  auto X = NCPolynomial::variable(1);
  auto e3 = truncated_exp(X, 3);
  CHECK(e3.coeff({}) == 1);
  CHECK(e3.coeff({1}) == 1);
  CHECK(e3.coeff({1, 1}) == Rat(1, 2));
  CHECK(e3.coeff({1, 1, 1}) == Rat(1, 6));
  CHECK(e3.terms().size() == 4);

  CHECK(truncated_log(truncated_exp(X, 4), 4) == X);

  auto Y = NCPolynomial::variable(2);
  auto bch = truncated_log(truncated_exp(X, 4) * truncated_exp(Y, 4), 4);
  auto deg2 = bch.homogeneous_part(2);
  CHECK(deg2.coeff({1, 2}) == Rat(1, 2));
  CHECK(deg2.coeff({2, 1}) == Rat(-1, 2));
  CHECK(deg2.terms().size() == 2);

  CHECK_THROWS_AS(truncated_exp(NCPolynomial(Rat(1)), 3), std::domain_error);
  CHECK_THROWS_AS(truncated_log(X, 3), std::domain_error);
}

TEST_CASE("exp/log mutually inverse on random nilpotent inputs") {
  for (int i = 0; i < 10; ++i) {
    NCPolynomial p;
    for (int t = 0; t < 4; ++t) {
      Word w = random_word(3, 2);
      if (w.empty()) w.push_back(1);
      p.add_term(w, random_rat());
    }
    p.set_degree_cap(5);
    CHECK(truncated_log(truncated_exp(p, 5), 5) == p);
  }
}

TEST_CASE("l1 norm basics") {
  NCPolynomial p;
  p.add_term({1, 2}, Rat(1, 2));
  p.add_term({2, 1}, Rat(-1, 2));
  CHECK(l1_norm(p) == 1);
  CHECK(l1_norm(NCPolynomial()) == 0);
}

TEST_CASE("dsw map") {
  auto X1 = NCPolynomial::variable(1);
  auto X2 = NCPolynomial::variable(2);
  CHECK(dsw_map(X1 * X2) == commutator(X1, X2));

  auto mu2 = commutator(X1, X2) * Rat(1, 2);
  CHECK(dsw_map(mu2) == mu2 * Rat(2));

  CHECK_THROWS_AS(dsw_map(X1 + X1 * X2), std::domain_error);
}

TEST_CASE("lie tree canonical orientation prefers smaller minimum left") {
  // [2,[1,3]] canonicalizes to -[[1,3],2]
  auto t = lie_node(lie_leaf(2), lie_node(lie_leaf(1), lie_leaf(3)));
  auto [sign, canon] = canonical_tree(t);
  CHECK(sign == -1);
  CHECK(tree_str(canon) == "[[1,3],2]");

  LieExpression e;
  e.add(Rat(1), t);
  CHECK(e.terms().size() == 1);
  CHECK(e.terms()[0].coeff == -1);
  CHECK(e.expand() == -expand_tree(parse_tree("[[1,3],2]")));
}

TEST_CASE("tree parser round trip and expansion") {
  auto t = parse_tree("[[1,2],[3,4]]");
  CHECK(tree_str(t) == "[[1,2],[3,4]]");
  auto X = [](int i) { return NCPolynomial::variable(i); };
  CHECK(expand_tree(t) ==
        commutator(commutator(X(1), X(2)), commutator(X(3), X(4))));
  CHECK_THROWS(parse_tree("[1,2"));
}

TEST_CASE("polynomial grammar") {
  auto p = parse_poly("1/2*X1*X2 - 1/2*X2*X1");
  CHECK(p == commutator(NCPolynomial::variable(1),
                        NCPolynomial::variable(2)) *
                 Rat(1, 2));
  CHECK(parse_poly("[X,Y]") ==
        commutator(NCPolynomial::variable(1), NCPolynomial::variable(2)));
  CHECK(parse_poly("X^3").coeff({1, 1, 1}) == 1);
  CHECK(parse_poly("(X1+X2)^2").terms().size() == 4);
  CHECK(parse_poly("-X1").coeff({1}) == -1);
  CHECK(parse_poly("3/4").coeff({}) == Rat(3, 4));
  CHECK_THROWS(parse_poly("X1 +"));
}

TEST_CASE("degree caps truncate products") {
  auto X = NCPolynomial::variable(1, 2);
  auto sq = X * X;
  CHECK(sq.coeff({1, 1}) == 1);
  CHECK((sq * X).is_zero());
  auto p = NCPolynomial::variable(1);
  p.set_degree_cap(3);
  CHECK(p.degree_cap() == 3);
}

TEST_CASE("json rendering is deterministic and ordered") {
  NCPolynomial p;
  p.add_term({2, 1}, Rat(-1, 2));
  p.add_term({1, 2}, Rat(1, 2));
  CHECK(poly_json(p) == "{\"X1X2\":\"1/2\",\"X2X1\":\"-1/2\"}");
}
