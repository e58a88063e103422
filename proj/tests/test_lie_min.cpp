#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <magnus/lie_min.hpp>
#include <magnus/magnus_core.hpp>

#include <random>
#include <string>

using namespace magnus;

namespace {

std::string data_file(const char *name) {
  return std::string(MAGNUS_DATA_DIR) + "/" + name;
}

std::vector<std::pair<LieTreePtr, Rat>> scaled(
    const std::vector<std::pair<const char *, Rat>> &items, const Rat &s) {
  std::vector<std::pair<LieTreePtr, Rat>> out;
  for (const auto &[txt, c] : items) out.emplace_back(parse_tree(txt), c * s);
  return out;
}

}  // namespace

TEST_CASE("simplex basics") {
  // min x + y subject to x - y = 1.
  auto res = simplex_exact({{Rat(1), Rat(-1)}}, {Rat(1)}, {Rat(1), Rat(1)});
  REQUIRE(res.feasible);
  CHECK(res.objective == Rat(1));
  CHECK(res.x[0] == Rat(1));
  CHECK(res.x[1] == Rat(0));
  // Infeasible: x1 + x2 = -1 with nonnegative variables.
  auto bad =
      simplex_exact({{Rat(1), Rat(1)}}, {Rat(-1)}, {Rat(1), Rat(1)});
  CHECK(!bad.feasible);
  // Unbounded: min -x with x free of further constraints than x - y = 0.
  auto unb = simplex_exact({{Rat(1), Rat(-1)}}, {Rat(0)}, {Rat(-1), Rat(0)});
  CHECK(unb.feasible);
  CHECK(!unb.bounded);
}

TEST_CASE("monomial dictionary counts and rank") {
  auto d2 = enumerate_lie_monomials(2);
  CHECK(d2.pre_dedup_count == 2);  // Catalan(1) * 2!
  CHECK(d2.trees.size() == 1);
  CHECK(tree_str(d2.trees[0]) == "[1,2]");

  auto d3 = enumerate_lie_monomials(3);
  CHECK(d3.pre_dedup_count == 12);  // Catalan(2) * 3!
  CHECK(d3.trees.size() == 3);
  CHECK(dictionary_rank(d3) == 2);  // (3-1)!

  auto d4 = enumerate_lie_monomials(4);
  CHECK(d4.pre_dedup_count == 120);  // Catalan(3) * 4!
  CHECK(dictionary_rank(d4) == 6);   // (4-1)!

  CHECK_THROWS_AS(enumerate_lie_monomials(1), std::domain_error);
  CHECK_THROWS_AS(enumerate_lie_monomials(7), std::domain_error);
}

TEST_CASE("minimal cost at small arity, with certificates") {
  auto p2 = theta_lie(2);
  CHECK(p2.objective == Rat(1, 2));
  CHECK(p2.exact_certified);
  REQUIRE(p2.coefficients.size() == 1);
  CHECK(rat_abs(p2.coefficients[0].second) == Rat(1, 2));

  auto p3 = theta_lie(3);
  CHECK(p3.objective == Rat(1, 3));
  CHECK(p3.exact_certified);
  // The optimum is unique at this arity.
  REQUIRE(p3.coefficients.size() == 2);
  for (const auto &[tree, c] : p3.coefficients) {
    std::string s = tree_str(tree);
    CHECK((s == "[[1,2],3]" || s == "[1,[2,3]]"));
    CHECK(c == Rat(1, 6));
  }

  auto p4 = theta_lie(4);
  CHECK(p4.objective == Rat(1, 3));
  CHECK(p4.exact_certified);

  // Certificates survive independent re-verification.
  auto d4 = enumerate_lie_monomials(4);
  CHECK(verify_certificate(d4, magnus_commutator_direct(4), p4));
}

TEST_CASE("minimal cost at arity five") {
  auto p5 = theta_lie(5);
  CHECK(p5.objective == Rat(2, 5));
  CHECK(p5.exact_certified);
}

TEST_CASE("presentation family at arity four: all vertices cost 1/3") {
  // Ten monomials with weights depending on barycentric parameters; at each
  // vertex four survive.
  auto family = [](const std::vector<Rat> &l) {
    std::vector<std::pair<const char *, Rat>> items = {
        {"[[[1,4],2],3]", -l[0]},
        {"[1,[2,[3,4]]]", l[4] + l[0] + l[1]},
        {"[[1,[2,4]],3]", l[1]},
        {"[[1,[2,3]],4]", l[0] + l[1] + l[2]},
        {"[[1,3],[2,4]]", l[2]},
        {"[[1,2],[3,4]]", l[1] + l[2] + l[3]},
        {"[[[1,3],4],2]", -l[3]},
        {"[1,[[2,3],4]]", l[2] + l[3] + l[4]},
        {"[[[1,4],3],2]", -l[4]},
        {"[[[1,2],3],4]", l[3] + l[4] + l[0]}};
    return items;
  };
  for (int v = 0; v < 5; ++v) {
    std::vector<Rat> l(5, Rat(0));
    l[v] = Rat(1);
    auto check = verify_presentation(scaled(family(l), Rat(1, 12)), 4);
    CHECK(check.valid);
    CHECK(check.cost == Rat(1, 3));
  }
  // Interior point of the simplex: still valid, still cost 1/3.
  std::vector<Rat> uniform(5, Rat(1, 5));
  auto interior = verify_presentation(scaled(family(uniform), Rat(1, 12)), 4);
  CHECK(interior.valid);
  CHECK(interior.cost == Rat(1, 3));
}

TEST_CASE("stored presentations reproduce the commutators") {
  auto p4 = parse_presentation_file(data_file("presentation_k4.txt"));
  auto c4 = verify_presentation(p4, 4);
  CHECK(c4.valid);
  CHECK(c4.cost == Rat(1, 3));

  auto p5 = parse_presentation_file(data_file("presentation_k5.txt"));
  auto c5 = verify_presentation(p5, 5);
  CHECK(c5.valid);
  CHECK(c5.cost == Rat(2, 5));

  auto p6 = parse_presentation_file(data_file("presentation_k6.txt"));
  auto c6 = verify_presentation(p6, 6);
  CHECK(c6.valid);
  CHECK(c6.cost == Rat(37, 60));
}

TEST_CASE("primitive projection reproduces the commutator") {
  for (int k = 1; k <= 5; ++k) {
    Word w(k);
    std::iota(w.begin(), w.end(), 1);
    auto p = first_canonical_projection(NCPolynomial::monomial(w, Rat(1)), k);
    CHECK(p == magnus_commutator_direct(k));
  }
}

TEST_CASE("primitive projection fixes Lie elements and kills symmetry") {
  auto mu3 = magnus_commutator_direct(3);
  CHECK(first_canonical_projection(mu3, 3) == mu3);

  NCPolynomial sym;
  sym.add_term({1, 2}, Rat(1));
  sym.add_term({2, 1}, Rat(1));
  CHECK(first_canonical_projection(sym, 2).terms().empty());
}

TEST_CASE("primitive projection is idempotent on random input") {
  std::mt19937 rng(20260823);
  for (int k = 2; k <= 5; ++k) {
    NCPolynomial p;
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 1);
    for (int trial = 0; trial < 6; ++trial) {
      std::shuffle(perm.begin(), perm.end(), rng);
      p.add_term(Word(perm.begin(), perm.end()),
                 Rat(static_cast<int>(rng() % 19) - 9,
                     static_cast<int>(rng() % 7) + 1));
    }
    auto once = first_canonical_projection(p, k);
    auto twice = first_canonical_projection(once, k);
    CHECK(once == twice);
  }
}

TEST_CASE("bracketing map consistency on optimal presentations") {
  for (int k = 3; k <= 4; ++k) {
    auto mp = theta_lie(k);
    NCPolynomial combo;
    for (const auto &[tree, c] : mp.coefficients) {
      NCPolynomial e = expand_tree(tree);
      e *= c;
      combo += e;
    }
    NCPolynomial scaled_mu = magnus_commutator_direct(k);
    scaled_mu *= Rat(k);
    CHECK(dsw_map(combo) == scaled_mu);
  }
}

TEST_CASE("malformed presentation input") {
  CHECK_THROWS_AS(verify_presentation({{parse_tree("[[1,2],[3,4]]"), Rat(1)}},
                                      5),
                  std::domain_error);
  CHECK_THROWS_AS(parse_presentation_file("/nonexistent/file.txt"),
                  std::runtime_error);
}
