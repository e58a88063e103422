#pragma once

#include <magnus/bernoulli.hpp>
#include <magnus/lie_expr.hpp>
#include <magnus/ncpoly.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace magnus {

inline constexpr int kDefaultMuCap = 9;

struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// mu_k evaluated on an argument list (multilinear extension): the
// permanental sum over all permutations of the argument slots with
// coefficient (-1)^des des! asc! / k!, descents taken on slot positions.
inline NCPolynomial magnus_commutator_on(
    const std::vector<NCPolynomial> &args) {
  int k = static_cast<int>(args.size());
  if (k == 0) throw std::domain_error("magnus_commutator_on: empty arguments");
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  NCPolynomial r;
  Int kfact = factorial(k);
  do {
    int des = 0;
    for (int i = 0; i + 1 < k; ++i)
      if (perm[i] > perm[i + 1]) ++des;
    int asc = k - 1 - des;
    Rat c(factorial(des) * factorial(asc) * (des % 2 ? -1 : 1), kfact);
    NCPolynomial term(c);
    for (int i = 0; i < k; ++i) term = term * args[perm[i]];
    r += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return r;
}

// Same, but with plain variables; lists the k! word terms directly.
inline NCPolynomial mu_on_vars(const std::vector<int> &vars) {
  int k = static_cast<int>(vars.size());
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  NCPolynomial r;
  Int kfact = factorial(k);
  do {
    int des = 0;
    for (int i = 0; i + 1 < k; ++i)
      if (perm[i] > perm[i + 1]) ++des;
    int asc = k - 1 - des;
    Word w(k);
    for (int i = 0; i < k; ++i) w[i] = vars[perm[i]];
    r.add_term(w, Rat(factorial(des) * factorial(asc) * (des % 2 ? -1 : 1),
                      kfact));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return r;
}

// mu_k(X_1, ..., X_k) from the closed permutation formula.
inline NCPolynomial magnus_commutator_direct(int k, int cap = kDefaultMuCap) {
  if (k < 1) throw std::domain_error("magnus_commutator_direct: k must be >= 1");
  if (k > cap)
    throw resource_error("magnus_commutator_direct: k exceeds cap " +
                         std::to_string(cap));
  std::vector<int> vars(k);
  std::iota(vars.begin(), vars.end(), 1);
  return mu_on_vars(vars);
}

// Visits every ordered set partition (B_1, ..., B_s), each block sorted
// ascending, of the given elements.
inline void for_each_ordered_partition(
    const std::vector<int> &elems,
    const std::function<void(const std::vector<std::vector<int>> &)> &fn) {
  int n = static_cast<int>(elems.size());
  if (n == 0) {
    fn({});
    return;
  }
  // Restricted-growth strings enumerate unordered partitions; block orders
  // are then permuted.
  std::vector<int> rgs(n, 0);
  std::function<void(int, int)> rec = [&](int i, int maxb) {
    if (i == n) {
      int s = maxb + 1;
      std::vector<std::vector<int>> blocks(s);
      for (int j = 0; j < n; ++j) blocks[rgs[j]].push_back(elems[j]);
      std::vector<int> order(s);
      std::iota(order.begin(), order.end(), 0);
      std::vector<std::vector<int>> arranged(s);
      do {
        for (int j = 0; j < s; ++j) arranged[j] = blocks[order[j]];
        fn(arranged);
      } while (std::next_permutation(order.begin(), order.end()));
      return;
    }
    for (int b = 0; b <= maxb + 1; ++b) {
      rgs[i] = b;
      rec(i + 1, std::max(maxb, b));
    }
  };
  rec(0, -1);
}

namespace detail {

inline LieTreePtr relabel(const LieTreePtr &t, const std::vector<int> &vars) {
  if (is_leaf(t)) return lie_leaf(vars[t->leaf - 1]);
  return lie_node(relabel(t->left, vars), relabel(t->right, vars));
}

}  // namespace detail

// mu_k as a Lie expression through the Magnus recursion expanding around the
// first variable: sum over ordered set partitions of {2..k} of
// beta_s (ad mu(B_1)) ... (ad mu(B_s)) X_1.
inline LieExpression magnus_commutator_recursive(int k,
                                                int cap = kDefaultMuCap) {
  if (k < 1) throw std::domain_error("magnus_commutator_recursive: k < 1");
  if (k > cap)
    throw resource_error("magnus_commutator_recursive: k exceeds cap " +
                         std::to_string(cap));
  static std::vector<LieExpression> cache;  // index k-1
  while (static_cast<int>(cache.size()) < k) {
    int n = static_cast<int>(cache.size()) + 1;
    LieExpression mu_n;
    if (n == 1) {
      mu_n.add(Rat(1), lie_leaf(1));
    } else {
      std::vector<int> rest(n - 1);
      std::iota(rest.begin(), rest.end(), 2);
      for_each_ordered_partition(
          rest, [&](const std::vector<std::vector<int>> &blocks) {
            int s = static_cast<int>(blocks.size());
            Rat coef = beta_coeff(s);
            if (coef == 0) return;
            LieExpression acc;
            acc.add(Rat(1), lie_leaf(1));
            for (int j = s - 1; j >= 0; --j) {
              const auto &block = blocks[j];
              LieExpression blk;
              for (const auto &term :
                   cache[block.size() - 1].terms())
                blk.add(term.coeff, detail::relabel(term.tree, block));
              acc = lie_bracket(blk, acc);
            }
            mu_n.add(acc, coef);
          });
    }
    cache.push_back(std::move(mu_n));
  }
  return cache[k - 1];
}

// The mirrored recursion expanding around the last variable: sum over
// ordered set partitions of {1..k-1} of (-1)^s beta_s (ad ...) X_k.
inline LieExpression magnus_commutator_recursive_last(int k) {
  if (k < 1) throw std::domain_error("magnus_commutator_recursive_last: k < 1");
  if (k == 1) {
    LieExpression e;
    e.add(Rat(1), lie_leaf(1));
    return e;
  }
  LieExpression mu_k;
  std::vector<int> rest(k - 1);
  std::iota(rest.begin(), rest.end(), 1);
  for_each_ordered_partition(
      rest, [&](const std::vector<std::vector<int>> &blocks) {
        int s = static_cast<int>(blocks.size());
        Rat coef = beta_coeff(s) * Rat(s % 2 ? -1 : 1);
        if (coef == 0) return;
        LieExpression acc;
        acc.add(Rat(1), lie_leaf(k));
        for (int j = s - 1; j >= 0; --j) {
          const auto &block = blocks[j];
          LieExpression sub = magnus_commutator_recursive(
              static_cast<int>(block.size()));
          LieExpression blk;
          for (const auto &term : sub.terms())
            blk.add(term.coeff, detail::relabel(term.tree, block));
          acc = lie_bracket(blk, acc);
        }
        mu_k.add(acc, coef);
      });
  return mu_k;
}

// Degree-n BCH term: Delta_n(X,Y) = sum_j mu_n(X x j, Y x (n-j)) / (j!(n-j)!)
// in variables X1 (= X) and X2 (= Y).
inline NCPolynomial bch_term(int n, int cap = kDefaultMuCap) {
  if (n < 1) throw std::domain_error("bch_term: n must be >= 1");
  if (n > cap)
    throw resource_error("bch_term: n exceeds cap " + std::to_string(cap));
  NCPolynomial r;
  auto X = NCPolynomial::variable(1);
  auto Y = NCPolynomial::variable(2);
  for (int j = 0; j <= n; ++j) {
    std::vector<NCPolynomial> args;
    for (int i = 0; i < j; ++i) args.push_back(X);
    for (int i = j; i < n; ++i) args.push_back(Y);
    r += magnus_commutator_on(args) *
         Rat(1, factorial(j) * factorial(n - j));
  }
  return r;
}

// Checks the ordered-partition product decomposition
// X_1...X_k = sum_s (1/s!) sum_{ordered partitions} mu(B_1) ... mu(B_s).
inline bool ppod_check(int k) {
  if (k < 1 || k > 6) throw std::domain_error("ppod_check: need 1 <= k <= 6");
  std::vector<int> all(k);
  std::iota(all.begin(), all.end(), 1);
  NCPolynomial rhs;
  for_each_ordered_partition(
      all, [&](const std::vector<std::vector<int>> &blocks) {
        int s = static_cast<int>(blocks.size());
        NCPolynomial prod(Rat(1, factorial(s)));
        for (const auto &block : blocks) prod = prod * mu_on_vars(block);
        rhs += prod;
      });
  Word w(all.begin(), all.end());
  return rhs == NCPolynomial::monomial(w, Rat(1));
}

// Generalized recursion: mu_k(X_1..X_k) as an outer mu over the first h1
// variables, the mu's of a partition of the middle, and the last h2
// variables; block orders are averaged (weight 1/s!), matching the
// ordered-partition product decomposition.  Returns the recomputed
// polynomial for comparison.
inline NCPolynomial generalized_magnus_recursion(int k, int h1, int h2) {
  if (h1 < 1 || h2 < 1 || h1 + h2 > k)
    throw std::domain_error("generalized_magnus_recursion: bad h1/h2");
  std::vector<int> middle;
  for (int i = h1 + 1; i <= k - h2; ++i) middle.push_back(i);
  NCPolynomial r;
  for_each_ordered_partition(
      middle, [&](const std::vector<std::vector<int>> &blocks) {
        int s = static_cast<int>(blocks.size());
        std::vector<NCPolynomial> args;
        for (int i = 1; i <= h1; ++i) args.push_back(NCPolynomial::variable(i));
        for (const auto &block : blocks) args.push_back(mu_on_vars(block));
        for (int i = k - h2 + 1; i <= k; ++i)
          args.push_back(NCPolynomial::variable(i));
        r += magnus_commutator_on(args) * Rat(1, factorial(s));
      });
  return r;
}

// Both sides of the symmetrized identities; returns (lhs, rhs) pairs.
// First form: symmetrizing the trailing slots around X_1 collapses to
// right-nested brackets with coefficient B_{n-1} (first-kind convention).
inline std::pair<NCPolynomial, NCPolynomial> schur_symmetrized_first(int n) {
  std::vector<int> rest(n - 1);
  std::iota(rest.begin(), rest.end(), 2);
  NCPolynomial lhs, rhs;
  std::sort(rest.begin(), rest.end());
  do {
    std::vector<int> vars{1};
    vars.insert(vars.end(), rest.begin(), rest.end());
    lhs += mu_on_vars(vars);
    NCPolynomial acc = NCPolynomial::variable(1);
    for (size_t j = rest.size(); j-- > 0;)
      acc = commutator(NCPolynomial::variable(rest[j]), acc);
    rhs += acc * bernoulli(n - 1);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return {lhs, rhs};
}

// Second form: symmetrize the leading slots around X_n; the coefficient is
// the second-kind Bernoulli number (-1)^(n-1) B_{n-1}.
inline std::pair<NCPolynomial, NCPolynomial> schur_symmetrized_last(int n) {
  std::vector<int> rest(n - 1);
  std::iota(rest.begin(), rest.end(), 1);
  NCPolynomial lhs, rhs;
  std::sort(rest.begin(), rest.end());
  do {
    std::vector<int> vars(rest.begin(), rest.end());
    vars.push_back(n);
    lhs += mu_on_vars(vars);
    NCPolynomial acc = NCPolynomial::variable(n);
    for (size_t j = rest.size(); j-- > 0;)
      acc = commutator(NCPolynomial::variable(rest[j]), acc);
    rhs += acc * (bernoulli(n - 1) * Rat(n % 2 ? 1 : -1));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return {lhs, rhs};
}

}  // namespace magnus
