#pragma once

#include <magnus/exact_linalg.hpp>
#include <magnus/lie_expr.hpp>
#include <magnus/magnus_core.hpp>
#include <magnus/ncpoly.hpp>
#include <magnus/simplex.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace magnus {

// Spanning set of multilinear bracket monomials of the given arity, each
// column a canonical representative with its word expansion; columns with
// proportional expansions are merged.
struct LieDictionary {
  int k = 0;
  std::vector<LieTreePtr> trees;
  std::vector<NCPolynomial> expansions;
  long pre_dedup_count = 0;
};

namespace detail {

// All full binary tree shapes on n ordered leaf slots; leaves numbered by
// slot position 0..n-1.
inline std::vector<LieTreePtr> tree_shapes(int n) {
  static std::map<int, std::vector<LieTreePtr>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<LieTreePtr> out;
  if (n == 1) {
    out.push_back(lie_leaf(0));
  } else {
    for (int l = 1; l < n; ++l)
      for (const auto &lt : tree_shapes(l))
        for (const auto &rt : tree_shapes(n - l)) {
          // Right subtree slots shift by l.
          std::function<LieTreePtr(const LieTreePtr &, int)> shift =
              [&](const LieTreePtr &t, int d) -> LieTreePtr {
            if (is_leaf(t)) return lie_leaf(t->leaf + d);
            return lie_node(shift(t->left, d), shift(t->right, d));
          };
          out.push_back(lie_node(lt, shift(rt, l)));
        }
  }
  cache[n] = out;
  return out;
}

inline LieTreePtr assign_labels(const LieTreePtr &shape,
                                const std::vector<int> &labels) {
  if (is_leaf(shape)) return lie_leaf(labels[shape->leaf]);
  return lie_node(assign_labels(shape->left, labels),
                  assign_labels(shape->right, labels));
}

}  // namespace detail

inline LieDictionary enumerate_lie_monomials(int k) {
  if (k < 2 || k > 6)
    throw std::domain_error("enumerate_lie_monomials: need 2 <= k <= 6");
  LieDictionary dict;
  dict.k = k;
  std::map<std::string, int> seen;  // canonical tree string -> column
  auto shapes = detail::tree_shapes(k);
  std::vector<int> labels(k);
  std::iota(labels.begin(), labels.end(), 1);
  std::sort(labels.begin(), labels.end());
  do {
    for (const auto &shape : shapes) {
      ++dict.pre_dedup_count;
      auto t = detail::assign_labels(shape, labels);
      auto [sign, canon] = canonical_tree(t);
      (void)sign;
      std::string key = tree_str(canon);
      if (seen.count(key)) continue;
      NCPolynomial exp = expand_tree(canon);
      // Proportionality dedup beyond the sign normal form: compare against
      // existing columns via the ratio at the lead word.
      bool dup = false;
      for (std::size_t i = 0; i < dict.expansions.size() && !dup; ++i) {
        const auto &other = dict.expansions[i];
        if (other.terms().size() != exp.terms().size()) continue;
        const auto &lead = *exp.terms().begin();
        Rat o = other.coeff(lead.first);
        if (o == 0) continue;
        Rat ratio = o / lead.second;
        NCPolynomial scaled = exp;
        scaled *= ratio;
        if (scaled == other) dup = true;
      }
      if (!dup) {
        dict.trees.push_back(canon);
        dict.expansions.push_back(std::move(exp));
      }
      seen[key] = 1;
    }
  } while (std::next_permutation(labels.begin(), labels.end()));
  return dict;
}

inline int dictionary_rank(const LieDictionary &dict) {
  std::map<Word, int, WordLess> word_index;
  for (const auto &e : dict.expansions)
    for (const auto &kv : e.terms())
      word_index.emplace(kv.first, static_cast<int>(word_index.size()));
  RatMatrix m(dict.expansions.size(),
              std::vector<Rat>(word_index.size(), Rat(0)));
  for (std::size_t i = 0; i < dict.expansions.size(); ++i)
    for (const auto &kv : dict.expansions[i].terms())
      m[i][word_index[kv.first]] = kv.second;
  return rank_exact(std::move(m));
}

struct MinimalPresentation {
  int k = 0;
  std::vector<std::pair<LieTreePtr, Rat>> coefficients;  // nonzero entries
  Rat objective;                  // equals k! times the series coefficient
  std::vector<Word> words;        // row order of the dual certificate
  std::vector<Rat> dual;          // |dual . column| <= 1, dual . target = objective
  bool exact_certified = false;
};

namespace detail {

struct LieLP {
  std::vector<Word> words;
  RatMatrix columns;  // per dictionary column, word-indexed expansion
  std::vector<Rat> target;
};

inline LieLP build_lp(const LieDictionary &dict, const NCPolynomial &target) {
  LieLP lp;
  std::map<Word, int, WordLess> word_index;
  auto intern = [&](const Word &w) {
    auto [it, fresh] = word_index.emplace(w, static_cast<int>(lp.words.size()));
    if (fresh) lp.words.push_back(w);
    return it->second;
  };
  for (const auto &e : dict.expansions)
    for (const auto &kv : e.terms()) intern(kv.first);
  for (const auto &kv : target.terms()) intern(kv.first);
  std::size_t rows = lp.words.size();
  lp.columns.assign(dict.expansions.size(), std::vector<Rat>(rows, Rat(0)));
  for (std::size_t i = 0; i < dict.expansions.size(); ++i)
    for (const auto &kv : dict.expansions[i].terms())
      lp.columns[i][word_index[kv.first]] = kv.second;
  lp.target.assign(rows, Rat(0));
  for (const auto &kv : target.terms())
    lp.target[word_index[kv.first]] = kv.second;
  return lp;
}

}  // namespace detail

// Exact check of a certificate pair against the dictionary: the combination
// must reproduce the target, the cost must match, and the dual functional
// must be feasible with matching value.
inline bool verify_certificate(const LieDictionary &dict,
                               const NCPolynomial &target,
                               const MinimalPresentation &mp) {
  NCPolynomial combo;
  Rat cost(0);
  for (const auto &[tree, c] : mp.coefficients) {
    NCPolynomial e = expand_tree(tree);
    e *= c;
    combo += e;
    cost += rat_abs(c);
  }
  if (!(combo == target)) return false;
  if (cost != mp.objective) return false;
  std::map<Word, Rat, WordLess> y;
  for (std::size_t i = 0; i < mp.words.size(); ++i) y[mp.words[i]] = mp.dual[i];
  auto pair_with = [&](const NCPolynomial &p) {
    Rat s(0);
    for (const auto &kv : p.terms()) {
      auto it = y.find(kv.first);
      if (it != y.end()) s += it->second * kv.second;
    }
    return s;
  };
  for (const auto &e : dict.expansions) {
    Rat v = pair_with(e);
    if (rat_abs(v) > 1) return false;
  }
  return pair_with(target) == mp.objective;
}

// Minimal l1-cost presentation of the k-arity commutator over the monomial
// dictionary, solved as the split LP min sum(p+q), columns [A | -A].
// Exact simplex for k <= 5; for k = 6 a floating solve locates the optimum
// and the resulting basis is re-solved and certified exactly.
inline MinimalPresentation theta_lie(int k) {
  LieDictionary dict = enumerate_lie_monomials(k);
  NCPolynomial mu = magnus_commutator_direct(k);
  auto lp = detail::build_lp(dict, mu);
  std::size_t rows = lp.words.size(), ncols = lp.columns.size();
  MinimalPresentation mp;
  mp.k = k;
  mp.words = lp.words;

  auto finish = [&](const std::vector<Rat> &x, const std::vector<Rat> &dual) {
    Rat obj(0);
    for (std::size_t j = 0; j < ncols; ++j) {
      Rat c = x[j] - x[ncols + j];
      if (c != 0) mp.coefficients.emplace_back(dict.trees[j], c);
      obj += rat_abs(c);
    }
    mp.objective = obj;
    mp.dual = dual;
    mp.exact_certified = verify_certificate(dict, mu, mp);
  };

  if (k <= 5) {
    RatMatrix A(rows, std::vector<Rat>(2 * ncols, Rat(0)));
    for (std::size_t j = 0; j < ncols; ++j)
      for (std::size_t i = 0; i < rows; ++i) {
        A[i][j] = lp.columns[j][i];
        A[i][ncols + j] = -lp.columns[j][i];
      }
    std::vector<Rat> c(2 * ncols, Rat(1));
    auto res = simplex_exact(A, lp.target, c);
    if (!res.feasible || !res.bounded)
      throw std::runtime_error("theta_lie: LP infeasible (expansion bug)");
    finish(res.x, res.dual);
    return mp;
  }

  // Floating presolve on the split system.
  std::vector<std::vector<double>> Ad(rows, std::vector<double>(2 * ncols, 0));
  std::vector<double> bd(rows), cd(2 * ncols, 1.0);
  for (std::size_t i = 0; i < rows; ++i) bd[i] = to_double(lp.target[i]);
  for (std::size_t j = 0; j < ncols; ++j)
    for (std::size_t i = 0; i < rows; ++i) {
      double v = to_double(lp.columns[j][i]);
      Ad[i][j] = v;
      Ad[i][ncols + j] = -v;
    }
  auto fres = simplex_float(Ad, bd, cd);
  if (!fres.feasible || !fres.bounded)
    throw std::runtime_error("theta_lie: float LP failed");
  // Exact re-solve of the identified basis: basic columns of [A | -A | I].
  std::size_t m = rows;
  RatMatrix B(m, std::vector<Rat>(m, Rat(0)));
  for (std::size_t r = 0; r < m; ++r) {
    int j = fres.basis[r];
    for (std::size_t i = 0; i < m; ++i) {
      if (j < static_cast<int>(ncols))
        B[i][r] = lp.columns[j][i];
      else if (j < static_cast<int>(2 * ncols))
        B[i][r] = -lp.columns[j - ncols][i];
      else
        B[i][r] = (static_cast<std::size_t>(j - 2 * ncols) == i) ? Rat(1)
                                                                 : Rat(0);
    }
  }
  auto xb = solve_exact(B, lp.target);
  if (!xb) throw std::runtime_error("theta_lie: basis singular");
  std::vector<Rat> x(2 * ncols, Rat(0));
  for (std::size_t r = 0; r < m; ++r) {
    if (fres.basis[r] < static_cast<int>(2 * ncols)) {
      if ((*xb)[r] < 0)
        throw std::runtime_error("theta_lie: exact basis solution infeasible");
      x[fres.basis[r]] = (*xb)[r];
    } else if ((*xb)[r] != 0) {
      throw std::runtime_error("theta_lie: artificial at nonzero level");
    }
  }
  // Dual from the basis: solve B^T y = c_B.
  RatMatrix Bt(m, std::vector<Rat>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) Bt[i][j] = B[j][i];
  std::vector<Rat> cb(m, Rat(0));
  for (std::size_t r = 0; r < m; ++r)
    if (fres.basis[r] < static_cast<int>(2 * ncols)) cb[r] = Rat(1);
  auto y = solve_exact(Bt, cb);
  if (!y) throw std::runtime_error("theta_lie: dual solve failed");
  finish(x, *y);
  if (!mp.exact_certified)
    throw std::runtime_error("theta_lie: exact certification failed");
  return mp;
}

struct PresentationCheck {
  bool valid = false;
  Rat cost;
  NCPolynomial gap;  // expansion minus the commutator
};

inline PresentationCheck verify_presentation(
    const std::vector<std::pair<LieTreePtr, Rat>> &coeffs, int k) {
  PresentationCheck out;
  NCPolynomial combo;
  for (const auto &[tree, c] : coeffs) {
    std::vector<int> sorted;
    collect_leaves(tree, sorted);
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < k; ++i)
      if (i >= static_cast<int>(sorted.size()) || sorted[i] != i + 1)
        throw std::domain_error("verify_presentation: tree is not multilinear");
    NCPolynomial e = expand_tree(tree);
    e *= c;
    combo += e;
    out.cost += rat_abs(c);
  }
  out.gap = combo;
  out.gap -= magnus_commutator_direct(k);
  out.valid = out.gap.terms().empty();
  return out;
}

// Reads lines of the form "[[1,2],[3,4]]:p/q"; '#' starts a comment.
inline std::vector<std::pair<LieTreePtr, Rat>> parse_presentation_file(
    const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open presentation file: " + path);
  std::vector<std::pair<LieTreePtr, Rat>> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string tree_part = line.substr(0, colon);
    std::string coeff_part = line.substr(colon + 1);
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    tree_part = strip(tree_part);
    coeff_part = strip(coeff_part);
    if (tree_part.empty()) continue;
    out.emplace_back(parse_tree(tree_part), parse_rational(coeff_part));
  }
  return out;
}

// First canonical projection: subtracts every symmetrized product part of a
// multilinear word, leaving its primitive (Lie) component.
inline NCPolynomial first_canonical_projection(const NCPolynomial &p, int k);

namespace detail {

inline NCPolynomial pi1_word(const Word &w) {
  static std::map<Word, NCPolynomial> cache;
  auto it = cache.find(w);
  if (it != cache.end()) return it->second;
  int n = static_cast<int>(w.size());
  NCPolynomial r = NCPolynomial::monomial(w, Rat(1));
  std::vector<int> pos(n);
  std::iota(pos.begin(), pos.end(), 0);
  for_each_ordered_partition(
      pos, [&](const std::vector<std::vector<int>> &blocks) {
        int s = static_cast<int>(blocks.size());
        if (s < 2) return;
        NCPolynomial prod(Rat(1, factorial(s)));
        for (const auto &block : blocks) {
          Word sub;
          for (int i : block) sub.push_back(w[i]);
          prod = prod * pi1_word(sub);
        }
        r -= prod;
      });
  cache[w] = r;
  return r;
}

}  // namespace detail

inline NCPolynomial first_canonical_projection(const NCPolynomial &p, int k) {
  NCPolynomial out;
  for (const auto &kv : p.terms()) {
    if (static_cast<int>(kv.first.size()) != k)
      throw std::domain_error("first_canonical_projection: degree mismatch");
    std::vector<int> sorted(kv.first);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::domain_error("first_canonical_projection: repeated letter");
    NCPolynomial t = detail::pi1_word(kv.first);
    t *= kv.second;
    out += t;
  }
  return out;
}

}  // namespace magnus
