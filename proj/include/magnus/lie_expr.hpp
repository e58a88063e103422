#pragma once

#include <magnus/ncpoly.hpp>

#include <algorithm>
#include <cctype>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace magnus {

// Immutable full binary bracketing tree; leaves carry variable indices.
struct LieTree;
using LieTreePtr = std::shared_ptr<const LieTree>;

struct LieTree {
  int leaf = -1;  // >= 1 for a leaf, -1 for an internal node
  LieTreePtr left, right;
};

inline LieTreePtr lie_leaf(int i) {
  auto t = std::make_shared<LieTree>();
  t->leaf = i;
  return t;
}

inline LieTreePtr lie_node(LieTreePtr l, LieTreePtr r) {
  auto t = std::make_shared<LieTree>();
  t->left = std::move(l);
  t->right = std::move(r);
  return t;
}

inline bool is_leaf(const LieTreePtr &t) { return t->leaf >= 0; }

inline void collect_leaves(const LieTreePtr &t, std::vector<int> &out) {
  if (is_leaf(t)) {
    out.push_back(t->leaf);
    return;
  }
  collect_leaves(t->left, out);
  collect_leaves(t->right, out);
}

inline int min_leaf(const LieTreePtr &t) {
  if (is_leaf(t)) return t->leaf;
  return std::min(min_leaf(t->left), min_leaf(t->right));
}

inline int leaf_count(const LieTreePtr &t) {
  if (is_leaf(t)) return 1;
  return leaf_count(t->left) + leaf_count(t->right);
}

inline std::string tree_str(const LieTreePtr &t) {
  if (is_leaf(t)) return std::to_string(t->leaf);
  return "[" + tree_str(t->left) + "," + tree_str(t->right) + "]";
}

// Canonical orientation: the child containing the smaller minimum leaf goes
// left; each swap flips the sign.  For multilinear trees (disjoint leaf sets)
// minimum-leaf order equals lexicographic leaf-set order.
inline std::pair<int, LieTreePtr> canonical_tree(const LieTreePtr &t) {
  if (is_leaf(t)) return {1, t};
  auto [sl, l] = canonical_tree(t->left);
  auto [sr, r] = canonical_tree(t->right);
  int sign = sl * sr;
  if (min_leaf(l) > min_leaf(r)) {
    std::swap(l, r);
    sign = -sign;
  }
  return {sign, lie_node(l, r)};
}

inline NCPolynomial expand_tree(const LieTreePtr &t) {
  if (is_leaf(t)) return NCPolynomial::variable(t->leaf);
  return commutator(expand_tree(t->left), expand_tree(t->right));
}

// Signed rational combination of bracketing trees, kept in canonical
// orientation with identical trees merged (keyed by rendered form).
class LieExpression {
 public:
  struct Term {
    Rat coeff;
    LieTreePtr tree;
  };

  void add(const Rat &c, const LieTreePtr &t) {
    if (c == 0) return;
    auto [sign, canon] = canonical_tree(t);
    std::string key = tree_str(canon);
    for (auto &term : terms_) {
      if (tree_str(term.tree) == key) {
        term.coeff += c * sign;
        if (term.coeff == 0)
          std::erase_if(terms_, [&](const Term &x) { return x.coeff == 0; });
        return;
      }
    }
    terms_.push_back({c * sign, canon});
  }

  void add(const LieExpression &o, const Rat &scale = Rat(1)) {
    for (const auto &t : o.terms_) add(t.coeff * scale, t.tree);
  }

  const std::vector<Term> &terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  NCPolynomial expand() const {
    NCPolynomial p;
    for (const auto &t : terms_) p += expand_tree(t.tree) * t.coeff;
    return p;
  }

  Rat l1_cost() const {
    Rat s = 0;
    for (const auto &t : terms_) s += rat_abs(t.coeff);
    return s;
  }

 private:
  std::vector<Term> terms_;
};

// Bilinear bracket on expressions: [e1, e2] termwise.
inline LieExpression lie_bracket(const LieExpression &a,
                                 const LieExpression &b) {
  LieExpression r;
  for (const auto &ta : a.terms())
    for (const auto &tb : b.terms())
      r.add(ta.coeff * tb.coeff, lie_node(ta.tree, tb.tree));
  return r;
}

// Parses "[[1,2],3]" or "7" (recursive bracket grammar, integer leaves).
inline LieTreePtr parse_tree(const std::string &s, size_t &pos) {
  auto skip_ws = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  };
  skip_ws();
  if (pos >= s.size()) throw std::invalid_argument("tree: unexpected end");
  if (s[pos] == '[') {
    ++pos;
    LieTreePtr l = parse_tree(s, pos);
    skip_ws();
    if (pos >= s.size() || s[pos] != ',')
      throw std::invalid_argument("tree: expected ','");
    ++pos;
    LieTreePtr r = parse_tree(s, pos);
    skip_ws();
    if (pos >= s.size() || s[pos] != ']')
      throw std::invalid_argument("tree: expected ']'");
    ++pos;
    return lie_node(l, r);
  }
  size_t start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
    ++pos;
  if (pos == start) throw std::invalid_argument("tree: expected leaf index");
  return lie_leaf(std::stoi(s.substr(start, pos - start)));
}

inline LieTreePtr parse_tree(const std::string &s) {
  size_t pos = 0;
  LieTreePtr t = parse_tree(s, pos);
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
    ++pos;
  if (pos != s.size()) throw std::invalid_argument("tree: trailing input");
  return t;
}

}  // namespace magnus
