#pragma once

#include <magnus/rational.hpp>
#include <magnus/word.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace magnus {

// Noncommutative polynomial over Q: finitely supported Word -> Rat map.
// degree_cap < 0 means untruncated; otherwise words longer than the cap
// are dropped on every mutation, so arithmetic stays closed under the cap.
class NCPolynomial {
 public:
  using TermMap = std::map<Word, Rat, WordLess>;

  NCPolynomial() = default;
  explicit NCPolynomial(const Rat &c, int cap = -1) : cap_(cap) {
    add_term(Word{}, c);
  }

  static NCPolynomial variable(int i, int cap = -1) {
    NCPolynomial p;
    p.cap_ = cap;
    p.add_term(Word{i}, Rat(1));
    return p;
  }
  static NCPolynomial monomial(const Word &w, const Rat &c, int cap = -1) {
    NCPolynomial p;
    p.cap_ = cap;
    p.add_term(w, c);
    return p;
  }

  const TermMap &terms() const { return terms_; }
  int degree_cap() const { return cap_; }
  void set_degree_cap(int cap) {
    cap_ = cap;
    if (cap_ >= 0)
      std::erase_if(terms_, [&](const auto &t) {
        return static_cast<int>(t.first.size()) > cap_;
      });
  }

  bool is_zero() const { return terms_.empty(); }

  Rat coeff(const Word &w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Rat(0) : it->second;
  }

  void add_term(const Word &w, const Rat &c) {
    if (c == 0) return;
    if (cap_ >= 0 && static_cast<int>(w.size()) > cap_) return;
    auto [it, fresh] = terms_.emplace(w, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  int degree() const {
    int d = 0;
    for (const auto &[w, c] : terms_) d = std::max<int>(d, w.size());
    return d;
  }

  bool is_homogeneous(int *deg_out = nullptr) const {
    if (terms_.empty()) return true;
    size_t d = terms_.begin()->first.size();
    for (const auto &[w, c] : terms_)
      if (w.size() != d) return false;
    if (deg_out) *deg_out = static_cast<int>(d);
    return true;
  }

  // Keeps only words of the given length.
  NCPolynomial homogeneous_part(int deg) const {
    NCPolynomial r;
    r.cap_ = cap_;
    for (const auto &[w, c] : terms_)
      if (static_cast<int>(w.size()) == deg) r.add_term(w, c);
    return r;
  }

  NCPolynomial &operator+=(const NCPolynomial &o) {
    merge_cap(o.cap_);
    for (const auto &[w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  NCPolynomial &operator-=(const NCPolynomial &o) {
    merge_cap(o.cap_);
    for (const auto &[w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  NCPolynomial &operator*=(const Rat &s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto &[w, c] : terms_) c *= s;
    return *this;
  }

  friend NCPolynomial operator+(NCPolynomial a, const NCPolynomial &b) {
    a += b;
    return a;
  }
  friend NCPolynomial operator-(NCPolynomial a, const NCPolynomial &b) {
    a -= b;
    return a;
  }
  friend NCPolynomial operator-(NCPolynomial a) {
    for (auto &[w, c] : a.terms_) c = -c;
    return a;
  }
  friend NCPolynomial operator*(NCPolynomial a, const Rat &s) {
    a *= s;
    return a;
  }
  friend NCPolynomial operator*(const Rat &s, NCPolynomial a) {
    a *= s;
    return a;
  }

  friend NCPolynomial operator*(const NCPolynomial &a, const NCPolynomial &b) {
    NCPolynomial r;
    r.cap_ = combined_cap(a.cap_, b.cap_);
    for (const auto &[wa, ca] : a.terms_) {
      if (r.cap_ >= 0 && static_cast<int>(wa.size()) > r.cap_) continue;
      for (const auto &[wb, cb] : b.terms_) {
        if (r.cap_ >= 0 &&
            static_cast<int>(wa.size() + wb.size()) > r.cap_)
          continue;
        r.add_term(word_cat(wa, wb), ca * cb);
      }
    }
    return r;
  }

  friend bool operator==(const NCPolynomial &a, const NCPolynomial &b) {
    return a.terms_ == b.terms_;
  }

  static int combined_cap(int a, int b) {
    if (a < 0) return b;
    if (b < 0) return a;
    return std::min(a, b);
  }

 private:
  void merge_cap(int other) { set_degree_cap(combined_cap(cap_, other)); }

  TermMap terms_;
  int cap_ = -1;
};

inline NCPolynomial commutator(const NCPolynomial &p, const NCPolynomial &q) {
  return p * q - q * p;
}

inline Rat l1_norm(const NCPolynomial &p) {
  Rat s = 0;
  for (const auto &[w, c] : p.terms()) s += rat_abs(c);
  return s;
}

// exp as a truncated series; requires zero constant term.
inline NCPolynomial truncated_exp(const NCPolynomial &p, int N) {
  if (p.coeff(Word{}) != 0)
    throw std::domain_error("truncated_exp: nonzero constant term");
  NCPolynomial x = p;
  x.set_degree_cap(NCPolynomial::combined_cap(p.degree_cap(), N));
  NCPolynomial r(Rat(1), N);
  NCPolynomial pow(Rat(1), N);
  Rat fact = 1;
  for (int j = 1; j <= N; ++j) {
    pow = pow * x;
    if (pow.is_zero()) break;
    fact *= j;
    r += pow * Rat(1, fact);
  }
  return r;
}

// log as a truncated series around 1; requires constant term exactly 1.
inline NCPolynomial truncated_log(const NCPolynomial &q, int N) {
  if (q.coeff(Word{}) != 1)
    throw std::domain_error("truncated_log: constant term must be 1");
  NCPolynomial u = q - NCPolynomial(Rat(1));
  u.set_degree_cap(NCPolynomial::combined_cap(q.degree_cap(), N));
  NCPolynomial r;
  NCPolynomial pow(Rat(1), N);
  for (int j = 1; j <= N; ++j) {
    pow = pow * u;
    if (pow.is_zero()) break;
    r += pow * Rat(j % 2 == 1 ? 1 : -1, j);
  }
  return r;
}

// Dynkin left-bracketing map w1...wk -> [w1,[...,[w_{k-1},wk]...]] termwise.
// On a Lie element of degree k this multiplies by k.
inline NCPolynomial dsw_map(const NCPolynomial &p) {
  int deg = 0;
  if (!p.is_homogeneous(&deg) || p.is_zero() || deg < 1)
    throw std::domain_error("dsw_map: input must be homogeneous of degree >= 1");
  NCPolynomial r;
  for (const auto &[w, c] : p.terms()) {
    NCPolynomial cur = NCPolynomial::variable(w.back());
    for (size_t i = w.size() - 1; i-- > 0;)
      cur = commutator(NCPolynomial::variable(w[i]), cur);
    r += cur * c;
  }
  return r;
}

// Deterministic JSON rendering {"X1X2": "1/2", ...}; map order is canonical.
inline std::string poly_json(const NCPolynomial &p) {
  std::string s = "{";
  bool first = true;
  for (const auto &[w, c] : p.terms()) {
    if (!first) s += ",";
    first = false;
    s += "\"" + word_str(w) + "\":\"" + rat_str(c) + "\"";
  }
  s += "}";
  return s;
}

}  // namespace magnus
