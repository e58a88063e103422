#pragma once

#include <magnus/ncpoly.hpp>

#include <cctype>
#include <stdexcept>
#include <string>

namespace magnus {

// Recursive-descent parser for the textual polynomial grammar:
//   expr    := ['+'|'-'] term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := primary ('^' uint)?
//   primary := rational | 'X' uint | 'X' | 'Y' | '[' expr ',' expr ']'
//            | '(' expr ')'
// Bare X and Y alias X1 and X2 for two-variable contexts.
class PolyParser {
 public:
  explicit PolyParser(std::string src) : s_(std::move(src)) {}

  NCPolynomial parse() {
    NCPolynomial p = expr();
    skip_ws();
    if (pos_ != s_.size())
      throw std::invalid_argument("polynomial: trailing input at " +
                                  std::to_string(pos_));
    return p;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() &&
           std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool eat(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  unsigned parse_uint() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() &&
           std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (pos_ == start) throw std::invalid_argument("polynomial: expected digits");
    return static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start)));
  }

  NCPolynomial expr() {
    int sign = 1;
    if (eat('-'))
      sign = -1;
    else
      eat('+');
    NCPolynomial p = term() * Rat(sign);
    for (;;) {
      if (eat('+'))
        p += term();
      else if (eat('-'))
        p -= term();
      else
        return p;
    }
  }

  NCPolynomial term() {
    NCPolynomial p = factor();
    while (eat('*')) p = p * factor();
    return p;
  }

  NCPolynomial factor() {
    NCPolynomial p = primary();
    if (eat('^')) {
      unsigned e = parse_uint();
      NCPolynomial r(Rat(1));
      for (unsigned i = 0; i < e; ++i) r = r * p;
      return r;
    }
    return p;
  }

  NCPolynomial primary() {
    skip_ws();
    if (pos_ >= s_.size())
      throw std::invalid_argument("polynomial: unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NCPolynomial p = expr();
      if (!eat(')')) throw std::invalid_argument("polynomial: expected ')'");
      return p;
    }
    if (c == '[') {
      ++pos_;
      NCPolynomial a = expr();
      if (!eat(',')) throw std::invalid_argument("polynomial: expected ','");
      NCPolynomial b = expr();
      if (!eat(']')) throw std::invalid_argument("polynomial: expected ']'");
      return commutator(a, b);
    }
    if (c == 'X' || c == 'x') {
      ++pos_;
      if (pos_ < s_.size() &&
          std::isdigit(static_cast<unsigned char>(s_[pos_])))
        return NCPolynomial::variable(static_cast<int>(parse_uint()));
      return NCPolynomial::variable(1);
    }
    if (c == 'Y' || c == 'y') {
      ++pos_;
      return NCPolynomial::variable(2);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Int num(static_cast<long>(parse_uint()));
      if (eat('/')) {
        Int den(static_cast<long>(parse_uint()));
        if (den == 0) throw std::invalid_argument("polynomial: zero denominator");
        return NCPolynomial(Rat(num, den));
      }
      return NCPolynomial(Rat(num));
    }
    throw std::invalid_argument(std::string("polynomial: unexpected '") + c +
                                "'");
  }

  std::string s_;
  size_t pos_ = 0;
};

inline NCPolynomial parse_poly(const std::string &s) {
  return PolyParser(s).parse();
}

}  // namespace magnus
