#pragma once

// Polynomial expressions: sums and products of variables and rational
// constants, parentheses, unary minus and non-negative integer powers.
//   3*x^2*y - (x + y)^2 + 1/2*z

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "klift/poly.hpp"

namespace klift {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg), offset(pos) {}
  std::size_t offset;
};

template <class K>
class PolyParser {
 public:
  PolyParser(const PolyRing<K>& R, const std::string& text) : R_(R), s_(text) {}

  Poly<K> parse() {
    Poly<K> p = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, i_); }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  Poly<K> expr() {
    bool minus = eat('-');
    if (!minus) eat('+');
    Poly<K> acc = product();
    if (minus) acc = R_.neg(acc);
    while (true) {
      if (eat('+')) acc = R_.add(acc, product());
      else if (eat('-')) acc = R_.sub(acc, product());
      else break;
    }
    return acc;
  }

  Poly<K> product() {
    Poly<K> acc = power();
    while (true) {
      skip();
      if (eat('*')) {
        acc = R_.mul(acc, power());
      } else if (i_ < s_.size() && s_[i_] == '/') {
        ++i_;
        std::int64_t den = integer();
        if (den == 0) fail("division by zero");
        acc = R_.scale(acc, R_.field().from_ratio(1, den));
      } else {
        break;
      }
    }
    return acc;
  }

  Poly<K> power() {
    Poly<K> base = atom();
    if (eat('^')) {
      std::int64_t e = integer();
      if (e > 1000) fail("exponent too large");
      base = R_.pow(base, static_cast<int>(e));
    }
    return base;
  }

  Poly<K> atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      Poly<K> p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (c == '-') {
      ++i_;
      return R_.neg(power());
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t v = integer();
      return R_.constant(R_.field().from_int(v));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
      std::string name = s_.substr(start, i_ - start);
      auto idx = R_.var_index(name);
      if (!idx) {
        i_ = start;
        fail("unknown variable '" + name + "'");
      }
      return R_.var(*idx);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::int64_t integer() {
    skip();
    std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected an integer");
    if (i_ - start > 18) fail("integer literal too long");
    return std::stoll(s_.substr(start, i_ - start));
  }

  const PolyRing<K>& R_;
  std::string s_;
  std::size_t i_ = 0;
};

template <class K>
Poly<K> parse_poly(const PolyRing<K>& R, const std::string& text) {
  return PolyParser<K>(R, text).parse();
}

}  // namespace klift
