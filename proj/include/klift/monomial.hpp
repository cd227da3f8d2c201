#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace klift {

inline constexpr int kMaxVars = 16;

enum class MonoOrder { GRevLex, Lex, DegLex };

inline std::string order_name(MonoOrder o) {
  switch (o) {
    case MonoOrder::GRevLex: return "grevlex";
    case MonoOrder::Lex: return "lex";
    case MonoOrder::DegLex: return "deglex";
  }
  return "?";
}

inline MonoOrder parse_order(const std::string& s) {
  if (s == "grevlex") return MonoOrder::GRevLex;
  if (s == "lex") return MonoOrder::Lex;
  if (s == "deglex") return MonoOrder::DegLex;
  throw std::invalid_argument("unknown monomial order '" + s + "'");
}

// Exponent vector plus its weighted degree. The degree is filled in by the
// owning ring, which knows the variable weights.
struct Monomial {
  std::array<std::uint16_t, kMaxVars> e{};
  std::int32_t deg = 0;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }

  bool is_one() const {
    for (auto x : e)
      if (x) return false;
    return true;
  }
  bool divides(const Monomial& b) const {
    for (int i = 0; i < kMaxVars; ++i)
      if (e[i] > b.e[i]) return false;
    return true;
  }
  // Requires divides(b).
  Monomial quotient_of(const Monomial& b) const {
    Monomial q;
    for (int i = 0; i < kMaxVars; ++i) q.e[i] = b.e[i] - e[i];
    q.deg = b.deg - deg;
    return q;
  }
  Monomial operator*(const Monomial& b) const {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) {
      unsigned s = unsigned{e[i]} + b.e[i];
      if (s > 0xffff) throw std::overflow_error("exponent overflow");
      r.e[i] = static_cast<std::uint16_t>(s);
    }
    r.deg = deg + b.deg;
    return r;
  }
  bool coprime(const Monomial& b) const {
    for (int i = 0; i < kMaxVars; ++i)
      if (e[i] && b.e[i]) return false;
    return true;
  }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : m.e) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

// Returns -1, 0, 1 for a < b, a == b, a > b.
inline int compare_monomials(const Monomial& a, const Monomial& b, MonoOrder o, int nvars) {
  switch (o) {
    case MonoOrder::GRevLex:
      if (a.deg != b.deg) return a.deg < b.deg ? -1 : 1;
      for (int i = nvars - 1; i >= 0; --i)
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? -1 : 1;
      return 0;
    case MonoOrder::DegLex:
      if (a.deg != b.deg) return a.deg < b.deg ? -1 : 1;
      [[fallthrough]];
    case MonoOrder::Lex:
      for (int i = 0; i < nvars; ++i)
        if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? -1 : 1;
      return 0;
  }
  return 0;
}

// All exponent vectors of weighted degree d, in decreasing lex order of
// exponents (deterministic; callers re-sort when they need the ring order).
inline void for_each_monomial_of_degree(const std::vector<int>& weights, int d,
                                        const std::function<void(const Monomial&)>& fn) {
  if (d < 0) return;
  const int n = static_cast<int>(weights.size());
  Monomial m;
  m.deg = d;
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n) {
      if (left == 0) fn(m);
      return;
    }
    if (i == n - 1) {
      if (left % weights[i] == 0) {
        m.e[i] = static_cast<std::uint16_t>(left / weights[i]);
        fn(m);
        m.e[i] = 0;
      }
      return;
    }
    for (int k = left / weights[i]; k >= 0; --k) {
      m.e[i] = static_cast<std::uint16_t>(k);
      rec(i + 1, left - k * weights[i]);
    }
    m.e[i] = 0;
  };
  rec(0, d);
}

}  // namespace klift
