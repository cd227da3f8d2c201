#pragma once

// Graded polynomial rings and sparse vectors over them.
//
// A Vec is a sorted list of terms c * m * e_comp. Terms are ordered by
// component ascending, then monomial descending in the ring order. This is a
// position-over-term module order in which lower components dominate, so the
// leading term is always terms.front() and any GB computed in this order
// eliminates a prefix of components. Polynomials are Vecs in component 0.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "klift/field.hpp"
#include "klift/monomial.hpp"

namespace klift {

template <class K>
struct Term {
  std::uint32_t comp = 0;
  Monomial m;
  typename K::Elem c;
};

template <class K>
struct Vec {
  std::vector<Term<K>> t;

  bool is_zero() const { return t.empty(); }
  const Term<K>& lt() const { return t.front(); }
  std::size_t size() const { return t.size(); }
};

template <class K>
using Poly = Vec<K>;

template <class K>
class PolyRing {
 public:
  using Elem = typename K::Elem;
  using V = Vec<K>;

  PolyRing(K field, std::vector<std::string> names, std::vector<int> weights,
           MonoOrder order = MonoOrder::GRevLex)
      : k_(std::move(field)), names_(std::move(names)), w_(std::move(weights)), order_(order) {
    if (names_.size() != w_.size()) throw std::invalid_argument("variable/degree count mismatch");
    if (static_cast<int>(names_.size()) > kMaxVars)
      throw std::invalid_argument("at most " + std::to_string(kMaxVars) + " variables supported");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (w_[i] < 1) throw std::invalid_argument("degrees must be >= 1");
      for (std::size_t j = 0; j < i; ++j)
        if (names_[i] == names_[j]) throw std::invalid_argument("duplicate variable '" + names_[i] + "'");
    }
  }

  const K& field() const { return k_; }
  int nvars() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<int>& weights() const { return w_; }
  MonoOrder order() const { return order_; }
  std::optional<int> var_index(const std::string& n) const {
    for (int i = 0; i < nvars(); ++i)
      if (names_[i] == n) return i;
    return std::nullopt;
  }

  bool same_as(const PolyRing& o) const {
    return k_ == o.k_ && names_ == o.names_ && w_ == o.w_ && order_ == o.order_;
  }

  // ---- monomials
  Monomial one_monomial() const { return Monomial{}; }
  Monomial var_monomial(int i, int power = 1) const {
    Monomial m;
    m.e[i] = static_cast<std::uint16_t>(power);
    m.deg = w_[i] * power;
    return m;
  }
  Monomial lcm(const Monomial& a, const Monomial& b) const {
    Monomial r;
    int d = 0;
    for (int i = 0; i < kMaxVars; ++i) {
      r.e[i] = std::max(a.e[i], b.e[i]);
      if (i < nvars()) d += w_[i] * r.e[i];
    }
    r.deg = d;
    return r;
  }
  int cmp(const Monomial& a, const Monomial& b) const { return compare_monomials(a, b, order_, nvars()); }

  // Position of terms in a Vec: true if a sorts strictly before b.
  bool before(std::uint32_t ca, const Monomial& a, std::uint32_t cb, const Monomial& b) const {
    if (ca != cb) return ca < cb;
    return cmp(a, b) > 0;
  }

  // ---- constructors
  V zero() const { return V{}; }
  V constant(const Elem& c, std::uint32_t comp = 0) const {
    V v;
    if (!k_.is_zero(c)) v.t.push_back({comp, Monomial{}, c});
    return v;
  }
  V one() const { return constant(k_.one()); }
  V var(int i) const {
    V v;
    v.t.push_back({0, var_monomial(i), k_.one()});
    return v;
  }
  V term(const Elem& c, const Monomial& m, std::uint32_t comp = 0) const {
    V v;
    if (!k_.is_zero(c)) v.t.push_back({comp, m, c});
    return v;
  }
  V basis_vector(std::uint32_t comp) const { return constant(k_.one(), comp); }

  // Builds a vector from unsorted terms, combining duplicates.
  V from_terms(std::vector<Term<K>> ts) const {
    std::sort(ts.begin(), ts.end(), [&](const Term<K>& a, const Term<K>& b) {
      return before(a.comp, a.m, b.comp, b.m);
    });
    V out;
    for (auto& x : ts) {
      if (!out.t.empty() && out.t.back().comp == x.comp && out.t.back().m == x.m) {
        out.t.back().c = k_.add(out.t.back().c, x.c);
        if (k_.is_zero(out.t.back().c)) out.t.pop_back();
      } else if (!k_.is_zero(x.c)) {
        out.t.push_back(std::move(x));
      }
    }
    return out;
  }

  // ---- arithmetic
  V add(const V& a, const V& b) const { return combine(a, k_.one(), Monomial{}, b); }
  V sub(const V& a, const V& b) const { return combine(a, k_.neg(k_.one()), Monomial{}, b); }
  V neg(const V& a) const { return scale(a, k_.neg(k_.one())); }
  V scale(const V& a, const Elem& c) const {
    if (k_.is_zero(c)) return V{};
    V r = a;
    for (auto& x : r.t) x.c = k_.mul(x.c, c);
    return r;
  }
  V mul_term(const V& a, const Elem& c, const Monomial& m) const {
    if (k_.is_zero(c)) return V{};
    V r;
    r.t.reserve(a.t.size());
    for (auto& x : a.t) r.t.push_back({x.comp, x.m * m, k_.mul(x.c, c)});
    return r;
  }
  // a + c*m*b
  V combine(const V& a, const Elem& c, const Monomial& m, const V& b) const {
    V r;
    r.t.reserve(a.t.size() + b.t.size());
    std::size_t i = 0, j = 0;
    while (i < a.t.size() || j < b.t.size()) {
      if (j == b.t.size()) {
        r.t.push_back(a.t[i++]);
        continue;
      }
      Monomial bm = b.t[j].m * m;
      if (i == a.t.size() || before(b.t[j].comp, bm, a.t[i].comp, a.t[i].m)) {
        r.t.push_back({b.t[j].comp, bm, k_.mul(c, b.t[j].c)});
        ++j;
      } else if (a.t[i].comp == b.t[j].comp && a.t[i].m == bm) {
        Elem s = k_.add(a.t[i].c, k_.mul(c, b.t[j].c));
        if (!k_.is_zero(s)) r.t.push_back({a.t[i].comp, a.t[i].m, std::move(s)});
        ++i;
        ++j;
      } else {
        r.t.push_back(a.t[i++]);
      }
    }
    return r;
  }
  // Polynomial p (component 0) times vector v.
  V mul(const V& p, const V& v) const {
    V r;
    for (auto& x : p.t) r = combine(r, x.c, x.m, v);
    return r;
  }
  V pow(const V& p, int n) const {
    V r = one();
    for (int i = 0; i < n; ++i) r = mul(p, r);
    return r;
  }

  // ---- components
  V component(const V& v, std::uint32_t c) const {
    V r;
    for (auto& x : v.t)
      if (x.comp == c) r.t.push_back({0, x.m, x.c});
    return r;
  }
  // Moves a polynomial into component c.
  V place(const V& p, std::uint32_t c) const {
    V r = p;
    for (auto& x : r.t) x.comp = c;
    return r;
  }
  V offset(const V& v, std::int64_t delta) const {
    V r = v;
    for (auto& x : r.t) x.comp = static_cast<std::uint32_t>(static_cast<std::int64_t>(x.comp) + delta);
    return r;
  }
  // Keeps components in [lo, hi), re-indexed from 0.
  V slice(const V& v, std::uint32_t lo, std::uint32_t hi) const {
    V r;
    for (auto& x : v.t)
      if (x.comp >= lo && x.comp < hi) r.t.push_back({x.comp - lo, x.m, x.c});
    return r;
  }
  // v = sum_i v_i e_i with polynomials, then substitute e_i -> images[i].
  V substitute(const V& v, const std::vector<V>& images) const {
    std::map<std::uint32_t, V> parts;
    for (auto& x : v.t) parts[x.comp].t.push_back({0, x.m, x.c});
    V r;
    for (auto& [c, p] : parts) r = add(r, mul(p, images.at(c)));
    return r;
  }

  // ---- grading
  // Degree of a homogeneous vector with generator shifts; nullopt if zero.
  // Throws if inhomogeneous.
  std::optional<int> degree(const V& v, const std::vector<int>& shifts) const {
    if (v.is_zero()) return std::nullopt;
    auto sh = [&](std::uint32_t c) { return c < shifts.size() ? shifts[c] : 0; };
    int d = v.t[0].m.deg + sh(v.t[0].comp);
    for (auto& x : v.t)
      if (x.m.deg + sh(x.comp) != d) throw std::invalid_argument("inhomogeneous element " + to_string(v));
    return d;
  }
  bool is_homogeneous(const V& v, const std::vector<int>& shifts = {}) const {
    if (v.is_zero()) return true;
    auto sh = [&](std::uint32_t c) { return c < shifts.size() ? shifts[c] : 0; };
    int d = v.t[0].m.deg + sh(v.t[0].comp);
    for (auto& x : v.t)
      if (x.m.deg + sh(x.comp) != d) return false;
    return true;
  }
  bool is_constant(const V& p) const { return p.t.size() == 1 && p.t[0].m.is_one(); }

  // ---- printing
  std::string monomial_string(const Monomial& m) const {
    std::string s;
    for (int i = 0; i < nvars(); ++i) {
      if (!m.e[i]) continue;
      if (!s.empty()) s += '*';
      s += names_[i];
      if (m.e[i] > 1) s += '^' + std::to_string(m.e[i]);
    }
    return s;
  }
  std::string to_string(const V& p) const {
    if (p.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (auto& x : p.t)
      if (x.comp != 0) throw std::logic_error("to_string on a vector; use vec_string");
    for (auto& x : p.t) {
      bool negative = k_.is_negative(x.c);
      Elem a = negative ? k_.neg(x.c) : x.c;
      if (first) {
        if (negative) s += '-';
      } else {
        s += negative ? " - " : " + ";
      }
      first = false;
      std::string ms = monomial_string(x.m);
      if (ms.empty()) {
        s += k_.to_string(a);
      } else {
        if (!k_.is_one(a)) s += k_.to_string(a) + '*';
        s += ms;
      }
    }
    return s;
  }
  // Renders each of the first n components.
  std::vector<std::string> vec_strings(const V& v, std::uint32_t n) const {
    std::vector<std::string> out;
    for (std::uint32_t c = 0; c < n; ++c) out.push_back(to_string(component(v, c)));
    return out;
  }
  std::string vec_string(const V& v, std::uint32_t n) const {
    auto parts = vec_strings(v, n);
    std::string s = "[";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? ", " : "") + parts[i];
    return s + "]";
  }

  std::string describe() const {
    std::ostringstream os;
    os << k_.name() << "[";
    for (int i = 0; i < nvars(); ++i) os << (i ? ", " : "") << names_[i] << ":" << w_[i];
    os << "]";
    return os.str();
  }

 private:
  K k_;
  std::vector<std::string> names_;
  std::vector<int> w_;
  MonoOrder order_;
};

template <class K>
bool operator==(const Term<K>& a, const Term<K>& b) {
  return a.comp == b.comp && a.m == b.m && a.c == b.c;
}
template <class K>
bool operator==(const Vec<K>& a, const Vec<K>& b) {
  return a.t == b.t;
}

}  // namespace klift
