#pragma once

// Homogeneous Buchberger algorithm for submodules of free modules S^r.
//
// The engine is incremental and degree-driven: generators and S-pairs are
// processed in order of degree, so after complete_through(d) the current basis
// is a Groebner basis for everything of degree <= d. This is what lets the
// homological layer test membership and extract minimal generators without
// finishing a full basis.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "klift/poly.hpp"

namespace klift {

// A fixed list of monic reducers with lookup by leading component.
// With any_component set, every reducer is a polynomial (component 0) that is
// applied in whichever component the term lives: reduction modulo I * S^r.
template <class K>
class Reducer {
 public:
  using V = Vec<K>;

  Reducer() = default;
  Reducer(const PolyRing<K>* R, bool any_component = false) : R_(R), any_(any_component) {}

  void add(V v) {
    if (v.is_zero()) return;
    auto& k = R_->field();
    if (!k.is_one(v.lt().c)) v = R_->scale(v, k.inv(v.lt().c));
    std::uint32_t c = any_ ? 0 : v.lt().comp;
    if (by_comp_.size() <= c) by_comp_.resize(c + 1);
    by_comp_[c].push_back(static_cast<int>(b_.size()));
    b_.push_back(std::move(v));
  }

  const std::vector<V>& basis() const { return b_; }
  bool empty() const { return b_.empty(); }
  const PolyRing<K>* ring() const { return R_; }

  // Index of a reducer whose leading monomial divides (comp, m), or -1.
  int find(std::uint32_t comp, const Monomial& m) const {
    std::uint32_t c = any_ ? 0 : comp;
    if (c >= by_comp_.size()) return -1;
    for (int i : by_comp_[c])
      if (b_[i].lt().m.divides(m)) return i;
    return -1;
  }

  bool top_reducible(const V& v) const { return !v.is_zero() && find(v.lt().comp, v.lt().m) >= 0; }

  V normal_form(const V& v) const {
    if (b_.empty()) return v;
    auto& k = R_->field();
    V rest;
    V p = v;
    std::size_t pos = 0;
    while (pos < p.t.size()) {
      const Term<K>& head = p.t[pos];
      int i = find(head.comp, head.m);
      if (i < 0) {
        rest.t.push_back(head);
        ++pos;
        continue;
      }
      const V& g = b_[i];
      Monomial q = g.lt().m.quotient_of(head.m);
      typename K::Elem c = k.neg(head.c);
      V tail;
      tail.t.assign(p.t.begin() + static_cast<std::ptrdiff_t>(pos), p.t.end());
      if (any_ && head.comp != 0)
        p = R_->combine(tail, c, q, R_->place(g, head.comp));
      else
        p = R_->combine(tail, c, q, g);
      pos = 0;
    }
    return rest;
  }

  bool reduces_to_zero(const V& v) const { return normal_form(v).is_zero(); }

 private:
  const PolyRing<K>* R_ = nullptr;
  bool any_ = false;
  std::vector<V> b_;
  std::vector<std::vector<int>> by_comp_;
};

template <class K>
class GBEngine {
 public:
  using V = Vec<K>;

  // shifts[c] is the degree of the basis vector e_c; components beyond the
  // list have shift 0.
  GBEngine(const PolyRing<K>* R, std::vector<int> shifts) : R_(R), shifts_(std::move(shifts)), red_(R) {}

  // Generators with the same group id >= 0 are promised to already form a
  // Groebner basis together, so pairs among them are skipped.
  void add_generator(V v, int group = -1) {
    if (v.is_zero()) return;
    int d = *R_->degree(v, shifts_);
    inputs_.insert({d, seq_++, std::move(v), group});
    complete_ = false;
  }

  int degree_of(const V& v) const { return *R_->degree(v, shifts_); }

  void complete_through(int d) {
    while (true) {
      bool have_pair = !pairs_.empty() && std::get<0>(*pairs_.begin()) <= d;
      bool have_input = !inputs_.empty() && inputs_.begin()->deg <= d;
      if (!have_pair && !have_input) break;
      int dp = have_pair ? std::get<0>(*pairs_.begin()) : INT32_MAX;
      int di = have_input ? inputs_.begin()->deg : INT32_MAX;
      if (have_pair && dp <= di) {
        auto [deg, i, j] = *pairs_.begin();
        pairs_.erase(pairs_.begin());
        pending_[i][j] = 0;
        process_pair(i, j);
      } else {
        Input in = *inputs_.begin();
        inputs_.erase(inputs_.begin());
        process_input(std::move(in));
      }
    }
    done_through_ = std::max(done_through_, d);
  }

  void complete() {
    while (!pairs_.empty() || !inputs_.empty()) {
      int d = INT32_MIN;
      if (!pairs_.empty()) d = std::get<0>(*pairs_.begin());
      if (!inputs_.empty()) d = std::max(d, inputs_.begin()->deg);
      complete_through(d);
    }
    complete_ = true;
  }

  bool is_complete() const { return complete_ || (pairs_.empty() && inputs_.empty()); }

  V normal_form(const V& v) const { return red_.normal_form(v); }
  const std::vector<V>& raw_basis() const { return red_.basis(); }

  // Unique reduced basis: minimal leading terms, tails reduced, monic, sorted.
  std::vector<V> reduced_basis() {
    complete();
    const auto& b = red_.basis();
    std::vector<int> keep;
    for (std::size_t i = 0; i < b.size(); ++i) {
      bool redundant = false;
      for (std::size_t j = 0; j < b.size() && !redundant; ++j)
        if (i != j && b[j].lt().comp == b[i].lt().comp && b[j].lt().m.divides(b[i].lt().m))
          redundant = !(b[j].lt().m == b[i].lt().m) || j < i;
      if (!redundant) keep.push_back(static_cast<int>(i));
    }
    std::vector<V> out;
    for (int i : keep) {
      Reducer<K> others(R_);
      for (int j : keep)
        if (j != i) others.add(b[j]);
      V tail = b[i];
      Term<K> head = tail.t.front();
      tail.t.erase(tail.t.begin());
      V nf = others.normal_form(tail);
      nf.t.insert(nf.t.begin(), head);
      out.push_back(std::move(nf));
    }
    std::sort(out.begin(), out.end(), [&](const V& a, const V& c) { return vec_less(a, c); });
    return out;
  }

  bool vec_less(const V& a, const V& b) const {
    std::size_t n = std::min(a.t.size(), b.t.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& x = a.t[i];
      const auto& y = b.t[i];
      if (x.comp != y.comp || !(x.m == y.m)) return R_->before(x.comp, x.m, y.comp, y.m);
    }
    return a.t.size() < b.t.size();
  }

  std::size_t pairs_reduced() const { return npairs_; }

 private:
  struct Input {
    int deg;
    std::uint64_t seq;
    V v;
    int group;
    bool operator<(const Input& o) const { return std::tie(deg, seq) < std::tie(o.deg, o.seq); }
  };

  void process_input(Input in) {
    V v;
    int group = in.group;
    if (group >= 0 && !red_.top_reducible(in.v)) {
      v = std::move(in.v);
    } else {
      v = red_.normal_form(in.v);
      group = -1;
    }
    if (!v.is_zero()) insert(std::move(v), group);
  }

  void process_pair(int i, int j) {
    const auto& b = red_.basis();
    const V& gi = b[i];
    const V& gj = b[j];
    Monomial l = R_->lcm(gi.lt().m, gj.lt().m);
    std::uint32_t comp = gi.lt().comp;
    // Buchberger's chain criterion.
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (static_cast<int>(k) == i || static_cast<int>(k) == j) continue;
      if (b[k].lt().comp != comp || !b[k].lt().m.divides(l)) continue;
      if (is_pending(i, static_cast<int>(k)) || is_pending(j, static_cast<int>(k))) continue;
      return;
    }
    ++npairs_;
    auto& k = R_->field();
    V s = R_->mul_term(gi, k.one(), gi.lt().m.quotient_of(l));
    s = R_->combine(s, k.neg(k.one()), gj.lt().m.quotient_of(l), gj);
    V h = red_.normal_form(s);
    if (!h.is_zero()) insert(std::move(h), -1);
  }

  bool is_pending(int a, int b) const {
    if (a > b) std::swap(a, b);
    return pending_[a][b] != 0;
  }

  static bool single_component(const V& v) {
    for (auto& x : v.t)
      if (x.comp != v.t.front().comp) return false;
    return true;
  }

  void insert(V v, int group) {
    auto& k = R_->field();
    if (!k.is_one(v.lt().c)) v = R_->scale(v, k.inv(v.lt().c));
    const auto& b = red_.basis();
    int n = static_cast<int>(b.size());
    for (auto& row : pending_) row.push_back(0);
    pending_.emplace_back(n + 1, 0);
    bool pure = single_component(v);
    for (int i = 0; i < n; ++i) {
      if (b[i].lt().comp != v.lt().comp) continue;
      if (group >= 0 && groups_[i] == group) continue;
      if (pure && pure_[i] && b[i].lt().m.coprime(v.lt().m)) continue;
      Monomial l = R_->lcm(b[i].lt().m, v.lt().m);
      int d = l.deg + shift(v.lt().comp);
      pairs_.insert({d, i, n});
      pending_[i][n] = 1;
    }
    groups_.push_back(group);
    pure_.push_back(pure);
    red_.add(std::move(v));
  }

  int shift(std::uint32_t c) const { return c < shifts_.size() ? shifts_[c] : 0; }

  const PolyRing<K>* R_;
  std::vector<int> shifts_;
  Reducer<K> red_;
  std::vector<int> groups_;
  std::vector<char> pure_;
  std::vector<std::vector<char>> pending_;
  std::set<std::tuple<int, int, int>> pairs_;
  std::multiset<Input> inputs_;
  std::uint64_t seq_ = 0;
  int done_through_ = INT32_MIN;
  bool complete_ = true;
  std::size_t npairs_ = 0;
};

// Reduced Groebner basis of a homogeneous ideal.
template <class K>
std::vector<Poly<K>> groebner_basis(const PolyRing<K>& R, const std::vector<Poly<K>>& gens) {
  GBEngine<K> eng(&R, {0});
  for (auto& g : gens) {
    if (!R.is_homogeneous(g)) throw std::invalid_argument("ideal generator is not homogeneous: " + R.to_string(g));
    for (auto& t : g.t)
      if (t.comp != 0) throw std::invalid_argument("ideal generator must be a polynomial");
    eng.add_generator(g);
  }
  return eng.reduced_basis();
}

// S-polynomial of two elements with leading terms in the same component.
template <class K>
Vec<K> s_vector(const PolyRing<K>& R, const Vec<K>& a, const Vec<K>& b) {
  auto& k = R.field();
  Monomial l = R.lcm(a.lt().m, b.lt().m);
  Vec<K> s = R.mul_term(a, k.inv(a.lt().c), a.lt().m.quotient_of(l));
  return R.combine(s, k.neg(k.inv(b.lt().c)), b.lt().m.quotient_of(l), b);
}

// Buchberger's criterion checked directly over all pairs.
template <class K>
bool is_groebner_basis(const PolyRing<K>& R, const std::vector<Vec<K>>& G) {
  Reducer<K> red(&R);
  for (auto& g : G) red.add(g);
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = i + 1; j < G.size(); ++j) {
      if (G[i].lt().comp != G[j].lt().comp) continue;
      if (!red.reduces_to_zero(s_vector(R, G[i], G[j]))) return false;
    }
  return true;
}

}  // namespace klift
