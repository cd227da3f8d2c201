#pragma once

// Syzygies and lifting by elimination.
//
// To study vectors v_1..v_m in S^r modulo a submodule D, we compute a GB of
//   {(v_i, e_{r+i})} + {(d, 0) : d in D} + {(0, g e_{r+i}) : g in GB(I)}
// in S^{r+m}. Under the position-over-term order the first r components
// dominate, so the basis elements that vanish there generate
//   { c : sum c_i v_i in D }
// and the normal form of (w, 0) is (0, -c) exactly when w = sum c_i v_i mod D.

#include <optional>
#include <stdexcept>
#include <vector>

#include "klift/quotient_ring.hpp"

namespace klift {

// I * e_c for every component c < r, as vectors.
template <class K>
std::vector<Vec<K>> ideal_times_free(const QuotientRing<K>& R, std::uint32_t r) {
  std::vector<Vec<K>> out;
  for (std::uint32_t c = 0; c < r; ++c)
    for (auto& g : R.ideal_gb()) out.push_back(R.poly().place(g, c));
  return out;
}

template <class K>
class ElimEngine {
 public:
  using V = Vec<K>;

  // D is spanned by den_gb, which must be a Groebner basis (of a module
  // containing I*e_c when working over S/I), together with den_extra.
  ElimEngine(const QuotientRing<K>& R, const std::vector<int>& ambient_shifts, const std::vector<V>& nums,
             const std::vector<int>& num_degs, const std::vector<V>& den_gb, const std::vector<V>& den_extra = {})
      : R_(R), r_(static_cast<std::uint32_t>(ambient_shifts.size())),
        m_(static_cast<std::uint32_t>(nums.size())), eng_(&R.poly(), make_shifts(ambient_shifts, num_degs)) {
    if (nums.size() != num_degs.size()) throw std::invalid_argument("ElimEngine: degree list mismatch");
    const auto& S = R.poly();
    for (auto& d : den_gb) eng_.add_generator(d, 0);
    for (auto& d : den_extra) eng_.add_generator(d, -1);
    for (std::uint32_t i = 0; i < m_; ++i) {
      if (!nums[i].is_zero()) {
        auto dg = S.degree(nums[i], ambient_shifts);
        if (*dg != num_degs[i]) throw std::invalid_argument("ElimEngine: vector degree does not match declared degree");
      }
      eng_.add_generator(S.add(nums[i], S.basis_vector(r_ + i)), -1);
      for (auto& g : R.ideal_gb()) eng_.add_generator(S.place(g, r_ + i), 1);
    }
  }

  std::uint32_t ambient_rank() const { return r_; }
  std::uint32_t num_count() const { return m_; }

  // Generators (a reduced GB) of { c in S^m : sum c_i v_i in D } modulo I.
  std::vector<V> syzygies() {
    std::vector<V> out;
    for (auto& g : eng_.reduced_basis()) {
      if (g.lt().comp < r_) continue;
      V c = R_.poly().offset(g, -static_cast<std::int64_t>(r_));
      c = R_.reduce(c);
      if (!c.is_zero()) out.push_back(std::move(c));
    }
    return out;
  }

  // c with w = sum c_i v_i modulo D, or nullopt. w must be homogeneous.
  std::optional<V> lift(const V& w) {
    if (w.is_zero()) return V{};
    int d = eng_.degree_of(w);
    eng_.complete_through(d);
    V nf = eng_.normal_form(w);
    if (!nf.is_zero() && nf.lt().comp < r_) return std::nullopt;
    return R_.reduce(R_.poly().neg(R_.poly().offset(nf, -static_cast<std::int64_t>(r_))));
  }

  bool contains(const V& w) {
    if (w.is_zero()) return true;
    eng_.complete_through(eng_.degree_of(w));
    V nf = eng_.normal_form(w);
    return nf.is_zero() || nf.lt().comp >= r_;
  }

 private:
  static std::vector<int> make_shifts(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> s = a;
    s.insert(s.end(), b.begin(), b.end());
    return s;
  }

  QuotientRing<K> R_;
  std::uint32_t r_, m_;
  GBEngine<K> eng_;
};

// Membership in a submodule of S^r (generators need not be a GB). The
// submodule is taken as is; add I*e_c to work over S/I.
template <class K>
class SubmoduleMembership {
 public:
  using V = Vec<K>;
  SubmoduleMembership(const PolyRing<K>& S, const std::vector<int>& shifts, const std::vector<V>& gens,
                      int known_gb_group = -1)
      : eng_(&S, shifts) {
    for (auto& g : gens) eng_.add_generator(g, known_gb_group);
  }
  void add(const V& g, int group = -1) { eng_.add_generator(g, group); }
  bool contains(const V& w) {
    if (w.is_zero()) return true;
    eng_.complete_through(eng_.degree_of(w));
    return eng_.normal_form(w).is_zero();
  }
  V normal_form(const V& w) {
    if (w.is_zero()) return w;
    eng_.complete_through(eng_.degree_of(w));
    return eng_.normal_form(w);
  }
  GBEngine<K>& engine() { return eng_; }

 private:
  GBEngine<K> eng_;
};

// Syzygy module of rows v_1..v_m of a free module over R = S/I: generators
// c with sum c_i v_i = 0 in R^r. Zero rows need explicit degrees.
template <class K>
std::vector<Vec<K>> syzygies(const QuotientRing<K>& R, const std::vector<int>& shifts,
                             const std::vector<Vec<K>>& rows, std::vector<int> row_degs = {}) {
  const auto& S = R.poly();
  if (row_degs.empty()) {
    for (auto& v : rows) {
      if (v.is_zero()) throw std::invalid_argument("syzygies: zero row needs an explicit degree");
      row_degs.push_back(*S.degree(v, shifts));
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!S.is_homogeneous(rows[i], shifts)) throw std::invalid_argument("syzygies: row is not homogeneous");
    if (!rows[i].is_zero() && *S.degree(rows[i], shifts) != row_degs[i])
      throw std::invalid_argument("syzygies: inconsistent row degree");
  }
  ElimEngine<K> e(R, shifts, rows, row_degs, ideal_times_free(R, static_cast<std::uint32_t>(shifts.size())));
  return e.syzygies();
}

}  // namespace klift
