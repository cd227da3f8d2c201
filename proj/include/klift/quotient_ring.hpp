#pragma once

// Quotients S/I of a graded polynomial ring by a homogeneous ideal. The ring
// is a cheap shared handle: the reduced Groebner basis of I is computed once
// at construction and every element is kept in normal form.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "klift/groebner.hpp"

namespace klift {

template <class K>
class QuotientRing {
 public:
  using P = Poly<K>;
  using V = Vec<K>;
  using Elem = typename K::Elem;

  QuotientRing(PolyRing<K> S, std::vector<P> gens) {
    auto d = std::make_shared<Data>(std::move(S));
    for (auto& g : gens)
      if (!g.is_zero()) d->gens.push_back(g);
    d->gb = groebner_basis(d->S, d->gens);
    d->red = Reducer<K>(&d->S, true);
    for (auto& g : d->gb) d->red.add(g);
    d_ = std::move(d);
  }
  explicit QuotientRing(PolyRing<K> S) : QuotientRing(std::move(S), {}) {}

  const PolyRing<K>& poly() const { return d_->S; }
  const K& field() const { return d_->S.field(); }
  const std::vector<P>& ideal_generators() const { return d_->gens; }
  const std::vector<P>& ideal_gb() const { return d_->gb; }
  bool is_polynomial_ring() const { return d_->gb.empty(); }

  // Normal form modulo I; applied componentwise to vectors.
  V reduce(const V& v) const { return d_->red.normal_form(v); }
  bool is_zero(const V& v) const { return reduce(v).is_zero(); }
  bool equal(const V& a, const V& b) const { return is_zero(d_->S.sub(a, b)); }

  // True iff the reduced element has no constant term, i.e. lies in the
  // homogeneous maximal ideal.
  bool in_maximal_ideal(const P& p) const {
    for (auto& t : reduce(p).t)
      if (t.m.is_one()) return false;
    return true;
  }

  P mul(const P& a, const P& b) const { return reduce(d_->S.mul(a, b)); }
  P pow(const P& a, int n) const {
    P r = d_->S.one();
    for (int i = 0; i < n; ++i) r = mul(r, a);
    return r;
  }

  // S / (I + extra)
  QuotientRing quotient_by(const std::vector<P>& extra) const {
    std::vector<P> gens = d_->gb;
    for (auto& e : extra) gens.push_back(e);
    return QuotientRing(d_->S, gens);
  }

  bool same_as(const QuotientRing& o) const {
    if (d_ == o.d_) return true;
    return d_->S.same_as(o.d_->S) && d_->gb == o.d_->gb;
  }

  std::string describe() const {
    std::string s = d_->S.describe();
    if (!d_->gb.empty()) {
      s += "/(";
      for (std::size_t i = 0; i < d_->gb.size(); ++i) s += (i ? ", " : "") + d_->S.to_string(d_->gb[i]);
      s += ")";
    }
    return s;
  }

 private:
  struct Data {
    explicit Data(PolyRing<K> s) : S(std::move(s)) {}
    PolyRing<K> S;
    std::vector<P> gens;
    std::vector<P> gb;
    Reducer<K> red;
  };
  std::shared_ptr<const Data> d_;
};

// An element of a quotient ring, stored in normal form.
template <class K>
class RingElem {
 public:
  RingElem(QuotientRing<K> R, const Poly<K>& p) : R_(std::move(R)), nf_(R_.reduce(p)) {}

  const QuotientRing<K>& ring() const { return R_; }
  const Poly<K>& normal_form() const { return nf_; }
  bool is_zero() const { return nf_.is_zero(); }
  // nullopt for zero; throws std::invalid_argument when inhomogeneous.
  std::optional<int> degree() const { return R_.poly().degree(nf_, {}); }
  bool is_homogeneous() const { return R_.poly().is_homogeneous(nf_); }

  RingElem operator+(const RingElem& o) const { return {R_, R_.poly().add(nf_, o.nf_)}; }
  RingElem operator-(const RingElem& o) const { return {R_, R_.poly().sub(nf_, o.nf_)}; }
  RingElem operator*(const RingElem& o) const { return {R_, R_.poly().mul(nf_, o.nf_)}; }
  bool operator==(const RingElem& o) const { return nf_ == o.nf_; }

  std::string to_string() const { return R_.poly().to_string(nf_); }

 private:
  QuotientRing<K> R_;
  Poly<K> nf_;
};

}  // namespace klift
