#pragma once

// Finitely presented graded modules M = R^r(-a) / <relations> over a
// quotient ring R = S/I, and homogeneous maps between them.
//
// An FPModule is an immutable shared handle. The reduced GB of the full
// relation module U = <relations> + I*S^r is computed at construction, so
// element equality, graded pieces and dimensions are all available at once.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "klift/linalg.hpp"
#include "klift/syzygy.hpp"

namespace klift {

template <class K>
class FPModule {
 public:
  using V = Vec<K>;
  using Elem = typename K::Elem;

  struct BasisElem {
    std::uint32_t comp;
    Monomial m;
  };

  FPModule(QuotientRing<K> R, std::vector<int> degs, std::vector<V> rels) {
    auto d = std::make_shared<Data>(std::move(R));
    d->degs = std::move(degs);
    const auto& S = d->R.poly();
    for (auto& v : rels) {
      for (auto& t : v.t)
        if (t.comp >= d->degs.size()) throw std::invalid_argument("relation refers to a missing generator");
      V r = d->R.reduce(v);
      if (r.is_zero()) continue;
      if (!S.is_homogeneous(r, d->degs))
        throw std::invalid_argument("relation is not homogeneous: " + S.vec_string(r, static_cast<std::uint32_t>(d->degs.size())));
      d->rel_degs.push_back(*S.degree(r, d->degs));
      d->rels.push_back(std::move(r));
    }
    GBEngine<K> eng(&S, d->degs);
    for (auto& g : ideal_times_free(d->R, static_cast<std::uint32_t>(d->degs.size()))) eng.add_generator(g, 0);
    for (auto& r : d->rels) eng.add_generator(r, -1);
    d->gb = eng.reduced_basis();
    d->finish();
    d_ = std::move(d);
  }

  static FPModule free(const QuotientRing<K>& R, std::vector<int> degs) { return FPModule(R, std::move(degs), {}); }
  static FPModule zero(const QuotientRing<K>& R) { return FPModule(R, {}, {}); }

  // Trusted constructor: gb must be the reduced GB of rels + I*S^r.
  static FPModule with_gb(const QuotientRing<K>& R, std::vector<int> degs, std::vector<V> rels,
                          std::vector<int> rel_degs, std::vector<V> gb) {
    auto d = std::make_shared<Data>(R);
    d->degs = std::move(degs);
    d->rels = std::move(rels);
    d->rel_degs = std::move(rel_degs);
    d->gb = std::move(gb);
    d->finish();
    FPModule m;
    m.d_ = std::move(d);
    return m;
  }

  const QuotientRing<K>& ring() const { return d_->R; }
  const PolyRing<K>& poly() const { return d_->R.poly(); }
  const K& field() const { return d_->R.field(); }
  std::uint32_t rank() const { return static_cast<std::uint32_t>(d_->degs.size()); }
  const std::vector<int>& degs() const { return d_->degs; }
  const std::vector<V>& rels() const { return d_->rels; }
  const std::vector<int>& rel_degs() const { return d_->rel_degs; }
  const std::vector<V>& gb() const { return d_->gb; }
  bool same_object(const FPModule& o) const { return d_ == o.d_; }

  V reduce(const V& v) const { return d_->red.normal_form(v); }
  bool is_zero(const V& v) const { return reduce(v).is_zero(); }
  bool equal(const V& a, const V& b) const { return is_zero(poly().sub(a, b)); }
  V gen(std::uint32_t c) const { return poly().basis_vector(c); }

  bool is_zero_module() const {
    for (std::uint32_t c = 0; c < rank(); ++c)
      if (!is_zero(gen(c))) return false;
    return true;
  }
  bool is_free() const { return d_->rels.empty(); }

  // M(-s): every generator degree raised by s.
  FPModule shift(int s) const {
    if (s == 0) return *this;
    std::vector<int> degs = d_->degs;
    for (auto& x : degs) x += s;
    std::vector<int> rd = d_->rel_degs;
    for (auto& x : rd) x += s;
    return with_gb(d_->R, degs, d_->rels, rd, d_->gb);
  }

  // Standard monomials of degree d (a basis of M_d), in term order.
  const std::vector<BasisElem>& basis(int d) const {
    std::lock_guard<std::mutex> lock(d_->mu);
    auto it = d_->basis_cache.find(d);
    if (it != d_->basis_cache.end()) return it->second.elems;
    Graded g;
    const auto& S = poly();
    for (std::uint32_t c = 0; c < rank(); ++c) {
      std::vector<Monomial> ms;
      for_each_monomial_of_degree(S.weights(), d - d_->degs[c], [&](const Monomial& m) {
        if (d_->red.find(c, m) < 0) ms.push_back(m);
      });
      std::sort(ms.begin(), ms.end(), [&](const Monomial& a, const Monomial& b) { return S.cmp(a, b) > 0; });
      for (auto& m : ms) {
        g.index[key(c, m)] = g.elems.size();
        g.elems.push_back({c, m});
      }
    }
    return d_->basis_cache.emplace(d, std::move(g)).first->second.elems;
  }

  std::size_t dim(int d) const { return basis(d).size(); }

  // Coordinates of a homogeneous element of degree d in basis(d).
  std::vector<Elem> coords(const V& v, int d) const {
    basis(d);
    V nf = reduce(v);
    std::vector<Elem> x(dim(d), field().zero());
    std::lock_guard<std::mutex> lock(d_->mu);
    const auto& g = d_->basis_cache.at(d);
    for (auto& t : nf.t) {
      auto it = g.index.find(key(t.comp, t.m));
      if (it == g.index.end()) throw std::invalid_argument("coords: element is not of degree " + std::to_string(d));
      x[it->second] = t.c;
    }
    return x;
  }

  V from_coords(const std::vector<Elem>& x, int d) const {
    const auto& b = basis(d);
    std::vector<Term<K>> ts;
    for (std::size_t i = 0; i < b.size(); ++i)
      if (!field().is_zero(x[i])) ts.push_back({b[i].comp, b[i].m, x[i]});
    return poly().from_terms(ts);
  }

  V basis_vector(int d, std::size_t i) const {
    const auto& b = basis(d)[i];
    return poly().term(field().one(), b.m, b.comp);
  }

  // Finite length iff each component's leading-term ideal contains a pure
  // power of every variable.
  bool finite_length() const {
    const auto& S = poly();
    for (std::uint32_t c = 0; c < rank(); ++c) {
      for (int v = 0; v < S.nvars(); ++v) {
        bool found = false;
        for (auto& g : d_->gb) {
          if (g.lt().comp != c) continue;
          const auto& m = g.lt().m;
          bool pure = m.e[v] > 0;
          for (int u = 0; u < S.nvars() && pure; ++u)
            if (u != v && m.e[u]) pure = false;
          if (pure) {
            found = true;
            break;
          }
        }
        if (!found) return false;
      }
    }
    return true;
  }

  int min_degree() const {
    if (rank() == 0) return 0;
    return *std::min_element(d_->degs.begin(), d_->degs.end());
  }

  // Largest degree with M_d != 0 for finite-length modules.
  std::optional<int> top_degree() const {
    if (!finite_length()) return std::nullopt;
    const auto& S = poly();
    int best = INT32_MIN;
    for (std::uint32_t c = 0; c < rank(); ++c) {
      int bound = d_->degs[c];
      for (int v = 0; v < S.nvars(); ++v) {
        int e = INT32_MAX;
        for (auto& g : d_->gb) {
          if (g.lt().comp != c) continue;
          const auto& m = g.lt().m;
          bool pure = m.e[v] > 0;
          for (int u = 0; u < S.nvars() && pure; ++u)
            if (u != v && m.e[u]) pure = false;
          if (pure) e = std::min(e, static_cast<int>(m.e[v]));
        }
        bound += (e - 1) * S.weights()[v];
      }
      for (int d = bound; d >= d_->degs[c]; --d) {
        bool any = false;
        for (auto& b : basis(d))
          if (b.comp == c) {
            any = true;
            break;
          }
        if (any) {
          best = std::max(best, d);
          break;
        }
      }
    }
    if (best == INT32_MIN) return std::nullopt;
    return best;
  }

  std::vector<long> hilbert(int lo, int hi) const {
    std::vector<long> out;
    for (int d = lo; d <= hi; ++d) out.push_back(static_cast<long>(dim(d)));
    return out;
  }

  std::string describe() const {
    std::ostringstream os;
    os << "coker(";
    for (std::size_t i = 0; i < d_->degs.size(); ++i) os << (i ? "," : "") << "R(" << -d_->degs[i] << ")";
    if (d_->degs.empty()) os << "0";
    os << "; " << d_->rels.size() << " relations)";
    return os.str();
  }

  std::vector<std::vector<std::string>> relation_strings() const {
    std::vector<std::vector<std::string>> out;
    for (auto& r : d_->rels) out.push_back(poly().vec_strings(r, rank()));
    return out;
  }

 private:
  FPModule() = default;

  static std::string key(std::uint32_t c, const Monomial& m) {
    std::string s(reinterpret_cast<const char*>(&c), sizeof(c));
    s.append(reinterpret_cast<const char*>(m.e.data()), sizeof(m.e));
    return s;
  }

  struct Graded {
    std::vector<BasisElem> elems;
    std::unordered_map<std::string, std::size_t> index;
  };

  struct Data {
    explicit Data(QuotientRing<K> r) : R(std::move(r)) {}
    void finish() {
      red = Reducer<K>(&R.poly());
      for (auto& g : gb) red.add(g);
    }
    QuotientRing<K> R;
    std::vector<int> degs;
    std::vector<V> rels;
    std::vector<int> rel_degs;
    std::vector<V> gb;
    Reducer<K> red;
    mutable std::mutex mu;
    mutable std::map<int, Graded> basis_cache;
  };

  std::shared_ptr<const Data> d_;
};

// Homogeneous map sending generator e_c of the source to images[c] in the
// target; degree d maps to degree d + twist.
template <class K>
class ModuleMap {
 public:
  using V = Vec<K>;
  using Elem = typename K::Elem;

  ModuleMap(FPModule<K> src, FPModule<K> tgt, std::vector<V> images, int twist = 0, bool verify = true)
      : src_(std::move(src)), tgt_(std::move(tgt)), twist_(twist) {
    if (images.size() != src_.rank()) throw std::invalid_argument("map: wrong number of images");
    const auto& S = tgt_.poly();
    for (std::uint32_t c = 0; c < images.size(); ++c) {
      for (auto& t : images[c].t)
        if (t.comp >= tgt_.rank()) throw std::invalid_argument("map: image outside the target");
      V im = tgt_.reduce(images[c]);
      if (!im.is_zero()) {
        if (!S.is_homogeneous(im, tgt_.degs()))
          throw std::invalid_argument("map: image of generator " + std::to_string(c) + " is not homogeneous");
        int d = *S.degree(im, tgt_.degs());
        if (d != src_.degs()[c] + twist)
          throw std::invalid_argument("map: image of generator " + std::to_string(c) + " has degree " +
                                      std::to_string(d) + ", expected " + std::to_string(src_.degs()[c] + twist));
      }
      img_.push_back(std::move(im));
    }
    if (verify && !well_defined()) throw std::invalid_argument("map is not well defined on the source relations");
  }

  static ModuleMap identity(const FPModule<K>& M) {
    std::vector<V> im;
    for (std::uint32_t c = 0; c < M.rank(); ++c) im.push_back(M.gen(c));
    return ModuleMap(M, M, im, 0, false);
  }
  static ModuleMap zero(const FPModule<K>& A, const FPModule<K>& B, int twist = 0) {
    return ModuleMap(A, B, std::vector<V>(A.rank()), twist, false);
  }
  // Multiplication by a homogeneous ring element f on M.
  static ModuleMap multiplication(const FPModule<K>& M, const Poly<K>& f) {
    const auto& S = M.poly();
    int df = f.is_zero() ? 0 : *S.degree(f, {});
    std::vector<V> im;
    for (std::uint32_t c = 0; c < M.rank(); ++c) im.push_back(S.mul(f, M.gen(c)));
    return ModuleMap(M, M, im, df, false);
  }

  const FPModule<K>& source() const { return src_; }
  const FPModule<K>& target() const { return tgt_; }
  const std::vector<V>& images() const { return img_; }
  int twist() const { return twist_; }

  bool well_defined() const {
    const auto& S = tgt_.poly();
    for (auto& r : src_.rels())
      if (!tgt_.is_zero(S.substitute(r, img_))) return false;
    return true;
  }

  V apply(const V& v) const { return tgt_.reduce(tgt_.poly().substitute(v, img_)); }

  // this o g
  ModuleMap after(const ModuleMap& g) const {
    std::vector<V> im;
    for (auto& x : g.images()) im.push_back(apply(x));
    return ModuleMap(g.source(), tgt_, im, twist_ + g.twist(), false);
  }
  ModuleMap plus(const ModuleMap& o) const {
    if (o.twist_ != twist_) throw std::invalid_argument("map sum: twists differ");
    std::vector<V> im;
    for (std::size_t c = 0; c < img_.size(); ++c) im.push_back(tgt_.poly().add(img_[c], o.img_[c]));
    return ModuleMap(src_, tgt_, im, twist_, false);
  }
  ModuleMap scaled(const Elem& a) const {
    std::vector<V> im;
    for (auto& x : img_) im.push_back(tgt_.poly().scale(x, a));
    return ModuleMap(src_, tgt_, im, twist_, false);
  }
  ModuleMap negated() const { return scaled(tgt_.field().neg(tgt_.field().one())); }

  bool is_zero() const {
    for (auto& x : img_)
      if (!x.is_zero()) return false;
    return true;
  }
  bool equals(const ModuleMap& o) const {
    if (o.twist_ != twist_ || o.img_.size() != img_.size()) return false;
    for (std::size_t c = 0; c < img_.size(); ++c)
      if (!tgt_.equal(img_[c], o.img_[c])) return false;
    return true;
  }

  // Matrix of M_d -> N_{d+twist} in the standard monomial bases.
  Matrix<K> matrix_at(int d) const {
    const auto& S = tgt_.poly();
    const auto& b = src_.basis(d);
    std::size_t rows = tgt_.dim(d + twist_);
    Matrix<K> m(tgt_.field(), rows, b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
      V x = S.mul_term(img_[b[j].comp], tgt_.field().one(), b[j].m);
      auto col = tgt_.coords(x, d + twist_);
      for (std::size_t i = 0; i < rows; ++i) m.at(i, j) = col[i];
    }
    return m;
  }

  std::vector<std::vector<std::string>> image_strings() const {
    std::vector<std::vector<std::string>> out;
    for (auto& x : img_) out.push_back(tgt_.poly().vec_strings(x, tgt_.rank()));
    return out;
  }

 private:
  FPModule<K> src_, tgt_;
  std::vector<V> img_;
  int twist_ = 0;
};

}  // namespace klift
