#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "klift/fp_module.hpp"
#include "klift/parse_poly.hpp"
#include "klift/quotient_ring.hpp"
#include "oracle/brute.hpp"

namespace testutil {

using K = klift::PrimeField;
using V = klift::Vec<K>;

inline klift::PolyRing<K> poly_ring(std::uint32_t p, std::vector<std::string> names, std::vector<int> w = {}) {
  if (w.empty()) w.assign(names.size(), 1);
  return klift::PolyRing<K>(K(p), std::move(names), std::move(w));
}

inline klift::QuotientRing<K> ring(std::uint32_t p, std::vector<std::string> names,
                                   std::vector<std::string> ideal = {}, std::vector<int> w = {}) {
  auto S = poly_ring(p, std::move(names), std::move(w));
  std::vector<V> gens;
  for (auto& g : ideal) gens.push_back(klift::parse_poly(S, g));
  return klift::QuotientRing<K>(S, gens);
}

inline V P(const klift::QuotientRing<K>& R, const std::string& s) { return klift::parse_poly(R.poly(), s); }

// Random homogeneous polynomial of weighted degree d.
inline V random_poly(const klift::PolyRing<K>& S, int d, std::mt19937_64& rng, double density = 0.6) {
  std::vector<klift::Term<K>> ts;
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<std::uint32_t> c(1, S.field().characteristic() - 1);
  klift::for_each_monomial_of_degree(S.weights(), d, [&](const klift::Monomial& m) {
    if (u(rng) < density) ts.push_back({0, m, c(rng)});
  });
  return S.from_terms(ts);
}

inline oracle::NPoly to_oracle(const klift::PolyRing<K>& S, const V& p, std::uint32_t comp = 0) {
  oracle::NPoly r;
  for (auto& t : p.t) {
    if (t.comp != comp) continue;
    oracle::Exps e(S.nvars());
    for (int i = 0; i < S.nvars(); ++i) e[i] = t.m.e[i];
    r[e] = t.c;
  }
  return r;
}

inline oracle::NVec to_oracle_vec(const klift::PolyRing<K>& S, const V& v, std::uint32_t rank) {
  oracle::NVec r;
  for (std::uint32_t c = 0; c < rank; ++c) r.push_back(to_oracle(S, v, c));
  return r;
}

// Generators of the relation module U = rels + I*e_c of M, with degrees, in
// oracle form.
inline void oracle_relations(const klift::FPModule<K>& M, std::vector<oracle::NVec>& gens, std::vector<int>& degs) {
  const auto& S = M.poly();
  for (std::size_t j = 0; j < M.rels().size(); ++j) {
    gens.push_back(to_oracle_vec(S, M.rels()[j], M.rank()));
    degs.push_back(M.rel_degs()[j]);
  }
  for (std::uint32_t c = 0; c < M.rank(); ++c)
    for (auto& g : M.ring().ideal_generators()) {
      gens.push_back(to_oracle_vec(S, S.place(g, c), M.rank()));
      degs.push_back(M.degs()[c] + *S.degree(g, {}));
    }
}

// dim_k M_d by spanning all multiples of the relations.
inline std::size_t oracle_dim(const klift::FPModule<K>& M, int d) {
  const auto& S = M.poly();
  std::vector<oracle::NVec> gens;
  std::vector<int> degs;
  oracle_relations(M, gens, degs);
  oracle::Slice sl(S.weights(), M.degs(), d);
  return sl.basis.size() - oracle::span_dim(S.weights(), M.degs(), gens, degs, d, S.field().characteristic());
}

// dim_k of the image of f in degree d of the target.
inline std::size_t oracle_image_dim(const klift::ModuleMap<K>& f, int d) {
  const auto& N = f.target();
  const auto& S = N.poly();
  std::vector<oracle::NVec> gens;
  std::vector<int> degs;
  oracle_relations(N, gens, degs);
  auto p = S.field().characteristic();
  std::size_t base = oracle::span_dim(S.weights(), N.degs(), gens, degs, d, p);
  for (std::uint32_t c = 0; c < f.source().rank(); ++c) {
    gens.push_back(to_oracle_vec(S, f.images()[c], N.rank()));
    degs.push_back(f.source().degs()[c] + f.twist());
  }
  return oracle::span_dim(S.weights(), N.degs(), gens, degs, d, p) - base;
}

inline std::vector<long> oracle_hilbert(const klift::FPModule<K>& M, int lo, int hi) {
  std::vector<long> out;
  for (int d = lo; d <= hi; ++d) out.push_back(static_cast<long>(oracle_dim(M, d)));
  return out;
}

// Random homogeneous vector of degree d in the ambient of M.
inline V random_vec(const klift::FPModule<K>& M, int d, std::mt19937_64& rng, double density = 0.6) {
  const auto& S = M.poly();
  V v;
  for (std::uint32_t c = 0; c < M.rank(); ++c) {
    int e = d - M.degs()[c];
    if (e < 0) continue;
    v = S.add(v, S.place(random_poly(S, e, rng, density), c));
  }
  return v;
}

}  // namespace testutil
