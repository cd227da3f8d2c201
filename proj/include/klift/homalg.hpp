#pragma once

// Kernels, cokernels, images, sums, pushouts, Hom, minimal free resolutions,
// Ext and Tor over a quotient ring, chain complexes and their homology.
//
// Everything reduces to two primitives from syzygy.hpp: presenting the
// submodule spanned by some vectors modulo a denominator, and computing the
// preimage of a submodule under a map.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "klift/fp_module.hpp"

namespace klift {

template <class K>
using VecList = std::vector<Vec<K>>;

// A module together with comparison maps to and from another presentation.
template <class K>
struct Presented {
  FPModule<K> mod;
  ModuleMap<K> to;    // original -> mod
  ModuleMap<K> from;  // mod -> original
};

template <class K>
struct Sub {
  FPModule<K> mod;
  ModuleMap<K> incl;  // mod -> ambient
};

// ---------------------------------------------------------------- minimize

// Removes generators that some relation expresses through the others (a
// relation with a unit entry) and then drops relations that are redundant,
// keeping a minimal homogeneous generating set chosen greedily by
// (degree, index).
template <class K>
Presented<K> minimize(const FPModule<K>& M) {
  using V = Vec<K>;
  const auto& S = M.poly();
  const auto& k = M.field();
  const auto& R = M.ring();
  const std::uint32_t r = M.rank();
  std::vector<V> rels = M.rels();
  std::vector<char> alive(r, 1);
  std::vector<std::optional<V>> expr(r);

  auto substitute_gen = [&](const V& v, std::uint32_t c, const V& e) {
    V p = S.component(v, c);
    if (p.is_zero()) return v;
    V without = S.sub(v, S.place(p, c));
    return R.reduce(S.add(without, S.mul(p, e)));
  };

  while (true) {
    int pj = -1;
    std::uint32_t pc = 0;
    for (std::size_t j = 0; j < rels.size() && pj < 0; ++j)
      for (auto it = rels[j].t.rbegin(); it != rels[j].t.rend(); ++it)
        if (it->m.is_one()) {
          pj = static_cast<int>(j);
          pc = it->comp;
          break;
        }
    if (pj < 0) break;
    V rel = rels[pj];
    typename K::Elem u = S.component(rel, pc).lt().c;
    V e = S.scale(S.sub(rel, S.constant(u, pc)), k.neg(k.inv(u)));
    rels.erase(rels.begin() + pj);
    for (auto& x : rels) x = substitute_gen(x, pc, e);
    rels.erase(std::remove_if(rels.begin(), rels.end(), [](const V& x) { return x.is_zero(); }), rels.end());
    for (std::uint32_t c = 0; c < r; ++c)
      if (expr[c]) expr[c] = substitute_gen(*expr[c], pc, e);
    expr[pc] = e;
    alive[pc] = 0;
  }

  std::vector<std::uint32_t> kept;
  std::vector<std::int64_t> newidx(r, -1);
  for (std::uint32_t c = 0; c < r; ++c)
    if (alive[c]) {
      newidx[c] = static_cast<std::int64_t>(kept.size());
      kept.push_back(c);
    }
  auto reindex = [&](const V& v) {
    std::vector<Term<K>> ts;
    for (auto& t : v.t) {
      if (newidx[t.comp] < 0) throw std::logic_error("minimize: eliminated generator still referenced");
      ts.push_back({static_cast<std::uint32_t>(newidx[t.comp]), t.m, t.c});
    }
    return S.from_terms(ts);
  };
  std::vector<int> degs;
  for (auto c : kept) degs.push_back(M.degs()[c]);
  std::vector<V> rr;
  std::vector<int> rd;
  for (auto& x : rels) {
    rr.push_back(reindex(x));
    rd.push_back(*S.degree(rr.back(), degs));
  }
  std::vector<std::size_t> order(rr.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rd[a] < rd[b]; });
  SubmoduleMembership<K> mem(S, degs, ideal_times_free(R, static_cast<std::uint32_t>(degs.size())), 0);
  std::vector<V> minimal;
  for (auto i : order) {
    if (mem.contains(rr[i])) continue;
    mem.add(rr[i]);
    minimal.push_back(rr[i]);
  }
  FPModule<K> out(R, degs, minimal);

  std::vector<V> to_im;
  for (std::uint32_t c = 0; c < r; ++c) to_im.push_back(alive[c] ? S.basis_vector(static_cast<std::uint32_t>(newidx[c])) : reindex(*expr[c]));
  std::vector<V> from_im;
  for (auto c : kept) from_im.push_back(S.basis_vector(c));
  return {out, ModuleMap<K>(M, out, to_im, 0, false), ModuleMap<K>(out, M, from_im, 0, false)};
}

// ---------------------------------------------------------------- subquotients

// Indices of a minimal generating subset of nums modulo D = <den_gb, den_extra>.
template <class K>
std::vector<std::size_t> minimal_subset(const PolyRing<K>& S, const std::vector<int>& shifts, const VecList<K>& nums,
                                        const std::vector<int>& num_degs, const VecList<K>& den_gb,
                                        const VecList<K>& den_extra = {}) {
  SubmoduleMembership<K> mem(S, shifts, den_gb, 0);
  for (auto& x : den_extra) mem.add(x);
  std::vector<std::size_t> order(nums.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return num_degs[a] < num_degs[b]; });
  std::vector<std::size_t> kept;
  for (auto i : order) {
    if (nums[i].is_zero() || mem.contains(nums[i])) continue;
    mem.add(nums[i]);
    kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
    return num_degs[a] != num_degs[b] ? num_degs[a] < num_degs[b] : a < b;
  });
  return kept;
}

// The module (<nums> + D) / D with nums in S^r (generator degrees `shifts`).
// Generators of the result form a minimal subset of nums; reps[i] is the
// vector representing generator i.
template <class K>
struct SubQuotient {
  FPModule<K> mod;
  VecList<K> reps;
  std::vector<std::size_t> chosen;  // indices into nums
};

template <class K>
SubQuotient<K> subquotient(const QuotientRing<K>& R, const std::vector<int>& shifts, const VecList<K>& nums,
                           const VecList<K>& den_gb, const VecList<K>& den_extra = {}) {
  const auto& S = R.poly();
  std::vector<int> nd;
  for (auto& v : nums) nd.push_back(v.is_zero() ? 0 : *S.degree(v, shifts));
  auto kept = minimal_subset(S, shifts, nums, nd, den_gb, den_extra);
  VecList<K> reps;
  std::vector<int> degs;
  for (auto i : kept) {
    reps.push_back(nums[i]);
    degs.push_back(nd[i]);
  }
  ElimEngine<K> eng(R, shifts, reps, degs, den_gb, den_extra);
  auto syz = eng.syzygies();
  FPModule<K> raw(R, degs, syz);
  auto mm = minimize(raw);
  if (mm.mod.rank() != raw.rank()) throw std::logic_error("subquotient: generators were not minimal");
  return {mm.mod, reps, kept};
}

// ---------------------------------------------------------------- kernel etc.

// Generators of { v in S^{r_src} : f(v) in U_tgt }.
template <class K>
VecList<K> preimage_generators(const ModuleMap<K>& f) {
  const auto& src = f.source();
  const auto& tgt = f.target();
  std::vector<int> nd;
  for (auto d : src.degs()) nd.push_back(d + f.twist());
  ElimEngine<K> eng(tgt.ring(), tgt.degs(), f.images(), nd, tgt.gb());
  return eng.syzygies();
}

template <class K>
Sub<K> kernel(const ModuleMap<K>& f) {
  const auto& src = f.source();
  auto w = preimage_generators(f);
  auto sq = subquotient(src.ring(), src.degs(), w, src.gb());
  return {sq.mod, ModuleMap<K>(sq.mod, src, sq.reps, 0, false)};
}

template <class K>
struct Quot {
  FPModule<K> mod;
  ModuleMap<K> proj;  // target -> mod
};

template <class K>
Quot<K> cokernel(const ModuleMap<K>& f) {
  const auto& N = f.target();
  VecList<K> rels = N.rels();
  for (auto& x : f.images()) rels.push_back(x);
  FPModule<K> raw(N.ring(), N.degs(), rels);
  auto mm = minimize(raw);
  std::vector<Vec<K>> im;
  for (std::uint32_t c = 0; c < N.rank(); ++c) im.push_back(mm.to.images()[c]);
  return {mm.mod, ModuleMap<K>(N, mm.mod, im, 0, false)};
}

template <class K>
Sub<K> image(const ModuleMap<K>& f) {
  const auto& N = f.target();
  auto sq = subquotient(N.ring(), N.degs(), f.images(), N.gb());
  return {sq.mod, ModuleMap<K>(sq.mod, N, sq.reps, 0, false)};
}

// Submodule of M generated by the given elements.
template <class K>
Sub<K> submodule(const FPModule<K>& M, const VecList<K>& elems) {
  auto sq = subquotient(M.ring(), M.degs(), elems, M.gb());
  return {sq.mod, ModuleMap<K>(sq.mod, M, sq.reps, 0, false)};
}

// M / <elems>
template <class K>
Quot<K> quotient(const FPModule<K>& M, const VecList<K>& elems) {
  std::vector<int> degs;
  const auto& S = M.poly();
  VecList<K> nz;
  for (auto& e : elems)
    if (!M.is_zero(e)) nz.push_back(e);
  for (auto& e : nz) degs.push_back(*S.degree(e, M.degs()));
  FPModule<K> F = FPModule<K>::free(M.ring(), degs);
  return cokernel(ModuleMap<K>(F, M, nz, 0, false));
}

// ---------------------------------------------------------------- sums

template <class K>
struct DirectSum {
  FPModule<K> mod;
  std::vector<ModuleMap<K>> incl;
  std::vector<ModuleMap<K>> proj;
  std::vector<std::uint32_t> offset;
};

template <class K>
DirectSum<K> direct_sum(const std::vector<FPModule<K>>& parts, const QuotientRing<K>* ring = nullptr) {
  if (parts.empty() && !ring) throw std::invalid_argument("direct_sum of nothing needs a ring");
  const QuotientRing<K>& R = parts.empty() ? *ring : parts[0].ring();
  const auto& S = R.poly();
  std::vector<int> degs, rd;
  VecList<K> rels, gb;
  std::vector<std::uint32_t> off;
  std::uint32_t o = 0;
  for (auto& P : parts) {
    off.push_back(o);
    degs.insert(degs.end(), P.degs().begin(), P.degs().end());
    for (std::size_t j = 0; j < P.rels().size(); ++j) {
      rels.push_back(S.offset(P.rels()[j], o));
      rd.push_back(P.rel_degs()[j]);
    }
    for (auto& g : P.gb()) gb.push_back(S.offset(g, o));
    o += P.rank();
  }
  auto M = FPModule<K>::with_gb(R, degs, rels, rd, gb);
  std::vector<ModuleMap<K>> inc, pr;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    VecList<K> im;
    for (std::uint32_t c = 0; c < parts[i].rank(); ++c) im.push_back(S.basis_vector(off[i] + c));
    inc.emplace_back(parts[i], M, im, 0, false);
    VecList<K> pim;
    for (std::size_t j = 0; j < parts.size(); ++j)
      for (std::uint32_t c = 0; c < parts[j].rank(); ++c)
        pim.push_back(j == i ? S.basis_vector(c) : Vec<K>{});
    pr.emplace_back(M, parts[i], pim, 0, false);
  }
  return {M, inc, pr, off};
}

// Map between sums of copies of N: blocks b of the source are N.shift(src_shifts[b]),
// blocks t of the target are N.shift(tgt_shifts[t]); entries[t][b] is a ring element.
template <class K>
ModuleMap<K> block_map(const FPModule<K>& src_sum, const FPModule<K>& tgt_sum, std::uint32_t n_rank,
                       const std::vector<VecList<K>>& entries, int twist = 0) {
  const auto& S = src_sum.poly();
  std::uint32_t nb = n_rank == 0 ? 0 : src_sum.rank() / n_rank;
  VecList<K> im(src_sum.rank());
  for (std::uint32_t b = 0; b < nb; ++b)
    for (std::uint32_t g = 0; g < n_rank; ++g) {
      Vec<K> v;
      for (std::size_t t = 0; t < entries.size(); ++t) {
        const auto& e = entries[t][b];
        if (e.is_zero()) continue;
        v = S.add(v, S.place(e, static_cast<std::uint32_t>(t) * n_rank + g));
      }
      im[b * n_rank + g] = v;
    }
  return ModuleMap<K>(src_sum, tgt_sum, im, twist, false);
}

template <class K>
FPModule<K> sum_of_shifts(const FPModule<K>& N, const std::vector<int>& shifts) {
  std::vector<FPModule<K>> parts;
  for (auto s : shifts) parts.push_back(N.shift(s));
  return direct_sum(parts, &N.ring()).mod;
}

// Pushout of g: W -> M and i: W -> P, both of twist 0:
// (M + P) / {(g(w), -i(w))}.
template <class K>
struct Pushout {
  FPModule<K> mod;
  ModuleMap<K> from_first;   // M -> E
  ModuleMap<K> from_second;  // P -> E
};

template <class K>
Pushout<K> pushout(const ModuleMap<K>& g, const ModuleMap<K>& i) {
  if (g.twist() != 0 || i.twist() != 0) throw std::invalid_argument("pushout: maps must have twist 0");
  if (!g.source().same_object(i.source()) && g.source().degs() != i.source().degs())
    throw std::invalid_argument("pushout: maps must share their source");
  auto ds = direct_sum<K>({g.target(), i.target()});
  const auto& S = ds.mod.poly();
  VecList<K> im;
  for (std::uint32_t c = 0; c < g.source().rank(); ++c)
    im.push_back(S.sub(ds.incl[0].apply(g.images()[c]), ds.incl[1].apply(i.images()[c])));
  auto q = cokernel(ModuleMap<K>(g.source(), ds.mod, im, 0, false));
  return {q.mod, q.proj.after(ds.incl[0]), q.proj.after(ds.incl[1])};
}

// ---------------------------------------------------------------- Hom

template <class K>
struct HomModule {
  FPModule<K> source, target;  // Hom(source, target)
  FPModule<K> ambient;         // sum over source generators c of target(a_c)
  Sub<K> sub;                  // the Hom module inside the ambient

  // Degree-t element of the ambient as a map source -> target.
  ModuleMap<K> to_map(const Vec<K>& elem, int t) const {
    const auto& S = target.poly();
    std::uint32_t n = target.rank();
    VecList<K> im;
    for (std::uint32_t c = 0; c < source.rank(); ++c) im.push_back(S.slice(elem, c * n, (c + 1) * n));
    return ModuleMap<K>(source, target, im, t);
  }
  Vec<K> from_map(const ModuleMap<K>& f) const {
    const auto& S = target.poly();
    Vec<K> v;
    for (std::uint32_t c = 0; c < source.rank(); ++c) v = S.add(v, S.offset(f.images()[c], c * target.rank()));
    return v;
  }
};

template <class K>
HomModule<K> hom_module(const FPModule<K>& M, const FPModule<K>& N) {
  std::vector<int> a, b;
  for (auto d : M.degs()) a.push_back(-d);
  for (auto d : M.rel_degs()) b.push_back(-d);
  auto amb = sum_of_shifts(N, a);
  auto tgt = sum_of_shifts(N, b);
  const auto& S = M.poly();
  std::vector<VecList<K>> entries(M.rels().size(), VecList<K>(M.rank()));
  for (std::size_t j = 0; j < M.rels().size(); ++j)
    for (std::uint32_t c = 0; c < M.rank(); ++c) entries[j][c] = S.component(M.rels()[j], c);
  auto f = block_map(amb, tgt, N.rank(), entries);
  return {M, N, amb, kernel(f)};
}

// ---------------------------------------------------------------- resolutions

template <class K>
struct Periodicity {
  int start = -1;   // d_{start} repeats
  int period = 0;   // 1 or 2
  int shift = 0;    // internal degree shift per period
};

template <class K>
struct FreeResolution {
  FPModule<K> module;            // the resolved module (as given)
  ModuleMap<K> augmentation;     // F_0 -> module
  std::vector<FPModule<K>> F;    // F[0..length]
  std::vector<ModuleMap<K>> d;   // d[i] : F[i] -> F[i-1] for i >= 1; d[0] is F_0 -> 0
  std::optional<Periodicity<K>> periodic;

  int length() const { return static_cast<int>(F.size()) - 1; }
  std::vector<int> ranks() const {
    std::vector<int> r;
    for (auto& f : F) r.push_back(static_cast<int>(f.rank()));
    return r;
  }
};

template <class K>
bool same_differential(const ModuleMap<K>& a, const ModuleMap<K>& b, int& shift) {
  if (a.source().rank() != b.source().rank() || a.target().rank() != b.target().rank()) return false;
  if (a.source().rank() == 0) return false;
  shift = b.source().degs()[0] - a.source().degs()[0];
  for (std::uint32_t c = 0; c < a.source().rank(); ++c)
    if (b.source().degs()[c] - a.source().degs()[c] != shift) return false;
  for (std::uint32_t c = 0; c < a.target().rank(); ++c)
    if (b.target().degs()[c] - a.target().degs()[c] != shift) return false;
  for (std::uint32_t c = 0; c < a.source().rank(); ++c)
    if (!(a.images()[c] == b.images()[c])) return false;
  return true;
}

// Minimal graded free resolution F_0 <- F_1 <- ... <- F_length.
template <class K>
FreeResolution<K> free_resolution(const FPModule<K>& M, int length) {
  if (length < 0) throw std::invalid_argument("resolution length must be >= 0");
  const auto& R = M.ring();
  const auto& S = M.poly();
  auto mm = minimize(M);
  FreeResolution<K> res{M, ModuleMap<K>::identity(M), {}, {}, std::nullopt};
  auto F0 = FPModule<K>::free(R, mm.mod.degs());
  VecList<K> ids;
  for (std::uint32_t c = 0; c < F0.rank(); ++c) ids.push_back(S.basis_vector(c));
  res.augmentation = mm.from.after(ModuleMap<K>(F0, mm.mod, ids, 0, false));
  res.F.push_back(F0);
  res.d.push_back(ModuleMap<K>::zero(F0, FPModule<K>::zero(R)));
  if (length == 0) return res;
  // F_1 from the minimal relations
  auto F1 = FPModule<K>::free(R, mm.mod.rel_degs());
  res.F.push_back(F1);
  res.d.push_back(ModuleMap<K>(F1, F0, mm.mod.rels(), 0, false));
  for (int i = 1; i < length; ++i) {
    const auto Fi = res.F[i];  // copy: F grows below
    if (Fi.rank() == 0) {
      res.F.push_back(FPModule<K>::free(R, {}));
      res.d.push_back(ModuleMap<K>::zero(res.F.back(), Fi));
      continue;
    }
    const auto Fp = res.F[i - 1];
    ElimEngine<K> eng(R, Fp.degs(), res.d[i].images(), Fi.degs(), ideal_times_free(R, Fp.rank()));
    auto syz = eng.syzygies();
    std::vector<int> sd;
    for (auto& v : syz) sd.push_back(*S.degree(v, Fi.degs()));
    auto kept = minimal_subset(S, Fi.degs(), syz, sd, ideal_times_free(R, Fi.rank()));
    std::vector<int> degs;
    VecList<K> cols;
    for (auto j : kept) {
      degs.push_back(sd[j]);
      cols.push_back(syz[j]);
    }
    auto Fn = FPModule<K>::free(R, degs);
    res.F.push_back(Fn);
    res.d.push_back(ModuleMap<K>(Fn, Fi, cols, 0, false));
  }
  for (int i = 1; i + 1 <= length && !res.periodic; ++i) {
    int sh = 0;
    if (i + 1 <= length && same_differential(res.d[i], res.d[i + 1], sh)) res.periodic = Periodicity<K>{i, 1, sh};
    else if (i + 2 <= length && same_differential(res.d[i], res.d[i + 2], sh)) res.periodic = Periodicity<K>{i, 2, sh};
  }
  return res;
}

// A non-minimal resolution: the minimal one plus, for each i in [1, length],
// a contractible summand R(-s) --id--> R(-s) in homological degrees i, i-1.
template <class K>
FreeResolution<K> pad_resolution(const FreeResolution<K>& res, int extra_shift = 3) {
  const auto& R = res.module.ring();
  const auto& S = R.poly();
  int L = res.length();
  // padded F_j = F_j + T_j (from the pair (j, j-1), j >= 1) + T_{j+1} (j+1 <= L)
  std::vector<FPModule<K>> F;
  std::vector<std::uint32_t> base(L + 1);
  for (int j = 0; j <= L; ++j) {
    std::vector<int> degs = res.F[j].degs();
    base[j] = static_cast<std::uint32_t>(degs.size());
    if (j >= 1) degs.push_back(extra_shift + j);
    if (j + 1 <= L) degs.push_back(extra_shift + j + 1);
    F.push_back(FPModule<K>::free(R, degs));
  }
  FreeResolution<K> out{res.module, res.augmentation, F, {}, std::nullopt};
  VecList<K> aug = res.augmentation.images();
  while (aug.size() < F[0].rank()) aug.push_back({});
  out.augmentation = ModuleMap<K>(F[0], res.module, aug, 0, false);
  out.d.push_back(ModuleMap<K>::zero(F[0], FPModule<K>::zero(R)));
  for (int j = 1; j <= L; ++j) {
    VecList<K> im = res.d[j].images();
    // T_j in degree j maps identically onto the T_j copy in degree j-1
    std::uint32_t tj_here = base[j];
    std::uint32_t tj_there = base[j - 1] + (j - 1 >= 1 ? 1 : 0);
    im.resize(F[j].rank());
    im[tj_here] = S.basis_vector(tj_there);
    if (j + 1 <= L) im[tj_here + 1] = Vec<K>{};
    out.d.push_back(ModuleMap<K>(F[j], F[j - 1], im, 0, false));
  }
  return out;
}

// ---------------------------------------------------------------- complexes

template <class K>
struct ChainComplex {
  int lo = 0;
  std::vector<FPModule<K>> C;    // C[k - lo]
  std::vector<ModuleMap<K>> d;   // d[k - lo] : C_k -> C_{k-1}; entry for k = lo maps to zero

  int hi() const { return lo + static_cast<int>(C.size()) - 1; }
  const FPModule<K>& term(int k) const { return C.at(k - lo); }
  const ModuleMap<K>& diff(int k) const { return d.at(k - lo); }
  bool has(int k) const { return k >= lo && k <= hi(); }

  bool d_squared_zero() const {
    for (int k = lo + 2; k <= hi(); ++k)
      if (!diff(k - 1).after(diff(k)).is_zero()) return false;
    return true;
  }
};

// ker(d_out) / im(d_in) at the middle module Y. Either map may be absent.
template <class K>
SubQuotient<K> homology_at(const FPModule<K>& Y, const ModuleMap<K>* d_in, const ModuleMap<K>* d_out) {
  const auto& S = Y.poly();
  VecList<K> cycles;
  if (d_out && d_out->target().rank() > 0) {
    cycles = preimage_generators(*d_out);
  } else {
    for (std::uint32_t c = 0; c < Y.rank(); ++c) cycles.push_back(S.basis_vector(c));
  }
  VecList<K> bounds;
  if (d_in)
    for (auto& x : d_in->images()) bounds.push_back(x);
  return subquotient(Y.ring(), Y.degs(), cycles, Y.gb(), bounds);
}

template <class K>
SubQuotient<K> homology(const ChainComplex<K>& C, int k) {
  if (!C.has(k)) throw std::out_of_range("homology: degree outside the complex");
  const ModuleMap<K>* in = C.has(k + 1) ? &C.diff(k + 1) : nullptr;
  const ModuleMap<K>* out = k > C.lo ? &C.diff(k) : nullptr;
  if (in && out && !out->after(*in).is_zero()) throw std::invalid_argument("malformed complex: d o d != 0");
  return homology_at(C.term(k), in, out);
}

// ---------------------------------------------------------------- Ext / Tor

template <class K>
struct ExtTable {
  std::string label;
  int lo = 0;
  std::vector<FPModule<K>> groups;  // groups[i - lo]
  std::optional<Periodicity<K>> periodic;

  int hi() const { return lo + static_cast<int>(groups.size()) - 1; }
  const FPModule<K>& at(int i) const { return groups.at(i - lo); }
  bool vanishes(int i) const { return at(i).is_zero_module(); }
  std::vector<long> dims(int i, int dlo, int dhi) const { return at(i).hilbert(dlo, dhi); }
};

template <class K>
FPModule<K> hom_free_into(const FPModule<K>& F, const FPModule<K>& N) {
  std::vector<int> sh;
  for (auto d : F.degs()) sh.push_back(-d);
  return sum_of_shifts(N, sh);
}

// Hom(F_i, N) -> Hom(F_{i+1}, N), psi -> psi o d_{i+1}.
template <class K>
ModuleMap<K> hom_dual(const ModuleMap<K>& d_next, const FPModule<K>& Hi, const FPModule<K>& Hn,
                      const FPModule<K>& N) {
  const auto& S = N.poly();
  std::vector<VecList<K>> entries(d_next.source().rank(), VecList<K>(d_next.target().rank()));
  for (std::uint32_t j = 0; j < d_next.source().rank(); ++j)
    for (std::uint32_t c = 0; c < d_next.target().rank(); ++c) entries[j][c] = S.component(d_next.images()[j], c);
  return block_map(Hi, Hn, N.rank(), entries);
}

template <class K>
ExtTable<K> ext_from_resolution(const FreeResolution<K>& res, const FPModule<K>& N, int i_max) {
  if (res.length() < i_max + 1) throw std::invalid_argument("ext: resolution too short");
  std::vector<FPModule<K>> H;
  for (int i = 0; i <= i_max + 1; ++i) H.push_back(hom_free_into(res.F[i], N));
  std::vector<ModuleMap<K>> delta;
  for (int i = 0; i <= i_max; ++i) delta.push_back(hom_dual(res.d[i + 1], H[i], H[i + 1], N));
  ExtTable<K> t{"Ext", 0, {}, res.periodic};
  for (int i = 0; i <= i_max; ++i) {
    const ModuleMap<K>* in = i > 0 ? &delta[i - 1] : nullptr;
    t.groups.push_back(homology_at(H[i], in, &delta[i]).mod);
  }
  return t;
}

template <class K>
ExtTable<K> ext_disc(const FPModule<K>& M, const FPModule<K>& N, int i_max) {
  return ext_from_resolution(free_resolution(M, i_max + 1), N, i_max);
}

template <class K>
ExtTable<K> tor_from_resolution(const FreeResolution<K>& res, const FPModule<K>& N, int k_max) {
  if (res.length() < k_max + 1) throw std::invalid_argument("tor: resolution too short");
  const auto& S = N.poly();
  std::vector<FPModule<K>> T;
  for (int i = 0; i <= k_max + 1; ++i) T.push_back(sum_of_shifts(N, res.F[i].degs()));
  std::vector<ModuleMap<K>> del(1, ModuleMap<K>::zero(T[0], FPModule<K>::zero(N.ring())));
  for (int i = 1; i <= k_max + 1; ++i) {
    const auto& di = res.d[i];
    std::vector<VecList<K>> entries(di.target().rank(), VecList<K>(di.source().rank()));
    for (std::uint32_t c = 0; c < di.source().rank(); ++c)
      for (std::uint32_t cp = 0; cp < di.target().rank(); ++cp) entries[cp][c] = S.component(di.images()[c], cp);
    del.push_back(block_map(T[i], T[i - 1], N.rank(), entries));
  }
  ExtTable<K> t{"Tor", 0, {}, res.periodic};
  for (int k = 0; k <= k_max; ++k) t.groups.push_back(homology_at(T[k], &del[k + 1], k > 0 ? &del[k] : nullptr).mod);
  return t;
}

template <class K>
ExtTable<K> tor_disc(const FPModule<K>& M, const FPModule<K>& N, int k_max) {
  return tor_from_resolution(free_resolution(M, k_max + 1), N, k_max);
}

// ---------------------------------------------------------------- torsion

template <class K>
Sub<K> torsion_submodule(const FPModule<K>& M, const Poly<K>& f) {
  return kernel(ModuleMap<K>::multiplication(M, f));
}

template <class K>
Quot<K> quotient_by_elem(const FPModule<K>& M, const Poly<K>& f) {
  return cokernel(ModuleMap<K>::multiplication(M, f));
}

// f * M as a submodule of M.
template <class K>
Sub<K> multiple_submodule(const FPModule<K>& M, const Poly<K>& f) {
  return image(ModuleMap<K>::multiplication(M, f));
}

// ---------------------------------------------------------------- map tests

template <class K>
bool is_surjective(const ModuleMap<K>& f) {
  const auto& N = f.target();
  SubmoduleMembership<K> mem(N.poly(), N.degs(), N.gb(), 0);
  for (auto& x : f.images()) mem.add(x);
  for (std::uint32_t c = 0; c < N.rank(); ++c)
    if (!mem.contains(N.gen(c))) return false;
  return true;
}

template <class K>
bool is_injective(const ModuleMap<K>& f) {
  return kernel(f).mod.is_zero_module();
}

template <class K>
bool is_isomorphism(const ModuleMap<K>& f) {
  return f.twist() == 0 && is_surjective(f) && is_injective(f);
}

// Is every element of `a` (a submodule given by generators, as vectors of M)
// contained in <b> + U_M?
template <class K>
bool submodule_contained(const FPModule<K>& M, const VecList<K>& a, const VecList<K>& b) {
  SubmoduleMembership<K> mem(M.poly(), M.degs(), M.gb(), 0);
  for (auto& x : b) mem.add(x);
  for (auto& x : a)
    if (!mem.contains(x)) return false;
  return true;
}

template <class K>
bool same_submodule(const FPModule<K>& M, const VecList<K>& a, const VecList<K>& b) {
  return submodule_contained(M, a, b) && submodule_contained(M, b, a);
}

// ---------------------------------------------------------------- graded linear algebra

// Linear description of degree-t homomorphisms B -> A: unknowns are the
// coordinates of the images of B's generators in A_{deg b_k + t}.
template <class K>
class HomSystem {
 public:
  using V = Vec<K>;
  using Elem = typename K::Elem;

  HomSystem(FPModule<K> B, FPModule<K> A, int t) : B_(std::move(B)), A_(std::move(A)), t_(t) {
    std::size_t o = 0;
    for (std::uint32_t k = 0; k < B_.rank(); ++k) {
      off_.push_back(o);
      o += A_.dim(B_.degs()[k] + t_);
    }
    n_ = o;
    for (std::size_t j = 0; j < B_.rels().size(); ++j) add_equation(B_.rels()[j], B_.rel_degs()[j] + t_, {});
  }

  std::size_t unknowns() const { return n_; }
  std::size_t equations() const { return rows_.size(); }

  // sum_k p_k * beta(e_k) = rhs in A_D, where p = sum_k p_k e_k is a vector
  // in B's ambient of degree D - t.
  void add_equation(const V& p, int D, const V& rhs) {
    const auto& S = A_.poly();
    std::size_t m = A_.dim(D);
    std::vector<std::vector<Elem>> block(m, std::vector<Elem>(n_, A_.field().zero()));
    for (std::uint32_t k = 0; k < B_.rank(); ++k) {
      V pk = S.component(p, k);
      if (pk.is_zero()) continue;
      int dk = B_.degs()[k] + t_;
      const auto& bas = A_.basis(dk);
      for (std::size_t i = 0; i < bas.size(); ++i) {
        V x = S.mul(pk, S.term(A_.field().one(), bas[i].m, bas[i].comp));
        auto col = A_.coords(x, D);
        for (std::size_t r = 0; r < m; ++r) block[r][off_[k] + i] = col[r];
      }
    }
    auto b = rhs.is_zero() ? std::vector<Elem>(m, A_.field().zero()) : A_.coords(rhs, D);
    for (std::size_t r = 0; r < m; ++r) {
      rows_.push_back(std::move(block[r]));
      rhs_.push_back(b[r]);
    }
  }

  Matrix<K> matrix() const {
    Matrix<K> M(A_.field(), rows_.size(), n_);
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (std::size_t c = 0; c < n_; ++c) M.at(r, c) = rows_[r][c];
    return M;
  }

  std::optional<std::vector<Elem>> solve() const { return klift::solve(A_.field(), matrix(), rhs_); }
  std::vector<std::vector<Elem>> homogeneous_solutions() const { return nullspace(A_.field(), matrix()); }

  ModuleMap<K> to_map(const std::vector<Elem>& x) const {
    VecList<K> im;
    for (std::uint32_t k = 0; k < B_.rank(); ++k) {
      int dk = B_.degs()[k] + t_;
      std::vector<Elem> part(x.begin() + static_cast<std::ptrdiff_t>(off_[k]),
                             x.begin() + static_cast<std::ptrdiff_t>(off_[k] + A_.dim(dk)));
      im.push_back(A_.from_coords(part, dk));
    }
    return ModuleMap<K>(B_, A_, im, t_);
  }

 private:
  FPModule<K> B_, A_;
  int t_;
  std::vector<std::size_t> off_;
  std::size_t n_ = 0;
  std::vector<std::vector<Elem>> rows_;
  std::vector<Elem> rhs_;
};

template <class K>
struct SplitResult {
  std::optional<ModuleMap<K>> retraction;           // beta with beta o alpha = id
  std::vector<ModuleMap<K>> ambiguity;              // degree-0 maps killing im(alpha)
  std::size_t unknowns = 0, equations = 0;
};

// Looks for beta: B -> A with beta o alpha = id_A, alpha: A -> B.
template <class K>
SplitResult<K> split_injection_test(const ModuleMap<K>& alpha, bool want_ambiguity = true) {
  const auto& A = alpha.source();
  const auto& B = alpha.target();
  HomSystem<K> sys(B, A, -alpha.twist());
  for (std::uint32_t c = 0; c < A.rank(); ++c) sys.add_equation(alpha.images()[c], A.degs()[c], A.gen(c));
  SplitResult<K> out;
  out.unknowns = sys.unknowns();
  out.equations = sys.equations();
  auto x = sys.solve();
  if (x) out.retraction = sys.to_map(*x);
  if (want_ambiguity)
    for (auto& v : sys.homogeneous_solutions()) out.ambiguity.push_back(sys.to_map(v));
  return out;
}

// The same question answered inside Hom modules: does id_A lie in the image
// of alpha^*: Hom(B, A) -> Hom(A, A)? Requires twist 0.
template <class K>
bool split_via_hom_modules(const ModuleMap<K>& alpha) {
  if (alpha.twist() != 0) throw std::invalid_argument("split_via_hom_modules: twist must be 0");
  const auto& A = alpha.source();
  const auto& B = alpha.target();
  const auto& S = A.poly();
  auto HB = hom_module(B, A);
  auto HA = hom_module(A, A);
  // alpha^* on ambients: block c of Hom(A,A) gets sum_k alpha(e_c)_k * block k
  std::vector<VecList<K>> entries(A.rank(), VecList<K>(B.rank()));
  for (std::uint32_t c = 0; c < A.rank(); ++c)
    for (std::uint32_t k = 0; k < B.rank(); ++k) entries[c][k] = S.component(alpha.images()[c], k);
  auto astar = block_map(HB.ambient, HA.ambient, A.rank(), entries);
  VecList<K> gens;
  for (auto& g : HB.sub.incl.images()) gens.push_back(astar.apply(g));
  auto id = HA.from_map(ModuleMap<K>::identity(A));
  SubmoduleMembership<K> mem(S, HA.ambient.degs(), HA.ambient.gb(), 0);
  for (auto& g : gens) mem.add(g);
  return mem.contains(id);
}

// Seeded random search for an isomorphism M -> N among degree-0 maps.
template <class K>
std::optional<ModuleMap<K>> find_isomorphism(const FPModule<K>& M, const FPModule<K>& N, std::uint64_t seed = 1,
                                             int tries = 24) {
  auto mm = minimize(M);
  auto nn = minimize(N);
  if (mm.mod.rank() != nn.mod.rank()) return std::nullopt;
  auto dm = mm.mod.degs(), dn = nn.mod.degs();
  std::sort(dm.begin(), dm.end());
  std::sort(dn.begin(), dn.end());
  if (dm != dn) return std::nullopt;
  HomSystem<K> sys(mm.mod, nn.mod, 0);
  auto basis = sys.homogeneous_solutions();
  if (basis.empty()) return mm.mod.rank() == 0 ? std::optional<ModuleMap<K>>(ModuleMap<K>::zero(M, N)) : std::nullopt;
  std::mt19937_64 rng(seed);
  const auto& k = M.field();
  std::uint64_t bound = k.characteristic() == 0 ? 7 : std::min<std::uint64_t>(k.characteristic(), 1u << 20);
  std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
  for (int t = 0; t < tries; ++t) {
    std::vector<typename K::Elem> x(sys.unknowns(), k.zero());
    for (auto& b : basis) {
      auto c = k.from_int(static_cast<std::int64_t>(dist(rng)));
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = k.add(x[i], k.mul(c, b[i]));
    }
    auto f = sys.to_map(x);
    if (is_isomorphism(f)) return nn.from.after(f.after(mm.to));
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- change of rings

// M over S/J viewed over S/I for I contained in J.
template <class K>
FPModule<K> restrict_scalars(const FPModule<K>& M, const QuotientRing<K>& smaller) {
  const auto& S = M.poly();
  VecList<K> rels = M.rels();
  for (std::uint32_t c = 0; c < M.rank(); ++c)
    for (auto& g : M.ring().ideal_gb()) rels.push_back(S.place(g, c));
  return FPModule<K>(smaller, M.degs(), rels);
}

// M tensor S/J for a ring S/J containing the ideal of M's ring.
template <class K>
FPModule<K> extend_scalars(const FPModule<K>& M, const QuotientRing<K>& bigger) {
  return FPModule<K>(bigger, M.degs(), M.rels());
}

// Re-homes a map onto modules with identical presentations (e.g. after
// restricting scalars).
template <class K>
ModuleMap<K> rehome(const ModuleMap<K>& f, const FPModule<K>& src, const FPModule<K>& tgt) {
  return ModuleMap<K>(src, tgt, f.images(), f.twist());
}

}  // namespace klift
