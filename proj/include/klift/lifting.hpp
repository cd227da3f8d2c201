#pragma once

// Lifting a module M over A/x to modules L_n over A with x^n L_n = 0 and
// L_n / x L_n = M, one order at a time, and from there to an A-module L on
// which x is regular with L / xL = M.
//
// Graded bookkeeping: delta = deg x. The map alpha0 goes M -> Omega/x Omega
// with twist n*delta, and its retraction beta has twist -n*delta. The
// extension E contains M(-n delta) as x^n E.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "klift/koszul.hpp"

namespace klift {

// Reusable preimage finder for a fixed map.
template <class K>
class Preimage {
 public:
  explicit Preimage(const ModuleMap<K>& f) : eng_(make(f)) {}
  // v with f(v) = y, as a vector in the source ambient.
  std::optional<Vec<K>> operator()(const Vec<K>& y) { return eng_.lift(y); }

 private:
  static ElimEngine<K> make(const ModuleMap<K>& f) {
    const auto& tgt = f.target();
    std::vector<int> nd;
    for (auto d : f.source().degs()) nd.push_back(d + f.twist());
    return ElimEngine<K>(tgt.ring(), tgt.degs(), f.images(), nd, tgt.gb());
  }
  ElimEngine<K> eng_;
};

template <class K>
int element_degree(const QuotientRing<K>& A, const Poly<K>& x) {
  auto d = A.poly().degree(x, {});
  if (!d) throw std::invalid_argument("lifting element must be nonzero as a polynomial");
  if (!A.poly().is_homogeneous(x, {}) || *d < 1) throw std::invalid_argument("lifting element must be homogeneous of positive degree");
  return *d;
}

template <class K>
VecList<K> multiples(const FPModule<K>& M, const Poly<K>& f) {
  VecList<K> out;
  for (std::uint32_t c = 0; c < M.rank(); ++c) out.push_back(M.poly().mul(f, M.gen(c)));
  return out;
}

// Is ker(f) equal to the submodule generated by `gens` of f's source?
template <class K>
bool kernel_is(const ModuleMap<K>& f, const VecList<K>& gens) {
  return same_submodule(f.source(), kernel(f).incl.images(), gens);
}

// ---------------------------------------------------------------- Omega

template <class K>
struct OmegaCover {
  FPModule<K> P;
  ModuleMap<K> p;  // P -> L, surjective
  Sub<K> omega;    // kernel of p
};

template <class K>
OmegaCover<K> omega_cover(const FPModule<K>& L) {
  auto mm = minimize(L);
  auto P = FPModule<K>::free(L.ring(), mm.mod.degs());
  ModuleMap<K> p(P, L, mm.from.images(), 0, false);
  auto om = kernel(p);
  if (!is_surjective(p)) throw std::logic_error("omega_cover: cover is not surjective");
  if (!p.after(om.incl).is_zero()) throw std::logic_error("omega_cover: kernel does not map to zero");
  return {P, p, om};
}

// ---------------------------------------------------------------- preconditions

struct LiftingPreconditions {
  bool annihilated = true;     // x^n L = 0
  bool quotient_is_M = true;   // pi: L -> M surjective with kernel xL
  bool low_torsion = true;     // L[x] = x^(n-1) L
  bool high_torsion = true;    // L[x^(n-1)] = x L
  bool ok() const { return annihilated && quotient_is_M && low_torsion && high_torsion; }
  std::string violated() const {
    if (!annihilated) return "x^n L != 0";
    if (!quotient_is_M) return "L / xL is not M";
    if (!low_torsion) return "L[x] != x^(n-1) L";
    if (!high_torsion) return "L[x^(n-1)] != x L";
    return "";
  }
};

template <class K>
LiftingPreconditions check_lifting(const ModuleMap<K>& pi, const Poly<K>& x, int n) {
  const auto& L = pi.source();
  const auto& S = L.poly();
  LiftingPreconditions out;
  for (auto& v : multiples(L, S.pow(x, n)))
    if (!L.is_zero(v)) out.annihilated = false;
  out.quotient_is_M = is_surjective(pi) && kernel_is(pi, multiples(L, x));
  auto xl = [&](int j) { return j == 0 ? VecList<K>{} : multiples(L, S.pow(x, j)); };
  auto tors = [&](int j) {
    if (j == 0) return VecList<K>{};
    return torsion_submodule(L, S.pow(x, j)).incl.images();
  };
  auto gens = [&](int j) {
    if (j > 0) return multiples(L, S.pow(x, j));
    VecList<K> g;
    for (std::uint32_t c = 0; c < L.rank(); ++c) g.push_back(L.gen(c));
    return g;
  };
  out.low_torsion = same_submodule(L, tors(1), gens(n - 1));
  out.high_torsion = same_submodule(L, tors(n - 1), xl(1));
  return out;
}

// ---------------------------------------------------------------- alpha0

template <class K>
struct Alpha0 {
  OmegaCover<K> cover;
  Quot<K> omega_mod_x;        // Omega -> Omega / x Omega
  ModuleMap<K> alpha;         // M -> Omega / x Omega, twist n delta
  FPModule<K> P_mod_x;
  ModuleMap<K> rho;           // Omega / x Omega -> P / xP
  ModuleMap<K> cover_mod_x;   // P / xP -> M
  bool theta_exact = false;   // M -> Omega/x Omega -> Omega_{A/x}(M) -> 0 exact
};

template <class K>
Alpha0<K> alpha0(const ModuleMap<K>& pi, const Poly<K>& x, int n) {
  const auto& L = pi.source();
  const auto& M = pi.target();
  const auto& R = L.ring();
  const auto& S = L.poly();
  int delta = element_degree(R, x);
  auto cov = omega_cover(L);
  auto om = quotient_by_elem(cov.omega.mod, x);
  if (om.mod.rank() != cov.omega.mod.rank()) throw std::logic_error("alpha0: Omega/x Omega changed generators");
  for (std::uint32_t c = 0; c < om.mod.rank(); ++c)
    if (!om.mod.equal(om.proj.images()[c], om.mod.gen(c))) throw std::logic_error("alpha0: Omega/x Omega changed generators");

  Preimage<K> through_pi(pi), through_p(cov.p), into_omega(cov.omega.incl);
  auto xn1 = S.pow(x, n - 1);
  VecList<K> im;
  for (std::uint32_t c = 0; c < M.rank(); ++c) {
    auto l = through_pi(M.gen(c));
    if (!l) throw std::logic_error("alpha0: generator of M does not lift to L");
    auto pt = through_p(L.reduce(S.mul(xn1, *l)));
    if (!pt) throw std::logic_error("alpha0: element does not lift to P");
    auto w = into_omega(S.mul(x, *pt));
    if (!w) throw std::logic_error("alpha0: x * lift is not in Omega");
    im.push_back(om.proj.apply(*w));
  }
  ModuleMap<K> alpha(M, om.mod, im, n * delta, false);
  if (!alpha.well_defined()) throw std::logic_error("alpha0: map is not well defined");

  auto PxP = quotient_by_elem(cov.P, x).mod;
  // P/xP keeps the generators of P since x has no constant term.
  VecList<K> rim;
  for (auto& g : cov.omega.incl.images()) rim.push_back(g);
  ModuleMap<K> rho(om.mod, PxP, rim, 0, false);
  if (!rho.well_defined()) throw std::logic_error("alpha0: Omega/x Omega -> P/xP is not well defined");
  VecList<K> cim;
  for (auto& g : cov.p.images()) cim.push_back(pi.apply(g));
  ModuleMap<K> cmx(PxP, M, cim, 0, false);
  Alpha0<K> out{cov, om, alpha, PxP, rho, cmx, false};
  out.theta_exact = rho.after(alpha).is_zero() && kernel_is(rho, alpha.images()) &&
                    same_submodule(PxP, rho.images(), kernel(cmx).incl.images());
  return out;
}

// ---------------------------------------------------------------- verify

struct LiftingFlags {
  bool annihilated = false;   // x^(n+1) E = 0
  bool exact = false;         // (i) 0 -> M -> E -> L -> 0
  bool mod_x = false;         // (ii) E / xE = M
  bool mod_xn = false;        // (iii) E / x^n E = L
  bool torsion_xn = false;    // (iv) E[x^n] = xE
  bool torsion_x = false;     // (v) E[x] = x^n E
  bool ok() const { return annihilated && exact && mod_x && mod_xn && torsion_xn && torsion_x; }
};

// g: M(-n delta) -> E, f: E -> L.
template <class K>
LiftingFlags verify_lifting(const ModuleMap<K>& g, const ModuleMap<K>& f, const FPModule<K>& M, const Poly<K>& x,
                            int n) {
  const auto& E = f.source();
  const auto& S = E.poly();
  LiftingFlags out;
  out.annihilated = true;
  for (auto& v : multiples(E, S.pow(x, n + 1)))
    if (!E.is_zero(v)) out.annihilated = false;
  auto kf = kernel(f).incl.images();
  out.exact = is_injective(g) && is_surjective(f) && f.after(g).is_zero() && same_submodule(E, kf, g.images());
  auto q = quotient_by_elem(E, x).mod;
  int lo = std::min(q.min_degree(), M.min_degree());
  out.mod_x = q.hilbert(lo, lo + 16) == M.hilbert(lo, lo + 16) && find_isomorphism(q, M, 1, 64).has_value();
  out.mod_xn = is_surjective(f) && same_submodule(E, kf, multiples(E, S.pow(x, n)));
  out.torsion_xn = same_submodule(E, torsion_submodule(E, S.pow(x, n)).incl.images(), multiples(E, x));
  out.torsion_x = same_submodule(E, torsion_submodule(E, x).incl.images(), multiples(E, S.pow(x, n)));
  return out;
}

// ---------------------------------------------------------------- one step

template <class K>
struct Obstruction {
  std::string kind;        // "nonsplit", "alpha0_not_injective", "x_is_zero"
  int n = 0;
  std::optional<FPModule<K>> syzygy;   // Omega_{A/x}(M) = coker alpha0
  VecList<K> relations;                // relations of the syzygy module
  VecList<K> cocycle;                  // their images in M
  VecList<K> kernel;                   // ker alpha0 when not injective
  bool nonzero_verified = false;
};

template <class K>
struct LiftExtension {
  FPModule<K> E;
  ModuleMap<K> g;        // M(-n delta) -> E
  ModuleMap<K> f;        // E -> L
  ModuleMap<K> beta;     // Omega/x Omega -> M, twist -n delta
  ModuleMap<K> times_x;  // L -> E, twist delta
  ModuleMap<K> pi;       // E -> M
  LiftingFlags flags;
  bool ses_exact = false;  // 0 -> L --x--> E --pi--> M -> 0
};

template <class K>
struct StepPrep {
  std::optional<Alpha0<K>> a0;
  std::optional<SplitResult<K>> split;
  std::optional<Obstruction<K>> obstruction;
  bool injective = false;
};

template <class K>
Obstruction<K> nonsplit_witness(const Alpha0<K>& a0, int n) {
  const auto& M = a0.alpha.source();
  const auto& S = M.poly();
  Obstruction<K> ob{"nonsplit", n, std::nullopt, {}, {}, {}, false};
  auto C = image(a0.rho);
  ob.syzygy = C.mod;
  Preimage<K> lift_rho(a0.rho), lift_alpha(a0.alpha);
  VecList<K> lifts;
  for (auto& r : C.incl.images()) {
    auto l = lift_rho(r);
    if (!l) throw std::logic_error("obstruction: syzygy generator does not lift");
    lifts.push_back(*l);
  }
  int tw = a0.alpha.twist();
  auto B = FPModule<K>::free(M.ring(), C.mod.degs());
  HomSystem<K> sys(B, M, -tw);
  for (std::size_t j = 0; j < C.mod.rels().size(); ++j) {
    const auto& r = C.mod.rels()[j];
    auto v = a0.omega_mod_x.mod.reduce(S.substitute(r, lifts));
    auto m = lift_alpha(v);
    if (!m) throw std::logic_error("obstruction: relation image is not in the image of alpha0");
    auto mv = M.reduce(*m);
    ob.relations.push_back(r);
    ob.cocycle.push_back(mv);
    sys.add_equation(r, C.mod.rel_degs()[j] - tw, mv);
  }
  ob.nonzero_verified = !sys.solve().has_value();
  return ob;
}

template <class K>
StepPrep<K> prepare_step(const ModuleMap<K>& pi, const Poly<K>& x, int n) {
  StepPrep<K> prep;
  const auto& R = pi.source().ring();
  if (R.reduce(x).is_zero()) {
    prep.obstruction = Obstruction<K>{"x_is_zero", n, std::nullopt, {}, {}, {}, !pi.target().is_zero_module()};
    return prep;
  }
  auto pre = check_lifting(pi, x, n);
  if (!pre.ok()) throw std::invalid_argument("not a lifting of order " + std::to_string(n) + ": " + pre.violated());
  prep.a0 = alpha0(pi, x, n);
  auto ker = kernel(prep.a0->alpha);
  prep.injective = ker.mod.is_zero_module();
  if (!prep.injective) {
    prep.obstruction = Obstruction<K>{"alpha0_not_injective", n, std::nullopt, {}, {}, ker.incl.images(), true};
    return prep;
  }
  prep.split = split_injection_test(prep.a0->alpha, true);
  if (!prep.split->retraction) prep.obstruction = nonsplit_witness(*prep.a0, n);
  return prep;
}

template <class K>
LiftExtension<K> build_extension(const ModuleMap<K>& pi, const Alpha0<K>& a0, const ModuleMap<K>& beta,
                                 const Poly<K>& x, int n) {
  const auto& L = pi.source();
  const auto& M = pi.target();
  const auto& R = L.ring();
  const auto& S = L.poly();
  int delta = element_degree(R, x);
  auto Mt = M.shift(n * delta);
  const auto& Om = a0.cover.omega.mod;
  const auto& P = a0.cover.P;
  // E = (M(-n delta) + P) / {(gamma w, -w)} with gamma = beta o proj.
  auto ds = direct_sum<K>({Mt, P});
  VecList<K> rels = ds.mod.rels();
  for (std::uint32_t c = 0; c < Om.rank(); ++c) {
    auto gw = beta.apply(a0.omega_mod_x.proj.images()[c]);
    rels.push_back(S.sub(ds.incl[0].apply(gw), ds.incl[1].apply(a0.cover.omega.incl.images()[c])));
  }
  FPModule<K> raw(R, ds.mod.degs(), rels);
  VecList<K> fim, gim;
  for (std::uint32_t c = 0; c < Mt.rank(); ++c) {
    fim.push_back({});
    gim.push_back(S.basis_vector(c));
  }
  for (auto& im : a0.cover.p.images()) fim.push_back(im);
  ModuleMap<K> f_raw(raw, L, fim, 0);
  ModuleMap<K> g_raw(Mt, raw, gim, 0);
  auto mm = minimize(raw);
  const auto& E = mm.mod;
  auto f = f_raw.after(mm.from);
  auto g = mm.to.after(g_raw);
  // x * (lift of each generator of L); the lift is unique up to g(M), which x kills.
  Preimage<K> lift_f(f);
  VecList<K> xim;
  for (std::uint32_t c = 0; c < L.rank(); ++c) {
    auto l = lift_f(L.gen(c));
    if (!l) throw std::logic_error("extension: E -> L is not surjective");
    xim.push_back(E.reduce(S.mul(x, *l)));
  }
  ModuleMap<K> tx(L, E, xim, delta);
  auto pe = pi.after(f);
  LiftExtension<K> out{E, g, f, beta, tx, pe, verify_lifting(g, f, M, x, n), false};
  out.ses_exact = is_injective(tx) && is_surjective(pe) && pe.after(tx).is_zero() && kernel_is(pe, tx.images());
  return out;
}

template <class K>
struct LiftStepResult {
  StepPrep<K> prep;
  std::optional<LiftExtension<K>> success;
  const std::optional<Obstruction<K>>& obstruction() const { return prep.obstruction; }
  bool ok() const { return success.has_value() && success->flags.ok(); }
};

// choice = 0 uses the computed retraction; choice k > 0 adds the (k-1)-th
// basis map of the retraction ambiguity.
template <class K>
LiftStepResult<K> lift_step(const ModuleMap<K>& pi, const Poly<K>& x, int n, std::size_t choice = 0) {
  LiftStepResult<K> res{prepare_step(pi, x, n), std::nullopt};
  if (res.prep.obstruction) return res;
  auto beta = *res.prep.split->retraction;
  if (choice > 0) {
    if (choice > res.prep.split->ambiguity.size()) throw std::out_of_range("lift_step: no such retraction choice");
    beta = beta.plus(res.prep.split->ambiguity[choice - 1]);
  }
  res.success = build_extension(pi, *res.prep.a0, beta, x, n);
  return res;
}

// L / xL is M through some isomorphism found by search.
template <class K>
ModuleMap<K> quotient_map_to(const FPModule<K>& L, const FPModule<K>& M, const Poly<K>& x) {
  auto q = quotient_by_elem(L, x);
  auto iso = find_isomorphism(q.mod, M, 1, 64);
  if (!iso) throw std::invalid_argument("L / xL is not isomorphic to M");
  return iso->after(q.proj);
}

template <class K>
LiftStepResult<K> lift_step(const FPModule<K>& M, const FPModule<K>& L, const Poly<K>& x, int n,
                            std::size_t choice = 0) {
  return lift_step(quotient_map_to(L, M, x), x, n, choice);
}

// ---------------------------------------------------------------- chains

struct LiftOptions {
  int n_max = 5;
  int D = 12;
  int i_max = 4;
  int retry_breadth = 0;
  bool dg_window = true;
};

template <class K>
struct LimitResult {
  FPModule<K> L;
  ModuleMap<K> to_top;                 // L -> L_N (identity on generators)
  std::vector<bool> quotient_matches;  // L / x^n L = L_n, n = 1..N
  bool x_regular = false;
  int window_D = 0;
  bool ok() const {
    if (!x_regular) return false;
    for (bool b : quotient_matches)
      if (!b) return false;
    return true;
  }
};

template <class K>
struct LiftCertificate {
  FPModule<K> M;
  Poly<K> x;
  std::vector<FPModule<K>> chain;       // L_1 = M, ..., L_N
  std::vector<ModuleMap<K>> down;       // down[n-1] : L_{n+1} -> L_n
  std::vector<ModuleMap<K>> pis;        // pis[n-1] : L_n -> M
  std::vector<LiftingFlags> flags;      // per successful step
  std::vector<bool> ses_exact;
  std::vector<bool> coherent;           // H of [L_{n+1} --x^n--> L_{n+1}] matches
  std::vector<bool> theta_exact;
  std::optional<Obstruction<K>> obstruction;
  std::optional<LimitResult<K>> limit;
  std::optional<std::string> limit_error;
  std::optional<ExtTable<K>> ext_window;  // Ext over Kos(x; A) of M with itself
  int retries_used = 0;
  bool ok() const {
    if (obstruction || !limit || !limit->ok()) return false;
    for (auto& f : flags)
      if (!f.ok()) return false;
    for (bool b : ses_exact)
      if (!b) return false;
    for (bool b : coherent)
      if (!b) return false;
    return true;
  }
};

// Lemma-3.5 style check of a consecutive pair: [L' --x^n--> L'] has H_0 = L
// (through `down`) and H_1 = x L'.
template <class K>
bool chain_coherent(const ModuleMap<K>& down, const Poly<K>& x, int n) {
  const auto& Lp = down.source();
  const auto& S = Lp.poly();
  auto xn = S.pow(x, n);
  bool h0 = is_surjective(down) && kernel_is(down, multiples(Lp, xn));
  bool h1 = same_submodule(Lp, torsion_submodule(Lp, xn).incl.images(), multiples(Lp, x));
  return h0 && h1;
}

// Minimal N for which L_N carries every relation of the limit: relations of
// the limit sit in degrees at most the top relation degree of M.
template <class K>
int chain_length_needed(const FPModule<K>& M, int delta) {
  auto mm = minimize(M);
  if (mm.mod.rank() == 0) return 1;
  int lo = *std::min_element(mm.mod.degs().begin(), mm.mod.degs().end());
  int top = lo;
  for (auto d : mm.mod.rel_degs()) top = std::max(top, d);
  for (auto& g : M.ring().ideal_gb()) top = std::max(top, lo + *M.poly().degree(g, {}));
  return (top - lo) / delta + 1;
}

// Keeps the relations of L_N below N*delta + (lowest generator degree), where
// L_N and the limit agree, and checks the result against the whole chain.
template <class K>
LimitResult<K> reconstruct_limit(const std::vector<FPModule<K>>& chain, const std::vector<ModuleMap<K>>& down,
                                 const Poly<K>& x, int D) {
  if (chain.empty()) throw std::invalid_argument("reconstruct_limit: empty chain");
  const auto& M = chain.front();
  int delta = element_degree(M.ring(), x);
  int N = static_cast<int>(chain.size());
  int need = chain_length_needed(M, delta);
  if (N < need)
    throw std::invalid_argument("chain too short: have N = " + std::to_string(N) + ", need N >= " + std::to_string(need));
  const auto& LN = chain.back();
  const auto& S = LN.poly();
  int lo = LN.rank() ? *std::min_element(LN.degs().begin(), LN.degs().end()) : 0;
  int cut = N * delta + lo;
  VecList<K> rels;
  for (std::size_t j = 0; j < LN.rels().size(); ++j)
    if (LN.rel_degs()[j] < cut) rels.push_back(LN.rels()[j]);
  FPModule<K> L(LN.ring(), LN.degs(), rels);
  VecList<K> id;
  for (std::uint32_t c = 0; c < L.rank(); ++c) id.push_back(LN.gen(c));
  ModuleMap<K> to_top(L, LN, id, 0);
  LimitResult<K> out{L, to_top, {}, false, D};
  out.x_regular = kernel(ModuleMap<K>::multiplication(L, x)).mod.is_zero_module();
  // L -> L_N -> ... -> L_n must be onto with kernel x^n L.
  auto to_n = to_top;
  std::vector<ModuleMap<K>> maps(N, to_top);
  for (int n = N - 1; n >= 1; --n) {
    to_n = down[n - 1].after(to_n);
    maps[n - 1] = to_n;
  }
  for (int n = 1; n <= N; ++n)
    out.quotient_matches.push_back(is_surjective(maps[n - 1]) && kernel_is(maps[n - 1], multiples(L, S.pow(x, n))));
  return out;
}

namespace detail {

template <class K>
bool extend_chain(LiftCertificate<K>& cert, const Poly<K>& x, int n, const LiftOptions& opt, int& budget) {
  if (n >= opt.n_max) return true;
  const auto& pi = cert.pis.back();
  auto prep = prepare_step(pi, x, n);
  if (prep.a0) cert.theta_exact.push_back(prep.a0->theta_exact);
  if (prep.obstruction) {
    if (!cert.obstruction) cert.obstruction = prep.obstruction;
    return false;
  }
  std::vector<ModuleMap<K>> cands{*prep.split->retraction};
  for (std::size_t k = 0; k < prep.split->ambiguity.size() && static_cast<int>(k) < opt.retry_breadth; ++k)
    cands.push_back(prep.split->retraction->plus(prep.split->ambiguity[k]));
  for (std::size_t c = 0; c < cands.size(); ++c) {
    if (c > 0) {
      if (budget <= 0) break;
      --budget;
      ++cert.retries_used;
    }
    auto ext = build_extension(pi, *prep.a0, cands[c], x, n);
    cert.chain.push_back(ext.E);
    cert.down.push_back(ext.f);
    cert.pis.push_back(ext.pi);
    cert.flags.push_back(ext.flags);
    cert.ses_exact.push_back(ext.ses_exact);
    cert.coherent.push_back(chain_coherent(ext.f, x, n));
    if (ext.flags.ok() && extend_chain(cert, x, n + 1, opt, budget)) return true;
    if (c + 1 == cands.size() || budget <= 0) return false;
    cert.chain.pop_back();
    cert.down.pop_back();
    cert.pis.pop_back();
    cert.flags.pop_back();
    cert.ses_exact.pop_back();
    cert.coherent.pop_back();
  }
  return false;
}

}  // namespace detail

template <class K>
ExtTable<K> lifting_ext_window(const FPModule<K>& M, const Poly<K>& x, int i_max) {
  KoszulAlgebra<K> G(M.ring(), {x}, {element_degree(M.ring(), x)});
  auto Md = discrete_as_dg_module(M, G);
  return dg_ext(Md, Md, i_max);
}

template <class K>
LiftCertificate<K> lift_to_order(const FPModule<K>& M, const Poly<K>& x, const LiftOptions& opt = {}) {
  const auto& S = M.poly();
  for (auto& v : multiples(M, x))
    if (!M.is_zero(v)) throw std::invalid_argument("x does not annihilate M");
  auto mm = minimize(M).mod;
  LiftCertificate<K> cert{mm, x, {mm}, {}, {ModuleMap<K>::identity(mm)}, {}, {}, {}, {}, std::nullopt, std::nullopt,
                          std::nullopt, std::nullopt, 0};
  if (opt.dg_window && !M.ring().reduce(x).is_zero()) cert.ext_window = lifting_ext_window(mm, x, std::min(opt.i_max, 2));
  int budget = opt.retry_breadth * opt.n_max;
  bool done = detail::extend_chain(cert, x, 1, opt, budget);
  if (done) {
    cert.obstruction.reset();
    try {
      cert.limit = reconstruct_limit(cert.chain, cert.down, x, opt.D);
    } catch (const std::invalid_argument& e) {
      cert.limit_error = e.what();
    }
  }
  (void)S;
  return cert;
}

// ---------------------------------------------------------------- several elements

template <class K>
struct MultiStage {
  int j = 0;                               // element index being lifted along (1-based)
  QuotientRing<K> ring;                    // A / (x_1 .. x_{j-1})
  LiftCertificate<K> cert;
  std::optional<std::vector<long>> ext2_before;  // Ext^2 over Gamma_j of the input, window dims
  std::optional<std::vector<long>> ext2_after;   // Ext^2 over Gamma_{j-1} of the limit
  bool descent_ok = true;
};

template <class K>
struct MultiResult {
  std::vector<MultiStage<K>> stages;
  std::optional<FPModule<K>> L;
  bool round_trip = false;   // L / (x) L = M through the chain maps
  bool discrete = false;     // positive Koszul homology of L vanishes
  std::optional<int> failed_stage;
  bool ok() const { return !failed_stage && L && round_trip && discrete; }
};

template <class K>
std::vector<long> ext2_window(const QuotientRing<K>& A, const std::vector<Poly<K>>& xs, int upto,
                              const FPModule<K>& N, int dlo, int dhi) {
  std::vector<Poly<K>> f(xs.begin(), xs.begin() + upto);
  std::vector<int> degs;
  for (auto& g : f) degs.push_back(element_degree(A, g));
  KoszulAlgebra<K> G(A, f, degs);
  auto Nd = discrete_as_dg_module(restrict_scalars(N, A), G);
  return dg_ext(Nd, Nd, 2).at(2).hilbert(dlo, dhi);
}

inline bool all_zero(const std::vector<long>& v) {
  for (auto x : v)
    if (x) return false;
  return true;
}

template <class K>
MultiResult<K> lift_multi(const QuotientRing<K>& A, const std::vector<Poly<K>>& xs, const FPModule<K>& M,
                          const LiftOptions& opt = {}, bool check_descent = true) {
  int t = static_cast<int>(xs.size());
  std::vector<QuotientRing<K>> rings{A};
  for (int j = 1; j <= t; ++j) rings.push_back(A.quotient_by(std::vector<Poly<K>>(xs.begin(), xs.begin() + j)));
  for (int j = 0; j < t; ++j)
    for (auto& v : multiples(M, xs[j]))
      if (!M.is_zero(v)) throw std::invalid_argument("sequence element does not annihilate M");
  MultiResult<K> res;
  auto cur = extend_scalars(restrict_scalars(M, A), rings[t]);
  // Composite of the comparison maps, from the current module down to M.
  std::optional<ModuleMap<K>> to_M;
  int dlo = -opt.D, dhi = opt.D;
  for (int j = t; j >= 1; --j) {
    const auto& R = rings[j - 1];
    auto Mj = restrict_scalars(cur, R);
    MultiStage<K> st{j, R, lift_to_order(Mj, xs[j - 1], opt), std::nullopt, std::nullopt, true};
    if (check_descent) st.ext2_before = ext2_window(A, xs, j, cur, dlo, dhi);
    if (!st.cert.ok()) {
      res.failed_stage = j;
      res.stages.push_back(std::move(st));
      return res;
    }
    const auto& lim = *st.cert.limit;
    if (check_descent) {
      st.ext2_after = ext2_window(A, xs, j - 1, lim.L, dlo, dhi);
      st.descent_ok = !all_zero(*st.ext2_before) || all_zero(*st.ext2_after);
    }
    // lim.L -> L_N -> ... -> L_1 = minimize(Mj) -> Mj (= cur over R).
    auto step = st.cert.pis.back().after(lim.to_top);
    auto back = minimize(Mj);
    auto to_cur = rehome(back.from, back.mod, cur).after(rehome(step, lim.L, back.mod));
    to_M = to_M ? rehome(*to_M, cur, to_M->target()).after(to_cur) : to_cur;
    cur = lim.L;
    res.stages.push_back(std::move(st));
  }
  auto L = restrict_scalars(cur, A);
  res.L = L;
  if (t == 0) {
    res.round_trip = true;
    res.discrete = true;
    return res;
  }
  auto Mt = extend_scalars(restrict_scalars(M, A), rings[t]);
  auto comp = ModuleMap<K>(L, restrict_scalars(Mt, A), to_M->images(), 0);
  VecList<K> xl;
  for (auto& g : xs)
    for (auto& v : multiples(L, g)) xl.push_back(v);
  res.round_trip = is_surjective(comp) && kernel_is(comp, xl);
  res.discrete = true;
  auto LG = extend_to_gamma(L, KoszulAlgebra<K>(A, xs)).underlying();
  for (int k = 1; k <= LG.hi(); ++k)
    if (!homology(LG, k).mod.is_zero_module()) res.discrete = false;
  return res;
}

// ---------------------------------------------------------------- regular sequences

template <class K>
struct LciVerdict {
  bool ext2_zero = false;
  std::vector<long> ext2_dims;
  std::optional<bool> lift_success;   // only attempted when Ext^2 vanishes
  bool regular = false;
  bool consistent = true;
  std::string verdict;                // "regular" or "not regular"
  std::optional<MultiResult<K>> lift;
};

template <class K>
LciVerdict<K> check_lci(const QuotientRing<K>& A, const std::vector<Poly<K>>& xs, const FPModule<K>& M,
                        const LiftOptions& opt = {}) {
  if (!A.is_polynomial_ring()) throw std::invalid_argument("check_lci needs a polynomial ring");
  if (M.is_zero_module()) throw std::invalid_argument("check_lci needs a nonzero module");
  LciVerdict<K> v;
  v.regular = is_regular_sequence(A, xs).regular;
  v.ext2_dims = ext2_window(A, xs, static_cast<int>(xs.size()), M, -opt.D, opt.D);
  v.ext2_zero = all_zero(v.ext2_dims);
  if (v.ext2_zero) {
    v.lift = lift_multi(A, xs, M, opt, false);
    v.lift_success = v.lift->ok();
    v.consistent = v.regular && *v.lift_success;
  }
  if (v.lift_success && *v.lift_success && !v.regular) v.consistent = false;
  v.verdict = v.regular ? "regular" : "not regular";
  if (!v.consistent)
    throw std::logic_error(std::string("check_lci: inconsistent facts (ext2_zero=") + (v.ext2_zero ? "1" : "0") +
                           ", lift=" + (v.lift_success && *v.lift_success ? "1" : "0") +
                           ", regular=" + (v.regular ? "1" : "0") + ")");
  return v;
}

}  // namespace klift
