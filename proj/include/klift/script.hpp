#pragma once

// Script front end. A script declares rings, elements, modules and complexes
// and then lists commands; running it yields one JSON document with schema
// "klift-result/1". Grammar and payloads are described in docs/format.md.

#include <algorithm>
#include <atomic>
#include <cctype>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "klift/lifting.hpp"
#include "klift/parse_poly.hpp"

namespace klift::script {

using K = PrimeField;
using json = nlohmann::ordered_json;
using Ring = QuotientRing<K>;
using Mod = FPModule<K>;
using Map = ModuleMap<K>;
using PolyK = Poly<K>;
using Complex = ChainComplex<K>;

inline constexpr const char* kSchema = "klift-result/1";
inline constexpr const char* kVersion = "0.1.0";

struct Defaults {
  int n_max = 5;
  int D = 12;
  int i_max = 4;
  int slack = 2;
};

struct Pos {
  int line = 1, col = 1;
};

struct ScriptError : std::runtime_error {
  ScriptError(Pos p, const std::string& msg)
      : std::runtime_error(std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + msg), pos(p), message(msg) {}
  Pos pos;
  std::string message;
};

// ---------------------------------------------------------------- syntax

struct Arg;

struct Value {
  enum class Kind { atom, list, call } kind = Kind::atom;
  std::string text;          // atom text or call name
  std::vector<Value> items;  // list items; the two operands of "/"
  std::vector<Arg> args;     // call arguments
  Pos pos;
  std::size_t offset = 0;    // first character within the statement
};

struct Arg {
  std::string key;  // empty for positional arguments
  int group = 0;    // index of the ';'-separated group
  Value value;
  Pos pos;
};

struct Statement {
  std::string text;
  std::vector<Pos> pos;  // one per character
  Pos at(std::size_t i) const {
    if (i < pos.size()) return pos[i];
    if (pos.empty()) return {};
    return {pos.back().line, pos.back().col + 1};
  }
};

// Statements end at a newline outside brackets; '#' starts a comment.
inline std::vector<Statement> split_statements(const std::string& src) {
  std::vector<Statement> out;
  Statement cur;
  int depth = 0, line = 1, col = 1;
  bool comment = false;
  auto flush = [&] {
    std::size_t a = 0, b = cur.text.size();
    while (a < b && cur.text[a] == ' ') ++a;
    while (b > a && cur.text[b - 1] == ' ') --b;
    if (a < b) {
      Statement s;
      s.text = cur.text.substr(a, b - a);
      s.pos.assign(cur.pos.begin() + static_cast<long>(a), cur.pos.begin() + static_cast<long>(b));
      out.push_back(std::move(s));
    }
    cur = {};
  };
  for (char c : src) {
    if (c == '\n') {
      comment = false;
      if (depth <= 0) {
        flush();
        depth = 0;
      } else {
        cur.text += ' ';
        cur.pos.push_back({line, col});
      }
      ++line;
      col = 1;
      continue;
    }
    if (comment || c == '#') {
      comment = true;
      ++col;
      continue;
    }
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == '\t' || c == '\r') c = ' ';
    cur.text += c;
    cur.pos.push_back({line, col});
    ++col;
  }
  flush();
  return out;
}

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  explicit Parser(const Statement& s) : s_(s) {}

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const { throw ScriptError(s_.at(at), msg); }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, i_); }

  void ws() {
    while (i_ < s_.text.size() && s_.text[i_] == ' ') ++i_;
  }
  char peek() const { return i_ < s_.text.size() ? s_.text[i_] : '\0'; }
  std::size_t index() const { return i_; }
  bool at_end() {
    ws();
    return i_ >= s_.text.size();
  }
  void expect_end() {
    if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
  }
  void expect(char c) {
    ws();
    if (peek() != c) {
      if (peek() == '\0') fail(std::string("expected '") + c + "' before end of statement");
      fail(std::string("expected '") + c + "', found '" + peek() + "'");
    }
    ++i_;
  }

  std::string ident() {
    ws();
    if (!ident_start(peek())) return "";
    std::size_t st = i_;
    while (ident_char(peek())) ++i_;
    return s_.text.substr(st, i_ - st);
  }

  // Command names may contain '-'.
  std::string command_name() {
    ws();
    std::size_t st = i_;
    if (!ident_start(peek())) return "";
    while (ident_char(peek()) || peek() == '-') ++i_;
    return s_.text.substr(st, i_ - st);
  }

  Value value() {
    ws();
    std::size_t st = i_;
    Value v;
    v.pos = s_.at(st);
    v.offset = st;
    if (peek() == '[') {
      ++i_;
      v.kind = Value::Kind::list;
      ws();
      if (peek() == ']') {
        ++i_;
        return postfix(v);
      }
      while (true) {
        v.items.push_back(value());
        ws();
        if (peek() == ',') {
          ++i_;
          continue;
        }
        if (peek() == ']') {
          ++i_;
          break;
        }
        fail(peek() == '\0' ? "unclosed '['" : std::string("expected ',' or ']', found '") + peek() + "'");
      }
      return postfix(v);
    }
    if (ident_start(peek())) {
      std::size_t save = i_;
      std::string id = ident();
      ws();
      if (peek() == '(') {
        ++i_;
        v.kind = Value::Kind::call;
        v.text = id;
        v.args = args();
        return postfix(v);
      }
      i_ = save;
    }
    int depth = 0;
    while (i_ < s_.text.size()) {
      char c = s_.text[i_];
      if (depth == 0 && (c == ',' || c == ';' || c == ')' || c == ']' || c == '=')) break;
      if (depth == 0 && c == '/' && ideal_ahead(i_)) break;
      if (c == '[') fail("unexpected '['");
      if (c == '(') ++depth;
      if (c == ')') --depth;
      ++i_;
    }
    std::size_t b = i_;
    while (b > st && s_.text[b - 1] == ' ') --b;
    if (b == st) fail(peek() == '\0' ? "expected a value before end of statement" : "expected a value", st);
    v.text = s_.text.substr(st, b - st);
    return postfix(v);
  }

 private:
  bool ideal_ahead(std::size_t j) const {
    if (s_.text[j] != '/') return false;
    ++j;
    while (j < s_.text.size() && s_.text[j] == ' ') ++j;
    if (s_.text.compare(j, 5, "ideal") != 0) return false;
    j += 5;
    while (j < s_.text.size() && s_.text[j] == ' ') ++j;
    return j < s_.text.size() && s_.text[j] == '(';
  }

  Value postfix(Value v) {
    ws();
    if (peek() == '/' && ideal_ahead(i_)) {
      ++i_;
      Value q;
      q.kind = Value::Kind::call;
      q.text = "/";
      q.pos = v.pos;
      q.offset = v.offset;
      q.items.push_back(std::move(v));
      q.items.push_back(value());
      return q;
    }
    return v;
  }

  std::vector<Arg> args() {
    std::vector<Arg> out;
    int group = 0;
    ws();
    if (peek() == ')') {
      ++i_;
      return out;
    }
    while (true) {
      ws();
      Arg a;
      a.group = group;
      a.pos = s_.at(i_);
      std::size_t save = i_;
      std::string id = ident();
      ws();
      if (!id.empty() && peek() == '=') {
        ++i_;
        a.key = id;
      } else {
        i_ = save;
      }
      a.value = value();
      out.push_back(std::move(a));
      ws();
      char c = peek();
      if (c == ',') {
        ++i_;
      } else if (c == ';') {
        ++i_;
        ++group;
      } else if (c == ')') {
        ++i_;
        break;
      } else if (c == '\0') {
        fail("unclosed '(': expected ')' before end of statement");
      } else {
        fail(std::string("unexpected '") + c + "'");
      }
    }
    return out;
  }

  const Statement& s_;
  std::size_t i_ = 0;
};

// ---------------------------------------------------------------- binding

struct Env {
  std::map<std::string, Ring> rings;
  std::map<std::string, Mod> modules;
  std::map<std::string, Complex> complexes;
  std::map<std::string, std::pair<Ring, PolyK>> elems;
  std::uint64_t seed = 1;

  bool bound(const std::string& n) const {
    return rings.count(n) || modules.count(n) || complexes.count(n) || elems.count(n);
  }
};

class Evaluator {
 public:
  Evaluator(const Statement& s, const Env& env) : s_(s), env_(env) {}

  [[noreturn]] void fail(const Value& v, const std::string& msg) const { throw ScriptError(v.pos, msg); }
  [[noreturn]] void fail_at(std::size_t off, const std::string& msg) const { throw ScriptError(s_.at(off), msg); }

  const Env& env() const { return env_; }

  bool is_name(const Value& v) const {
    if (v.kind != Value::Kind::atom || v.text.empty() || !ident_start(v.text[0])) return false;
    return std::all_of(v.text.begin(), v.text.end(), ident_char);
  }

  long integer(const Value& v) const {
    if (v.kind != Value::Kind::atom) fail(v, "expected an integer");
    std::size_t j = v.text[0] == '-' ? 1 : 0;
    if (j == v.text.size() || v.text.size() > 12 ||
        !std::all_of(v.text.begin() + static_cast<long>(j), v.text.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      fail(v, "expected an integer, found '" + v.text + "'");
    return std::stol(v.text);
  }

  std::vector<int> int_list(const Value& v) const {
    if (v.kind != Value::Kind::list) fail(v, "expected a list of integers");
    std::vector<int> out;
    for (auto& it : v.items) out.push_back(static_cast<int>(integer(it)));
    return out;
  }

  Ring ring(const Value& v) const {
    if (v.kind == Value::Kind::atom) {
      if (!is_name(v)) fail(v, "expected a ring");
      auto it = env_.rings.find(v.text);
      if (it == env_.rings.end()) fail(v, env_.bound(v.text) ? "'" + v.text + "' is not a ring" : "unbound name '" + v.text + "'");
      return it->second;
    }
    if (v.kind == Value::Kind::call && v.text == "poly") return poly_ring(v);
    if (v.kind == Value::Kind::call && v.text == "/") {
      Ring base = ring(v.items[0]);
      const Value& id = v.items[1];
      if (id.kind != Value::Kind::call || id.text != "ideal") fail(id, "expected ideal(...)");
      std::vector<PolyK> gens;
      for (auto& a : id.args) {
        if (!a.key.empty()) fail(a.value, "ideal takes no options");
        gens.push_back(element(base, a.value));
      }
      for (auto& g : base.ideal_generators()) gens.push_back(g);
      return Ring(base.poly(), gens);
    }
    fail(v, "expected a ring");
  }

  PolyK element(const Ring& R, const Value& v) const {
    if (v.kind != Value::Kind::atom) fail(v, "expected a polynomial");
    auto it = env_.elems.find(v.text);
    if (it != env_.elems.end() && !R.poly().var_index(v.text)) {
      if (!it->second.first.poly().same_as(R.poly())) fail(v, "element '" + v.text + "' lives over a different polynomial ring");
      return R.reduce(it->second.second);
    }
    PolyK p;
    try {
      p = parse_poly(R.poly(), v.text);
    } catch (const ParseError& e) {
      fail_at(v.offset + e.offset, e.what());
    }
    if (!R.poly().is_homogeneous(p)) fail(v, "homogeneity violation: '" + v.text + "' is not homogeneous");
    return p;
  }

  std::vector<PolyK> elements(const Ring& R, const Value& v) const {
    if (v.kind != Value::Kind::list) fail(v, "expected a list of elements");
    std::vector<PolyK> out;
    for (auto& it : v.items) out.push_back(element(R, it));
    return out;
  }

  Mod module(const Value& v) const {
    if (v.kind == Value::Kind::atom) {
      if (!is_name(v)) fail(v, "expected a module");
      auto it = env_.modules.find(v.text);
      if (it == env_.modules.end())
        fail(v, env_.bound(v.text) ? "'" + v.text + "' is not a module" : "unbound name '" + v.text + "'");
      return it->second;
    }
    if (v.kind != Value::Kind::call) fail(v, "expected a module");
    const std::string& f = v.text;
    if (f == "coker" || f == "free") {
      auto sp = split(v);
      if (sp.pos.size() != 1) fail(v, f + " expects the ring as its only positional argument");
      Ring R = ring(*sp.pos[0]);
      if (!sp.keys.count("shifts")) fail(v, f + " needs shifts=[...]");
      auto shifts = int_list(*sp.keys.at("shifts"));
      std::vector<Vec<K>> rels;
      if (f == "coker" && sp.keys.count("rels")) rels = rows(R, shifts, *sp.keys.at("rels"));
      check_keys(sp, f == "coker" ? std::vector<std::string>{"shifts", "rels"} : std::vector<std::string>{"shifts"});
      return Mod(R, shifts, rels);
    }
    if (f == "shift") {
      auto sp = split(v);
      if (sp.pos.size() != 2) fail(v, "shift(M, d) takes a module and an integer");
      check_keys(sp, {});
      return module(*sp.pos[0]).shift(static_cast<int>(integer(*sp.pos[1])));
    }
    if (f == "sum") {
      auto sp = split(v);
      check_keys(sp, {});
      if (sp.pos.empty()) fail(v, "sum needs at least one module");
      std::vector<Mod> parts;
      for (auto* p : sp.pos) parts.push_back(module(*p));
      for (auto& p : parts)
        if (!p.ring().same_as(parts[0].ring())) fail(v, "sum of modules over different rings");
      return direct_sum<K>(parts).mod;
    }
    if (f == "zero") {
      auto sp = split(v);
      check_keys(sp, {});
      if (sp.pos.size() != 1) fail(v, "zero(R) takes a ring");
      return Mod::zero(ring(*sp.pos[0]));
    }
    if (f == "random") return random_module(v);
    fail(v, "unknown module constructor '" + f + "'");
  }

  Complex complex(const Value& v) const {
    if (v.kind == Value::Kind::atom && is_name(v)) {
      auto it = env_.complexes.find(v.text);
      if (it == env_.complexes.end())
        fail(v, env_.bound(v.text) ? "'" + v.text + "' is not a complex" : "unbound name '" + v.text + "'");
      return it->second;
    }
    if (v.kind != Value::Kind::call || v.text != "chain") fail(v, "expected a complex");
    auto sp = split(v);
    check_keys(sp, {"terms", "maps", "lo"});
    if (sp.pos.size() != 1) fail(v, "chain expects the ring as its only positional argument");
    Ring R = ring(*sp.pos[0]);
    if (!sp.keys.count("terms") || !sp.keys.count("maps")) fail(v, "chain needs terms=[...] and maps=[...]");
    const Value& tv = *sp.keys.at("terms");
    const Value& mv = *sp.keys.at("maps");
    if (tv.kind != Value::Kind::list || tv.items.empty()) fail(tv, "terms must be a nonempty list of modules");
    if (mv.kind != Value::Kind::list || mv.items.size() + 1 != tv.items.size())
      fail(mv, "maps must list one differential per term after the first");
    Complex cc;
    cc.lo = sp.keys.count("lo") ? static_cast<int>(integer(*sp.keys.at("lo"))) : 0;
    for (auto& t : tv.items) {
      cc.C.push_back(module(t));
      if (!cc.C.back().ring().same_as(R)) fail(t, "term lives over a different ring");
    }
    cc.d.push_back(Map::zero(cc.C[0], Mod::zero(R)));
    for (std::size_t k = 0; k < mv.items.size(); ++k) {
      const auto& src = cc.C[k + 1];
      const auto& tgt = cc.C[k];
      auto ims = rows(R, tgt.degs(), mv.items[k], false);
      if (ims.size() != src.rank()) fail(mv.items[k], "differential needs one image per generator of its source");
      for (std::uint32_t c = 0; c < src.rank(); ++c)
        if (!ims[c].is_zero() && *R.poly().degree(ims[c], tgt.degs()) != src.degs()[c])
          fail(mv.items[k].items[c], "image has the wrong degree for a degree-0 map");
      try {
        cc.d.emplace_back(src, tgt, ims, 0, true);
      } catch (const std::exception& e) {
        fail(mv.items[k], std::string("differential is not well defined: ") + e.what());
      }
    }
    if (!cc.d_squared_zero()) fail(mv, "d^2 != 0");
    return cc;
  }

  struct Split {
    std::vector<const Value*> pos;
    std::map<std::string, const Value*> keys;
    std::vector<int> groups;
  };

  Split split(const Value& call) const {
    Split sp;
    for (auto& a : call.args) {
      if (a.key.empty()) {
        sp.pos.push_back(&a.value);
        sp.groups.push_back(a.group);
      } else {
        if (sp.keys.count(a.key)) throw ScriptError(a.pos, "option '" + a.key + "' given twice");
        sp.keys[a.key] = &a.value;
      }
    }
    return sp;
  }

  void check_keys(const Split& sp, const std::vector<std::string>& allowed) const {
    for (auto& [k, v] : sp.keys)
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) fail(*v, "unknown option '" + k + "'");
  }

  // Rows of polynomials, one vector per row, each with one entry per shift.
  std::vector<Vec<K>> rows(const Ring& R, const std::vector<int>& shifts, const Value& v, bool homogeneous = true) const {
    if (v.kind != Value::Kind::list) fail(v, "expected a list of rows");
    const auto& S = R.poly();
    std::vector<Vec<K>> out;
    for (auto& row : v.items) {
      if (row.kind != Value::Kind::list || row.items.size() != shifts.size())
        fail(row, "each row needs " + std::to_string(shifts.size()) + " entries");
      Vec<K> vec;
      for (std::uint32_t c = 0; c < row.items.size(); ++c) vec = S.add(vec, S.place(element(R, row.items[c]), c));
      if (homogeneous && !S.is_homogeneous(vec, shifts)) fail(row, "homogeneity violation: row is not homogeneous");
      out.push_back(vec);
    }
    return out;
  }

 private:
  Ring poly_ring(const Value& v) const {
    auto sp = split(v);
    check_keys(sp, {});
    if (sp.pos.empty()) fail(v, "poly needs a field");
    const Value& fv = *sp.pos[0];
    if (sp.groups[0] != 0 || fv.kind != Value::Kind::atom || fv.text.size() < 2 || fv.text[0] != 'F')
      fail(fv, "expected a prime field such as F5");
    std::uint32_t p = 0;
    Value digits = fv;
    digits.text = fv.text.substr(1);
    long pl = integer(digits);
    if (pl < 2) fail(fv, "characteristic must be a prime");
    p = static_cast<std::uint32_t>(pl);
    try {
      K check(p);
    } catch (const std::invalid_argument&) {
      fail(fv, "characteristic " + std::to_string(p) + " is not prime");
    }
    std::vector<std::string> names;
    std::vector<int> degs;
    for (std::size_t j = 1; j < sp.pos.size(); ++j) {
      const Value& a = *sp.pos[j];
      if (a.kind != Value::Kind::atom) fail(a, "expected a variable");
      auto colon = a.text.find(':');
      std::string name = a.text.substr(0, colon);
      while (!name.empty() && name.back() == ' ') name.pop_back();
      Value nv = a;
      nv.text = name;
      if (!is_name(nv)) fail(a, "bad variable name '" + name + "'");
      if (std::find(names.begin(), names.end(), name) != names.end()) fail(a, "duplicate variable '" + name + "'");
      int d = 1;
      if (colon != std::string::npos) {
        std::size_t at = colon + 1;
        while (at < a.text.size() && a.text[at] == ' ') ++at;
        Value dv = a;
        dv.text = a.text.substr(at);
        dv.offset = a.offset + at;
        dv.pos = s_.at(dv.offset);
        long dl = integer(dv);
        if (dl < 1) fail(dv, "degrees must be ≥ 1");
        d = static_cast<int>(dl);
      }
      names.push_back(name);
      degs.push_back(d);
    }
    if (names.empty()) fail(v, "poly needs at least one variable");
    if (static_cast<int>(names.size()) > kMaxVars) fail(v, "too many variables");
    return Ring(PolyRing<K>(K(p), names, degs));
  }

  // random(R; shifts=[..]; rels=k; kill=[..]): k random homogeneous relations
  // one degree above the top generator, plus e*g for each listed element e.
  Mod random_module(const Value& v) const {
    auto sp = split(v);
    check_keys(sp, {"shifts", "rels", "kill"});
    if (sp.pos.size() != 1) fail(v, "random expects the ring as its only positional argument");
    Ring R = ring(*sp.pos[0]);
    std::vector<int> shifts = sp.keys.count("shifts") ? int_list(*sp.keys.at("shifts")) : std::vector<int>{0};
    int nrel = sp.keys.count("rels") ? static_cast<int>(integer(*sp.keys.at("rels"))) : 1;
    std::vector<PolyK> kill;
    if (sp.keys.count("kill")) kill = elements(R, *sp.keys.at("kill"));
    const auto& S = R.poly();
    std::mt19937_64 rng(env_.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(v.pos.line));
    std::uniform_int_distribution<std::uint32_t> coef(0, S.field().characteristic() - 1);
    int top = shifts.empty() ? 0 : *std::max_element(shifts.begin(), shifts.end());
    std::vector<Vec<K>> rels;
    for (int j = 0; j < nrel; ++j) {
      Vec<K> vec;
      for (std::uint32_t c = 0; c < shifts.size(); ++c) {
        int e = top + 1 - shifts[c];
        if (e < 0) continue;
        std::vector<Term<K>> ts;
        for_each_monomial_of_degree(S.weights(), e, [&](const Monomial& m) {
          auto a = coef(rng);
          if (a) ts.push_back({c, m, a});
        });
        vec = S.add(vec, S.from_terms(ts));
      }
      if (!vec.is_zero()) rels.push_back(vec);
    }
    for (auto& g : kill)
      for (std::uint32_t c = 0; c < shifts.size(); ++c) rels.push_back(S.mul(g, S.basis_vector(c)));
    return Mod(R, shifts, rels);
  }

  const Statement& s_;
  const Env& env_;
};

// ---------------------------------------------------------------- encoding

inline json graded(const Mod& M, int width) {
  auto mm = minimize(M).mod;
  json j;
  if (mm.is_zero_module()) {
    j["min_degree"] = nullptr;
    j["dims"] = json::array();
    return j;
  }
  int lo = mm.min_degree();
  j["min_degree"] = lo;
  j["dims"] = mm.hilbert(lo, lo + width);
  return j;
}

// Graded dims over a fixed window, for side-by-side comparison.
inline json window(const Mod& M, int lo, int hi) {
  json j;
  j["from"] = lo;
  j["dims"] = M.hilbert(lo, hi);
  return j;
}

inline json presentation(const Mod& M) {
  auto mm = minimize(M).mod;
  const auto& S = mm.poly();
  json j;
  j["shifts"] = mm.degs();
  json rels = json::array();
  for (auto& r : mm.rels()) rels.push_back(S.vec_strings(r, mm.rank()));
  j["rels"] = rels;
  return j;
}

inline json flags_json(const LiftingFlags& f) {
  return json{{"annihilated", f.annihilated}, {"exact", f.exact},           {"mod_x", f.mod_x},
              {"mod_xn", f.mod_xn},           {"torsion_xn", f.torsion_xn}, {"torsion_x", f.torsion_x}};
}

inline json obstruction_json(const Obstruction<K>& ob, const Mod& M) {
  const auto& S = M.poly();
  json j;
  j["kind"] = ob.kind;
  j["n"] = ob.n;
  j["nonzero_verified"] = ob.nonzero_verified;
  json co = json::array();
  for (auto& c : ob.cocycle) co.push_back(S.vec_strings(M.reduce(c), M.rank()));
  j["cocycle"] = co;
  if (ob.syzygy) j["syzygy"] = presentation(*ob.syzygy);
  return j;
}

inline json ext_table(const ExtTable<K>& t, int width) {
  json a = json::array();
  for (int i = t.lo; i <= t.hi(); ++i) a.push_back(graded(t.at(i), width));
  return a;
}

inline json cert_json(const LiftCertificate<K>& c, int D) {
  json j;
  j["ok"] = c.ok();
  json chain = json::array();
  for (std::size_t n = 0; n < c.chain.size(); ++n) {
    json e;
    e["n"] = n + 1;
    e["presentation"] = presentation(c.chain[n]);
    e["dims"] = graded(c.chain[n], D);
    if (n > 0) {
      e["flags"] = flags_json(c.flags[n - 1]);
      e["ses_exact"] = static_cast<bool>(c.ses_exact[n - 1]);
      e["coherent"] = static_cast<bool>(c.coherent[n - 1]);
    }
    if (n < c.theta_exact.size()) e["theta_exact"] = static_cast<bool>(c.theta_exact[n]);
    chain.push_back(e);
  }
  j["chain"] = chain;
  j["obstruction"] = c.obstruction ? obstruction_json(*c.obstruction, c.M) : json(nullptr);
  if (c.limit) {
    json l;
    l["presentation"] = presentation(c.limit->L);
    l["dims"] = graded(c.limit->L, D);
    l["quotients_match"] = c.limit->quotient_matches;
    l["x_regular"] = c.limit->x_regular;
    l["window_D"] = c.limit->window_D;
    j["limit"] = l;
  } else {
    j["limit"] = nullptr;
  }
  if (c.limit_error) j["limit_error"] = *c.limit_error;
  if (c.ext_window) {
    json w = json::array();
    for (int i = c.ext_window->lo; i <= c.ext_window->hi(); ++i) w.push_back(window(c.ext_window->at(i), -D, D));
    j["ext_window"] = w;
    j["ext2_window_zero"] = c.ext_window->hi() >= 2 && c.ext_window->at(2).hilbert(-D, D) == std::vector<long>(2 * D + 1, 0);
  }
  j["retries_used"] = c.retries_used;
  return j;
}

// ---------------------------------------------------------------- running

template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
  int t = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < t; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  for (auto& th : pool) th.join();
}

struct RunContext {
  int threads = 1;
  Defaults defaults;
};

// Result of one command: the payload plus whether every internal consistency
// check held.
struct Outcome {
  json result;
  bool ok = true;
  std::string failure;
};

struct Command {
  std::string name;
  std::string echo;
  Pos pos;
  std::function<Outcome(const RunContext&)> run;
};

struct Program {
  Env env;
  std::vector<Command> commands;
};

json paper_examples(const RunContext& ctx, bool& all_pass);

namespace detail {

inline std::string echo_of(const Statement& s) {
  std::string out;
  bool space = false;
  for (char c : s.text) {
    if (c == ' ') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

inline bool is_constructor(const Value& v) {
  static const std::vector<std::string> ctors = {"poly", "/", "coker", "free", "shift", "sum", "zero", "random", "chain"};
  return v.kind == Value::Kind::call && std::find(ctors.begin(), ctors.end(), v.text) != ctors.end();
}

// Arguments of a command. Inline constructor values given under a name that
// is not an option (e.g. A=poly(...)) are bound locally first.
class CommandArgs {
 public:
  CommandArgs(const Statement& s, const Value& call, const Env& env, std::vector<std::string> options)
      : local_(env), ev_(s, local_), call_(call), options_(std::move(options)) {
    for (auto& a : call.args) {
      if (a.key.empty()) {
        pos_.push_back(&a);
        continue;
      }
      if (keys_.count(a.key)) throw ScriptError(a.pos, "'" + a.key + "' given twice");
      keys_[a.key] = &a;
      if (is_constructor(a.value) && !is_option(a.key)) bind_inline(a);
    }
  }

  const Evaluator& ev() const { return ev_; }

  bool is_option(const std::string& k) const { return std::find(options_.begin(), options_.end(), k) != options_.end(); }

  // A parameter given either positionally (index idx in group 0) or as name=...
  const Value& param(const std::string& name, std::size_t idx) {
    used_.push_back(name);
    if (keys_.count(name)) return keys_.at(name)->value;
    std::size_t seen = 0;
    for (auto* a : pos_)
      if (a->group == 0 && seen++ == idx) return a->value;
    throw ScriptError(call_.pos, call_.text + ": missing argument '" + name + "'");
  }

  bool has(const std::string& k) const { return keys_.count(k) > 0; }

  int integer(const std::string& k, int dflt, int lo = INT32_MIN) {
    used_.push_back(k);
    if (!keys_.count(k)) return dflt;
    const auto& v = keys_.at(k)->value;
    long x = ev_.integer(v);
    if (x < lo || x > 1000000) ev_.fail(v, "option '" + k + "' must be at least " + std::to_string(lo));
    return static_cast<int>(x);
  }

  PolyK elem(const Ring& R, const std::string& k) {
    used_.push_back(k);
    if (!keys_.count(k)) throw ScriptError(call_.pos, call_.text + ": missing option '" + k + "='");
    return ev_.element(R, keys_.at(k)->value);
  }

  // seq=[...] or the positional arguments after the first group.
  std::vector<PolyK> sequence(const Ring& R) {
    used_.push_back("seq");
    if (keys_.count("seq")) return ev_.elements(R, keys_.at("seq")->value);
    std::vector<PolyK> out;
    for (auto* a : pos_)
      if (a->group >= 1) out.push_back(ev_.element(R, a->value));
    return out;
  }

  void finish(std::size_t positional_in_group0) {
    std::size_t g0 = 0;
    for (auto* a : pos_)
      if (a->group == 0 && ++g0 > positional_in_group0) throw ScriptError(a->pos, "unexpected argument");
    for (auto& [k, a] : keys_) {
      if (std::find(used_.begin(), used_.end(), k) != used_.end()) continue;
      if (is_constructor(a->value) && !is_option(k)) continue;
      throw ScriptError(a->pos, "unknown option '" + k + "'");
    }
  }

  bool seq_positional() const {
    for (auto* a : pos_)
      if (a->group >= 1) return true;
    return false;
  }

 private:
  void bind_inline(const Arg& a) {
    const auto& v = a.value;
    if (v.text == "poly" || v.text == "/") local_.rings.insert_or_assign(a.key, ev_.ring(v));
    else if (v.text == "chain") local_.complexes.insert_or_assign(a.key, ev_.complex(v));
    else local_.modules.insert_or_assign(a.key, ev_.module(v));
  }

  Env local_;
  Evaluator ev_;
  const Value& call_;
  std::vector<std::string> options_;
  std::vector<const Arg*> pos_;
  std::map<std::string, const Arg*> keys_;
  std::vector<std::string> used_;
};

inline void same_ring(const Evaluator& ev, const Value& at, const Mod& a, const Mod& b) {
  if (!a.ring().same_as(b.ring())) ev.fail(at, "modules live over different rings");
}

inline bool all_zero_window(const Mod& M, int D) {
  for (auto d : M.hilbert(-D, D))
    if (d) return false;
  return true;
}

inline Outcome ok(json j) { return Outcome{std::move(j), true, ""}; }

}  // namespace detail

// Binds one command: arguments are resolved now, computation is deferred.
inline Command bind_command(const Statement& s, const std::string& name, const Value& call, const Env& env) {
  using detail::CommandArgs;
  Command cmd;
  cmd.name = name;
  cmd.echo = detail::echo_of(s);
  cmd.pos = s.at(0);
  auto opts = [](std::initializer_list<const char*> l) { return std::vector<std::string>(l.begin(), l.end()); };

  if (name == "resolve") {
    CommandArgs a(s, call, env, opts({"length", "D"}));
    Mod M = a.ev().module(a.param("M", 0));
    int len = a.integer("length", Defaults{}.i_max, 0), D = a.integer("D", Defaults{}.D, 0);
    a.finish(1);
    cmd.run = [M, len, D](const RunContext&) {
      auto res = free_resolution(M, len);
      json shifts = json::array();
      for (auto& F : res.F) shifts.push_back(F.degs());
      json j{{"ranks", res.ranks()}, {"shifts", shifts}};
      if (res.periodic)
        j["periodic"] = json{{"start", res.periodic->start}, {"period", res.periodic->period}, {"shift", res.periodic->shift}};
      else
        j["periodic"] = nullptr;
      j["bounds"] = json{{"length", len}, {"D", D}};
      return detail::ok(j);
    };
    return cmd;
  }

  if (name == "ext" || name == "tor") {
    bool ext = name == "ext";
    CommandArgs a(s, call, env, opts({"i_max", "k_max", "D"}));
    const Value& mv = a.param("M", 0);
    Mod M = a.ev().module(mv);
    Mod N = a.ev().module(a.param("N", 1));
    detail::same_ring(a.ev(), mv, M, N);
    int top = ext ? a.integer("i_max", 4, 0) : a.integer("k_max", 4, 0);
    int D = a.integer("D", 12, 0);
    a.finish(2);
    cmd.run = [=](const RunContext&) {
      auto t = ext ? ext_disc(M, N, top) : tor_disc(M, N, top);
      json j{{"groups", ext_table(t, D)}, {"bounds", json{{ext ? "i_max" : "k_max", top}, {"D", D}}}};
      return detail::ok(j);
    };
    return cmd;
  }

  if (name == "koszul") {
    CommandArgs a(s, call, env, opts({"seq", "D"}));
    const Value& first = a.param("M", 0);
    std::optional<Mod> M;
    Ring R = first.kind == Value::Kind::atom && env.rings.count(first.text) ? a.ev().ring(first)
                                                                           : (M = a.ev().module(first))->ring();
    auto xs = a.sequence(R);
    int D = a.integer("D", 12, 0);
    a.finish(1);
    cmd.run = [=](const RunContext&) {
      KoszulAlgebra<K> G(R, xs);
      auto cc = M ? extend_to_gamma(*M, G).underlying() : koszul_complex(R, xs);
      json h = json::array();
      for (int k = 0; k <= cc.hi(); ++k) h.push_back(graded(homology(cc, k).mod, D));
      return detail::ok(json{{"homology", h}, {"bounds", json{{"D", D}}}});
    };
    return cmd;
  }

  if (name == "regseq") {
    CommandArgs a(s, call, env, opts({"seq"}));
    Ring R = a.ev().ring(a.param("A", 0));
    auto xs = a.sequence(R);
    a.finish(1);
    cmd.run = [=](const RunContext&) {
      auto r = is_regular_sequence(R, xs);
      json j{{"regular", r.regular}};
      j["witness_degree"] = r.regular ? json(nullptr) : json(r.witness_degree);
      if (r.witness_homology) j["witness_homology"] = presentation(*r.witness_homology);
      return detail::ok(j);
    };
    return cmd;
  }

  if (name == "dtensor") {
    CommandArgs a(s, call, env, opts({"x", "n", "i", "k_max", "D"}));
    Mod M = a.ev().module(a.param("M", 0));
    PolyK x = a.elem(M.ring(), "x");
    int n = a.integer("n", 2, 1), i = a.integer("i", 1, 1), kmax = a.integer("k_max", 4, 0), D = a.integer("D", 12, 0);
    if (i >= n) a.ev().fail(call, "dtensor needs 1 <= i < n");
    a.finish(1);
    cmd.run = [=](const RunContext&) {
      const auto& R = M.ring();
      auto pc = periodic_complex(M, x, n, i, kmax + 2);
      auto tor = dg_tor(discrete_as_dg_module(M, an_algebra(R, x, n)), ai_over_an(R, x, n, i), kmax);
      json rows = json::array();
      bool agree = true;
      for (int k = 0; k <= kmax; ++k) {
        auto f = derived_tensor_formula(M, x, n, i, k);
        auto h = homology(pc, k).mod;
        int lo = -D, hi = D + (k / 2 + 1) * n * *R.poly().degree(x, {});
        bool same = f.hilbert(lo, hi) == h.hilbert(lo, hi) && f.hilbert(lo, hi) == tor.at(k).hilbert(lo, hi);
        agree = agree && same;
        rows.push_back(json{{"k", k}, {"closed_form", graded(f, D)}, {"complex", graded(h, D)}, {"dg_tor", graded(tor.at(k), D)}, {"agree", same}});
      }
      Outcome o{json{{"terms", rows}, {"agree", agree}, {"bounds", json{{"k_max", kmax}, {"D", D}}}}, agree, ""};
      if (!agree) o.failure = "closed form, periodic complex and DG Tor disagree";
      return o;
    };
    return cmd;
  }

  if (name == "dgext" || name == "summand") {
    bool summand = name == "summand";
    CommandArgs a(s, call, env, opts({"seq", "i_max", "D"}));
    const Value& first = a.param(summand ? "L" : "M", 0);
    std::optional<Complex> C;
    std::optional<Mod> M;
    if (first.kind == Value::Kind::atom && env.complexes.count(first.text)) C = a.ev().complex(first);
    else if (first.kind == Value::Kind::call && first.text == "chain") C = a.ev().complex(first);
    else M = a.ev().module(first);
    const Value& nv = a.param("N", 1);
    Mod N = a.ev().module(nv);
    Ring R = C ? N.ring() : M->ring();
    if (C && !C->C[0].ring().same_as(R)) a.ev().fail(nv, "complex and module live over different rings");
    if (M) detail::same_ring(a.ev(), nv, *M, N);
    auto xs = a.sequence(R);
    if (C && !xs.empty()) a.ev().fail(call, "a complex input is taken over the ring itself; drop seq");
    int imax = a.integer("i_max", 4, 0), D = a.integer("D", 12, 0);
    a.finish(2);
    cmd.run = [=](const RunContext& ctx) {
      int sl = ctx.defaults.slack;
      if (!summand) {
        KoszulAlgebra<K> G(R, xs);
        auto Md = C ? complex_as_dg_module(*C, G) : discrete_as_dg_module(*M, G);
        auto Nd = discrete_as_dg_module(N, G);
        auto ax = Md.check_axioms();
        SemifreeResolution<K> F(Md, imax + Nd.top() + sl);
        auto t = dg_ext(F, Nd, imax);
        json j{{"groups", ext_table(t, D)},
               {"dg_axioms", ax.ok()},
               {"generator_ranks", F.ranks()},
               {"bounds", json{{"i_max", imax}, {"D", D}, {"hbound", imax + Nd.top() + sl}}}};
        Outcome o{j, ax.ok(), ax.ok() ? "" : "DG module axioms fail: " + ax.detail};
        return o;
      }
      auto rep = C ? direct_summand_check_complex(*C, N, imax, -D, D)
                   : direct_summand_check(KoszulAlgebra<K>(R, xs), *M, N, imax, -D, D);
      json a1 = json::array(), a2 = json::array();
      for (int i = 0; i <= imax; ++i) {
        a1.push_back(window(rep.ext_pi0.at(i), -D, D));
        a2.push_back(window(rep.ext_gamma.at(i), -D, D));
      }
      json j{{"discrete", rep.discrete},
             {"h0", presentation(rep.M)},
             {"ext_pi0", a1},
             {"ext_gamma", a2},
             {"routes_agree", rep.routes_agree},
             {"inequality_holds", rep.inequality_holds},
             {"h0_isomorphism", rep.h0_isomorphism},
             {"strict", rep.strict},
             {"bounds", json{{"i_max", imax}, {"D", D}}}};
      bool good = rep.routes_agree && rep.inequality_holds && rep.h0_isomorphism;
      return Outcome{j, good, good ? "" : "direct summand checks failed"};
    };
    return cmd;
  }

  if (name == "liftstep") {
    CommandArgs a(s, call, env, opts({"x", "n", "choice", "D"}));
    const Value& mv = a.param("M", 0);
    Mod M = a.ev().module(mv);
    Mod L = a.ev().module(a.param("L", 1));
    detail::same_ring(a.ev(), mv, M, L);
    PolyK x = a.elem(M.ring(), "x");
    int n = a.integer("n", 1, 1), choice = a.integer("choice", 0, 0), D = a.integer("D", 12, 0);
    a.finish(2);
    cmd.run = [=](const RunContext&) {
      auto r = lift_step(M, L, x, n, static_cast<std::size_t>(choice));
      json j;
      j["success"] = r.success.has_value();
      bool good = true;
      if (r.success) {
        j["E"] = presentation(r.success->E);
        j["dims"] = graded(r.success->E, D);
        j["flags"] = flags_json(r.success->flags);
        j["ses_exact"] = r.success->ses_exact;
        good = r.success->flags.ok() && r.success->ses_exact;
      }
      j["obstruction"] = r.obstruction() ? obstruction_json(*r.obstruction(), M) : json(nullptr);
      if (r.prep.split) j["ambiguity_dim"] = r.prep.split->ambiguity.size();
      j["bounds"] = json{{"n", n}, {"D", D}};
      return Outcome{j, good, good ? "" : "constructed extension fails verification"};
    };
    return cmd;
  }

  if (name == "lift") {
    CommandArgs a(s, call, env, opts({"x", "N", "D", "i_max", "retry"}));
    Mod M = a.ev().module(a.param("M", 0));
    PolyK x = a.elem(M.ring(), "x");
    LiftOptions o;
    o.n_max = a.integer("N", 5, 1);
    o.D = a.integer("D", 12, 0);
    o.i_max = a.integer("i_max", 4, 2);
    o.retry_breadth = a.integer("retry", 0, 0);
    a.finish(1);
    cmd.run = [=](const RunContext&) {
      auto c = lift_to_order(M, x, o);
      json j = cert_json(c, o.D);
      j["bounds"] = json{{"N", o.n_max}, {"D", o.D}, {"i_max", o.i_max}, {"retry", o.retry_breadth}};
      bool good = c.obstruction.has_value() || c.ok();
      std::string why;
      if (!good) why = c.limit_error ? *c.limit_error : "lifting certificate failed verification";
      return Outcome{j, good, why};
    };
    return cmd;
  }

  if (name == "liftmulti" || name == "checklci") {
    bool lci = name == "checklci";
    CommandArgs a(s, call, env, opts({"seq", "N", "D", "i_max"}));
    Mod M = a.ev().module(a.param("M", 0));
    auto xs = a.sequence(M.ring());
    LiftOptions o;
    o.n_max = a.integer("N", 5, 1);
    o.D = a.integer("D", 12, 0);
    o.i_max = a.integer("i_max", 4, 2);
    o.dg_window = false;
    a.finish(1);
    Ring R = M.ring();
    auto multi_json = [o](const MultiResult<K>& r) {
      json st = json::array();
      for (auto& s2 : r.stages) {
        json e{{"j", s2.j}, {"certificate", cert_json(s2.cert, o.D)}, {"descent_ok", s2.descent_ok}};
        if (s2.ext2_before) e["ext2_before"] = *s2.ext2_before;
        if (s2.ext2_after) e["ext2_after"] = *s2.ext2_after;
        st.push_back(e);
      }
      json j{{"ok", r.ok()}, {"stages", st}};
      j["L"] = r.L ? presentation(*r.L) : json(nullptr);
      j["dims"] = r.L ? graded(*r.L, o.D) : json(nullptr);
      j["round_trip"] = r.round_trip;
      j["discrete"] = r.discrete;
      j["failed_stage"] = r.failed_stage ? json(*r.failed_stage) : json(nullptr);
      return j;
    };
    cmd.run = [=](const RunContext&) {
      json bounds{{"N", o.n_max}, {"D", o.D}};
      if (!lci) {
        auto r = lift_multi(R, xs, M, o, true);
        json j = multi_json(r);
        j["bounds"] = bounds;
        bool good = true;
        for (auto& st : r.stages) good = good && st.descent_ok;
        if (!r.failed_stage) good = good && r.ok();
        return Outcome{j, good, good ? "" : "multi-stage lift failed its round-trip or descent checks"};
      }
      auto v = check_lci(R, xs, M, o);
      json j{{"verdict", v.verdict}, {"regular", v.regular}, {"ext2_zero", v.ext2_zero}, {"ext2_dims", v.ext2_dims}};
      j["lift_success"] = v.lift_success ? json(*v.lift_success) : json(nullptr);
      j["consistent"] = v.consistent;
      j["bounds"] = bounds;
      return Outcome{j, v.consistent, v.consistent ? "" : "inconsistent verdict"};
    };
    return cmd;
  }

  if (name == "paper-examples") {
    CommandArgs a(s, call, env, {});
    a.finish(0);
    cmd.run = [](const RunContext& ctx) {
      bool pass = true;
      json j = paper_examples(ctx, pass);
      return Outcome{j, pass, pass ? "" : "a fixture did not match its stored expectation"};
    };
    return cmd;
  }

  throw ScriptError(s.at(0), "unknown command '" + name + "'");
}

inline Program parse(const std::string& src, std::uint64_t seed = 1) {
  Program prog;
  prog.env.seed = seed;
  for (auto& st : split_statements(src)) {
    Parser p(st);
    std::string kw = p.command_name();
    if (kw.empty()) p.fail("expected a declaration or a command");
    if (kw == "ring" || kw == "module" || kw == "complex" || kw == "elem") {
      std::size_t at = p.index();
      std::string nm = p.ident();
      if (nm.empty()) p.fail("expected a name after '" + kw + "'");
      if (prog.env.bound(nm)) p.fail("name '" + nm + "' is already bound", at + 1);
      p.expect('=');
      Value v = p.value();
      p.expect_end();
      Evaluator ev(st, prog.env);
      try {
        if (kw == "ring") {
          prog.env.rings.insert_or_assign(nm, ev.ring(v));
        } else if (kw == "module") {
          prog.env.modules.insert_or_assign(nm, ev.module(v));
        } else if (kw == "complex") {
          prog.env.complexes.insert_or_assign(nm, ev.complex(v));
        } else {
          if (v.kind != Value::Kind::call || v.args.size() != 1 || !prog.env.rings.count(v.text))
            ev.fail(v, "expected R(polynomial) for a declared ring R");
          Ring R = prog.env.rings.at(v.text);
          prog.env.elems.insert_or_assign(nm, std::make_pair(R, ev.element(R, v.args[0].value)));
        }
      } catch (const ScriptError&) {
        throw;
      } catch (const std::exception& e) {
        throw ScriptError(v.pos, e.what());
      }
      continue;
    }
    Value call;
    call.kind = Value::Kind::call;
    call.text = kw;
    call.pos = st.at(0);
    p.ws();
    if (p.peek() == '(') {
      // Re-read from the start: the command name parses as a call head.
      if (kw.find('-') != std::string::npos) p.fail("unexpected '('");
      Parser q(st);
      call = q.value();
      q.expect_end();
      call.text = kw;
    } else {
      p.expect_end();
    }
    try {
      prog.commands.push_back(bind_command(st, kw, call, prog.env));
    } catch (const ScriptError&) {
      throw;
    } catch (const std::exception& e) {
      throw ScriptError(call.pos, e.what());
    }
  }
  return prog;
}

inline json run(const Program& prog, const RunContext& ctx, bool& all_ok) {
  std::vector<json> results(prog.commands.size());
  std::vector<char> oks(prog.commands.size(), 0);
  int outer = ctx.threads;
  RunContext inner = ctx;
  // One level of fan-out: commands in parallel, or fixtures inside a single command.
  if (prog.commands.size() > 1) inner.threads = 1;
  parallel_for(prog.commands.size(), prog.commands.size() > 1 ? outer : 1, [&](std::size_t i) {
    const auto& c = prog.commands[i];
    json r;
    r["index"] = i + 1;
    r["command"] = c.echo;
    r["line"] = c.pos.line;
    try {
      Outcome o = c.run(inner);
      r["ok"] = o.ok;
      if (!o.ok) r["error"] = "command " + std::to_string(i + 1) + ": " + o.failure;
      r["result"] = std::move(o.result);
      oks[i] = o.ok;
    } catch (const std::exception& e) {
      r["ok"] = false;
      r["error"] = "command " + std::to_string(i + 1) + ": " + e.what();
      r["result"] = nullptr;
    }
    results[i] = std::move(r);
  });
  all_ok = std::all_of(oks.begin(), oks.end(), [](char b) { return b != 0; });
  json doc;
  doc["schema"] = kSchema;
  doc["tool"] = "klift";
  doc["version"] = kVersion;
  doc["seed"] = prog.env.seed;
  doc["defaults"] = json{{"N", ctx.defaults.n_max}, {"D", ctx.defaults.D}, {"i_max", ctx.defaults.i_max}, {"slack", ctx.defaults.slack}};
  doc["ok"] = all_ok;
  doc["results"] = results;
  return doc;
}

// ---------------------------------------------------------------- fixtures

namespace detail {

inline Ring make_ring(std::uint32_t p, std::vector<std::string> names, std::vector<std::string> ideal = {}) {
  std::vector<int> w(names.size(), 1);
  PolyRing<K> S(K(p), names, w);
  std::vector<PolyK> gens;
  for (auto& g : ideal) gens.push_back(parse_poly(S, g));
  return Ring(S, gens);
}

inline Mod cyclic(const Ring& R, const std::vector<std::string>& rels) {
  std::vector<Vec<K>> v;
  for (auto& r : rels) v.push_back(parse_poly(R.poly(), r));
  return Mod(R, {0}, v);
}

inline long total(const Mod& M, int lo, int hi) {
  long t = 0;
  for (auto d : M.hilbert(lo, hi)) t += d;
  return t;
}

inline json fixture(const std::string& name, json expected, json computed) {
  bool pass = expected == computed;
  return json{{"name", name}, {"pass", pass}, {"expected", std::move(expected)}, {"computed", std::move(computed)}};
}

// Odd differentials x, even differentials 0; C_k = A(-ceil(k/2)).
inline Complex alternating_complex(const Ring& A, const PolyK& x, int length) {
  Complex cc;
  for (int k = 0; k <= length; ++k) cc.C.push_back(Mod::free(A, {(k + 1) / 2}));
  cc.d.push_back(Map::zero(cc.C[0], Mod::zero(A)));
  for (int k = 1; k <= length; ++k) cc.d.emplace_back(cc.C[k], cc.C[k - 1], std::vector<Vec<K>>{k % 2 ? x : Vec<K>{}}, 0);
  return cc;
}

inline json fixture_hyperext() {
  auto A = make_ring(5, {"x"});
  auto x = parse_poly(A.poly(), "x");
  auto N = cyclic(A, {"x"});
  auto rep = direct_summand_check_complex(alternating_complex(A, x, 9), N, 6, -8, 2);
  json gamma = json::array(), disc = json::array();
  for (int i = 0; i <= 6; ++i) {
    gamma.push_back(total(rep.ext_gamma.at(i), -8, 2));
    disc.push_back(total(rep.ext_pi0.at(i), -8, 2));
  }
  json computed{{"ext_dg", gamma}, {"ext_discrete", disc}, {"first_strict", rep.strict.empty() ? -1 : rep.strict.front()}};
  json expected{{"ext_dg", {1, 1, 1, 1, 1, 1, 1}}, {"ext_discrete", {1, 1, 0, 0, 0, 0, 0}}, {"first_strict", 2}};
  return fixture("hyperext-gap", expected, computed);
}

inline json fixture_two_term() {
  auto A = make_ring(3, {"x", "y"}, {"x*y"});
  auto x = parse_poly(A.poly(), "x");
  auto M = cyclic(A, {"y^2"});
  json computed = json::array(), expected = json::array();
  const std::vector<std::vector<long>> h0 = {{1, 1, 0, 0, 0, 0}, {1, 2, 0, 0, 0, 0}, {1, 2, 1, 0, 0, 0}};
  for (int n = 1; n <= 3; ++n) {
    auto xn = A.poly().pow(x, n);
    auto cc = two_term_complex(M, xn);
    auto closed0 = quotient_by_elem(M, xn).mod;
    auto closed1 = torsion_submodule(M, xn).mod.shift(n);
    std::vector<long> h1(6, 0);
    h1[static_cast<std::size_t>(n + 1)] = 1;
    expected.push_back(json{{"n", n}, {"H0", h0[n - 1]}, {"H1", h1}, {"closed_H0", h0[n - 1]}, {"closed_H1", h1}});
    computed.push_back(json{{"n", n},
                            {"H0", homology(cc, 0).mod.hilbert(0, 5)},
                            {"H1", homology(cc, 1).mod.hilbert(0, 5)},
                            {"closed_H0", closed0.hilbert(0, 5)},
                            {"closed_H1", closed1.hilbert(0, 5)}});
  }
  return fixture("two-term-homology", expected, computed);
}

inline json fixture_periodic() {
  auto A = make_ring(3, {"x"});
  auto x = parse_poly(A.poly(), "x");
  auto M = cyclic(A, {"x^2"});
  const int n = 3, i = 1;
  auto pc = periodic_complex(M, x, n, i, 6);
  auto tor = dg_tor(discrete_as_dg_module(M, an_algebra(A, x, n)), ai_over_an(A, x, n, i), 4);
  // H_k is one-dimensional, in degrees 0, 2, 3, 5, 6.
  const int where[] = {0, 2, 3, 5, 6};
  json expected = json::array(), computed = json::array();
  for (int k = 0; k <= 4; ++k) {
    std::vector<long> e(8, 0);
    e[static_cast<std::size_t>(where[k])] = 1;
    expected.push_back(json{{"k", k}, {"closed_form", e}, {"complex", e}, {"dg_tor", e}});
    computed.push_back(json{{"k", k},
                            {"closed_form", derived_tensor_formula(M, x, n, i, k).hilbert(0, 7)},
                            {"complex", homology(pc, k).mod.hilbert(0, 7)},
                            {"dg_tor", tor.at(k).hilbert(0, 7)}});
  }
  return fixture("periodic-tensor", expected, computed);
}

inline json fixture_line_chain() {
  auto A = make_ring(3, {"u"});
  auto u = parse_poly(A.poly(), "u");
  auto c = lift_to_order(cyclic(A, {"u"}), u, LiftOptions{5, 8, 2, 0, true});
  json expected = json::array(), computed = json::array();
  for (int n = 1; n <= 5; ++n) {
    std::vector<long> e(9, 0);
    for (int d = 0; d < n; ++d) e[static_cast<std::size_t>(d)] = 1;
    expected.push_back(e);
  }
  for (auto& L : c.chain) computed.push_back(L.hilbert(0, 8));
  json ex{{"chain", expected}, {"limit", std::vector<long>(9, 1)}, {"ok", true}};
  json co{{"chain", computed}, {"limit", c.limit ? json(c.limit->L.hilbert(0, 8)) : json(nullptr)}, {"ok", c.ok()}};
  return fixture("line-lifting-chain", ex, co);
}

inline json fixture_koszul_self_ext() {
  // Ext over Kos(x; k[x]/(x^2)) of the residue field: 1, 0, 1, 0, 1 in internal degree -i.
  auto A = make_ring(2, {"x"}, {"x^2"});
  KoszulAlgebra<K> G(A, {parse_poly(A.poly(), "x")});
  auto k = discrete_as_dg_module(cyclic(A, {"x"}), G);
  auto t = dg_ext(k, k, 4);
  json computed = json::array(), expected = json::array();
  for (int i = 0; i <= 4; ++i) {
    computed.push_back(t.at(i).hilbert(-4, 0));
    std::vector<long> e(5, 0);
    if (i % 2 == 0) e[static_cast<std::size_t>(4 - i)] = 1;
    expected.push_back(e);
  }
  return fixture("koszul-self-ext", expected, computed);
}

}  // namespace detail

inline json paper_examples(const RunContext& ctx, bool& all_pass) {
  std::vector<std::function<json()>> fx = {detail::fixture_hyperext, detail::fixture_two_term, detail::fixture_periodic,
                                           detail::fixture_line_chain, detail::fixture_koszul_self_ext};
  std::vector<json> out(fx.size());
  parallel_for(fx.size(), ctx.threads, [&](std::size_t i) {
    try {
      out[i] = fx[i]();
    } catch (const std::exception& e) {
      out[i] = json{{"name", "fixture-" + std::to_string(i + 1)}, {"pass", false}, {"error", e.what()}};
    }
  });
  all_pass = std::all_of(out.begin(), out.end(), [](const json& j) { return j.at("pass").get<bool>(); });
  return json{{"fixtures", out}, {"all_pass", all_pass}};
}

}  // namespace klift::script
