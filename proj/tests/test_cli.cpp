#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "klift/script.hpp"

using namespace klift::script;

namespace {

struct Ran {
  int code = -1;
  std::string out;
};

Ran run_cli(const std::string& script, const std::string& flags = "", const std::string& env = "") {
  static int counter = 0;
  auto dir = std::filesystem::temp_directory_path() / "klift_cli_test";
  std::filesystem::create_directories(dir);
  auto file = dir / ("s" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".kl");
  std::ofstream(file) << script;
  std::string cmd = env + " " + KLIFT_CLI_PATH + " " + file.string() + " " + flags + " 2>&1";
  Ran r;
  FILE* p = popen(cmd.c_str(), "r");
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  std::filesystem::remove(file);
  return r;
}

json run_doc(const std::string& script, bool& ok, int threads = 1) {
  auto prog = parse(script);
  RunContext ctx;
  ctx.threads = threads;
  return run(prog, ctx, ok);
}

std::string error_of(const std::string& script) {
  try {
    parse(script);
  } catch (const ScriptError& e) {
    return e.what();
  }
  return "";
}

const char* kLine = "ring B = poly(F3; u:1)\nmodule k = coker(B; shifts=[0]; rels=[[u]])\n";

}  // namespace

TEST(Parse, Declarations) {
  auto prog = parse(
      "ring A = poly(F5; x:1, y:1) / ideal(x*y)\n"
      "module M = coker(A; shifts=[0]; rels=[[x],[y]])\n");
  ASSERT_TRUE(prog.env.rings.count("A"));
  const auto& A = prog.env.rings.at("A");
  EXPECT_EQ(A.field().characteristic(), 5u);
  EXPECT_EQ(A.ideal_generators().size(), 1u);
  const auto& M = prog.env.modules.at("M");
  EXPECT_EQ(M.hilbert(0, 3), (std::vector<long>{1, 0, 0, 0}));
}

TEST(Parse, MoreConstructors) {
  auto prog = parse(
      "ring A = poly(F3; x, y:2)\n"
      "ring Q = A / ideal(y - x^2)\n"
      "elem f = A(x^2 + y)\n"
      "module F = free(A; shifts=[0, 1])\n"
      "module S = sum(shift(F, 2), coker(A; shifts=[0]; rels=[[f]]))\n"
      "module R = random(A; shifts=[0,1]; rels=2; kill=[x])\n"
      "complex C = chain(A; terms=[free(A; shifts=[0]), free(A; shifts=[1])];\n"
      "                     maps=[[[x]]])\n");
  EXPECT_EQ(prog.env.modules.at("S").degs(), (std::vector<int>{2, 3, 0}));
  EXPECT_EQ(prog.env.rings.at("Q").ideal_generators().size(), 1u);
  EXPECT_EQ(prog.env.complexes.at("C").C.size(), 2u);
  // Same seed, same random module.
  auto again = parse("ring A = poly(F3; x, y:2)\n\n\n\n\nmodule R = random(A; shifts=[0,1]; rels=2; kill=[x])\n");
  EXPECT_EQ(again.env.modules.at("R").hilbert(0, 6), prog.env.modules.at("R").hilbert(0, 6));
}

TEST(Parse, ErrorsCarryPositions) {
  EXPECT_EQ(error_of("ring A = poly(F5; x:0, y:1)"), "1:21: degrees must be ≥ 1");
  EXPECT_EQ(error_of("ring A = poly(F6; x)"), "1:15: characteristic 6 is not prime");
  EXPECT_EQ(error_of("\nmodule M = coker(A; shifts=[0])"), "2:18: unbound name 'A'");
  EXPECT_EQ(error_of("ring A = poly(F5; x, y)\nmodule M = coker(A; shifts=[0]; rels=[[x+y^2]])"),
            "2:40: homogeneity violation: 'x+y^2' is not homogeneous");
  EXPECT_EQ(error_of("ring A = poly(F5; x)\nmodule M = coker(A; shifts=[0]; rels=[[x + z]])"),
            "2:44: unknown variable 'z'");
  EXPECT_EQ(error_of("ring A = poly(F5; x)\nring A = poly(F5; y)"), "2:6: name 'A' is already bound");
  EXPECT_EQ(error_of("ring A = poly(F5; x)\nregseq(A; x; bogus=1)"), "2:14: unknown option 'bogus'");
  EXPECT_EQ(error_of("ring A = poly(F5; x)\nnonsense(A)"), "2:1: unknown command 'nonsense'");
  EXPECT_EQ(error_of("ring A = poly(F5; x)\nmodule M = coker(A; shifts=[0]; rels=[[x], [x, x]])"),
            "2:44: each row needs 1 entries");
  EXPECT_NE(error_of("ring A = poly(F5; x)\nregseq(A; x"), "");
  EXPECT_EQ(error_of("ring A = poly(F5; x)\ncomplex C = chain(A; terms=[free(A; shifts=[0]), free(A; shifts=[1]),"
                     " free(A; shifts=[2])]; maps=[[[x]], [[x]]])"),
            "2:98: d^2 != 0");
}

TEST(Run, RegularSequence) {
  bool ok = false;
  auto doc = run_doc("ring A = poly(F2; x:1, y:1)\nregseq(A; x, y)\nregseq(A; x, x)\n", ok);
  EXPECT_TRUE(ok);
  EXPECT_TRUE(doc["results"][0]["result"]["regular"].get<bool>());
  EXPECT_FALSE(doc["results"][1]["result"]["regular"].get<bool>());
  EXPECT_EQ(doc["results"][1]["result"]["witness_degree"].get<int>(), 1);
}

TEST(Run, LiftCertificateOverLine) {
  bool ok = false;
  auto doc = run_doc("lift(A=poly(F3; u:1); x=u; M=coker(A; shifts=[0]; rels=[[u]]); N=5; D=8)\n", ok);
  ASSERT_TRUE(ok);
  const auto& r = doc["results"][0]["result"];
  EXPECT_TRUE(r["ok"].get<bool>());
  ASSERT_EQ(r["chain"].size(), 5u);
  for (int n = 1; n <= 5; ++n)
    EXPECT_EQ(r["chain"][n - 1]["presentation"]["rels"][0][0].get<std::string>(), n == 1 ? "u" : "u^" + std::to_string(n));
  EXPECT_TRUE(r["limit"]["presentation"]["rels"].empty());
  EXPECT_EQ(r["limit"]["dims"]["dims"], json(std::vector<long>(9, 1)));
}

TEST(Run, ObstructionIsAResultNotAFailure) {
  bool ok = false;
  auto doc = run_doc(
      "ring A = poly(F3; u, v) / ideal(u*v)\n"
      "module M = coker(A; shifts=[0]; rels=[[u]])\n"
      "lift(M; x=u; N=3; D=6)\n"
      "liftstep(M, M; x=u; n=1)\n",
      ok);
  EXPECT_TRUE(ok);
  EXPECT_FALSE(doc["results"][0]["result"]["obstruction"].is_null());
  EXPECT_FALSE(doc["results"][0]["result"]["ok"].get<bool>());
  EXPECT_FALSE(doc["results"][1]["result"]["success"].get<bool>());
}

TEST(Run, EveryCommandRuns) {
  bool ok = false;
  auto doc = run_doc(std::string(kLine) +
                         "ring A = poly(F3; x, y)\n"
                         "ring H = poly(F3; x, y, z) / ideal(x*z - y^2)\n"
                         "module N = coker(A; shifts=[0]; rels=[[x],[y]])\n"
                         "module P = coker(H; shifts=[0]; rels=[[x],[z]])\n"
                         "module Y = coker(A; shifts=[0]; rels=[[y]])\n"
                         "module T = coker(B; shifts=[0]; rels=[[u^2]])\n"
                         "complex C = chain(B; terms=[free(B; shifts=[0]), free(B; shifts=[1])]; maps=[[[u]]])\n"
                         "resolve(N; length=3)\n"
                         "ext(N, N; i_max=2)\n"
                         "tor(N, N; k_max=2)\n"
                         "koszul(A; x, y)\n"
                         "koszul(N; seq=[x])\n"
                         "dtensor(T; x=u; n=2; i=1; k_max=3)\n"
                         "dgext(k, k; seq=[u]; i_max=3; D=6)\n"
                         "dgext(C, k; i_max=3; D=6)\n"
                         "summand(Y, N; seq=[x]; i_max=2; D=6)\n"
                         "liftstep(k, T; x=u; n=2)\n"
                         "liftmulti(N; seq=[x, y]; N=3; D=6)\n"
                         "liftmulti(P; seq=[x, z]; N=3; D=6)\n"
                         "checklci(N; seq=[x, y]; N=3; D=6)\n",
                     ok);
  for (auto& r : doc["results"]) EXPECT_TRUE(r["ok"].get<bool>()) << r.dump();
  EXPECT_TRUE(ok);
  EXPECT_EQ(doc["results"][0]["result"]["ranks"], json({1, 2, 1, 0}));
  EXPECT_EQ(doc["results"][3]["result"]["homology"][1]["dims"], json::array());
  EXPECT_TRUE(doc["results"][5]["result"]["agree"].get<bool>());
  EXPECT_TRUE(doc["results"][9]["result"]["success"].get<bool>());
  EXPECT_EQ(doc["results"][12]["result"]["verdict"].get<std::string>(), "regular");
}

TEST(Run, FailuresNameTheCommand) {
  bool ok = true;
  auto doc = run_doc(std::string(kLine) + "lift(k; x=u; N=1)\n", ok);
  EXPECT_FALSE(ok);
  EXPECT_EQ(doc["results"][0]["error"].get<std::string>().rfind("command 1: chain too short", 0), 0u);
}

TEST(Run, PaperExamplesPass) {
  bool ok = false;
  auto doc = run_doc("paper-examples\n", ok);
  ASSERT_TRUE(ok);
  for (auto& f : doc["results"][0]["result"]["fixtures"]) EXPECT_TRUE(f["pass"].get<bool>()) << f["name"];
  EXPECT_EQ(doc["results"][0]["result"]["fixtures"].size(), 5u);
}

TEST(Run, DocumentShapeAndRoundTrip) {
  bool ok = false;
  auto doc = run_doc(std::string(kLine) + "ext(k, k; i_max=2; D=3)\n", ok);
  EXPECT_EQ(doc["schema"].get<std::string>(), "klift-result/1");
  for (const char* key : {"schema", "tool", "version", "seed", "defaults", "ok", "results"}) EXPECT_TRUE(doc.contains(key));
  auto text = doc.dump(2);
  EXPECT_EQ(json::parse(text).dump(2), text);
}

TEST(Run, ThreadCountDoesNotChangeOutput) {
  std::string script = std::string(kLine) + "paper-examples\next(k, k; i_max=3)\nregseq(B; u)\n";
  bool a = false, b = false;
  EXPECT_EQ(run_doc(script, a, 1).dump(), run_doc(script, b, 4).dump());
}

TEST(Binary, ExitCodesAndOutput) {
  auto good = run_cli("ring A = poly(F2; x:1, y:1)\nregseq(A; x, y)\n");
  EXPECT_EQ(good.code, 0);
  auto at = good.out.find("regular ");
  ASSERT_NE(at, std::string::npos) << good.out;
  EXPECT_EQ(good.out.substr(good.out.find_first_not_of(' ', at + 7), 4), "true");

  auto bad = run_cli("ring A = poly(F5; x:0)\n");
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find(":1:21: error: degrees must be ≥ 1"), std::string::npos) << bad.out;

  auto failing = run_cli(std::string(kLine) + "lift(k; x=u; N=1)\n");
  EXPECT_EQ(failing.code, 1);

  auto missing = run_cli("", "--json /nonexistent/file.kl");
  EXPECT_NE(missing.code, 0);
}

TEST(Binary, JsonIsByteIdenticalAcrossRunsAndThreads) {
  std::string script = "paper-examples\n";
  auto a = run_cli(script, "--json");
  auto b = run_cli(script, "--json");
  auto c = run_cli(script, "--json --parallel", "KLIFT_THREADS=4");
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  auto doc = json::parse(a.out);
  EXPECT_EQ(doc.dump(2) + "\n", a.out);
}
