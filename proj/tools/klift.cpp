#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "klift/script.hpp"

namespace {

using klift::script::json;

bool plain(const json& j) {
  if (j.is_array()) {
    for (auto& e : j)
      if (!plain(e)) return false;
    return true;
  }
  return !j.is_object();
}

void flatten(const json& j, const std::string& key, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), key.empty() ? it.key() : key + "." + it.key(), rows);
  } else if (j.is_array() && !plain(j)) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], key + "[" + std::to_string(i) + "]", rows);
  } else if (j.is_string()) {
    rows.emplace_back(key, j.get<std::string>());
  } else {
    rows.emplace_back(key, j.dump());
  }
}

std::string render_text(const json& doc) {
  std::ostringstream out;
  out << "klift " << doc["version"].get<std::string>() << "  seed " << doc["seed"].get<std::uint64_t>() << "\n";
  for (auto& r : doc["results"]) {
    out << "\n[" << r["index"].get<int>() << "] " << r["command"].get<std::string>() << "  "
        << (r["ok"].get<bool>() ? "ok" : "FAILED") << "\n";
    if (r.contains("error")) out << "    error: " << r["error"].get<std::string>() << "\n";
    std::vector<std::pair<std::string, std::string>> rows;
    if (!r["result"].is_null()) flatten(r["result"], "", rows);
    std::size_t w = 0;
    for (auto& [k, v] : rows) w = std::max(w, k.size());
    for (auto& [k, v] : rows) out << "    " << k << std::string(w - k.size() + 2, ' ') << v << "\n";
  }
  return out.str();
}

int thread_count(bool parallel) {
  if (!parallel) return 1;
  if (const char* env = std::getenv("KLIFT_THREADS")) {
    int t = std::atoi(env);
    if (t >= 1) return t;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"klift: lifting modules along derived quotients"};
  std::string path;
  bool as_json = false, parallel = false;
  std::uint64_t seed = 1;
  app.add_option("script", path, "script file, or - for standard input")->required();
  app.add_flag("--json", as_json, "emit the klift-result/1 JSON document");
  app.add_flag("--parallel", parallel, "run independent commands concurrently (KLIFT_THREADS caps workers)");
  app.add_option("--seed", seed, "seed for random(...) module declarations");
  app.set_version_flag("--version", std::string("klift ") + klift::script::kVersion);
  CLI11_PARSE(app, argc, argv);

  std::string src;
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    src = ss.str();
  } else {
    std::ifstream in(path);
    if (!in) {
      std::cerr << "klift: cannot read " << path << "\n";
      return 3;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    src = ss.str();
  }

  klift::script::Program prog;
  try {
    prog = klift::script::parse(src, seed);
  } catch (const klift::script::ScriptError& e) {
    std::cerr << (path == "-" ? "<stdin>" : path) << ":" << e.pos.line << ":" << e.pos.col << ": error: " << e.message
              << "\n";
    return 2;
  }

  klift::script::RunContext ctx;
  ctx.threads = thread_count(parallel);
  bool ok = false;
  json doc = klift::script::run(prog, ctx, ok);
  if (as_json)
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << render_text(doc);
  return ok ? 0 : 1;
}
