// Command-line front end over the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "layerlab/layerlab.h"

namespace {

bool read_file(const std::string& path, std::string& text) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  std::ostringstream ss;
  ss << f.rdbuf();
  text = ss.str();
  return true;
}

// Exit codes: 0 all verdicts pass, 1 some verdict failed, 2 usage or runtime error.
int run(const std::string& command, const std::string& config_path, std::string out_dir) {
  std::string config;
  if (!read_file(config_path, config)) {
    std::cerr << "cannot read " << config_path << "\n";
    return 2;
  }
  if (out_dir.empty()) {
    auto j = nlohmann::json::parse(config, nullptr, false);
    out_dir = j.is_object() ? j.value("out", std::string(".")) : ".";
  }
  int pass = 0;
  char* report = nullptr;
  ll_status st = ll_run_experiment(command.c_str(), config.c_str(), out_dir.c_str(), &pass, &report);
  if (st != LL_OK) {
    std::cerr << ll_last_error_message() << "\n";
    return 2;
  }
  auto j = nlohmann::json::parse(report);
  ll_string_free(report);
  for (const auto& v : j["verdicts"]) {
    std::cout << (v["pass"].get<bool>() ? "PASS " : "FAIL ") << v["name"].get<std::string>() << "  measured "
              << v["measured"].dump() << " " << v["op"].get<std::string>() << " " << v["tolerance"].dump() << "\n";
  }
  std::cout << (pass ? "all verdicts pass" : "some verdicts failed") << "; wrote " << out_dir << "/report.json\n";
  return pass ? 0 : 1;
}

int dump_nodes(const std::string& geometry, const std::string& path) {
  ll_surface* s = nullptr;
  ll_status st = ll_surface_from_json(geometry.c_str(), &s);
  if (st == LL_OK) {
    st = ll_surface_write_csv(s, path.c_str());
    ll_surface_destroy(s);
  }
  if (st != LL_OK) {
    std::cerr << ll_last_error_message() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"layerlab: layer potentials of elliptic operators with constant coefficients"};
  app.require_subcommand(1);
  std::string config, out, geometry, csv = "nodes.csv";
  for (const char* name : {"verify-identities", "measure-gain", "kernel-norms", "decompose-fs"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config,-c", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out,-o", out, "output directory (default: config \"out\" or .)");
  }
  auto* dump = app.add_subcommand("dump-nodes", "write boundary nodes, normals and weights as CSV");
  dump->add_option("--geometry,-g", geometry, "geometry JSON, e.g. {\"kind\":\"kite\",\"N\":128}")->required();
  dump->add_option("--out,-o", csv, "CSV path");
  CLI11_PARSE(app, argc, argv);

  const std::string cmd = app.get_subcommands().front()->get_name();
  if (cmd == "dump-nodes") return dump_nodes(geometry, csv);
  return run(cmd, config, out);
}
