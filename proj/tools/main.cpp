#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace fs = std::filesystem;
using paclab::cli::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kBudget = 3, kInvariant = 4 };

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw paclab::ConfigError("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw paclab::ConfigError("config '" + path + "': " + e.what());
  }
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

struct Flags {
  std::string config;
  std::uint64_t seed = 1;
  unsigned threads = paclab::default_threads();
  std::string out = "out";
  bool strict = false;
};

int execute(const paclab::cli::Command& cmd, const Flags& flags, bool seed_given) {
  json user;
  std::uint64_t seed = flags.seed;
  if (!flags.config.empty()) {
    user = read_json(flags.config);
    // A manifest replays its own command, config and seed.
    if (user.is_object() && user.contains("manifest_version")) {
      if (user.value("command", "") != cmd.name) {
        throw paclab::ConfigError("manifest was written by '" + user.value("command", "?") + "', not '" + cmd.name + "'");
      }
      if (!seed_given) seed = user.at("seed").get<std::uint64_t>();
      user = user.at("config");
    }
  }
  const json cfg = paclab::cli::merge_config(cmd.defaults(), user, cmd.name);
  const paclab::cli::RunOptions run{seed, std::max(1u, flags.threads), flags.strict};
  const auto artifacts = cmd.run(cfg, run);

  fs::create_directories(flags.out);
  json outputs = json::array();
  for (const auto& [name, text] : artifacts.files) {
    write_file(fs::path(flags.out) / name, text);
    outputs.push_back(name);
  }
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(paclab::cli::fnv1a(cfg.dump())));
  const json manifest{{"manifest_version", 1},
                      {"command", cmd.name},
                      {"config", cfg},
                      {"config_hash", hash},
                      {"seed", seed},
                      {"strict", flags.strict},
                      {"outputs", outputs},
                      {"budget_notes", artifacts.budget_notes},
                      {"versions",
                       {{"paclab", paclab::kVersion},
                        {"compiler", __VERSION__},
                        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                        {"cli11", CLI11_VERSION}}}};
  write_file(fs::path(flags.out) / "manifest.json", manifest.dump(2) + "\n");
  for (const auto& note : artifacts.budget_notes) std::cerr << "warning: " << note << "\n";
  if (flags.strict && !artifacts.budget_notes.empty()) return kBudget;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paclab: fixed-distribution PAC learning experiments"};
  app.require_subcommand(1);
  Flags flags;
  app.add_option("--config", flags.config, "JSON config, or a manifest to replay")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", flags.seed, "master seed");
  app.add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", flags.out, "output directory");
  app.add_flag("--strict", flags.strict, "exit 3 when any search runs out of budget");
  app.fallthrough();
  for (const auto& cmd : paclab::cli::commands()) app.add_subcommand(cmd.name, cmd.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  const auto* chosen = app.get_subcommands().front();
  for (const auto& cmd : paclab::cli::commands()) {
    if (chosen->get_name() != cmd.name) continue;
    try {
      return execute(cmd, flags, seed_opt->count() > 0);
    } catch (const paclab::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kConfig;
    } catch (const std::invalid_argument& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kConfig;
    } catch (const json::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kConfig;
    } catch (const paclab::BudgetExceeded& e) {
      std::cerr << "budget exceeded: " << e.what() << "\n";
      return kBudget;
    } catch (const paclab::InvariantViolation& e) {
      std::cerr << "invariant violation: " << e.what() << "\n";
      return kInvariant;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kFailure;
    }
  }
  return kFailure;
}
