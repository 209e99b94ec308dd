// limsup: command-line front end. Every leaf subcommand takes the config
// keys as --key flags; `run` takes a config file instead.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "limsup/commands.hpp"
#include "limsup/config.hpp"
#include "limsup/parse.hpp"

namespace {

using namespace limsup;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

std::vector<std::string> nonblank_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!trim(line).empty()) lines.push_back(line);
  }
  return lines;
}

int write_csv(const std::string& csv, const std::string& path) {
  if (path.empty()) {
    std::cout << csv << std::flush;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!(out << csv)) {
    std::cerr << "cannot write " << path << "\n";
    return kExitInvalid;
  }
  return 0;
}

void print_messages(const std::vector<std::string>& messages) {
  for (const std::string& m : messages) std::cerr << m << "\n";
}

int execute(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const RunOutcome outcome = run(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  print_messages(outcome.messages);
  int status = outcome.status;
  if (status != kExitInvalid) {
    const int w = write_csv(outcome.csv, cfg.has("out") ? cfg.text("out") : "");
    if (w != 0) status = w;
  }
  // written even when a check failed
  if (cfg.has("manifest")) {
    std::ofstream m(cfg.text("manifest"), std::ios::app | std::ios::binary);
    if (!(m << manifest_record(cfg, outcome, wall, utc_timestamp()) << "\n")) {
      std::cerr << "cannot append to " << cfg.text("manifest") << "\n";
      return kExitInvalid;
    }
  }
  return status;
}

struct Leaf {
  std::string command;
  CLI::App* app;
  std::map<std::string, std::string> values;
  std::string alphas, coefficients;
  bool print_config = false;
};

// Attaches one subcommand per config command, nesting on the first word.
std::vector<std::unique_ptr<Leaf>> add_leaves(CLI::App& app) {
  std::vector<std::unique_ptr<Leaf>> leaves;
  std::map<std::string, CLI::App*> groups;
  for (std::string_view name : command_names()) {
    const std::string command(name);
    const auto space = command.find(' ');
    CLI::App* parent = &app;
    std::string leaf_name = command;
    if (space != std::string::npos) {
      const std::string group = command.substr(0, space);
      auto it = groups.find(group);
      if (it == groups.end()) {
        CLI::App* g = app.add_subcommand(group, group + " commands");
        g->require_subcommand(1);
        it = groups.emplace(group, g).first;
      }
      parent = it->second;
      leaf_name = command.substr(space + 1);
    }
    auto leaf = std::make_unique<Leaf>();
    leaf->command = command;
    leaf->app = parent->add_subcommand(leaf_name, command);
    for (std::string_view key : permitted_keys(command)) {
      const FieldSpec* spec = find_field(key);
      // required keys are checked by validate() with a uniform message
      leaf->app->add_option("--" + std::string(key), leaf->values[std::string(key)], std::string(spec->help))
          ->allow_extra_args(false);
    }
    if (command == "dim predict") {
      leaf->app->add_option("--alphas", leaf->alphas, "power-law exponents (shorthand for --schedule)");
      leaf->app->add_option("--coefficients", leaf->coefficients, "power-law coefficients");
    }
    leaf->app->add_flag("--print-config", leaf->print_config, "print the canonical config and exit");
    leaves.push_back(std::move(leaf));
  }
  return leaves;
}

RunConfig config_from_flags(const Leaf& leaf) {
  RunConfig cfg;
  cfg.set_command(leaf.command);
  for (const auto& [key, value] : leaf.values) {
    if (leaf.app->count("--" + key) > 0) cfg.set_raw(key, value);
  }
  if (!leaf.alphas.empty()) {
    if (cfg.has("schedule")) throw ConfigError(0, "give either --schedule or --alphas");
    std::string desc = "power:alphas=" + leaf.alphas;
    if (!leaf.coefficients.empty()) desc += ";coefficients=" + leaf.coefficients;
    cfg.set("schedule", desc);
  } else if (!leaf.coefficients.empty()) {
    throw ConfigError(0, "--coefficients needs --alphas");
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hausdorff dimension of random limsup sets of rectangles"};
  app.require_subcommand(1);
  auto leaves = add_leaves(app);

  std::string config_path;
  CLI::App* run_cmd = app.add_subcommand("run", "execute a config file");
  run_cmd->add_option("config", config_path, "config file")->required();

  std::vector<std::string> report_files;
  std::string report_out;
  CLI::App* report_cmd = app.add_subcommand("report", "merge manifests into one table");
  report_cmd->add_option("manifests", report_files, "manifest files (one JSON record per line)");
  report_cmd->add_option("--out", report_out, "CSV output path");

  std::string replay_file;
  std::size_t replay_line = 1;
  CLI::App* replay_cmd = app.add_subcommand("replay", "rerun a manifest record and compare CSV bodies");
  replay_cmd->add_option("manifest", replay_file, "manifest file")->required();
  replay_cmd->add_option("--line", replay_line, "1-based record number")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (run_cmd->parsed()) {
      std::string text;
      if (!read_file(config_path, text)) {
        std::cerr << "cannot read " << config_path << "\n";
        return kExitInvalid;
      }
      return execute(parse_config(text));
    }
    if (report_cmd->parsed()) {
      std::vector<std::string> lines;
      for (const std::string& f : report_files) {
        std::string text;
        if (!read_file(f, text)) {
          std::cerr << "cannot read " << f << "\n";
          return kExitInvalid;
        }
        for (std::string& l : nonblank_lines(text)) lines.push_back(std::move(l));
      }
      const ReportOutcome out = report(lines);
      print_messages(out.messages);
      if (out.status == kExitInvalid) return out.status;
      const int w = write_csv(out.csv, report_out);
      return w != 0 ? w : out.status;
    }
    if (replay_cmd->parsed()) {
      std::string text;
      if (!read_file(replay_file, text)) {
        std::cerr << "cannot read " << replay_file << "\n";
        return kExitInvalid;
      }
      const std::vector<std::string> lines = nonblank_lines(text);
      if (replay_line > lines.size()) {
        std::cerr << replay_file << " has " << lines.size() << " records\n";
        return kExitInvalid;
      }
      const ReplayOutcome out = replay(lines[replay_line - 1]);
      print_messages(out.messages);
      if (out.status != kExitInvalid) std::cout << out.rerun.csv << std::flush;
      return out.status;
    }
    for (const auto& leaf : leaves) {
      if (!leaf->app->parsed()) continue;
      const RunConfig cfg = config_from_flags(*leaf);
      if (leaf->print_config) {
        std::cout << cfg.serialize();
        return 0;
      }
      return execute(cfg);
    }
  } catch (const ConfigError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
