#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hawkes/config.hpp"
#include "hawkes/limits.hpp"
#include "hawkes/montecarlo.hpp"
#include "hawkes/resolvent.hpp"
#include "hawkes/simulate.hpp"

namespace {

using namespace hawkes;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config file")->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "override the config seed");
  cmd->add_option("--threads", args.threads, "worker pool size (0 = hardware)");
}

Config load(const CommonArgs& args) {
  Config cfg = load_config(args.config_path);
  if (args.seed) cfg.experiment.seed = *args.seed;
  if (args.threads) cfg.experiment.threads = *args.threads;
  std::filesystem::create_directories(args.out_dir);
  return cfg;
}

// the only file allowed to differ between byte-identical reruns
void write_metadata(const CommonArgs& args, const std::string& command) {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = args.config_path;
  const auto now = std::chrono::system_clock::now();
  j["written_at_unix_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
  std::ofstream os(std::filesystem::path(args.out_dir) / "run_metadata.json");
  os << j.dump(2) << "\n";
}

int cmd_resolvent(const CommonArgs& args) {
  const Config cfg = load(args);
  try {
    const ResolventTable table = build_table(cfg.spec, cfg.resolvent_h, cfg.resolvent_horizon);
    write_table(args.out_dir, table);
    std::cout << "l1_RH=" << table.l1_RH << " l1_RI=" << table.l1_RI << "\n";
  } catch (const Unstable& e) {
    throw Unstable(std::string(e.what()) +
                   "; ||R_H|| = ||phi_H||/(1 - ||phi_H||) diverges at ||phi_H|| >= 1");
  }
  write_metadata(args, "resolvent");
  return 0;
}

int cmd_constants(const CommonArgs& args) {
  const Config cfg = load(args);
  const LimitConstants lc = limit_constants(cfg.spec, ResolventTable{});
  {
    std::ofstream os(std::filesystem::path(args.out_dir) / "constants.json");
    os << to_json(lc).dump(2) << "\n";
  }
  if (cfg.microbes) {
    std::ofstream os(std::filesystem::path(args.out_dir) / "microbe_constants.json");
    os << microbe_constants_json(*cfg.microbes).dump(2) << "\n";
  }
  write_metadata(args, "constants");
  return 0;
}

int cmd_simulate(const CommonArgs& args) {
  const Config cfg = load(args);
  const PathRecord path =
      simulate_path(cfg.spec, cfg.simulate_horizon, cfg.experiment.seed, 0);
  {
    std::ofstream os(std::filesystem::path(args.out_dir) / "path.csv");
    write_csv(os, path);
  }
  {
    std::ofstream os(std::filesystem::path(args.out_dir) / "path.bin", std::ios::binary);
    write_frame(os, path);
  }
  std::cout << "events=" << path.events.size() << " accepted=" << path.accepted
            << " proposed=" << path.proposed << "\n";
  write_metadata(args, "simulate");
  return 0;
}

int cmd_verify(const CommonArgs& args, const std::string& mode) {
  Config cfg = load(args);
  cfg.experiment.mode = mode;
  const LimitConstants lc = limit_constants(cfg.spec, ResolventTable{});
  const ExperimentResult res = run_experiment(cfg.experiment, lc);
  {
    std::ofstream os(std::filesystem::path(args.out_dir) / "report.json");
    os << res.to_json().dump(2) << "\n";
  }
  for (const StatsReport& rep : res.reports) {
    std::ostringstream name;
    name << "report_T" << rep.T << ".csv";
    std::ofstream os(std::filesystem::path(args.out_dir) / name.str());
    rep.write_csv(os);
  }
  for (const StatsReport& rep : res.reports)
    for (const std::string& line : rep.checks) std::cout << "T=" << rep.T << " " << line << "\n";
  std::cout << (res.pass ? "PASS" : "FAIL") << "\n";
  write_metadata(args, "verify-" + mode);
  return res.pass ? 0 : 1;
}

int cmd_microbes(const CommonArgs& args) {
  const Config cfg = load(args);
  if (!cfg.microbes) throw ConfigError("the microbes command needs a microbes config block");
  std::ofstream os(std::filesystem::path(args.out_dir) / "microbe_constants.json");
  os << microbe_constants_json(*cfg.microbes).dump(2) << "\n";
  write_metadata(args, "microbes");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"marked Hawkes point measures: simulation and limit-theorem verification"};
  app.require_subcommand(1);

  CommonArgs args;
  auto* resolvent = app.add_subcommand("resolvent", "solve and export the resolvent table");
  auto* constants = app.add_subcommand("constants", "export the limit constants");
  auto* simulate = app.add_subcommand("simulate", "simulate and export one path");
  auto* lln = app.add_subcommand("verify-lln", "law-of-large-numbers verification run");
  auto* clt = app.add_subcommand("verify-clt", "central-limit verification run");
  auto* microbes = app.add_subcommand("microbes", "export the microbe-model constants");
  for (auto* cmd : {resolvent, constants, simulate, lln, clt, microbes}) add_common(cmd, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (resolvent->parsed()) return cmd_resolvent(args);
    if (constants->parsed()) return cmd_constants(args);
    if (simulate->parsed()) return cmd_simulate(args);
    if (lln->parsed()) return cmd_verify(args, "lln");
    if (clt->parsed()) return cmd_verify(args, "clt");
    if (microbes->parsed()) return cmd_microbes(args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
