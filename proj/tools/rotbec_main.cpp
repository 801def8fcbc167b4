#include <CLI11.hpp>
#include <iostream>

#include "rotbec/run.hpp"
#include "rotbec/verify.hpp"

// rotbec run <config> [--print-config]
// rotbec converge <config> --mode spatial|temporal
// rotbec verify
//
// Exit codes: 0 success, 1 config error, 2 runtime failure,
// 3 verification failure.

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitVerify = 3;

int do_run(const std::string& config_path, bool print_config) {
  const rotbec::Config cfg = rotbec::Config::parse_file(config_path);
  if (print_config) {
    std::cout << cfg.emit();
    return 0;
  }
  const rotbec::RunConfig rc = rotbec::build_run_config(cfg);
  rotbec::run_simulation(rc, &std::cerr);
  return 0;
}

int do_converge(const std::string& config_path, const std::string& mode) {
  const rotbec::Config cfg = rotbec::Config::parse_file(config_path);
  const rotbec::RunConfig rc = rotbec::build_run_config(cfg);
  rotbec::ConvergeMode m;
  if (mode == "spatial")
    m = rotbec::ConvergeMode::kSpatial;
  else if (mode == "temporal")
    m = rotbec::ConvergeMode::kTemporal;
  else
    throw rotbec::ConfigError("converge: --mode must be spatial or temporal");
  const rotbec::ConvergeReport report = rotbec::run_convergence(rc, m, &std::cerr);
  rotbec::print_report(report, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rotating two-component BEC dynamics (time-splitting sine pseudospectral)"};
  app.require_subcommand(1);

  std::string run_config, converge_config, mode;
  bool print_config = false;

  CLI::App* run = app.add_subcommand("run", "run a simulation from a config file");
  run->add_option("config", run_config, "config file path")->required();
  run->add_flag("--print-config", print_config, "print the normalized config and exit");

  CLI::App* converge = app.add_subcommand("converge", "h/k refinement study");
  converge->add_option("config", converge_config, "config file path")->required();
  converge->add_option("--mode", mode, "spatial | temporal")->required();

  CLI::App* verify = app.add_subcommand("verify", "run built-in cross-checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) return do_run(run_config, print_config);
    if (converge->parsed()) return do_converge(converge_config, mode);
    if (verify->parsed()) return rotbec::run_verification(std::cout) == 0 ? 0 : kExitVerify;
  } catch (const rotbec::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
