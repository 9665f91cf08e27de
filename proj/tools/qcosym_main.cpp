#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "qcosym/cli/commands.hpp"

using namespace qcosym::cli;

int main(int argc, char** argv) {
  CLI::App app{"qcosym: q-cosymplectic FitzHugh-Nagumo workflows"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  RunOptions opt;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_path, "CSV output path (default: stdout)");
    sub->add_option("--seed", opt.seed, "seed for random sampling");
    sub->add_option("--threads", opt.threads, "worker threads for independent curves")
        ->check(CLI::PositiveNumber);
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  json config;
  try {
    config = load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "qcosym: " << e.what() << '\n';
    return kExitConfig;
  }

  const auto res = run_command(command, config, opt);
  if (!res.report.header().empty()) {
    if (out_path.empty()) {
      res.report.write(std::cout);
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "qcosym: cannot write '" << out_path << "'\n";
        return kExitFailure;
      }
      res.report.write(out);
    }
  }
  if (!res.message.empty()) std::cerr << "qcosym " << command << ": " << res.message << '\n';
  return res.exit_code;
}
