#include <CLI11.hpp>

#include <iostream>
#include <stdexcept>
#include <vector>

#include "cli_common.hpp"
#include "commands.hpp"
#include "gesq/sdp.hpp"

int main(int argc, char** argv) {
  using namespace gesq::cli;
  CLI::App app{"Entanglement of genuinely entangled subspaces: constructions, bounds and tables", "gesq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GESQ_VERSION);

  std::vector<std::pair<CLI::App*, Runner>> commands;
  auto add = [&](Runner (*make)(CLI::App&)) {
    Runner r = make(app);
    commands.emplace_back(app.get_subcommands({}).back(), std::move(r));
  };
  add(add_construct);
  add(add_measure);
  add(add_exact);
  add(add_figure1);
  add(add_noise_threshold);
  add(add_verify);
  add(add_reproduce);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (auto& [cmd, run] : commands) {
      if (cmd->parsed()) return run();
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const gesq::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
