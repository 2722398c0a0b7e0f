#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "json.hpp"
#include "tvpreg.h"

int main(int argc, char** argv) {
  CLI::App app{"time-varying parameter regression with shrinkage priors"};
  app.set_version_flag("--version", std::string(tvpreg_version()));
  app.require_subcommand(1);

  cli::register_cmd_simulate(app);
  cli::register_cmd_fit(app);
  cli::register_cmd_lpds(app);
  cli::register_cmd_backtest(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    const nlohmann::json err = {{"error", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 1;
  }
  return 0;
}
