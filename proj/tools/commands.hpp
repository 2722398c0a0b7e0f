#pragma once

#include "CLI11.hpp"

namespace cli {

void register_cmd_simulate(CLI::App& app);
void register_cmd_fit(CLI::App& app);
void register_cmd_lpds(CLI::App& app);
void register_cmd_backtest(CLI::App& app);

}  // namespace cli
