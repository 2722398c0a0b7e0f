#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "commands.hpp"
#include "common.hpp"
#include "csv.hpp"

namespace cli {

namespace {

struct LpdsArgs {
  DataFlags data;            // self-contained mode
  ModelFlags model;          // self-contained mode
  int holdout_last = 1;      // self-contained mode
  std::string run_dir;       // refit mode
  std::string test_data;     // refit mode test rows
  std::string eval_points;   // optional density evaluations at the first test row
  std::string density_grid;  // optional lo:hi:n table
};

// test rows resolved against the covariate names of the fit; a missing
// Intercept column is synthesized as ones
LoadedData load_test_rows(const std::string& path, const std::string& response,
                          const std::vector<std::string>& names) {
  const CsvTable table = read_csv_file(path);
  const int ycol = table.col(response);
  if (ycol < 0) throw std::runtime_error(path + ": no column named '" + response + "'");
  std::vector<int> xcols;
  for (const auto& name : names) {
    const int c = table.col(name);
    if (c < 0 && name != "Intercept")
      throw std::runtime_error(path + ": no column named '" + name + "'");
    xcols.push_back(c);
  }

  const auto num = [&](std::size_t row, int col) {
    const std::string& cell = table.rows[row][col];
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size())
      throw std::runtime_error(path + ": not a number: '" + cell + "'");
    return v;
  };

  LoadedData out;
  out.T = static_cast<int>(table.rows.size());
  out.d = static_cast<int>(names.size());
  out.names = names;
  out.y.resize(out.T);
  out.X.resize(static_cast<std::size_t>(out.T) * out.d);
  for (int t = 0; t < out.T; ++t) {
    out.y[t] = num(t, ycol);
    for (int j = 0; j < out.d; ++j)
      out.X[static_cast<std::size_t>(t) * out.d + j] = xcols[j] < 0 ? 1.0 : num(t, xcols[j]);
  }
  if (out.T < 1) throw std::runtime_error(path + ": no test rows");
  return out;
}

LoadedData slice_rows(const LoadedData& in, int from, int count) {
  LoadedData out;
  out.T = count;
  out.d = in.d;
  out.names = in.names;
  out.y.assign(in.y.begin() + from, in.y.begin() + from + count);
  out.X.assign(in.X.begin() + static_cast<std::size_t>(from) * in.d,
               in.X.begin() + static_cast<std::size_t>(from + count) * in.d);
  return out;
}

// rebuilds options from a fit manifest's normalized config snapshot
OptionsPtr options_from_manifest(const nlohmann::json& manifest) {
  if (!manifest.contains("config"))
    throw std::runtime_error("manifest has no config block");
  const nlohmann::json& config = manifest.at("config");
  const std::string family = config.at("mod_type").get<std::string>();
  const bool sv = config.at("sv").get<std::string>() == "true";
  tvpreg_options* raw = nullptr;
  check(tvpreg_options_new(family.c_str(), sv ? 1 : 0, &raw), "options");
  OptionsPtr opts(raw);
  for (const auto& [key, value] : config.items()) {
    if (key == "mod_type" || key == "sv") continue;
    check(tvpreg_options_set(opts.get(), key.c_str(), value.get<std::string>().c_str()),
          ("manifest config '" + key + "'").c_str());
  }
  return opts;
}

void run(const LpdsArgs& a) {
  LoadedData train;
  LoadedData tests;
  OptionsPtr opts;
  int first_row_label = 1;

  if (!a.run_dir.empty()) {
    if (!a.data.path.empty())
      throw std::runtime_error("--run-dir and --data are mutually exclusive");
    if (a.test_data.empty())
      throw std::runtime_error("--run-dir needs --test-data for the rows to score");
    namespace fs = std::filesystem;
    std::ifstream min((fs::path(a.run_dir) / "manifest.json").string());
    if (!min) throw std::runtime_error("cannot open manifest.json in '" + a.run_dir + "'");
    nlohmann::json manifest;
    min >> manifest;
    opts = options_from_manifest(manifest);
    train = load_data_csv((fs::path(a.run_dir) / "data_used.csv").string(), "y", {}, false);
    tests = load_test_rows(a.test_data, "y", train.names);
  } else {
    if (a.data.path.empty()) throw std::runtime_error("either --data or --run-dir is required");
    const LoadedData all = load_data(a.data);
    if (a.holdout_last < 1 || a.holdout_last >= all.T)
      throw std::runtime_error("--holdout-last must leave at least one training row");
    train = slice_rows(all, 0, all.T - a.holdout_last);
    tests = slice_rows(all, all.T - a.holdout_last, a.holdout_last);
    first_row_label = train.T + 1;
    opts = build_options(a.model);
  }

  const DataPtr data = make_data_handle(train);
  tvpreg_fit* raw = nullptr;
  check(tvpreg_fit_run(data.get(), opts.get(), &raw), "fit");
  FitPtr fit(raw);

  std::printf("row,lpds\n");
  for (int i = 0; i < tests.T; ++i) {
    double score = 0.0;
    check(tvpreg_lpds(fit.get(), data.get(), tests.X.data() + static_cast<std::size_t>(i) * tests.d,
                      tests.y[i], &score),
          "lpds");
    std::printf("%d,%s\n", first_row_label + i, fmt_num(score).c_str());
  }

  std::vector<double> points;
  if (!a.eval_points.empty()) points = parse_double_list(a.eval_points, "--eval-points");
  if (!a.density_grid.empty()) {
    const std::string& g = a.density_grid;
    const auto c1 = g.find(':');
    const auto c2 = g.find(':', c1 == std::string::npos ? g.size() : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::runtime_error("--density-grid expects lo:hi:n");
    const double lo = std::strtod(g.substr(0, c1).c_str(), nullptr);
    const double hi = std::strtod(g.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr);
    const long n = std::strtol(g.substr(c2 + 1).c_str(), nullptr, 10);
    if (n < 2 || hi <= lo) throw std::runtime_error("--density-grid expects lo < hi and n >= 2");
    for (long k = 0; k < n; ++k)
      points.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  if (!points.empty()) {
    std::vector<double> dens(points.size());
    check(tvpreg_eval_pred_dens(fit.get(), data.get(), tests.X.data(), points.data(),
                                static_cast<int>(points.size()), dens.data()),
          "eval_pred_dens");
    std::printf("\npoint,density\n");
    for (std::size_t i = 0; i < points.size(); ++i)
      std::printf("%s,%s\n", fmt_num(points[i]).c_str(), fmt_num(dens[i]).c_str());
  }
}

}  // namespace

void register_cmd_lpds(CLI::App& app) {
  auto args = std::make_shared<LpdsArgs>();
  CLI::App* cmd =
      app.add_subcommand("lpds", "one-step-ahead log predictive density scores");
  add_data_flags(cmd, &args->data, /*required=*/false);
  add_model_flags(cmd, &args->model);
  cmd->add_option("--holdout-last", args->holdout_last,
                  "score the last N rows against a fit on the rows before them");
  cmd->add_option("--run-dir", args->run_dir,
                  "reproduce the fit from a fit output directory instead of --data");
  cmd->add_option("--test-data", args->test_data, "CSV with rows to score (with --run-dir)");
  cmd->add_option("--eval-points", args->eval_points,
                  "comma-separated response values to evaluate the density at");
  cmd->add_option("--density-grid", args->density_grid,
                  "lo:hi:n grid for a plottable density table");
  cmd->callback([args] { run(*args); });
}

}  // namespace cli
