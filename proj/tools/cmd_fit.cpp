#include <chrono>
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

std::string safe_filename(const std::string& name) {
  std::string out;
  for (char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_')
               ? c
               : '_';
  return out.empty() ? std::string("_") : out;
}

void write_draws_csv(const std::string& path, const tvpreg_fit* fit) {
  const int M = tvpreg_fit_num_draws(fit);
  const int ncols = tvpreg_fit_num_scalars(fit);
  std::vector<std::string> header;
  std::vector<std::vector<double>> cols(ncols, std::vector<double>(M));
  for (int i = 0; i < ncols; ++i) {
    header.emplace_back(tvpreg_fit_scalar_name(fit, i));
    check(tvpreg_fit_scalar_draws(fit, i, cols[i].data()), "scalar draws");
  }
  CsvWriter w(path);
  w.write_row(header);
  std::vector<double> row(ncols);
  for (int m = 0; m < M; ++m) {
    for (int i = 0; i < ncols; ++i) row[i] = cols[i][m];
    w.write_numeric_row(row.data(), ncols);
  }
  w.close();
}

void write_wide_path_csv(const std::string& path, const double* draws, int M, int T1) {
  CsvWriter w(path);
  std::vector<std::string> header;
  for (int t = 0; t < T1; ++t) header.push_back("t" + std::to_string(t));
  w.write_row(header);
  for (int m = 0; m < M; ++m)
    w.write_numeric_row(draws + static_cast<std::size_t>(m) * T1, T1);
  w.close();
}

void write_summary_txt(const std::string& path, const tvpreg_fit* fit) {
  const int n = tvpreg_fit_num_summary_rows(fit);
  std::size_t width = 5;
  for (int i = 0; i < n; ++i)
    width = std::max(width, std::string(tvpreg_fit_summary_name(fit, i)).size());

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  char line[256];
  std::snprintf(line, sizeof line, "%-*s %12s %12s %12s %12s %12s %10s\n",
                static_cast<int>(width), "param", "mean", "sd", "median", "HPD 2.5%",
                "HPD 97.5%", "ESS");
  out << line;
  for (int i = 0; i < n; ++i) {
    double s[6];
    check(tvpreg_fit_summary_stats(fit, i, s), "summary row");
    std::snprintf(line, sizeof line, "%-*s %12.5g %12.5g %12.5g %12.5g %12.5g %10.1f\n",
                  static_cast<int>(width), tvpreg_fit_summary_name(fit, i), s[0], s[1], s[2],
                  s[3], s[4], s[5]);
    out << line;
  }
  out.close();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_quantiles_csv(const std::string& path, const tvpreg_fit* fit,
                         const std::vector<std::string>& names) {
  const int T1 = tvpreg_fit_num_obs(fit) + 1;
  const std::vector<double> levels = {0.025, 0.25, 0.5, 0.75, 0.975};
  CsvWriter w(path);
  w.write_row({"covariate", "t", "q2.5", "q25", "q50", "q75", "q97.5"});
  std::vector<double> q(static_cast<std::size_t>(T1) * levels.size());
  for (int j = 0; j < tvpreg_fit_num_covariates(fit); ++j) {
    check(tvpreg_fit_path_quantiles(fit, j, levels.data(), static_cast<int>(levels.size()),
                                    q.data()),
          "path quantiles");
    for (int t = 0; t < T1; ++t) {
      std::vector<std::string> row = {names[j], std::to_string(t)};
      for (std::size_t l = 0; l < levels.size(); ++l)
        row.push_back(fmt_num(q[t * levels.size() + l]));
      w.write_row(row);
    }
  }
  w.close();
}

struct FitArgs {
  DataFlags data;
  ModelFlags model;
  std::string out_dir;
};

void run(const FitArgs& a) {
  const LoadedData loaded = load_data(a.data);
  const DataPtr data = make_data_handle(loaded);
  const OptionsPtr opts = build_options(a.model);

  const auto start = std::chrono::steady_clock::now();
  tvpreg_fit* raw = nullptr;
  check(tvpreg_fit_run(data.get(), opts.get(), &raw), "fit");
  FitPtr fit(raw);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  namespace fs = std::filesystem;
  fs::create_directories(a.out_dir);
  const auto in_dir = [&](const std::string& name) { return (fs::path(a.out_dir) / name).string(); };

  write_data_csv(in_dir("data_used.csv"), loaded);
  write_draws_csv(in_dir("draws.csv"), fit.get());

  const int M = tvpreg_fit_num_draws(fit.get());
  const int T1 = tvpreg_fit_num_obs(fit.get()) + 1;
  std::vector<double> block(static_cast<std::size_t>(M) * T1);
  for (int j = 0; j < loaded.d; ++j) {
    check(tvpreg_fit_state_draws(fit.get(), j, block.data()), "state draws");
    write_wide_path_csv(in_dir("states_" + safe_filename(loaded.names[j]) + ".csv"),
                        block.data(), M, T1);
  }
  nlohmann::json config = fit_config_json(fit.get());
  if (config.at("sv") == "true") {
    check(tvpreg_fit_h_draws(fit.get(), block.data()), "volatility draws");
    write_wide_path_csv(in_dir("h.csv"), block.data(), M, T1);
  }

  write_summary_txt(in_dir("summary.txt"), fit.get());
  write_quantiles_csv(in_dir("quantiles.csv"), fit.get(), loaded.names);

  const double niter = std::strtod(config.at("niter").get<std::string>().c_str(), nullptr);
  nlohmann::json manifest = {
      {"command", "fit"},
      {"version", tvpreg_version()},
      {"config", config},
      {"inputs", {{a.data.path, file_digest(a.data.path)}}},
      {"response", a.data.response},
      {"stored_draws", M},
      {"duration_seconds", seconds},
      {"iterations_per_second", seconds > 0 ? niter / seconds : 0.0},
  };
  write_json_file(in_dir("manifest.json"), manifest);

  std::printf("wrote %s: %d draws in %.2f s (%.0f iterations/s)\n", a.out_dir.c_str(), M,
              seconds, seconds > 0 ? niter / seconds : 0.0);
}

}  // namespace

void register_cmd_fit(CLI::App& app) {
  auto args = std::make_shared<FitArgs>();
  CLI::App* cmd = app.add_subcommand("fit", "sample the posterior of a shrinkage TVP model");
  add_data_flags(cmd, &args->data);
  add_model_flags(cmd, &args->model);
  cmd->add_option("--out-dir", args->out_dir, "directory for draws, summary and manifest")
      ->required();
  cmd->callback([args] { run(*args); });
}

}  // namespace cli
