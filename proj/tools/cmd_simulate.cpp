#include <memory>
#include <string>
#include <vector>

#include "commands.hpp"
#include "common.hpp"
#include "csv.hpp"

namespace cli {

namespace {

struct SimulateArgs {
  int T = 200;
  std::string theta = "0.2,0,0";
  std::string beta_mean = "1.5,-0.3,0";
  double sigma2 = 1.0;
  bool sv = false;
  double sv_mu = 0.0, sv_phi = 0.8, sv_sigma2_eta = 0.1;
  std::uint64_t seed = 123;
  std::string covariates_path;
  std::string out = "sim_data.csv";
  std::string truth = "sim_truth.csv";
};

void run(const SimulateArgs& a) {
  const std::vector<double> theta = parse_double_list(a.theta, "--theta");
  const std::vector<double> beta = parse_double_list(a.beta_mean, "--beta-mean");
  if (theta.size() != beta.size())
    throw std::runtime_error("--theta and --beta-mean must have the same length");
  const int d = static_cast<int>(theta.size());

  tvpreg_sim_config cfg;
  tvpreg_sim_config_init(&cfg);
  cfg.T = a.T;
  cfg.d = d;
  cfg.theta = theta.data();
  cfg.beta_mean = beta.data();
  cfg.sigma2 = a.sigma2;
  cfg.sv = a.sv ? 1 : 0;
  cfg.sv_mu = a.sv_mu;
  cfg.sv_phi = a.sv_phi;
  cfg.sv_sigma2_eta = a.sv_sigma2_eta;
  cfg.seed = a.seed;

  std::vector<double> covs;
  if (!a.covariates_path.empty()) {
    const CsvTable table = read_csv_file(a.covariates_path);
    if (static_cast<int>(table.header.size()) != d)
      throw std::runtime_error(a.covariates_path + ": expected " + std::to_string(d) +
                               " covariate columns");
    if (static_cast<int>(table.rows.size()) != a.T)
      throw std::runtime_error(a.covariates_path + ": expected " + std::to_string(a.T) + " rows");
    covs.reserve(static_cast<std::size_t>(a.T) * d);
    for (const auto& row : table.rows)
      for (const auto& cell : row) {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (cell.empty() || end != cell.c_str() + cell.size())
          throw std::runtime_error(a.covariates_path + ": not a number: '" + cell + "'");
        covs.push_back(v);
      }
    cfg.covariates = covs.data();
  }

  tvpreg_sim* raw = nullptr;
  check(tvpreg_simulate(&cfg, &raw), "simulate");
  SimPtr sim(raw);

  const int T = tvpreg_sim_num_obs(sim.get());
  std::vector<double> y(T), X(static_cast<std::size_t>(T) * d);
  std::vector<double> paths(static_cast<std::size_t>(T + 1) * d), h(T + 1);
  check(tvpreg_sim_y(sim.get(), y.data()), "simulate y");
  check(tvpreg_sim_x(sim.get(), X.data()), "simulate X");
  check(tvpreg_sim_true_paths(sim.get(), paths.data()), "simulate paths");
  if (a.sv) check(tvpreg_sim_volatility(sim.get(), h.data()), "simulate volatility");

  CsvWriter data(a.out);
  std::vector<std::string> header = {"y"};
  for (int j = 0; j < d; ++j) header.push_back("x" + std::to_string(j + 1));
  data.write_row(header);
  std::vector<double> row(1 + d);
  for (int t = 0; t < T; ++t) {
    row[0] = y[t];
    for (int j = 0; j < d; ++j) row[1 + j] = X[static_cast<std::size_t>(t) * d + j];
    data.write_numeric_row(row.data(), 1 + d);
  }
  data.close();

  CsvWriter truth(a.truth);
  std::vector<std::string> theader;
  for (int j = 0; j < d; ++j) theader.push_back("beta_x" + std::to_string(j + 1));
  if (a.sv) theader.push_back("h");
  truth.write_row(theader);
  std::vector<double> trow(theader.size());
  for (int t = 0; t <= T; ++t) {
    for (int j = 0; j < d; ++j) trow[j] = paths[static_cast<std::size_t>(t) * d + j];
    if (a.sv) trow[d] = h[t];
    truth.write_numeric_row(trow.data(), static_cast<int>(trow.size()));
  }
  truth.close();
}

}  // namespace

void register_cmd_simulate(CLI::App& app) {
  auto args = std::make_shared<SimulateArgs>();
  CLI::App* cmd = app.add_subcommand("simulate", "generate a synthetic data set");
  cmd->add_option("--T", args->T, "number of observations")->check(CLI::PositiveNumber);
  cmd->add_option("--theta", args->theta, "innovation variances, comma separated");
  cmd->add_option("--beta-mean", args->beta_mean, "coefficient levels, comma separated");
  cmd->add_option("--sigma2", args->sigma2, "observation noise variance");
  cmd->add_flag("--sv", args->sv, "stochastic-volatility observation noise");
  cmd->add_option("--sv-mu", args->sv_mu, "log-volatility level");
  cmd->add_option("--sv-phi", args->sv_phi, "log-volatility persistence");
  cmd->add_option("--sv-sigma2-eta", args->sv_sigma2_eta, "log-volatility innovation variance");
  cmd->add_option("--seed", args->seed, "random seed");
  cmd->add_option("--covariates", args->covariates_path,
                  "CSV of covariate values instead of standard normal draws");
  cmd->add_option("--out", args->out, "output data CSV");
  cmd->add_option("--truth", args->truth, "output CSV with the true coefficient paths");
  cmd->callback([args] { run(*args); });
}

}  // namespace cli
