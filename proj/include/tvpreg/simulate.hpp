#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "tvpreg/sv.hpp"
#include "tvpreg/types.hpp"

namespace tvpreg {

// Synthetic data law: beta_{j0} ~ N(beta_mean_j, theta_j), random-walk
// increments N(0, theta_j), y_t = x_t beta_t + eps_t with eps_t either
// N(0, sigma2) or stochastic-volatility noise.
struct SimConfig {
  int T = 200;
  Eigen::VectorXd theta;      // innovation variances, >= 0, length d
  Eigen::VectorXd beta_mean;  // length d
  double sigma2 = 1.0;
  bool sv = false;
  SvParams sv_params;  // used when sv = true
  std::uint64_t seed = 123;

  // optional T x d covariate matrix; empty draws standard normal columns.
  // Column 1 is forced to 1 (intercept) either way.
  Eigen::MatrixXd covariates;
};

struct SimResult {
  TimeSeriesData data;
  Eigen::MatrixXd true_paths;  // (T+1) x d, rows beta_0..beta_T
  Eigen::VectorXd eps;         // T observation errors, y_t - x_t beta_t
  Eigen::VectorXd h;           // T+1 log-volatility path when sv, else empty
};

SimResult sim_tvp(const SimConfig& cfg);

}  // namespace tvpreg
