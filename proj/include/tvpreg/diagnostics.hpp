#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "tvpreg/gibbs.hpp"

namespace tvpreg {

struct SummaryRow {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double median = 0.0;
  double hpd_low = 0.0;   // 95% highest posterior density bounds
  double hpd_high = 0.0;
  double ess = 0.0;
};

// Shortest contiguous interval covering ceil(prob * M) sorted draws; ties go
// to the lowest start. Requires M >= 10 and prob in (0, 1).
std::pair<double, double> hpd_interval(const Eigen::VectorXd& draws, double prob);

// M / (1 + 2 sum rho_k) with the autocorrelation sum truncated by Geyer's
// initial monotone positive-pair rule; capped at M, and defined as M for
// zero-variance input. Requires M >= 10.
double ess(const Eigen::VectorXd& draws);

// type-7 empirical quantile (linear interpolation of order statistics)
double quantile(const Eigen::VectorXd& draws, double p);

// One row per sampled scalar: beta_mean_<col>, abs(theta_sr_<col>),
// tau2_<col>, xi2_<col>, then whichever hyperparameters the fit learned,
// then the error-variance parameters. Rows a model variant does not sample
// are omitted.
std::vector<SummaryRow> summarize(const DrawsStore& fit);

// Pointwise quantiles of the centered coefficient path of covariate j:
// row t = 0..T, one column per requested level.
Eigen::MatrixXd path_quantiles(const DrawsStore& fit, int j, const std::vector<double>& levels);

// the default plot-export levels: 2.5/25/50/75/97.5%
const std::vector<double>& default_quantile_levels();

}  // namespace tvpreg
