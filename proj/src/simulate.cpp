#include "tvpreg/simulate.hpp"

#include <cmath>
#include <string>

#include "tvpreg/errors.hpp"
#include "tvpreg/rng.hpp"

namespace tvpreg {

SimResult sim_tvp(const SimConfig& cfg) {
  const int T = cfg.T;
  const int d = static_cast<int>(cfg.theta.size());
  if (T < 1) throw InvalidArgumentError("sim_tvp: T must be positive");
  if (d < 1) throw InvalidArgumentError("sim_tvp: theta must have at least one entry");
  if (cfg.beta_mean.size() != d)
    throw InvalidArgumentError("sim_tvp: theta and beta_mean must have equal length");
  if ((cfg.theta.array() < 0.0).any())
    throw InvalidArgumentError("sim_tvp: theta entries must be nonnegative");
  if (!cfg.sv && !(cfg.sigma2 > 0.0))
    throw InvalidArgumentError("sim_tvp: sigma2 must be positive");
  if (cfg.sv && (!(cfg.sv_params.sigma2_eta > 0.0) || std::fabs(cfg.sv_params.phi) >= 1.0))
    throw InvalidArgumentError("sim_tvp: sv parameters need sigma2_eta > 0 and |phi| < 1");
  if (cfg.covariates.size() > 0 && (cfg.covariates.rows() != T || cfg.covariates.cols() != d))
    throw InvalidArgumentError("sim_tvp: supplied covariates must be T x d");

  Rng rng(cfg.seed, 0);
  SimResult out;
  out.data.X.resize(T, d);
  if (cfg.covariates.size() > 0)
    out.data.X = cfg.covariates;
  else
    for (int t = 0; t < T; ++t)
      for (int j = 0; j < d; ++j) out.data.X(t, j) = rng.normal();
  out.data.X.col(0).setOnes();
  for (int j = 0; j < d; ++j) out.data.names.push_back("x" + std::to_string(j + 1));

  out.true_paths.resize(T + 1, d);
  for (int j = 0; j < d; ++j) {
    const double sd = std::sqrt(cfg.theta[j]);
    out.true_paths(0, j) = cfg.beta_mean[j] + sd * rng.normal();
    for (int t = 1; t <= T; ++t)
      out.true_paths(t, j) = out.true_paths(t - 1, j) + sd * rng.normal();
  }

  out.eps.resize(T);
  if (cfg.sv) {
    const SvParams& p = cfg.sv_params;
    out.h.resize(T + 1);
    out.h[0] = p.mu + std::sqrt(p.sigma2_eta / (1.0 - p.phi * p.phi)) * rng.normal();
    for (int t = 1; t <= T; ++t)
      out.h[t] = p.mu + p.phi * (out.h[t - 1] - p.mu) + std::sqrt(p.sigma2_eta) * rng.normal();
    for (int t = 0; t < T; ++t) out.eps[t] = std::exp(0.5 * out.h[t + 1]) * rng.normal();
  } else {
    const double sd = std::sqrt(cfg.sigma2);
    for (int t = 0; t < T; ++t) out.eps[t] = sd * rng.normal();
  }

  out.data.y.resize(T);
  for (int t = 0; t < T; ++t)
    out.data.y[t] = out.data.X.row(t).dot(out.true_paths.row(t + 1)) + out.eps[t];
  return out;
}

}  // namespace tvpreg
