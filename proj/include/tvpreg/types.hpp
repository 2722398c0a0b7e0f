#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tvpreg {

// Shrinkage family on the initial values beta_j and the innovation scales
// sqrt(theta_j): ridge (fixed normal), double gamma (normal-gamma), triple
// gamma (normal-gamma-gamma). The horseshoe is triple with a = c = 1/2; the
// Bayesian Lasso is double with a = 1.
enum class ModType { Ridge, Double, Triple };

std::string to_string(ModType m);
bool mod_type_from_string(const std::string& s, ModType* out);

// Tuning for one adaptive random-walk Metropolis update
struct MhTuning {
  bool adaptive = true;
  double initial_sd = 1.0;
  int batch_size = 50;
  double max_adapt = 0.01;
  double target_rate = 0.44;
};

struct PriorSpec {
  ModType mod_type = ModType::Double;
  bool sv = false;

  // which parts of the hierarchy are sampled; fixed otherwise
  bool learn_a_xi = true;
  bool learn_a_tau = true;
  bool learn_c_xi = false;   // triple only
  bool learn_c_tau = false;  // triple only
  bool learn_kappa2_B = true;
  bool learn_lambda2_B = true;

  // fixed-value fallbacks (used when the matching learn flag is off)
  double a_xi = 0.1;
  double a_tau = 0.1;
  double c_xi = 0.1;
  double c_tau = 0.1;
  double kappa2_B = 20.0;
  double lambda2_B = 20.0;

  // pole/tail hyperpriors. Double gamma: a ~ Gamma(alpha_a, alpha_a * beta_a).
  // Triple gamma: 2a ~ Beta(alpha_a, beta_a), 2c ~ Beta(alpha_c, beta_c).
  double alpha_a_xi = 5.0, beta_a_xi = 10.0;
  double alpha_a_tau = 5.0, beta_a_tau = 10.0;
  double alpha_c_xi = 5.0, beta_c_xi = 10.0;
  double alpha_c_tau = 5.0, beta_c_tau = 10.0;

  // global-scale hyperpriors, double gamma: kappa2_B ~ G(d1, d2), lambda2_B ~ G(e1, e2)
  double d1 = 0.001, d2 = 0.001;
  double e1 = 0.001, e2 = 0.001;

  // homoskedastic errors: sigma2 ~ InvGamma(c0, C0), C0 ~ Gamma(g0, G0)
  double c0 = 2.5;
  double g0 = 5.0;
  double G0 = 5.0 / 1.5;

  // stochastic volatility: mu ~ N(b_mu, B_mu), (phi+1)/2 ~ Beta(a_phi, b_phi),
  // sigma2_eta ~ Gamma(1/2, 1/(2 B_sigma))
  double b_mu = 0.0, B_mu = 1.0;
  double a_phi = 5.0, b_phi = 1.5;
  double B_sigma = 1.0;

  MhTuning mh_a_xi, mh_a_tau, mh_c_xi, mh_c_tau;
};

struct MCMCConfig {
  std::int64_t niter = 10000;
  std::int64_t nburn = -1;  // -1: use round(niter/2)
  std::int64_t nthin = 1;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
};

struct TimeSeriesData {
  Eigen::VectorXd y;               // responses y_1..y_T
  Eigen::MatrixXd X;               // T x d covariate rows (intercept column included)
  std::vector<std::string> names;  // d column labels

  int T() const { return static_cast<int>(y.size()); }
  int d() const { return static_cast<int>(X.cols()); }
};

// Package defaults for the given shrinkage family: fully hierarchical setups
// learn everything the family supports; ridge learns nothing.
PriorSpec default_prior_spec(ModType mod_type, bool sv = false);

struct ValidationResult {
  bool ok = false;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  PriorSpec spec;   // normalized (flags forced consistent, nburn resolved)
  MCMCConfig cfg;
};

// Checks dimensions, finiteness, and hyperparameter domains; normalizes
// ignored fields per mod_type (recording warnings) and resolves nburn = -1.
ValidationResult validate(const TimeSeriesData& data, const PriorSpec& spec,
                          const MCMCConfig& cfg);

// Flat key/value view of (spec, cfg); both directions round-trip exactly.
std::vector<std::pair<std::string, std::string>> to_key_values(const PriorSpec& spec,
                                                               const MCMCConfig& cfg);
// Applies one key; returns false (with *err set) on unknown key or bad value.
bool apply_key_value(PriorSpec& spec, MCMCConfig& cfg, const std::string& key,
                     const std::string& value, std::string* err);

}  // namespace tvpreg
