#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tvpreg/rng.hpp"

namespace tvpreg {

// AR(1) law of the log-volatility path: h_t = mu + phi (h_{t-1} - mu) + eta_t,
// eta_t ~ N(0, sigma2_eta), stationary start h_0 ~ N(mu, sigma2_eta/(1-phi^2)).
struct SvParams {
  double mu = 0.0;
  double phi = 0.8;
  double sigma2_eta = 0.1;
};

// Hyperparameters of the priors mu ~ N(b_mu, B_mu), (phi+1)/2 ~ Beta(a_phi,
// b_phi), sigma2_eta ~ Gamma(1/2, 1/(2 B_sigma)).
struct SvHyper {
  double b_mu = 0.0, B_mu = 1.0;
  double a_phi = 5.0, b_phi = 1.5;
  double B_sigma = 1.0;
};

// Ten-component Gaussian mixture approximating the density of log eps^2 for
// eps ~ N(0,1). Component k contributes prob[k] * N(mean[k], var[k]).
struct LogChi2Mixture {
  static constexpr int K = 10;
  static const double prob[K];
  static const double mean[K];
  static const double var[K];
};

// exact density of x = log eps^2, eps ~ N(0,1):
// p(x) = exp(x/2) exp(-exp(x)/2) / sqrt(2 pi)
double log_chi2_log_density(double x);

// Mixture component indicators given the path: P(k) proportional to
// prob[k] N(ystar_t; h_t + mean[k], var[k]), computed in log space. ystar has
// length T, h length T+1 (entry t+1 pairs with ystar_t).
std::vector<int> draw_indicators(Rng& rng, const Eigen::VectorXd& ystar,
                                 const Eigen::VectorXd& h);

// Joint draw of h_0..h_T given indicators and parameters: Gaussian AR(1)
// prior (stationary start) plus the selected mixture components as
// observations, solved through the tridiagonal precision form.
Eigen::VectorXd draw_h_path(Rng& rng, const Eigen::VectorXd& ystar,
                            const std::vector<int>& indicators, const SvParams& params);

// One sweep of the auxiliary mixture sampler. residuals are the T
// observation-equation errors; h (length T+1, entries h_0..h_T), params and
// indicators (length T) are updated in place. Squared residuals are floored
// at 1e-300 before the log transform.
void update_sv(Rng& rng, const Eigen::VectorXd& residuals, Eigen::VectorXd* h, SvParams* params,
               const SvHyper& hyper, std::vector<int>* indicators);

}  // namespace tvpreg
