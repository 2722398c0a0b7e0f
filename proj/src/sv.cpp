#include "tvpreg/sv.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "tvpreg/dists.hpp"
#include "tvpreg/errors.hpp"
#include "tvpreg/state_space.hpp"

namespace tvpreg {

// published 10-component table for the log chi^2_1 approximation
const double LogChi2Mixture::prob[LogChi2Mixture::K] = {
    0.00609, 0.04775, 0.13057, 0.20674, 0.22715,
    0.18842, 0.12047, 0.05591, 0.01575, 0.00115};
const double LogChi2Mixture::mean[LogChi2Mixture::K] = {
    1.92677, 1.34744, 0.73504, 0.02266, -0.85173,
    -1.97278, -3.46788, -5.55246, -8.68384, -14.65000};
const double LogChi2Mixture::var[LogChi2Mixture::K] = {
    0.11265, 0.17788, 0.26768, 0.40611, 0.62699,
    0.98583, 1.57469, 2.54498, 4.16591, 7.33342};

double log_chi2_log_density(double x) {
  // density of log(eps^2), eps ~ N(0,1)
  return -0.91893853320467274 + 0.5 * x - 0.5 * std::exp(x);
}

namespace {

constexpr int K = LogChi2Mixture::K;

// indicator weights in log space so extreme h values cannot overflow
int draw_indicator(Rng& rng, double ystar_t, double h_t) {
  double lw[K];
  double mx = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < K; ++k) {
    lw[k] = std::log(LogChi2Mixture::prob[k]) +
            log_normal_pdf(ystar_t, h_t + LogChi2Mixture::mean[k], LogChi2Mixture::var[k]);
    mx = std::max(mx, lw[k]);
  }
  double w[K];
  for (int k = 0; k < K; ++k) w[k] = std::exp(lw[k] - mx);
  return rng.categorical(w, K);
}

}  // namespace

std::vector<int> draw_indicators(Rng& rng, const Eigen::VectorXd& ystar,
                                 const Eigen::VectorXd& h) {
  const int T = static_cast<int>(ystar.size());
  if (h.size() != T + 1) throw InvalidArgumentError("draw_indicators: h must have length T+1");
  std::vector<int> ind(T);
  for (int t = 0; t < T; ++t) ind[t] = draw_indicator(rng, ystar[t], h[t + 1]);
  return ind;
}

Eigen::VectorXd draw_h_path(Rng& rng, const Eigen::VectorXd& ystar,
                            const std::vector<int>& indicators, const SvParams& params) {
  const int T = static_cast<int>(ystar.size());
  if (static_cast<int>(indicators.size()) != T)
    throw InvalidArgumentError("draw_h_path: indicators must have length T");
  const double mu = params.mu;
  const double phi = params.phi;
  const double s2eta = params.sigma2_eta;

  // work in delta = h - mu: AR(1) prior precision (stationary start) plus the
  // mixture likelihood on the diagonal, d = 1 blocks
  PrecisionSystem sys;
  sys.diag.resize(T + 1);
  sys.off.resize(T);
  sys.rhs.resize(T + 1);
  const Eigen::MatrixXd one = Eigen::MatrixXd::Constant(1, 1, 1.0);
  sys.diag[0] = one / s2eta;
  sys.rhs[0] = Eigen::VectorXd::Zero(1);
  for (int t = 1; t <= T; ++t) {
    const int k = indicators[t - 1];
    const double v = LogChi2Mixture::var[k];
    const double prior_diag = (t < T ? 1.0 + phi * phi : 1.0) / s2eta;
    sys.diag[t] = one * (prior_diag + 1.0 / v);
    sys.rhs[t] = one.col(0) * ((ystar[t - 1] - LogChi2Mixture::mean[k] - mu) / v);
    sys.off[t - 1] = one * (-phi / s2eta);
  }
  const BlockCholesky chol(sys);
  const Eigen::MatrixXd delta = chol.sample(sys, rng);
  Eigen::VectorXd h(T + 1);
  for (int t = 0; t <= T; ++t) h[t] = mu + delta(t, 0);
  return h;
}

void update_sv(Rng& rng, const Eigen::VectorXd& residuals, Eigen::VectorXd* h_io,
               SvParams* params, const SvHyper& hyper, std::vector<int>* indicators) {
  const int T = static_cast<int>(residuals.size());
  if (h_io->size() != T + 1) throw InvalidArgumentError("update_sv: h must have length T+1");
  if (static_cast<int>(indicators->size()) != T) indicators->assign(T, 4);
  Eigen::VectorXd& h = *h_io;
  double mu = params->mu;
  double phi = params->phi;
  double s2eta = params->sigma2_eta;

  Eigen::VectorXd ystar(T);
  for (int t = 0; t < T; ++t)
    ystar[t] = std::log(std::max(residuals[t] * residuals[t], 1e-300));

  *indicators = draw_indicators(rng, ystar, h);
  h = draw_h_path(rng, ystar, *indicators, SvParams{mu, phi, s2eta});

  // centered parameter draws
  Eigen::VectorXd dlt = h.array() - mu;
  double A = 0.0, B = 0.0;
  for (int t = 1; t <= T; ++t) {
    A += dlt[t - 1] * dlt[t - 1];
    B += dlt[t] * dlt[t - 1];
  }
  if (A > 0.0 && std::isfinite(A)) {
    // proposal matches the transition-likelihood factor; the acceptance ratio
    // carries the prior and the stationary initial-state factor
    const double prop = rng.normal(B / A, std::sqrt(s2eta / A));
    if (std::fabs(prop) < 1.0) {
      const auto edge = [&](double f) {
        return log_beta_pdf(0.5 * (f + 1.0), hyper.a_phi, hyper.b_phi) +
               0.5 * std::log1p(-f * f) - 0.5 * (1.0 - f * f) * dlt[0] * dlt[0] / s2eta;
      };
      if (std::log(rng.uniform()) < edge(prop) - edge(phi)) phi = prop;
    }
  }

  double z = (1.0 - phi * phi) * dlt[0] * dlt[0];
  for (int t = 1; t <= T; ++t) {
    const double step = dlt[t] - phi * dlt[t - 1];
    z += step * step;
  }
  s2eta = sample_gig(rng, -0.5 * T, std::max(z, 1e-300), 1.0 / hyper.B_sigma);

  {
    const double w0 = (1.0 - phi * phi) / s2eta;
    const double wt = (1.0 - phi) * (1.0 - phi) / s2eta;
    double prec = w0 + T * wt + 1.0 / hyper.B_mu;
    double num = h[0] * w0 + hyper.b_mu / hyper.B_mu;
    for (int t = 1; t <= T; ++t) num += (h[t] - phi * h[t - 1]) * (1.0 - phi) / s2eta;
    mu = rng.normal(num / prec, std::sqrt(1.0 / prec));
  }

  // non-centered interweave: with htil fixed, (mu, sigma_eta) is a bivariate
  // Gaussian regression of ystar_t - m_k on (1, htil_t); the prior
  // sigma2_eta ~ Gamma(1/2, 1/(2 B_sigma)) is exactly sigma_eta ~ N(0, B_sigma)
  {
    const double seta = std::sqrt(s2eta);
    const Eigen::VectorXd htil = (h.array() - mu) / seta;
    Eigen::Matrix2d P;
    P << 1.0 / hyper.B_mu, 0.0, 0.0, 1.0 / hyper.B_sigma;
    Eigen::Vector2d b(hyper.b_mu / hyper.B_mu, 0.0);
    for (int t = 1; t <= T; ++t) {
      const int k = (*indicators)[t - 1];
      const double v = LogChi2Mixture::var[k];
      const Eigen::Vector2d zrow(1.0, htil[t]);
      P += zrow * zrow.transpose() / v;
      b += zrow * ((ystar[t - 1] - LogChi2Mixture::mean[k]) / v);
    }
    const Eigen::LLT<Eigen::Matrix2d> llt(P);
    if (llt.info() != Eigen::Success)
      throw NumericalError("update_sv: level/scale precision not positive definite");
    Eigen::Vector2d draw = llt.solve(b);
    const Eigen::Vector2d eps(rng.normal(), rng.normal());
    draw += llt.matrixU().solve(eps);
    mu = draw[0];
    const double seta_new = draw[1];  // sign-unrestricted; variance is its square
    s2eta = std::max(seta_new * seta_new, 1e-300);
    for (int t = 0; t <= T; ++t) h[t] = mu + seta_new * htil[t];
  }

  params->mu = mu;
  params->phi = phi;
  params->sigma2_eta = s2eta;
}

}  // namespace tvpreg
