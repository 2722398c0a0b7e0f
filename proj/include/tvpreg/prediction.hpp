#pragma once

#include <Eigen/Dense>

#include "tvpreg/gibbs.hpp"
#include "tvpreg/types.hpp"

namespace tvpreg {

// One-step-ahead predictive mixture: component m is N(yhat[m], s2[m]), all
// components weighted equally.
struct PredictiveMoments {
  Eigen::VectorXd yhat;  // per-draw predictive means
  Eigen::VectorXd s2;    // per-draw predictive variances, > 0
};

// Per stored draw m, re-filters the standardized state under that draw's
// parameters up to the last observation and combines
//   yhat = x_new beta + F m_T,  s2 = F (Sigma_T + I) F' + sigma2_next,
// with F = x_new .* sqrt(theta). Under SV, sigma2_next = exp(h_next) where
// h_next ~ N(mu + phi (h_T - mu), sigma2_eta) is drawn per draw from a
// dedicated stream derived deterministically from the fit's seed.
// data must be the series the fit was produced on.
PredictiveMoments predictive_moments(const DrawsStore& fit, const TimeSeriesData& data,
                                     const Eigen::RowVectorXd& x_new);

// log predictive density score log[(1/M) sum_m N(y_new; yhat_m, s2_m)],
// reduced with log-sum-exp
double mixture_lpds(const PredictiveMoments& pm, double y_new);
double lpds(const DrawsStore& fit, const TimeSeriesData& data, const Eigen::RowVectorXd& x_new,
            double y_new);

// mixture density (1/M) sum_m N(p; yhat_m, s2_m) at each point; empty input
// gives empty output
Eigen::VectorXd mixture_density(const PredictiveMoments& pm, const Eigen::VectorXd& points);
Eigen::VectorXd eval_pred_dens(const Eigen::VectorXd& points, const DrawsStore& fit,
                               const TimeSeriesData& data, const Eigen::RowVectorXd& x_new);

}  // namespace tvpreg
