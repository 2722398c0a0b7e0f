#include "tvpreg/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tvpreg/dists.hpp"
#include "tvpreg/errors.hpp"
#include "tvpreg/rng.hpp"
#include "tvpreg/state_space.hpp"

namespace tvpreg {

PredictiveMoments predictive_moments(const DrawsStore& fit, const TimeSeriesData& data,
                                     const Eigen::RowVectorXd& x_new) {
  const int T = fit.T;
  const int d = fit.d;
  if (static_cast<int>(x_new.size()) != d)
    throw InvalidArgumentError("predictive_moments: x_new has " +
                               std::to_string(x_new.size()) + " entries, fit has d = " +
                               std::to_string(d));
  if (data.T() != T || data.d() != d)
    throw InvalidArgumentError("predictive_moments: data shape does not match the fit");
  if (fit.M < 1) throw InvalidArgumentError("predictive_moments: empty draw store");

  // volatility propagation gets its own stream so prediction never perturbs
  // (and is never perturbed by) other consumers of the fit seed
  Rng vol_rng(fit.cfg.seed, fit.cfg.stream | (std::uint64_t{1} << 63));

  PredictiveMoments pm;
  pm.yhat.resize(fit.M);
  pm.s2.resize(fit.M);
  for (int m = 0; m < fit.M; ++m) {
    const Eigen::VectorXd beta = fit.beta_mean.row(m).transpose();
    const Eigen::VectorXd theta_sr = fit.theta_sr.row(m).transpose();
    Eigen::VectorXd s2path;
    if (fit.spec.sv)
      s2path = fit.h.row(m).segment(1, T).transpose().array().exp();
    else
      s2path = Eigen::VectorXd::Constant(T, fit.sigma2[m]);
    const Eigen::VectorXd ystar = data.y - data.X * beta;
    const PrecisionSystem sys = build_precision(data.X, ystar, theta_sr, s2path);
    const FilterMoments fm = filter_moments(sys, T);

    const Eigen::RowVectorXd F = x_new.cwiseProduct(theta_sr.transpose());
    double sigma2_next;
    if (fit.spec.sv) {
      const double h_next = fit.sv_mu[m] + fit.sv_phi[m] * (fit.h(m, T) - fit.sv_mu[m]) +
                            std::sqrt(fit.sv_sigma2[m]) * vol_rng.normal();
      sigma2_next = std::exp(h_next);
    } else {
      sigma2_next = fit.sigma2[m];
    }
    pm.yhat[m] = x_new.dot(beta) + F * fm.m;
    pm.s2[m] =
        (F * (fm.Sigma + Eigen::MatrixXd::Identity(d, d)) * F.transpose())(0) + sigma2_next;
  }
  return pm;
}

double mixture_lpds(const PredictiveMoments& pm, double y_new) {
  const int M = static_cast<int>(pm.yhat.size());
  if (M < 1) throw InvalidArgumentError("mixture_lpds: empty mixture");
  Eigen::VectorXd lp(M);
  for (int m = 0; m < M; ++m) lp[m] = log_normal_pdf(y_new, pm.yhat[m], pm.s2[m]);
  const double mx = lp.maxCoeff();
  if (!std::isfinite(mx)) return mx;  // all components underflow identically
  return mx + std::log((lp.array() - mx).exp().sum()) - std::log(static_cast<double>(M));
}

double lpds(const DrawsStore& fit, const TimeSeriesData& data, const Eigen::RowVectorXd& x_new,
            double y_new) {
  return mixture_lpds(predictive_moments(fit, data, x_new), y_new);
}

Eigen::VectorXd mixture_density(const PredictiveMoments& pm, const Eigen::VectorXd& points) {
  const int M = static_cast<int>(pm.yhat.size());
  if (M < 1) throw InvalidArgumentError("mixture_density: empty mixture");
  Eigen::VectorXd out(points.size());
  for (int i = 0; i < points.size(); ++i) {
    double acc = 0.0;
    for (int m = 0; m < M; ++m)
      acc += std::exp(log_normal_pdf(points[i], pm.yhat[m], pm.s2[m]));
    out[i] = acc / M;
  }
  return out;
}

Eigen::VectorXd eval_pred_dens(const Eigen::VectorXd& points, const DrawsStore& fit,
                               const TimeSeriesData& data, const Eigen::RowVectorXd& x_new) {
  if (points.size() == 0) return Eigen::VectorXd();
  return mixture_density(predictive_moments(fit, data, x_new), points);
}

}  // namespace tvpreg
