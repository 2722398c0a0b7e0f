#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tvpreg/diagnostics.hpp"
#include "tvpreg/dists.hpp"
#include "tvpreg/errors.hpp"
#include "tvpreg/gibbs.hpp"
#include "tvpreg/prediction.hpp"
#include "tvpreg/simulate.hpp"

using namespace tvpreg;

namespace {

// minimal hand-filled store: homoskedastic, no learned hyperparameters
DrawsStore tiny_store(int M, int T, int d) {
  DrawsStore fit;
  fit.M = M;
  fit.T = T;
  fit.d = d;
  fit.spec = default_prior_spec(ModType::Double);
  fit.beta_mean = Eigen::MatrixXd::Zero(M, d);
  fit.theta_sr = Eigen::MatrixXd::Zero(M, d);
  fit.xi2 = Eigen::MatrixXd::Constant(M, d, 0.1);
  fit.tau2 = Eigen::MatrixXd::Constant(M, d, 0.1);
  fit.sigma2 = Eigen::VectorXd::Ones(M);
  fit.C0 = Eigen::VectorXd::Ones(M);
  fit.beta_tilde.assign(d, Eigen::MatrixXd::Zero(M, T + 1));
  for (int j = 0; j < d; ++j) fit.names.push_back("x" + std::to_string(j + 1));
  return fit;
}

TimeSeriesData flat_data(int T, int d) {
  TimeSeriesData data;
  data.y = Eigen::VectorXd::Constant(T, 0.3);
  data.X = Eigen::MatrixXd::Ones(T, d);
  for (int t = 0; t < T; ++t)
    for (int j = 1; j < d; ++j) data.X(t, j) = std::cos(0.4 * t + j);
  for (int j = 0; j < d; ++j) data.names.push_back("x" + std::to_string(j + 1));
  return data;
}

}  // namespace

TEST_CASE("zero scale paths reduce the prediction to the static regression") {
  const int M = 3, T = 5, d = 2;
  DrawsStore fit = tiny_store(M, T, d);
  fit.beta_mean << 1.0, -0.5, 0.2, 0.0, -1.0, 2.0;
  fit.sigma2 << 0.5, 1.0, 2.0;
  const TimeSeriesData data = flat_data(T, d);
  Eigen::RowVectorXd x_new(d);
  x_new << 1.0, 0.7;

  const PredictiveMoments pm = predictive_moments(fit, data, x_new);
  for (int m = 0; m < M; ++m) {
    CHECK(pm.s2[m] == fit.sigma2[m]);
    CHECK(pm.yhat[m] == x_new.dot(fit.beta_mean.row(m)));
  }
}

TEST_CASE("single-component mixture gives the closed-form log density") {
  PredictiveMoments pm;
  pm.yhat = Eigen::VectorXd::Constant(1, 4.2);
  pm.s2 = Eigen::VectorXd::Ones(1);
  CHECK(mixture_lpds(pm, 4.2) == doctest::Approx(-0.5 * std::log(2.0 * M_PI)).epsilon(1e-14));

  const Eigen::VectorXd at = mixture_density(pm, Eigen::VectorXd::Constant(1, 4.2));
  CHECK(std::exp(mixture_lpds(pm, 4.2)) == doctest::Approx(at[0]).epsilon(1e-12));
}

TEST_CASE("log-sum-exp reduction survives large location offsets") {
  Rng rng(12, 0);
  const int M = 200;
  PredictiveMoments pm;
  pm.yhat.resize(M);
  pm.s2.resize(M);
  for (int m = 0; m < M; ++m) {
    pm.yhat[m] = rng.normal(0.0, 2.0);
    pm.s2[m] = 0.5 + rng.uniform();
  }
  const double base = mixture_lpds(pm, 0.7);

  PredictiveMoments shifted = pm;
  shifted.yhat.array() += 1000.0;
  const double far = mixture_lpds(shifted, 1000.7);
  CHECK(std::isfinite(far));
  CHECK(far == doctest::Approx(base).epsilon(1e-9));

  // a hopeless point underflows to -inf rather than overflowing or NaN
  const double hopeless = mixture_lpds(pm, 1e6);
  CHECK(!std::isnan(hopeless));
  CHECK(hopeless < -1e9);
}

TEST_CASE("one-step moments match the hand-evaluated filter recursion") {
  // T=1, d=1: f = 1, sigma2 = 1, ystar = 3 so Sigma_1 = 1/2, m_1 = 3/2
  DrawsStore fit = tiny_store(1, 1, 1);
  fit.beta_mean(0, 0) = 0.4;
  fit.theta_sr(0, 0) = 0.5;
  fit.sigma2[0] = 1.0;
  TimeSeriesData data;
  data.y = Eigen::VectorXd::Constant(1, 3.0 + 2.0 * 0.4);
  data.X = Eigen::MatrixXd::Constant(1, 1, 2.0);
  data.names = {"x1"};
  Eigen::RowVectorXd x_new(1);
  x_new << 3.0;

  const PredictiveMoments pm = predictive_moments(fit, data, x_new);
  // F_new = 1.5; yhat = 3*0.4 + 1.5*1.5; S = 1.5^2*(0.5+1) + 1
  CHECK(pm.yhat[0] == doctest::Approx(1.2 + 2.25).epsilon(1e-12));
  CHECK(pm.s2[0] == doctest::Approx(2.25 * 1.5 + 1.0).epsilon(1e-12));
}

TEST_CASE("input mismatches are rejected") {
  DrawsStore fit = tiny_store(2, 4, 2);
  const TimeSeriesData data = flat_data(4, 2);
  Eigen::RowVectorXd wrong(3);
  wrong << 1.0, 2.0, 3.0;
  CHECK_THROWS_AS(predictive_moments(fit, data, wrong), InvalidArgumentError);
  const TimeSeriesData longer = flat_data(6, 2);
  Eigen::RowVectorXd ok(2);
  ok << 1.0, 0.0;
  CHECK_THROWS_AS(predictive_moments(fit, longer, ok), InvalidArgumentError);
  CHECK(eval_pred_dens(Eigen::VectorXd(), fit, data, ok).size() == 0);
}

TEST_CASE("mixture density agrees with a naive Monte Carlo forecast") {
  SimConfig sim;
  sim.T = 50;
  sim.theta = Eigen::VectorXd(2);
  sim.theta << 0.1, 0.0;
  sim.beta_mean = Eigen::VectorXd(2);
  sim.beta_mean << 1.0, 0.5;
  sim.seed = 321;
  const SimResult full = sim_tvp(sim);

  TimeSeriesData train;
  train.y = full.data.y.head(49);
  train.X = full.data.X.topRows(49);
  train.names = full.data.names;
  const Eigen::RowVectorXd x_new = full.data.X.row(49);
  const double y_new = full.data.y[49];

  MCMCConfig cfg;
  cfg.niter = 4000;
  cfg.nburn = 2000;
  cfg.seed = 11;
  const DrawsStore fit = run_chain(train, default_prior_spec(ModType::Double), cfg);

  const double mixture = lpds(fit, train, x_new, y_new);

  // naive route: propagate the stored terminal state explicitly
  Rng rng(999, 0);
  const int K = 40;
  double acc = 0.0;
  for (int m = 0; m < fit.M; ++m) {
    const double xb = x_new.dot(fit.beta_mean.row(m));
    for (int k = 0; k < K; ++k) {
      double mean = xb;
      for (int j = 0; j < fit.d; ++j)
        mean += x_new[j] * fit.theta_sr(m, j) * (fit.beta_tilde[j](m, 49) + rng.normal());
      acc += std::exp(log_normal_pdf(y_new, mean, fit.sigma2[m]));
    }
  }
  const double naive = std::log(acc / (static_cast<double>(fit.M) * K));
  INFO("mixture " << mixture << " naive " << naive);
  CHECK(std::fabs(mixture - naive) < 0.05);

  // the same mixture integrates to one over a wide grid
  const PredictiveMoments pm = predictive_moments(fit, train, x_new);
  const double lo = pm.yhat.minCoeff() - 12.0 * std::sqrt(pm.s2.maxCoeff());
  const double hi = pm.yhat.maxCoeff() + 12.0 * std::sqrt(pm.s2.maxCoeff());
  const int n = 4000;
  const double h = (hi - lo) / n;
  Eigen::VectorXd grid(n + 1);
  for (int i = 0; i <= n; ++i) grid[i] = lo + i * h;
  const Eigen::VectorXd dens = mixture_density(pm, grid);
  double integral = 0.0;
  for (int i = 0; i <= n; ++i)
    integral += dens[i] * ((i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0));
  integral *= h / 3.0;
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));

  // exp(lpds) equals the density evaluated at the observation
  const Eigen::VectorXd at_y = eval_pred_dens(Eigen::VectorXd::Constant(1, y_new), fit, train, x_new);
  CHECK(std::exp(mixture) == doctest::Approx(at_y[0]).epsilon(1e-12));

  // halving the stored draws moves the score by less than 3 mixture SEs
  DrawsStore half = fit;
  const int M2 = fit.M / 2;
  half.M = M2;
  half.beta_mean.conservativeResize(M2, Eigen::NoChange);
  half.theta_sr.conservativeResize(M2, Eigen::NoChange);
  half.xi2.conservativeResize(M2, Eigen::NoChange);
  half.tau2.conservativeResize(M2, Eigen::NoChange);
  half.sigma2.conservativeResize(M2);
  half.C0.conservativeResize(M2);
  for (auto& bt : half.beta_tilde) bt.conservativeResize(M2, Eigen::NoChange);
  const PredictiveMoments pm_half = predictive_moments(half, train, x_new);
  const double l_half = mixture_lpds(pm_half, y_new);
  Eigen::VectorXd dens_half(M2);
  for (int m = 0; m < M2; ++m)
    dens_half[m] = std::exp(log_normal_pdf(y_new, pm_half.yhat[m], pm_half.s2[m]));
  const double mean_d = dens_half.mean();
  const double sd_d = std::sqrt((dens_half.array() - mean_d).square().sum() / (M2 - 1));
  // the component densities are autocorrelated chain output, so the standard
  // error of their mean uses the effective rather than the nominal count
  const double se_log = sd_d / (mean_d * std::sqrt(ess(dens_half)));
  CHECK(std::fabs(l_half - mixture) < 3.0 * se_log);
}

TEST_CASE("volatility fits propagate the terminal volatility into the forecast") {
  const int T = 160;
  TimeSeriesData data;
  data.y.resize(T);
  data.X = Eigen::MatrixXd::Ones(T, 1);
  data.names = {"x1"};
  Rng rng(77, 0);
  for (int t = 0; t < T; ++t) {
    const double sd = 0.2 + 2.8 * t / (T - 1.0);  // rising volatility
    data.y[t] = sd * rng.normal();
  }
  Eigen::RowVectorXd x_new(1);
  x_new << 1.0;

  MCMCConfig cfg;
  cfg.niter = 2000;
  cfg.nburn = 1000;
  cfg.seed = 5;
  const DrawsStore hom = run_chain(data, default_prior_spec(ModType::Double, false), cfg);
  const DrawsStore svf = run_chain(data, default_prior_spec(ModType::Double, true), cfg);

  const PredictiveMoments pm_hom = predictive_moments(hom, data, x_new);
  const PredictiveMoments pm_sv = predictive_moments(svf, data, x_new);
  CHECK((pm_sv.s2.array() > 0.0).all());
  CHECK(pm_sv.s2.allFinite());
  CHECK(pm_sv.s2.mean() > pm_hom.s2.mean());

  // the volatility propagation stream is deterministic in the fit seed
  const PredictiveMoments again = predictive_moments(svf, data, x_new);
  CHECK((again.s2.array() == pm_sv.s2.array()).all());
  CHECK((again.yhat.array() == pm_sv.yhat.array()).all());
}
