#include "tvpreg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "tvpreg/errors.hpp"

namespace tvpreg {

std::pair<double, double> hpd_interval(const Eigen::VectorXd& draws, double prob) {
  const int M = static_cast<int>(draws.size());
  if (M < 10) throw InvalidArgumentError("hpd_interval: needs at least 10 draws");
  if (!(prob > 0.0 && prob < 1.0))
    throw InvalidArgumentError("hpd_interval: prob must lie in (0, 1)");
  std::vector<double> x(draws.data(), draws.data() + M);
  std::sort(x.begin(), x.end());
  const int k = std::min(M, static_cast<int>(std::ceil(prob * M)));
  int best = 0;
  double best_width = x[k - 1] - x[0];
  for (int i = 1; i + k <= M; ++i) {
    const double w = x[i + k - 1] - x[i];
    if (w < best_width) {  // strict: ties keep the lowest start
      best_width = w;
      best = i;
    }
  }
  return {x[best], x[best + k - 1]};
}

double ess(const Eigen::VectorXd& draws) {
  const int M = static_cast<int>(draws.size());
  if (M < 10) throw InvalidArgumentError("ess: needs at least 10 draws");
  const double mean = draws.mean();
  const Eigen::VectorXd c = draws.array() - mean;
  const double g0 = c.squaredNorm() / M;
  if (g0 <= 0.0) return static_cast<double>(M);

  const auto rho = [&](int k) {
    double acc = 0.0;
    for (int i = 0; i + k < M; ++i) acc += c[i] * c[i + k];
    return acc / M / g0;
  };

  // Geyer: sum consecutive-pair autocorrelations while the (monotone
  // enforced) pair sums stay positive
  double tau = -1.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (int m = 0; 2 * m < M; ++m) {
    const double r0 = rho(2 * m);
    const double r1 = (2 * m + 1 < M) ? rho(2 * m + 1) : 0.0;
    double pair = r0 + r1;
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);
    prev_pair = pair;
    tau += 2.0 * pair;
  }
  tau = std::max(tau, 1e-12);
  return std::min(static_cast<double>(M), M / tau);
}

double quantile(const Eigen::VectorXd& draws, double p) {
  const int M = static_cast<int>(draws.size());
  if (M < 1) throw InvalidArgumentError("quantile: empty input");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgumentError("quantile: p must lie in [0, 1]");
  std::vector<double> x(draws.data(), draws.data() + M);
  std::sort(x.begin(), x.end());
  const double h = (M - 1) * p;
  const int lo = static_cast<int>(std::floor(h));
  if (lo + 1 >= M) return x[M - 1];
  return x[lo] + (h - lo) * (x[lo + 1] - x[lo]);
}

namespace {

SummaryRow make_row(const std::string& name, const Eigen::VectorXd& draws) {
  SummaryRow r;
  r.name = name;
  const int M = static_cast<int>(draws.size());
  r.mean = draws.mean();
  r.sd = M > 1 ? std::sqrt((draws.array() - r.mean).square().sum() / (M - 1)) : 0.0;
  r.median = quantile(draws, 0.5);
  if (M >= 10) {
    std::tie(r.hpd_low, r.hpd_high) = hpd_interval(draws, 0.95);
    r.ess = ess(draws);
  } else {  // degenerate store: report the trivial interval and count
    r.hpd_low = draws.minCoeff();
    r.hpd_high = draws.maxCoeff();
    r.ess = static_cast<double>(M);
  }
  return r;
}

}  // namespace

std::vector<SummaryRow> summarize(const DrawsStore& fit) {
  if (fit.M < 1) throw InvalidArgumentError("summarize: empty draw store");
  std::vector<SummaryRow> rows;
  const auto col_name = [&](int j) {
    return j < static_cast<int>(fit.names.size()) ? fit.names[j] : "x" + std::to_string(j + 1);
  };
  for (int j = 0; j < fit.d; ++j) rows.push_back(make_row("beta_mean_" + col_name(j), fit.beta_mean.col(j)));
  for (int j = 0; j < fit.d; ++j)
    rows.push_back(make_row("abs(theta_sr_" + col_name(j) + ")", fit.theta_sr.col(j).cwiseAbs()));
  for (int j = 0; j < fit.d; ++j) rows.push_back(make_row("tau2_" + col_name(j), fit.tau2.col(j)));
  for (int j = 0; j < fit.d; ++j) rows.push_back(make_row("xi2_" + col_name(j), fit.xi2.col(j)));
  if (fit.a_xi.size() > 0) rows.push_back(make_row("a_xi", fit.a_xi));
  if (fit.a_tau.size() > 0) rows.push_back(make_row("a_tau", fit.a_tau));
  if (fit.c_xi.size() > 0) rows.push_back(make_row("c_xi", fit.c_xi));
  if (fit.c_tau.size() > 0) rows.push_back(make_row("c_tau", fit.c_tau));
  if (fit.kappa2_B.size() > 0) rows.push_back(make_row("kappa2_B", fit.kappa2_B));
  if (fit.lambda2_B.size() > 0) rows.push_back(make_row("lambda2_B", fit.lambda2_B));
  if (fit.sigma2.size() > 0) rows.push_back(make_row("sigma2", fit.sigma2));
  if (fit.C0.size() > 0) rows.push_back(make_row("C0", fit.C0));
  if (fit.sv_mu.size() > 0) rows.push_back(make_row("sv_mu", fit.sv_mu));
  if (fit.sv_phi.size() > 0) rows.push_back(make_row("sv_phi", fit.sv_phi));
  if (fit.sv_sigma2.size() > 0) rows.push_back(make_row("sv_sigma2", fit.sv_sigma2));
  return rows;
}

Eigen::MatrixXd path_quantiles(const DrawsStore& fit, int j, const std::vector<double>& levels) {
  if (j < 0 || j >= fit.d) throw InvalidArgumentError("path_quantiles: covariate index out of range");
  Eigen::MatrixXd out(fit.T + 1, static_cast<int>(levels.size()));
  Eigen::VectorXd column(fit.M);
  for (int t = 0; t <= fit.T; ++t) {
    for (int m = 0; m < fit.M; ++m)
      column[m] = fit.beta_mean(m, j) + fit.theta_sr(m, j) * fit.beta_tilde[j](m, t);
    for (std::size_t q = 0; q < levels.size(); ++q)
      out(t, static_cast<int>(q)) = quantile(column, levels[q]);
  }
  return out;
}

const std::vector<double>& default_quantile_levels() {
  static const std::vector<double> levels{0.025, 0.25, 0.5, 0.75, 0.975};
  return levels;
}

}  // namespace tvpreg
