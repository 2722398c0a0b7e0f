#include "tvpreg/state_space.hpp"

#include <cmath>
#include <string>

#include "tvpreg/errors.hpp"

namespace tvpreg {

PrecisionSystem build_precision(const Eigen::MatrixXd& X, const Eigen::VectorXd& ystar,
                                const Eigen::VectorXd& theta_sr, const Eigen::VectorXd& sigma2) {
  const int T = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  if (ystar.size() != T || sigma2.size() != T || theta_sr.size() != d)
    throw InvalidArgumentError("build_precision: dimension mismatch");
  if (T < 1) throw InvalidArgumentError("build_precision: need at least one observation");

  PrecisionSystem sys;
  sys.diag.resize(T + 1);
  sys.off.assign(T, -Eigen::MatrixXd::Identity(d, d));
  sys.rhs.resize(T + 1);

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  sys.diag[0] = 2.0 * I;
  sys.rhs[0] = Eigen::VectorXd::Zero(d);
  for (int t = 1; t <= T; ++t) {
    const Eigen::VectorXd f = X.row(t - 1).transpose().cwiseProduct(theta_sr);
    const double w = 1.0 / sigma2[t - 1];
    sys.diag[t] = w * (f * f.transpose());
    sys.diag[t] += (t == T ? 1.0 : 2.0) * I;
    sys.rhs[t] = f * (ystar[t - 1] * w);
  }
  return sys;
}

BlockCholesky::BlockCholesky(const PrecisionSystem& sys) {
  const int n = sys.num_blocks();
  diag_L_.resize(n);
  sub_L_.resize(n - 1);

  Eigen::MatrixXd D = sys.diag[0];
  for (int t = 0; t < n; ++t) {
    Eigen::LLT<Eigen::MatrixXd> llt(D);
    if (llt.info() != Eigen::Success || llt.matrixLLT().diagonal().minCoeff() < 1e-12)
      throw NumericalError("state precision block " + std::to_string(t) +
                           " is not positive definite");
    diag_L_[t] = llt.matrixL();
    if (t + 1 < n) {
      // L_{t+1,t} = Omega_{t,t+1}' L_t^{-T}; then Schur-update the next block
      sub_L_[t] = diag_L_[t].triangularView<Eigen::Lower>().solve(sys.off[t]).transpose();
      D = sys.diag[t + 1] - sub_L_[t] * sub_L_[t].transpose();
    }
  }
}

Eigen::MatrixXd BlockCholesky::solve_mean(const PrecisionSystem& sys) const {
  const int n = sys.num_blocks();
  const int d = sys.block_dim();

  // forward L z = c
  std::vector<Eigen::VectorXd> z(n);
  for (int t = 0; t < n; ++t) {
    Eigen::VectorXd r = sys.rhs[t];
    if (t > 0) r -= sub_L_[t - 1] * z[t - 1];
    z[t] = diag_L_[t].triangularView<Eigen::Lower>().solve(r);
  }
  // backward L' mu = z
  Eigen::MatrixXd out(n, d);
  Eigen::VectorXd next(d);
  for (int t = n - 1; t >= 0; --t) {
    Eigen::VectorXd r = z[t];
    if (t + 1 < n) r -= sub_L_[t].transpose() * next;
    next = diag_L_[t].transpose().triangularView<Eigen::Upper>().solve(r);
    out.row(t) = next.transpose();
  }
  return out;
}

Eigen::MatrixXd BlockCholesky::sample(const PrecisionSystem& sys, Rng& rng) const {
  const int n = sys.num_blocks();
  const int d = sys.block_dim();

  Eigen::MatrixXd mu = solve_mean(sys);

  // w solves L' w = eps with eps standard normal, so w ~ N(0, Omega^{-1})
  Eigen::MatrixXd eps(n, d);
  for (int t = 0; t < n; ++t)
    for (int j = 0; j < d; ++j) eps(t, j) = rng.normal();

  Eigen::VectorXd next(d);
  for (int t = n - 1; t >= 0; --t) {
    Eigen::VectorXd r = eps.row(t).transpose();
    if (t + 1 < n) r -= sub_L_[t].transpose() * next;
    next = diag_L_[t].transpose().triangularView<Eigen::Upper>().solve(r);
    mu.row(t) += next.transpose();
  }
  return mu;
}

Eigen::MatrixXd sample_states(const PrecisionSystem& sys, Rng& rng) {
  return BlockCholesky(sys).sample(sys, rng);
}

FilterMoments filter_moments(const PrecisionSystem& sys, int t0) {
  const int T = sys.num_blocks() - 1;
  if (t0 < 1 || t0 > T) throw InvalidArgumentError("filter_moments: t0 out of range");

  FilterMoments fm;
  fm.Sigma = sys.diag[1].inverse();
  fm.m = fm.Sigma * sys.rhs[1];
  for (int t = 2; t <= t0; ++t) {
    const Eigen::MatrixXd& B = sys.off[t - 1];  // Omega_{t-1,t}
    fm.Sigma = (sys.diag[t] - B.transpose() * fm.Sigma * B).inverse();
    fm.m = fm.Sigma * (sys.rhs[t] - B.transpose() * fm.m);
  }
  return fm;
}

}  // namespace tvpreg
