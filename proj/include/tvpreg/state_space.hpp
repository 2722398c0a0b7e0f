#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tvpreg/rng.hpp"

namespace tvpreg {

// Symmetric positive definite block-tridiagonal system: T+1 diagonal blocks
// Omega_00..Omega_TT (d x d each), T super-diagonal blocks off[t] = Omega_{t,t+1},
// and the right-hand side c_0..c_T. Represents a Gaussian in precision form,
// x ~ N(Omega^{-1} c, Omega^{-1}).
struct PrecisionSystem {
  std::vector<Eigen::MatrixXd> diag;
  std::vector<Eigen::MatrixXd> off;
  std::vector<Eigen::VectorXd> rhs;

  int num_blocks() const { return static_cast<int>(diag.size()); }
  int block_dim() const { return diag.empty() ? 0 : static_cast<int>(diag.front().rows()); }
};

// Posterior precision of the standardized state path (beta_tilde_0..beta_tilde_T)
// of a random-walk state equation with unit innovation variance:
//   Omega_00 = 2 I
//   Omega_tt = f_t f_t' / sigma2_t + 2 I          (1 <= t <= T-1)
//   Omega_TT = f_T f_T' / sigma2_T + I
//   Omega_{t-1,t} = -I,  c_0 = 0,  c_t = f_t ystar_t / sigma2_t
// with f_t = x_t elementwise-scaled by theta_sr and ystar the response net of
// the time-invariant part. X is T x d (row t-1 holds x_t), sigma2 has length T.
PrecisionSystem build_precision(const Eigen::MatrixXd& X, const Eigen::VectorXd& ystar,
                                const Eigen::VectorXd& theta_sr, const Eigen::VectorXd& sigma2);

// Block Cholesky factor Omega = L L' with lower-bidiagonal block structure.
// Throws NumericalError naming the block index when a block is numerically
// singular (any pivot below 1e-12); no jitter is applied.
class BlockCholesky {
public:
  explicit BlockCholesky(const PrecisionSystem& sys);

  // mean of the Gaussian, Omega^{-1} c
  Eigen::MatrixXd solve_mean(const PrecisionSystem& sys) const;

  // exact draw from N(Omega^{-1} c, Omega^{-1}); rows are states 0..T
  Eigen::MatrixXd sample(const PrecisionSystem& sys, Rng& rng) const;

private:
  // diag_L[t] lower triangular, sub_L[t] = L_{t+1,t}
  std::vector<Eigen::MatrixXd> diag_L_;
  std::vector<Eigen::MatrixXd> sub_L_;
};

// One draw of the full state path; rows are states 0..T.
Eigen::MatrixXd sample_states(const PrecisionSystem& sys, Rng& rng);

// Forward moment recursion over blocks 1..t0 (the t = 0 block does not enter):
//   Sigma_1 = Omega_11^{-1},  m_1 = Sigma_1 c_1,
//   Sigma_t = (Omega_tt - Omega_{t-1,t}' Sigma_{t-1} Omega_{t-1,t})^{-1},
//   m_t = Sigma_t (c_t - Omega_{t-1,t}' m_{t-1}).
// Returns the pair (m_t0, Sigma_t0), the moments the one-step-ahead
// predictive needs. t0 is 1-based and at most T.
struct FilterMoments {
  Eigen::VectorXd m;
  Eigen::MatrixXd Sigma;
};
FilterMoments filter_moments(const PrecisionSystem& sys, int t0);

}  // namespace tvpreg
