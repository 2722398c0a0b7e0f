#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tvpreg/rng.hpp"
#include "tvpreg/types.hpp"

namespace tvpreg {

// Proposal-scale adaptation for one random-walk Metropolis parameter.
// After each batch of batch_size proposals, log_sd moves by
// +-min(max_adapt, 1/sqrt(batch_count)) depending on whether the batch
// acceptance rate exceeded target_rate; adaptation is therefore diminishing.
struct AdaptiveMHState {
  MhTuning tuning;
  double log_sd = 0.0;
  int batch_count = 0;  // completed batches
  int proposals_in_batch = 0;
  int accepts_in_batch = 0;
  std::int64_t total_proposals = 0;
  std::int64_t total_accepts = 0;
  std::vector<int> batch_accepts;  // accepted count per completed batch

  AdaptiveMHState() : AdaptiveMHState(MhTuning{}) {}
  explicit AdaptiveMHState(const MhTuning& t) : tuning(t), log_sd(std::log(t.initial_sd)) {}

  double sd() const { return std::exp(log_sd); }
  void record(bool accepted);
};

struct MhBundle {
  AdaptiveMHState a_xi, a_tau, c_xi, c_tau;
};

// Acceptance bookkeeping exported with the draws
struct MhDiagnostics {
  std::string name;
  int batch_size = 0;
  std::vector<int> batch_accepts;
  double final_sd = 0.0;
  std::int64_t total_proposals = 0;
  std::int64_t total_accepts = 0;
};

// Full set of latent quantities the sweep cycles over. beta_tilde holds the
// standardized state path (rows 0..T); everything observation-indexed uses
// t = 1..T <-> data row t-1.
struct ChainState {
  Eigen::MatrixXd beta_tilde;  // (T+1) x d
  Eigen::VectorXd beta_mean;   // d
  Eigen::VectorXd theta_sr;    // d, sign-unrestricted
  Eigen::VectorXd xi2, tau2;   // d
  Eigen::VectorXd kappa2_loc, lambda2_loc;  // d, triple gamma only (else empty)

  double a_xi = 0.1, a_tau = 0.1;
  double c_xi = 0.1, c_tau = 0.1;
  double kappa2_B = 20.0, lambda2_B = 20.0;
  double d2_xi = 1.0, d2_tau = 1.0;  // auxiliaries behind the F-distributed globals

  double sigma2 = 1.0;
  double C0 = 1.5;

  double sv_mu = 0.0, sv_phi = 0.8, sv_sigma2 = 0.1;
  Eigen::VectorXd h;         // T+1 log-volatilities h_0..h_T (sv only, else empty)
  std::vector<int> mix_ind;  // T mixture indicators (sv only)

  std::int64_t asis_fallbacks = 0;  // near-zero sqrt(theta) events, states kept
};

ChainState initial_chain_state(const TimeSeriesData& data, const PriorSpec& spec);

// Per-observation error variances, length T: constant sigma2 or exp(h_t)
Eigen::VectorXd sigma2_path(const ChainState& state, const PriorSpec& spec, int T);

// Step 1: exact joint draw of the standardized state path given everything else
Eigen::MatrixXd draw_states(Rng& rng, const TimeSeriesData& data,
                            const Eigen::VectorXd& beta_mean, const Eigen::VectorXd& theta_sr,
                            const Eigen::VectorXd& sigma2_t);

// Step 2: joint 2d-dimensional Gaussian draw of (beta, sqrt(theta)) from the
// regression y_t = x_t beta + (x_t .* btilde_t) sqrt(theta) + eps_t with prior
// N(0, Diag(tau2, xi2)).
void draw_beta_theta(Rng& rng, const TimeSeriesData& data, const Eigen::MatrixXd& beta_tilde,
                     const Eigen::VectorXd& xi2, const Eigen::VectorXd& tau2,
                     const Eigen::VectorXd& sigma2_t, Eigen::VectorXd* beta_mean,
                     Eigen::VectorXd* theta_sr);

// Step 3: interweaving pass. Moves to the centered path, redraws theta_j
// (GIG), flips the sign of sqrt(theta_j) uniformly, redraws beta_j (normal),
// and maps back. A new |sqrt(theta_j)| below 1e-12 keeps coordinate j
// unchanged and bumps *fallbacks.
void asis_step(Rng& rng, Eigen::MatrixXd* beta_tilde, Eigen::VectorXd* beta_mean,
               Eigen::VectorXd* theta_sr, const Eigen::VectorXd& xi2,
               const Eigen::VectorXd& tau2, std::int64_t* fallbacks);

// Step 4a: local prior variances xi2_j, tau2_j (and the triple-gamma local
// scales kappa2_j, lambda2_j). Ridge sets xi2 = 2/kappa2_B deterministically.
void draw_local_scales(Rng& rng, const PriorSpec& spec, ChainState* state);

// Step 4b: global scales (with their auxiliaries in the triple case) followed
// by the pole/tail Metropolis updates; consults the learn flags.
void draw_global_and_pole_tail(Rng& rng, const PriorSpec& spec, ChainState* state, MhBundle* mh);

// Step 5, homoskedastic branch: sigma2 (inverse gamma) then its scale C0 (gamma)
void draw_sigma2_homoskedastic(Rng& rng, const Eigen::VectorXd& residuals, double c0, double C0,
                               double g0, double G0, double* sigma2_out, double* C0_out);

// Stored draws. All leading dimensions equal M; fields for parameters the
// model variant does not sample stay empty.
struct DrawsStore {
  int M = 0, T = 0, d = 0;
  PriorSpec spec;  // normalized copy the chain actually ran with
  MCMCConfig cfg;  // resolved copy (nburn filled in)
  std::vector<std::string> names;

  Eigen::MatrixXd beta_mean, theta_sr, xi2, tau2;  // M x d
  Eigen::MatrixXd kappa2_loc, lambda2_loc;         // M x d, triple only
  Eigen::VectorXd a_xi, a_tau, c_xi, c_tau;        // M, only when learned
  Eigen::VectorXd kappa2_B, lambda2_B;             // M, only when learned
  Eigen::VectorXd sigma2, C0;                      // M, homoskedastic only
  std::vector<Eigen::MatrixXd> beta_tilde;         // d entries, M x (T+1)
  Eigen::MatrixXd h;                               // M x (T+1), sv only
  Eigen::VectorXd sv_mu, sv_phi, sv_sigma2;        // M, sv only

  std::vector<MhDiagnostics> mh_diag;
  std::int64_t asis_fallbacks = 0;

  // centered coefficient path beta_jt = beta_j + sqrt(theta_j) btilde_jt for
  // draw m, one (T+1)-vector per call
  Eigen::VectorXd centered_path(int m, int j) const;
};

// Drives the sweep; exposes the state so tests can run conditionals in place.
class GibbsSampler {
 public:
  GibbsSampler(const TimeSeriesData& data, const PriorSpec& spec, const MCMCConfig& cfg);

  void sweep();

  const ChainState& state() const { return state_; }
  ChainState& state() { return state_; }
  const TimeSeriesData& data() const { return data_; }
  const PriorSpec& spec() const { return spec_; }
  const MhBundle& mh() const { return mh_; }
  Rng& rng() { return rng_; }

  // replaces the response vector; the Geweke successive-conditional test
  // resamples data between sweeps
  void set_response(const Eigen::VectorXd& y);

  // observation log density at the current state; sign-flip invariance checks
  double log_likelihood() const;

  // current fitted values x_t beta + F_t btilde_t, length T
  Eigen::VectorXd fitted() const;

 private:
  TimeSeriesData data_;
  PriorSpec spec_;
  MCMCConfig cfg_;
  Rng rng_;
  ChainState state_;
  MhBundle mh_;
};

// Runs the validated configuration start to finish. Throws
// InvalidArgumentError listing validation errors, and rethrows numerical
// failures with the iteration index attached.
DrawsStore run_chain(const TimeSeriesData& data, const PriorSpec& spec, const MCMCConfig& cfg);

}  // namespace tvpreg
