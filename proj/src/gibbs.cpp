#include "tvpreg/gibbs.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "tvpreg/dists.hpp"
#include "tvpreg/errors.hpp"
#include "tvpreg/state_space.hpp"
#include "tvpreg/sv.hpp"

namespace tvpreg {

void AdaptiveMHState::record(bool accepted) {
  ++proposals_in_batch;
  ++total_proposals;
  if (accepted) {
    ++accepts_in_batch;
    ++total_accepts;
  }
  if (proposals_in_batch < tuning.batch_size) return;
  ++batch_count;
  batch_accepts.push_back(accepts_in_batch);
  if (tuning.adaptive) {
    const double delta =
        std::min(tuning.max_adapt, 1.0 / std::sqrt(static_cast<double>(batch_count)));
    const double rate = static_cast<double>(accepts_in_batch) / tuning.batch_size;
    log_sd += rate > tuning.target_rate ? delta : -delta;
  }
  proposals_in_batch = 0;
  accepts_in_batch = 0;
}

ChainState initial_chain_state(const TimeSeriesData& data, const PriorSpec& spec) {
  const int T = data.T();
  const int d = data.d();
  ChainState s;
  s.beta_tilde = Eigen::MatrixXd::Zero(T + 1, d);
  s.beta_mean = Eigen::VectorXd::Zero(d);
  s.theta_sr = Eigen::VectorXd::Constant(d, 0.2);
  if (spec.mod_type == ModType::Ridge) {
    s.xi2 = Eigen::VectorXd::Constant(d, 2.0 / spec.kappa2_B);
    s.tau2 = Eigen::VectorXd::Constant(d, 2.0 / spec.lambda2_B);
  } else {
    s.xi2 = Eigen::VectorXd::Constant(d, 0.1);
    s.tau2 = Eigen::VectorXd::Constant(d, 0.1);
  }
  if (spec.mod_type == ModType::Triple) {
    s.kappa2_loc = Eigen::VectorXd::Constant(d, 20.0);
    s.lambda2_loc = Eigen::VectorXd::Constant(d, 20.0);
  }
  s.a_xi = spec.a_xi;
  s.a_tau = spec.a_tau;
  s.c_xi = spec.c_xi;
  s.c_tau = spec.c_tau;
  s.kappa2_B = spec.kappa2_B;
  s.lambda2_B = spec.lambda2_B;
  if (spec.sv) {
    const double mean_y = data.y.mean();
    const double var_y = (data.y.array() - mean_y).square().sum() / std::max(1, T - 1);
    s.sv_mu = std::log(std::max(var_y, 1e-8));
    s.sv_phi = 0.8;
    s.sv_sigma2 = 0.1;
    s.h = Eigen::VectorXd::Constant(T + 1, s.sv_mu);
    s.mix_ind.assign(T, 4);
  }
  return s;
}

Eigen::VectorXd sigma2_path(const ChainState& state, const PriorSpec& spec, int T) {
  if (!spec.sv) return Eigen::VectorXd::Constant(T, state.sigma2);
  return state.h.segment(1, T).array().exp();
}

Eigen::MatrixXd draw_states(Rng& rng, const TimeSeriesData& data,
                            const Eigen::VectorXd& beta_mean, const Eigen::VectorXd& theta_sr,
                            const Eigen::VectorXd& sigma2_t) {
  const Eigen::VectorXd ystar = data.y - data.X * beta_mean;
  const PrecisionSystem sys = build_precision(data.X, ystar, theta_sr, sigma2_t);
  return sample_states(sys, rng);
}

void draw_beta_theta(Rng& rng, const TimeSeriesData& data, const Eigen::MatrixXd& beta_tilde,
                     const Eigen::VectorXd& xi2, const Eigen::VectorXd& tau2,
                     const Eigen::VectorXd& sigma2_t, Eigen::VectorXd* beta_mean,
                     Eigen::VectorXd* theta_sr) {
  const int T = data.T();
  const int d = data.d();
  const int p = 2 * d;
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
  for (int j = 0; j < d; ++j) {
    P(j, j) = 1.0 / tau2[j];
    P(d + j, d + j) = 1.0 / xi2[j];
  }
  Eigen::VectorXd z(p);
  for (int t = 1; t <= T; ++t) {
    z.head(d) = data.X.row(t - 1);
    z.tail(d) = data.X.row(t - 1).cwiseProduct(beta_tilde.row(t));
    const double w = 1.0 / sigma2_t[t - 1];
    P.selfadjointView<Eigen::Lower>().rankUpdate(z, w);
    b += (w * data.y[t - 1]) * z;
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(P);
  if (llt.info() != Eigen::Success)
    throw NumericalError("draw_beta_theta: posterior precision not positive definite");
  Eigen::VectorXd gamma = llt.solve(b);
  Eigen::VectorXd eps(p);
  for (int i = 0; i < p; ++i) eps[i] = rng.normal();
  gamma += llt.matrixU().solve(eps);
  *beta_mean = gamma.head(d);
  *theta_sr = gamma.tail(d);
}

void asis_step(Rng& rng, Eigen::MatrixXd* beta_tilde, Eigen::VectorXd* beta_mean,
               Eigen::VectorXd* theta_sr, const Eigen::VectorXd& xi2,
               const Eigen::VectorXd& tau2, std::int64_t* fallbacks) {
  Eigen::MatrixXd& btil = *beta_tilde;
  const int T = static_cast<int>(btil.rows()) - 1;
  const int d = static_cast<int>(btil.cols());
  for (int j = 0; j < d; ++j) {
    const double bj = (*beta_mean)[j];
    const double sr = (*theta_sr)[j];
    const Eigen::VectorXd bc = (bj + sr * btil.col(j).array()).matrix();
    double chi = (bc[0] - bj) * (bc[0] - bj);
    for (int t = 1; t <= T; ++t) chi += (bc[t] - bc[t - 1]) * (bc[t] - bc[t - 1]);
    chi = std::max(chi, 1e-300);  // degenerate-path guard
    const double theta_new = sample_gig(rng, -0.5 * T, chi, 1.0 / xi2[j]);
    const double sr_new = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::sqrt(theta_new);
    const double V = 1.0 / (1.0 / tau2[j] + 1.0 / theta_new);
    const double bj_new = rng.normal(V * bc[0] / theta_new, std::sqrt(V));
    if (std::fabs(sr_new) < 1e-12) {  // keep coordinate j as it was, note the event
      ++*fallbacks;
      continue;
    }
    btil.col(j) = (bc.array() - bj_new) / sr_new;
    (*beta_mean)[j] = bj_new;
    (*theta_sr)[j] = sr_new;
  }
}

void draw_local_scales(Rng& rng, const PriorSpec& spec, ChainState* state) {
  const int d = static_cast<int>(state->xi2.size());
  switch (spec.mod_type) {
    case ModType::Ridge:
      state->xi2.setConstant(2.0 / state->kappa2_B);
      state->tau2.setConstant(2.0 / state->lambda2_B);
      return;
    case ModType::Double:
      for (int j = 0; j < d; ++j) {
        const double theta = state->theta_sr[j] * state->theta_sr[j];
        const double beta2 = state->beta_mean[j] * state->beta_mean[j];
        state->xi2[j] = sample_gig(rng, state->a_xi - 0.5, theta, state->a_xi * state->kappa2_B);
        state->tau2[j] =
            sample_gig(rng, state->a_tau - 0.5, beta2, state->a_tau * state->lambda2_B);
      }
      return;
    case ModType::Triple:
      for (int j = 0; j < d; ++j) {
        const double theta = state->theta_sr[j] * state->theta_sr[j];
        const double beta2 = state->beta_mean[j] * state->beta_mean[j];
        state->xi2[j] =
            sample_gig(rng, state->a_xi - 0.5, theta, state->a_xi * state->kappa2_loc[j]);
        state->kappa2_loc[j] =
            rng.gamma(state->a_xi + state->c_xi,
                      0.5 * state->a_xi * state->xi2[j] + state->c_xi / state->kappa2_B);
        state->tau2[j] =
            sample_gig(rng, state->a_tau - 0.5, beta2, state->a_tau * state->lambda2_loc[j]);
        state->lambda2_loc[j] =
            rng.gamma(state->a_tau + state->c_tau,
                      0.5 * state->a_tau * state->tau2[j] + state->c_tau / state->lambda2_B);
      }
      return;
  }
}

namespace {

// Gamma(alpha, alpha*beta) prior on the shape a times the double-gamma local
// likelihood prod_j Gamma(scales2_j; a, a*global/2)
double ng_shape_log_target(double a, const Eigen::VectorXd& scales2, double global, double alpha,
                           double beta) {
  double lp = log_gamma_pdf(a, alpha, alpha * beta);
  const double rate = 0.5 * a * global;
  for (int j = 0; j < scales2.size(); ++j) lp += log_gamma_pdf(scales2[j], a, rate);
  return lp;
}

// Beta(alpha, beta) prior on 2a times prod_j Gamma(xi2_j; a, a*kap2_j/2); the
// learned global contributes Gamma(kappa2_B; a, a*d2/2) through its
// conditionally-gamma representation.
double ngg_pole_log_target(double a, const Eigen::VectorXd& xi2, const Eigen::VectorXd& kap2,
                           double alpha, double beta, bool global_learned, double kappa2_B,
                           double d2) {
  double lp = log_beta_pdf(2.0 * a, alpha, beta);
  for (int j = 0; j < xi2.size(); ++j) lp += log_gamma_pdf(xi2[j], a, 0.5 * a * kap2[j]);
  if (global_learned) lp += log_gamma_pdf(kappa2_B, a, 0.5 * a * d2);
  return lp;
}

// Beta(alpha, beta) prior on 2c times prod_j Gamma(kap2_j; c, c/kappa2_B);
// the auxiliary behind a learned global contributes Gamma(d2; c, c).
double ngg_tail_log_target(double c, const Eigen::VectorXd& kap2, double alpha, double beta,
                           bool global_learned, double kappa2_B, double d2) {
  double lp = log_beta_pdf(2.0 * c, alpha, beta);
  for (int j = 0; j < kap2.size(); ++j) lp += log_gamma_pdf(kap2[j], c, c / kappa2_B);
  if (global_learned) lp += log_gamma_pdf(d2, c, c);
  return lp;
}

// random-walk step on log(value); the Jacobian adds log(prop) - log(old)
void mh_log_scale(Rng& rng, AdaptiveMHState* mh, double* value,
                  const std::function<double(double)>& log_target) {
  const double old_v = *value;
  const double prop = old_v * std::exp(mh->sd() * rng.normal());
  bool accept = false;
  if (prop > 0.0 && std::isfinite(prop)) {
    const double log_ratio =
        log_target(prop) - log_target(old_v) + std::log(prop) - std::log(old_v);
    accept = std::isfinite(log_ratio) && std::log(rng.uniform()) < log_ratio;
  }
  if (accept) *value = prop;
  mh->record(accept);
}

// random-walk step on logit(2*value) for parameters supported on (0, 1/2)
void mh_logit_scale(Rng& rng, AdaptiveMHState* mh, double* value,
                    const std::function<double(double)>& log_target) {
  const double w_old = 2.0 * *value;
  const double z_new = std::log(w_old / (1.0 - w_old)) + mh->sd() * rng.normal();
  const double w_new = 1.0 / (1.0 + std::exp(-z_new));
  bool accept = false;
  if (w_new > 0.0 && w_new < 1.0) {
    const double log_ratio = log_target(0.5 * w_new) - log_target(*value) + std::log(w_new) +
                             std::log1p(-w_new) - std::log(w_old) - std::log1p(-w_old);
    accept = std::isfinite(log_ratio) && std::log(rng.uniform()) < log_ratio;
  }
  if (accept) *value = 0.5 * w_new;
  mh->record(accept);
}

}  // namespace

void draw_global_and_pole_tail(Rng& rng, const PriorSpec& spec, ChainState* state, MhBundle* mh) {
  const int d = static_cast<int>(state->xi2.size());
  if (spec.mod_type == ModType::Ridge) return;

  if (spec.mod_type == ModType::Double) {
    if (spec.learn_kappa2_B)
      state->kappa2_B =
          rng.gamma(spec.d1 + d * state->a_xi, spec.d2 + 0.5 * state->a_xi * state->xi2.sum());
    if (spec.learn_lambda2_B)
      state->lambda2_B =
          rng.gamma(spec.e1 + d * state->a_tau, spec.e2 + 0.5 * state->a_tau * state->tau2.sum());
    if (spec.learn_a_xi)
      mh_log_scale(rng, &mh->a_xi, &state->a_xi, [&](double a) {
        return ng_shape_log_target(a, state->xi2, state->kappa2_B, spec.alpha_a_xi,
                                   spec.beta_a_xi);
      });
    if (spec.learn_a_tau)
      mh_log_scale(rng, &mh->a_tau, &state->a_tau, [&](double a) {
        return ng_shape_log_target(a, state->tau2, state->lambda2_B, spec.alpha_a_tau,
                                   spec.beta_a_tau);
      });
    return;
  }

  // triple gamma
  if (spec.learn_kappa2_B) {
    state->kappa2_B =
        sample_gig(rng, state->a_xi - d * state->c_xi, 2.0 * state->c_xi * state->kappa2_loc.sum(),
                   state->a_xi * state->d2_xi);
    state->d2_xi =
        rng.gamma(state->a_xi + state->c_xi, state->c_xi + 0.5 * state->a_xi * state->kappa2_B);
  }
  if (spec.learn_lambda2_B) {
    state->lambda2_B = sample_gig(rng, state->a_tau - d * state->c_tau,
                                  2.0 * state->c_tau * state->lambda2_loc.sum(),
                                  state->a_tau * state->d2_tau);
    state->d2_tau =
        rng.gamma(state->a_tau + state->c_tau, state->c_tau + 0.5 * state->a_tau * state->lambda2_B);
  }
  if (spec.learn_a_xi)
    mh_logit_scale(rng, &mh->a_xi, &state->a_xi, [&](double a) {
      return ngg_pole_log_target(a, state->xi2, state->kappa2_loc, spec.alpha_a_xi, spec.beta_a_xi,
                                 spec.learn_kappa2_B, state->kappa2_B, state->d2_xi);
    });
  if (spec.learn_c_xi)
    mh_logit_scale(rng, &mh->c_xi, &state->c_xi, [&](double c) {
      return ngg_tail_log_target(c, state->kappa2_loc, spec.alpha_c_xi, spec.beta_c_xi,
                                 spec.learn_kappa2_B, state->kappa2_B, state->d2_xi);
    });
  if (spec.learn_a_tau)
    mh_logit_scale(rng, &mh->a_tau, &state->a_tau, [&](double a) {
      return ngg_pole_log_target(a, state->tau2, state->lambda2_loc, spec.alpha_a_tau,
                                 spec.beta_a_tau, spec.learn_lambda2_B, state->lambda2_B,
                                 state->d2_tau);
    });
  if (spec.learn_c_tau)
    mh_logit_scale(rng, &mh->c_tau, &state->c_tau, [&](double c) {
      return ngg_tail_log_target(c, state->lambda2_loc, spec.alpha_c_tau, spec.beta_c_tau,
                                 spec.learn_lambda2_B, state->lambda2_B, state->d2_tau);
    });
}

void draw_sigma2_homoskedastic(Rng& rng, const Eigen::VectorXd& residuals, double c0, double C0,
                               double g0, double G0, double* sigma2_out, double* C0_out) {
  const double T = static_cast<double>(residuals.size());
  const double s2 = rng.inv_gamma(c0 + 0.5 * T, C0 + 0.5 * residuals.squaredNorm());
  *sigma2_out = s2;
  *C0_out = rng.gamma(g0 + c0, G0 + 1.0 / s2);
}

Eigen::VectorXd DrawsStore::centered_path(int m, int j) const {
  return (beta_mean(m, j) + theta_sr(m, j) * beta_tilde[j].row(m).transpose().array()).matrix();
}

GibbsSampler::GibbsSampler(const TimeSeriesData& data, const PriorSpec& spec,
                           const MCMCConfig& cfg)
    : data_(data),
      spec_(spec),
      cfg_(cfg),
      rng_(cfg.seed, cfg.stream),
      state_(initial_chain_state(data, spec)) {
  mh_.a_xi = AdaptiveMHState(spec.mh_a_xi);
  mh_.a_tau = AdaptiveMHState(spec.mh_a_tau);
  mh_.c_xi = AdaptiveMHState(spec.mh_c_xi);
  mh_.c_tau = AdaptiveMHState(spec.mh_c_tau);
}

void GibbsSampler::set_response(const Eigen::VectorXd& y) { data_.y = y; }

Eigen::VectorXd GibbsSampler::fitted() const {
  const int T = data_.T();
  const int d = data_.d();
  Eigen::VectorXd f(T);
  for (int t = 1; t <= T; ++t) {
    double v = 0.0;
    for (int j = 0; j < d; ++j)
      v += data_.X(t - 1, j) *
           (state_.beta_mean[j] + state_.theta_sr[j] * state_.beta_tilde(t, j));
    f[t - 1] = v;
  }
  return f;
}

double GibbsSampler::log_likelihood() const {
  const Eigen::VectorXd f = fitted();
  const Eigen::VectorXd s2 = sigma2_path(state_, spec_, data_.T());
  double ll = 0.0;
  for (int t = 0; t < data_.T(); ++t) ll += log_normal_pdf(data_.y[t], f[t], s2[t]);
  return ll;
}

void GibbsSampler::sweep() {
  const Eigen::VectorXd s2t = sigma2_path(state_, spec_, data_.T());
  state_.beta_tilde = draw_states(rng_, data_, state_.beta_mean, state_.theta_sr, s2t);
  draw_beta_theta(rng_, data_, state_.beta_tilde, state_.xi2, state_.tau2, s2t,
                  &state_.beta_mean, &state_.theta_sr);
  asis_step(rng_, &state_.beta_tilde, &state_.beta_mean, &state_.theta_sr, state_.xi2,
            state_.tau2, &state_.asis_fallbacks);
  draw_local_scales(rng_, spec_, &state_);
  draw_global_and_pole_tail(rng_, spec_, &state_, &mh_);
  const Eigen::VectorXd resid = data_.y - fitted();
  if (spec_.sv) {
    SvParams p{state_.sv_mu, state_.sv_phi, state_.sv_sigma2};
    const SvHyper hy{spec_.b_mu, spec_.B_mu, spec_.a_phi, spec_.b_phi, spec_.B_sigma};
    update_sv(rng_, resid, &state_.h, &p, hy, &state_.mix_ind);
    state_.sv_mu = p.mu;
    state_.sv_phi = p.phi;
    state_.sv_sigma2 = p.sigma2_eta;
  } else {
    draw_sigma2_homoskedastic(rng_, resid, spec_.c0, state_.C0, spec_.g0, spec_.G0,
                              &state_.sigma2, &state_.C0);
  }
}

namespace {

MhDiagnostics export_mh(const std::string& name, const AdaptiveMHState& s) {
  MhDiagnostics d;
  d.name = name;
  d.batch_size = s.tuning.batch_size;
  d.batch_accepts = s.batch_accepts;
  d.final_sd = s.sd();
  d.total_proposals = s.total_proposals;
  d.total_accepts = s.total_accepts;
  return d;
}

}  // namespace

DrawsStore run_chain(const TimeSeriesData& data, const PriorSpec& spec0, const MCMCConfig& cfg0) {
  ValidationResult vr = validate(data, spec0, cfg0);
  if (!vr.ok) {
    std::string msg = "invalid configuration:";
    for (const auto& e : vr.errors) msg += "\n  " + e;
    throw InvalidArgumentError(msg);
  }
  const PriorSpec spec = vr.spec;
  const MCMCConfig cfg = vr.cfg;
  const int T = data.T();
  const int d = data.d();
  const int M = static_cast<int>((cfg.niter - cfg.nburn) / cfg.nthin);

  DrawsStore out;
  out.M = M;
  out.T = T;
  out.d = d;
  out.spec = spec;
  out.cfg = cfg;
  out.names = data.names;
  if (out.names.empty())
    for (int j = 0; j < d; ++j) out.names.push_back("x" + std::to_string(j + 1));

  out.beta_mean.resize(M, d);
  out.theta_sr.resize(M, d);
  out.xi2.resize(M, d);
  out.tau2.resize(M, d);
  if (spec.mod_type == ModType::Triple) {
    out.kappa2_loc.resize(M, d);
    out.lambda2_loc.resize(M, d);
  }
  if (spec.learn_a_xi) out.a_xi.resize(M);
  if (spec.learn_a_tau) out.a_tau.resize(M);
  if (spec.learn_c_xi) out.c_xi.resize(M);
  if (spec.learn_c_tau) out.c_tau.resize(M);
  if (spec.learn_kappa2_B) out.kappa2_B.resize(M);
  if (spec.learn_lambda2_B) out.lambda2_B.resize(M);
  if (!spec.sv) {
    out.sigma2.resize(M);
    out.C0.resize(M);
  } else {
    out.h.resize(M, T + 1);
    out.sv_mu.resize(M);
    out.sv_phi.resize(M);
    out.sv_sigma2.resize(M);
  }
  out.beta_tilde.assign(d, Eigen::MatrixXd(M, T + 1));

  GibbsSampler sampler(data, spec, cfg);
  int stored = 0;
  for (std::int64_t i = 1; i <= cfg.niter; ++i) {
    try {
      sampler.sweep();
    } catch (const std::exception& e) {
      throw NumericalError("iteration " + std::to_string(i) + ": " + e.what());
    }
    if (i <= cfg.nburn || (i - cfg.nburn) % cfg.nthin != 0 || stored >= M) continue;
    const ChainState& s = sampler.state();
    out.beta_mean.row(stored) = s.beta_mean;
    out.theta_sr.row(stored) = s.theta_sr;
    out.xi2.row(stored) = s.xi2;
    out.tau2.row(stored) = s.tau2;
    if (spec.mod_type == ModType::Triple) {
      out.kappa2_loc.row(stored) = s.kappa2_loc;
      out.lambda2_loc.row(stored) = s.lambda2_loc;
    }
    if (spec.learn_a_xi) out.a_xi[stored] = s.a_xi;
    if (spec.learn_a_tau) out.a_tau[stored] = s.a_tau;
    if (spec.learn_c_xi) out.c_xi[stored] = s.c_xi;
    if (spec.learn_c_tau) out.c_tau[stored] = s.c_tau;
    if (spec.learn_kappa2_B) out.kappa2_B[stored] = s.kappa2_B;
    if (spec.learn_lambda2_B) out.lambda2_B[stored] = s.lambda2_B;
    if (!spec.sv) {
      out.sigma2[stored] = s.sigma2;
      out.C0[stored] = s.C0;
    } else {
      out.h.row(stored) = s.h;
      out.sv_mu[stored] = s.sv_mu;
      out.sv_phi[stored] = s.sv_phi;
      out.sv_sigma2[stored] = s.sv_sigma2;
    }
    for (int j = 0; j < d; ++j) out.beta_tilde[j].row(stored) = s.beta_tilde.col(j);
    ++stored;
  }

  out.asis_fallbacks = sampler.state().asis_fallbacks;
  if (spec.learn_a_xi) out.mh_diag.push_back(export_mh("a_xi", sampler.mh().a_xi));
  if (spec.learn_a_tau) out.mh_diag.push_back(export_mh("a_tau", sampler.mh().a_tau));
  if (spec.learn_c_xi) out.mh_diag.push_back(export_mh("c_xi", sampler.mh().c_xi));
  if (spec.learn_c_tau) out.mh_diag.push_back(export_mh("c_tau", sampler.mh().c_tau));
  return out;
}

}  // namespace tvpreg
