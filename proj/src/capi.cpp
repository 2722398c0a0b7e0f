#include "tvpreg.h"

#include <cstring>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tvpreg/diagnostics.hpp"
#include "tvpreg/errors.hpp"
#include "tvpreg/gibbs.hpp"
#include "tvpreg/prediction.hpp"
#include "tvpreg/simulate.hpp"
#include "tvpreg/types.hpp"

struct tvpreg_data {
  tvpreg::TimeSeriesData data;
};

struct tvpreg_options {
  tvpreg::PriorSpec spec;
  tvpreg::MCMCConfig cfg;
};

struct tvpreg_fit {
  tvpreg::DrawsStore store;
  // materialized views, fixed at construction so accessors are const and
  // safe to share across threads
  std::vector<std::pair<std::string, Eigen::VectorXd>> scalars;
  std::vector<tvpreg::SummaryRow> summary;
  std::vector<std::pair<std::string, std::string>> config;
};

struct tvpreg_sim {
  tvpreg::SimResult result;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
tvpreg_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return TVPREG_OK;
  } catch (const tvpreg::InvalidArgumentError& e) {
    g_last_error = e.what();
    return TVPREG_ERR_INVALID_ARGUMENT;
  } catch (const tvpreg::NumericalError& e) {
    g_last_error = e.what();
    return TVPREG_ERR_NUMERICAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TVPREG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TVPREG_ERR_INTERNAL;
  }
}

tvpreg_status fail_invalid(const std::string& msg) {
  g_last_error = msg;
  return TVPREG_ERR_INVALID_ARGUMENT;
}

void require(bool ok, const char* msg) {
  if (!ok) throw tvpreg::InvalidArgumentError(msg);
}

std::vector<std::pair<std::string, Eigen::VectorXd>> scalar_columns(
    const tvpreg::DrawsStore& s) {
  std::vector<std::pair<std::string, Eigen::VectorXd>> cols;
  const auto add_mat = [&](const char* prefix, const Eigen::MatrixXd& m) {
    if (m.size() == 0) return;
    for (int j = 0; j < s.d; ++j)
      cols.emplace_back(std::string(prefix) + "_" + s.names[j], m.col(j));
  };
  const auto add_vec = [&](const char* name, const Eigen::VectorXd& v) {
    if (v.size() > 0) cols.emplace_back(name, v);
  };
  add_mat("beta_mean", s.beta_mean);
  add_mat("theta_sr", s.theta_sr);
  add_mat("tau2", s.tau2);
  add_mat("xi2", s.xi2);
  add_mat("kappa2", s.kappa2_loc);
  add_mat("lambda2", s.lambda2_loc);
  add_vec("a_xi", s.a_xi);
  add_vec("a_tau", s.a_tau);
  add_vec("c_xi", s.c_xi);
  add_vec("c_tau", s.c_tau);
  add_vec("kappa2_B", s.kappa2_B);
  add_vec("lambda2_B", s.lambda2_B);
  add_vec("sigma2", s.sigma2);
  add_vec("C0", s.C0);
  add_vec("sv_mu", s.sv_mu);
  add_vec("sv_phi", s.sv_phi);
  add_vec("sv_sigma2", s.sv_sigma2);
  return cols;
}

Eigen::RowVectorXd row_from(const double* x, int n) {
  Eigen::RowVectorXd r(n);
  for (int i = 0; i < n; ++i) r[i] = x[i];
  return r;
}

void copy_row_major(const Eigen::MatrixXd& m, double* out) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) *out++ = m(r, c);
}

}  // namespace

extern "C" {

const char* tvpreg_version(void) { return "0.1.0"; }

const char* tvpreg_last_error(void) { return g_last_error.c_str(); }

/* ---------------- observed data ---------------- */

tvpreg_status tvpreg_data_new(int T, int d, const double* y, const double* X,
                              const char* const* names, tvpreg_data** out) {
  if (!out) return fail_invalid("tvpreg_data_new: out is NULL");
  *out = nullptr;
  return guarded([&] {
    require(y && X, "tvpreg_data_new: y and X must not be NULL");
    require(T >= 1 && d >= 1, "tvpreg_data_new: T and d must be positive");
    auto handle = std::make_unique<tvpreg_data>();
    handle->data.y = Eigen::Map<const Eigen::VectorXd>(y, T);
    handle->data.X =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            X, T, d);
    if (names)
      for (int j = 0; j < d; ++j) {
        require(names[j] != nullptr, "tvpreg_data_new: names entries must not be NULL");
        handle->data.names.emplace_back(names[j]);
      }
    *out = handle.release();
  });
}

void tvpreg_data_free(tvpreg_data* data) { delete data; }

int tvpreg_data_num_obs(const tvpreg_data* data) {
  return data ? static_cast<int>(data->data.y.size()) : 0;
}

int tvpreg_data_num_covariates(const tvpreg_data* data) {
  return data ? static_cast<int>(data->data.X.cols()) : 0;
}

/* ---------------- options ---------------- */

tvpreg_status tvpreg_options_new(const char* family, int sv, tvpreg_options** out) {
  if (!out) return fail_invalid("tvpreg_options_new: out is NULL");
  *out = nullptr;
  return guarded([&] {
    require(family != nullptr, "tvpreg_options_new: family must not be NULL");
    tvpreg::ModType mod;
    require(tvpreg::mod_type_from_string(family, &mod),
            "tvpreg_options_new: family must be ridge, double or triple");
    auto handle = std::make_unique<tvpreg_options>();
    handle->spec = tvpreg::default_prior_spec(mod, sv != 0);
    *out = handle.release();
  });
}

tvpreg_status tvpreg_options_set(tvpreg_options* opts, const char* key, const char* value) {
  return guarded([&] {
    require(opts && key && value, "tvpreg_options_set: NULL argument");
    const std::string k(key);
    // variant switches would not re-derive the family defaults; force a
    // fresh handle instead
    require(k != "mod_type" && k != "sv",
            "tvpreg_options_set: recreate the options to change the model variant");
    std::string err;
    if (!tvpreg::apply_key_value(opts->spec, opts->cfg, k, value, &err))
      throw tvpreg::InvalidArgumentError(err);
  });
}

tvpreg_status tvpreg_options_get(const tvpreg_options* opts, const char* key, char* buf,
                                 int buflen) {
  return guarded([&] {
    require(opts && key && buf, "tvpreg_options_get: NULL argument");
    for (const auto& [k, v] : tvpreg::to_key_values(opts->spec, opts->cfg)) {
      if (k != key) continue;
      require(static_cast<int>(v.size()) < buflen, "tvpreg_options_get: buffer too small");
      std::memcpy(buf, v.c_str(), v.size() + 1);
      return;
    }
    throw tvpreg::InvalidArgumentError("tvpreg_options_get: unknown key '" + std::string(key) +
                                       "'");
  });
}

void tvpreg_options_free(tvpreg_options* opts) { delete opts; }

/* ---------------- fitting ---------------- */

tvpreg_status tvpreg_fit_run(const tvpreg_data* data, const tvpreg_options* opts,
                             tvpreg_fit** out) {
  if (!out) return fail_invalid("tvpreg_fit_run: out is NULL");
  *out = nullptr;
  return guarded([&] {
    require(data && opts, "tvpreg_fit_run: data and opts must not be NULL");
    auto handle = std::make_unique<tvpreg_fit>();
    handle->store = tvpreg::run_chain(data->data, opts->spec, opts->cfg);
    handle->scalars = scalar_columns(handle->store);
    handle->summary = tvpreg::summarize(handle->store);
    handle->config = tvpreg::to_key_values(handle->store.spec, handle->store.cfg);
    *out = handle.release();
  });
}

void tvpreg_fit_free(tvpreg_fit* fit) { delete fit; }

int tvpreg_fit_num_draws(const tvpreg_fit* fit) { return fit ? fit->store.M : 0; }
int tvpreg_fit_num_obs(const tvpreg_fit* fit) { return fit ? fit->store.T : 0; }
int tvpreg_fit_num_covariates(const tvpreg_fit* fit) { return fit ? fit->store.d : 0; }

int tvpreg_fit_num_scalars(const tvpreg_fit* fit) {
  return fit ? static_cast<int>(fit->scalars.size()) : 0;
}

const char* tvpreg_fit_scalar_name(const tvpreg_fit* fit, int i) {
  if (!fit || i < 0 || i >= static_cast<int>(fit->scalars.size())) return nullptr;
  return fit->scalars[i].first.c_str();
}

tvpreg_status tvpreg_fit_scalar_draws(const tvpreg_fit* fit, int i, double* out) {
  return guarded([&] {
    require(fit && out, "tvpreg_fit_scalar_draws: NULL argument");
    require(i >= 0 && i < static_cast<int>(fit->scalars.size()),
            "tvpreg_fit_scalar_draws: column index out of range");
    const Eigen::VectorXd& col = fit->scalars[i].second;
    std::memcpy(out, col.data(), sizeof(double) * col.size());
  });
}

tvpreg_status tvpreg_fit_state_draws(const tvpreg_fit* fit, int j, double* out) {
  return guarded([&] {
    require(fit && out, "tvpreg_fit_state_draws: NULL argument");
    require(j >= 0 && j < fit->store.d, "tvpreg_fit_state_draws: covariate index out of range");
    for (int m = 0; m < fit->store.M; ++m) {
      const Eigen::VectorXd path = fit->store.centered_path(m, j);
      std::memcpy(out + static_cast<std::size_t>(m) * (fit->store.T + 1), path.data(),
                  sizeof(double) * path.size());
    }
  });
}

tvpreg_status tvpreg_fit_h_draws(const tvpreg_fit* fit, double* out) {
  return guarded([&] {
    require(fit && out, "tvpreg_fit_h_draws: NULL argument");
    require(fit->store.h.size() > 0, "tvpreg_fit_h_draws: fit has no volatility draws");
    copy_row_major(fit->store.h, out);
  });
}

int tvpreg_fit_num_summary_rows(const tvpreg_fit* fit) {
  return fit ? static_cast<int>(fit->summary.size()) : 0;
}

const char* tvpreg_fit_summary_name(const tvpreg_fit* fit, int i) {
  if (!fit || i < 0 || i >= static_cast<int>(fit->summary.size())) return nullptr;
  return fit->summary[i].name.c_str();
}

tvpreg_status tvpreg_fit_summary_stats(const tvpreg_fit* fit, int i, double out[6]) {
  return guarded([&] {
    require(fit && out, "tvpreg_fit_summary_stats: NULL argument");
    require(i >= 0 && i < static_cast<int>(fit->summary.size()),
            "tvpreg_fit_summary_stats: row index out of range");
    const tvpreg::SummaryRow& r = fit->summary[i];
    out[0] = r.mean;
    out[1] = r.sd;
    out[2] = r.median;
    out[3] = r.hpd_low;
    out[4] = r.hpd_high;
    out[5] = r.ess;
  });
}

tvpreg_status tvpreg_fit_path_quantiles(const tvpreg_fit* fit, int j, const double* levels,
                                        int nlevels, double* out) {
  return guarded([&] {
    require(fit && levels && out, "tvpreg_fit_path_quantiles: NULL argument");
    require(nlevels >= 1, "tvpreg_fit_path_quantiles: need at least one level");
    const std::vector<double> lv(levels, levels + nlevels);
    copy_row_major(tvpreg::path_quantiles(fit->store, j, lv), out);
  });
}

int tvpreg_fit_num_config_entries(const tvpreg_fit* fit) {
  return fit ? static_cast<int>(fit->config.size()) : 0;
}

tvpreg_status tvpreg_fit_config_entry(const tvpreg_fit* fit, int i, const char** key,
                                      const char** value) {
  return guarded([&] {
    require(fit && key && value, "tvpreg_fit_config_entry: NULL argument");
    require(i >= 0 && i < static_cast<int>(fit->config.size()),
            "tvpreg_fit_config_entry: index out of range");
    *key = fit->config[i].first.c_str();
    *value = fit->config[i].second.c_str();
  });
}

/* ---------------- prediction ---------------- */

tvpreg_status tvpreg_lpds(const tvpreg_fit* fit, const tvpreg_data* data, const double* x_new,
                          double y_new, double* out) {
  return guarded([&] {
    require(fit && data && x_new && out, "tvpreg_lpds: NULL argument");
    *out = tvpreg::lpds(fit->store, data->data, row_from(x_new, fit->store.d), y_new);
  });
}

tvpreg_status tvpreg_eval_pred_dens(const tvpreg_fit* fit, const tvpreg_data* data,
                                    const double* x_new, const double* points, int npoints,
                                    double* out) {
  return guarded([&] {
    require(fit && data && x_new && out, "tvpreg_eval_pred_dens: NULL argument");
    require(npoints >= 0 && (npoints == 0 || points != nullptr),
            "tvpreg_eval_pred_dens: bad points array");
    const Eigen::VectorXd p = npoints > 0 ? Eigen::Map<const Eigen::VectorXd>(points, npoints)
                                          : Eigen::VectorXd();
    const Eigen::VectorXd dens =
        tvpreg::eval_pred_dens(p, fit->store, data->data, row_from(x_new, fit->store.d));
    std::memcpy(out, dens.data(), sizeof(double) * dens.size());
  });
}

tvpreg_status tvpreg_predictive_moments(const tvpreg_fit* fit, const tvpreg_data* data,
                                        const double* x_new, double* yhat, double* s2) {
  return guarded([&] {
    require(fit && data && x_new && yhat && s2, "tvpreg_predictive_moments: NULL argument");
    const tvpreg::PredictiveMoments pm =
        tvpreg::predictive_moments(fit->store, data->data, row_from(x_new, fit->store.d));
    std::memcpy(yhat, pm.yhat.data(), sizeof(double) * pm.yhat.size());
    std::memcpy(s2, pm.s2.data(), sizeof(double) * pm.s2.size());
  });
}

/* ---------------- synthetic data ---------------- */

void tvpreg_sim_config_init(tvpreg_sim_config* cfg) {
  if (!cfg) return;
  const tvpreg::SimConfig defaults;
  cfg->T = defaults.T;
  cfg->d = 0;
  cfg->theta = nullptr;
  cfg->beta_mean = nullptr;
  cfg->sigma2 = defaults.sigma2;
  cfg->sv = defaults.sv ? 1 : 0;
  cfg->sv_mu = defaults.sv_params.mu;
  cfg->sv_phi = defaults.sv_params.phi;
  cfg->sv_sigma2_eta = defaults.sv_params.sigma2_eta;
  cfg->seed = defaults.seed;
  cfg->covariates = nullptr;
}

tvpreg_status tvpreg_simulate(const tvpreg_sim_config* cfg, tvpreg_sim** out) {
  if (!out) return fail_invalid("tvpreg_simulate: out is NULL");
  *out = nullptr;
  return guarded([&] {
    require(cfg != nullptr, "tvpreg_simulate: cfg is NULL");
    require(cfg->theta && cfg->beta_mean && cfg->d >= 1,
            "tvpreg_simulate: theta and beta_mean must cover d >= 1 coefficients");
    tvpreg::SimConfig sc;
    sc.T = cfg->T;
    sc.theta = Eigen::Map<const Eigen::VectorXd>(cfg->theta, cfg->d);
    sc.beta_mean = Eigen::Map<const Eigen::VectorXd>(cfg->beta_mean, cfg->d);
    sc.sigma2 = cfg->sigma2;
    sc.sv = cfg->sv != 0;
    sc.sv_params.mu = cfg->sv_mu;
    sc.sv_params.phi = cfg->sv_phi;
    sc.sv_params.sigma2_eta = cfg->sv_sigma2_eta;
    sc.seed = cfg->seed;
    if (cfg->covariates)
      sc.covariates = Eigen::Map<
          const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          cfg->covariates, cfg->T, cfg->d);
    auto handle = std::make_unique<tvpreg_sim>();
    handle->result = tvpreg::sim_tvp(sc);
    *out = handle.release();
  });
}

void tvpreg_sim_free(tvpreg_sim* sim) { delete sim; }

int tvpreg_sim_num_obs(const tvpreg_sim* sim) {
  return sim ? static_cast<int>(sim->result.data.y.size()) : 0;
}

int tvpreg_sim_num_covariates(const tvpreg_sim* sim) {
  return sim ? static_cast<int>(sim->result.data.X.cols()) : 0;
}

tvpreg_status tvpreg_sim_y(const tvpreg_sim* sim, double* out) {
  return guarded([&] {
    require(sim && out, "tvpreg_sim_y: NULL argument");
    std::memcpy(out, sim->result.data.y.data(), sizeof(double) * sim->result.data.y.size());
  });
}

tvpreg_status tvpreg_sim_x(const tvpreg_sim* sim, double* out) {
  return guarded([&] {
    require(sim && out, "tvpreg_sim_x: NULL argument");
    copy_row_major(sim->result.data.X, out);
  });
}

tvpreg_status tvpreg_sim_true_paths(const tvpreg_sim* sim, double* out) {
  return guarded([&] {
    require(sim && out, "tvpreg_sim_true_paths: NULL argument");
    copy_row_major(sim->result.true_paths, out);
  });
}

tvpreg_status tvpreg_sim_errors(const tvpreg_sim* sim, double* out) {
  return guarded([&] {
    require(sim && out, "tvpreg_sim_errors: NULL argument");
    std::memcpy(out, sim->result.eps.data(), sizeof(double) * sim->result.eps.size());
  });
}

tvpreg_status tvpreg_sim_volatility(const tvpreg_sim* sim, double* out) {
  return guarded([&] {
    require(sim && out, "tvpreg_sim_volatility: NULL argument");
    require(sim->result.h.size() > 0, "tvpreg_sim_volatility: simulation had no volatility path");
    std::memcpy(out, sim->result.h.data(), sizeof(double) * sim->result.h.size());
  });
}

tvpreg_status tvpreg_sim_data(const tvpreg_sim* sim, tvpreg_data** out) {
  if (!out) return fail_invalid("tvpreg_sim_data: out is NULL");
  *out = nullptr;
  return guarded([&] {
    require(sim != nullptr, "tvpreg_sim_data: sim is NULL");
    auto handle = std::make_unique<tvpreg_data>();
    handle->data = sim->result.data;
    *out = handle.release();
  });
}

} /* extern "C" */
