/* C interface to the time-varying-parameter shrinkage regression library.
 *
 * All objects are opaque handles created by *_new / tvpreg_fit_run /
 * tvpreg_simulate and released by the matching *_free (free functions accept
 * NULL). Every fallible call returns a tvpreg_status; on failure
 * tvpreg_last_error() describes what went wrong for the current thread.
 * Output buffers are caller-allocated at the documented sizes; matrices are
 * written row-major. Returned strings stay owned by the handle they came
 * from and remain valid until it is freed.
 *
 * Handles are immutable after creation (options before a fit aside), so a
 * data/fit pair may be shared across threads; per-thread work should use
 * distinct handles.
 */
#ifndef TVPREG_H
#define TVPREG_H

#include <stdint.h>

/* the shared library is built with hidden default visibility */
#if defined(__GNUC__) || defined(__clang__)
#define TVPREG_API __attribute__((visibility("default")))
#else
#define TVPREG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define TVPREG_VERSION_MAJOR 0
#define TVPREG_VERSION_MINOR 1
#define TVPREG_VERSION_PATCH 0

typedef enum tvpreg_status {
  TVPREG_OK = 0,
  TVPREG_ERR_INVALID_ARGUMENT = 1, /* bad inputs or configuration */
  TVPREG_ERR_NUMERICAL = 2,        /* sampler or linear algebra breakdown */
  TVPREG_ERR_INTERNAL = 3          /* anything else (allocation, logic) */
} tvpreg_status;

typedef struct tvpreg_data tvpreg_data;       /* observed series (y, X) */
typedef struct tvpreg_options tvpreg_options; /* model family + sampler config */
typedef struct tvpreg_fit tvpreg_fit;         /* stored posterior draws */
typedef struct tvpreg_sim tvpreg_sim;         /* synthetic data set */

TVPREG_API const char* tvpreg_version(void);
/* message of the most recent failure on the calling thread ("" if none) */
TVPREG_API const char* tvpreg_last_error(void);

/* ---------------- observed data ----------------
 * y has length T, X is T x d row-major. names may be NULL (columns become
 * x1..xd) or an array of d column labels. The data is copied. */
TVPREG_API tvpreg_status tvpreg_data_new(int T, int d, const double* y, const double* X,
                              const char* const* names, tvpreg_data** out);
TVPREG_API void tvpreg_data_free(tvpreg_data* data);
TVPREG_API int tvpreg_data_num_obs(const tvpreg_data* data);
TVPREG_API int tvpreg_data_num_covariates(const tvpreg_data* data);

/* ---------------- options ----------------
 * family is "ridge", "double" or "triple"; sv is 0/1. The pair fixes the
 * model variant and loads its default prior and sampler settings; everything
 * else is adjusted afterwards through tvpreg_options_set using the
 * documented key table (e.g. "a_xi", "learn_a_xi", "niter", "seed").
 * "mod_type" and "sv" are not settable keys: recreate the options instead,
 * so defaults never silently mix across variants. */
TVPREG_API tvpreg_status tvpreg_options_new(const char* family, int sv, tvpreg_options** out);
TVPREG_API tvpreg_status tvpreg_options_set(tvpreg_options* opts, const char* key, const char* value);
/* current value of any key (including "mod_type"/"sv"), as a string */
TVPREG_API tvpreg_status tvpreg_options_get(const tvpreg_options* opts, const char* key, char* buf,
                                 int buflen);
TVPREG_API void tvpreg_options_free(tvpreg_options* opts);

/* ---------------- fitting ---------------- */
TVPREG_API tvpreg_status tvpreg_fit_run(const tvpreg_data* data, const tvpreg_options* opts,
                             tvpreg_fit** out);
TVPREG_API void tvpreg_fit_free(tvpreg_fit* fit);

TVPREG_API int tvpreg_fit_num_draws(const tvpreg_fit* fit);      /* M */
TVPREG_API int tvpreg_fit_num_obs(const tvpreg_fit* fit);        /* T */
TVPREG_API int tvpreg_fit_num_covariates(const tvpreg_fit* fit); /* d */

/* Scalar parameter draws, one named column per sampled scalar: coefficient
 * means, signed sqrt innovation scales, local and global shrinkage scales,
 * learned pole/tail parameters, and the error-variance block the variant
 * uses. Columns a variant does not sample are absent. */
TVPREG_API int tvpreg_fit_num_scalars(const tvpreg_fit* fit);
TVPREG_API const char* tvpreg_fit_scalar_name(const tvpreg_fit* fit, int i);
TVPREG_API tvpreg_status tvpreg_fit_scalar_draws(const tvpreg_fit* fit, int i, double* out /* M */);

/* centered coefficient path draws of covariate j: M x (T+1) */
TVPREG_API tvpreg_status tvpreg_fit_state_draws(const tvpreg_fit* fit, int j, double* out);
/* log-volatility path draws: M x (T+1); fails unless the fit used SV */
TVPREG_API tvpreg_status tvpreg_fit_h_draws(const tvpreg_fit* fit, double* out);

/* posterior summary table (mean, sd, median, 95% HPD, ESS per row) */
TVPREG_API int tvpreg_fit_num_summary_rows(const tvpreg_fit* fit);
TVPREG_API const char* tvpreg_fit_summary_name(const tvpreg_fit* fit, int i);
TVPREG_API tvpreg_status tvpreg_fit_summary_stats(const tvpreg_fit* fit, int i,
                                       double out[6] /* mean sd median lo hi ess */);

/* pointwise path quantiles of covariate j at nlevels probabilities:
 * (T+1) x nlevels */
TVPREG_API tvpreg_status tvpreg_fit_path_quantiles(const tvpreg_fit* fit, int j, const double* levels,
                                        int nlevels, double* out);

/* Normalized configuration the chain actually ran with (defaults resolved,
 * invalid flag combinations normalized), as key/value strings that
 * round-trip through tvpreg_options_set. */
TVPREG_API int tvpreg_fit_num_config_entries(const tvpreg_fit* fit);
TVPREG_API tvpreg_status tvpreg_fit_config_entry(const tvpreg_fit* fit, int i, const char** key,
                                      const char** value);

/* ---------------- one-step-ahead prediction ----------------
 * data must be the series the fit was produced on; x_new has length d. */
TVPREG_API tvpreg_status tvpreg_lpds(const tvpreg_fit* fit, const tvpreg_data* data, const double* x_new,
                          double y_new, double* out);
TVPREG_API tvpreg_status tvpreg_eval_pred_dens(const tvpreg_fit* fit, const tvpreg_data* data,
                                    const double* x_new, const double* points, int npoints,
                                    double* out /* npoints */);
/* the underlying equal-weight Gaussian mixture, one component per draw */
TVPREG_API tvpreg_status tvpreg_predictive_moments(const tvpreg_fit* fit, const tvpreg_data* data,
                                        const double* x_new, double* yhat /* M */,
                                        double* s2 /* M */);

/* ---------------- synthetic data ---------------- */
typedef struct tvpreg_sim_config {
  int T;                    /* observations, >= 1 */
  int d;                    /* coefficients, >= 1 */
  const double* theta;      /* d innovation variances, >= 0 */
  const double* beta_mean;  /* d coefficient levels */
  double sigma2;            /* observation variance (ignored when sv) */
  int sv;                   /* 0/1: stochastic-volatility errors */
  double sv_mu, sv_phi, sv_sigma2_eta;
  uint64_t seed;
  const double* covariates; /* NULL (standard normal) or T x d row-major;
                               column 1 is forced to the intercept */
} tvpreg_sim_config;

/* fill everything but theta/beta_mean/d with the library defaults */
TVPREG_API void tvpreg_sim_config_init(tvpreg_sim_config* cfg);

TVPREG_API tvpreg_status tvpreg_simulate(const tvpreg_sim_config* cfg, tvpreg_sim** out);
TVPREG_API void tvpreg_sim_free(tvpreg_sim* sim);
TVPREG_API int tvpreg_sim_num_obs(const tvpreg_sim* sim);
TVPREG_API int tvpreg_sim_num_covariates(const tvpreg_sim* sim);
TVPREG_API tvpreg_status tvpreg_sim_y(const tvpreg_sim* sim, double* out /* T */);
TVPREG_API tvpreg_status tvpreg_sim_x(const tvpreg_sim* sim, double* out /* T x d */);
TVPREG_API tvpreg_status tvpreg_sim_true_paths(const tvpreg_sim* sim, double* out /* (T+1) x d */);
TVPREG_API tvpreg_status tvpreg_sim_errors(const tvpreg_sim* sim, double* out /* T */);
/* log-volatility path, length T+1; fails unless simulated with sv */
TVPREG_API tvpreg_status tvpreg_sim_volatility(const tvpreg_sim* sim, double* out);
/* wrap the simulated series as an observed-data handle */
TVPREG_API tvpreg_status tvpreg_sim_data(const tvpreg_sim* sim, tvpreg_data** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TVPREG_H */
