#pragma once

#include "tvpreg/rng.hpp"

namespace tvpreg {

// Generalized inverse Gaussian parameters for the density
//   p(x) proportional to x^{lambda-1} exp(-(chi/x + psi*x)/2),  x > 0.
// Boundary cases are part of the domain: chi = 0 needs lambda > 0 (Gamma),
// psi = 0 needs lambda < 0 (inverse Gamma).
struct GigParams {
  double lambda = 0.0;
  double chi = 0.0;
  double psi = 0.0;
};

// One exact draw. Dispatches to Gamma / inverse-Gamma on the boundaries,
// otherwise uses a mode-shifted ratio-of-uniforms sampler (lambda >= 1 or
// omega >= 1) or a log-scale concave rejection sampler for the small-omega
// region where ratio-of-uniforms acceptance collapses.
double sample_gig(Rng& rng, const GigParams& p);
double sample_gig(Rng& rng, double lambda, double chi, double psi);

// Gamma(shape, rate) draw; thin wrapper kept for API symmetry with sample_gig.
double sample_gamma(Rng& rng, double shape, double rate);

// log N(x | mean, var); var is a variance, not a standard deviation
double log_normal_pdf(double x, double mean, double var);

// log Gamma(x | shape, rate), rate parameterization
double log_gamma_pdf(double x, double shape, double rate);

// log InvGamma(x | shape, scale)
double log_inv_gamma_pdf(double x, double shape, double scale);

// log Beta(x | a, b) on (0,1)
double log_beta_pdf(double x, double a, double b);

// unnormalized GIG log density, shared by samplers and test oracles
double log_gig_kernel(double x, const GigParams& p);

}  // namespace tvpreg
