#pragma once

#include <cstdint>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tvpreg {

// PCG64 (setseq_xsl_rr_128_64). 128-bit LCG state with a per-stream odd
// increment, XSL-RR output permutation. Distinct streams are statistically
// independent, which is what lets parallel backtest jobs share a seed policy
// without sharing a sequence.
class Pcg64 {
public:
  explicit Pcg64(std::uint64_t seed, std::uint64_t stream = 0) {
    inc_ = (static_cast<u128>(stream) << 1u) | 1u;
    state_ = 0u;
    step();
    state_ += seed;
    step();
  }

  std::uint64_t next_u64() {
    step();
    const std::uint64_t xored =
        static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
    const unsigned rot = static_cast<unsigned>(state_ >> 122);
    return (xored >> rot) | (xored << ((64u - rot) & 63u));
  }

private:
  using u128 = unsigned __int128;

  void step() { state_ = state_ * mult() + inc_; }

  static constexpr u128 mult() {
    return (static_cast<u128>(2549297995355413924ULL) << 64) | 4865540595714422341ULL;
  }

  u128 state_ = 0;
  u128 inc_ = 1;
};

// Draw layer on top of the raw stream. All samplers used by the model live
// here so a (seed, stream) pair pins the entire draw sequence.
class Rng {
public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : gen_(seed, stream) {}

  // uniform on (0,1), never returns an endpoint
  double uniform() {
    return (static_cast<double>(gen_.next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t next_u64() { return gen_.next_u64(); }

  // Marsaglia polar method; the spare deviate is cached
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s <= 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  double exponential(double rate = 1.0) { return -std::log(uniform()) / rate; }

  // Gamma(shape, rate); Marsaglia-Tsang, with the boost U^{1/shape} for shape < 1.
  // Result floored away from 0 so downstream reciprocals stay finite.
  double gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0))
      throw std::invalid_argument("gamma: shape and rate must be positive");
    double boost = 1.0;
    double a = shape;
    if (a < 1.0) {
      // gamma(a) = gamma(a+1) * U^{1/a}; keep the factor in log space
      boost = std::exp(std::log(uniform()) / a);
      a += 1.0;
    }
    const double d = a - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    double x, v;
    for (;;) {
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) break;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) break;
    }
    const double out = d * v * boost / rate;
    return out > min_positive() ? out : min_positive();
  }

  // InvGamma(shape, scale): if G ~ Gamma(shape, 1) then scale/G ~ InvGamma(shape, scale)
  double inv_gamma(double shape, double scale) { return scale / gamma(shape, 1.0); }

  double beta(double a, double b) {
    const double x = gamma(a, 1.0);
    const double y = gamma(b, 1.0);
    return x / (x + y);
  }

  double chisq(double df) { return gamma(0.5 * df, 0.5); }

  // Fisher F(d1, d2)
  double fisher_f(double d1, double d2) {
    const double x = gamma(0.5 * d1, 1.0) / d1;
    const double y = gamma(0.5 * d2, 1.0) / d2;
    return x / y;
  }

  // index in [0, n) with probability proportional to w[i] (unnormalized, finite)
  int categorical(const double* w, int n) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += w[i];
    double u = uniform() * total;
    for (int i = 0; i < n; ++i) {
      u -= w[i];
      if (u <= 0.0) return i;
    }
    return n - 1;
  }

  static constexpr double min_positive() { return 1e-300; }

private:
  Pcg64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tvpreg
