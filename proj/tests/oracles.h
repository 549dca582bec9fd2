#ifndef AGGDELAY_TESTS_ORACLES_H_
#define AGGDELAY_TESTS_ORACLES_H_

// Test-only reference computations. Nothing here calls into the library's
// model or solver; they are written directly from the closed forms so the
// tests compare two independent routes.

#include <cmath>
#include <limits>
#include <random>

namespace aggdelay::oracle {

struct Params {
  double bit_rate;
  double gamma;
  double backoff_mean;
  double backoff_variance;
  double payload_mean_bits;
  double payload_variance_bits2;
};

// Moments of slot * X, X uniform on {0..cw}, by enumeration.
inline void enumerate_backoff(double slot, int cw, double& mean, double& variance) {
  const double n = cw + 1.0;
  double s = 0;
  for (int i = 0; i <= cw; ++i) s += slot * i;
  mean = s / n;
  double ss = 0;
  for (int i = 0; i <= cw; ++i) ss += (slot * i - mean) * (slot * i - mean);
  variance = ss / n;
}

// F(k) with the deterministic-service wait, or +inf if unstable.
inline double system_time(const Params& p, int k, double lambda,
                          bool general_pk = false) {
  const double s = k * p.payload_mean_bits / p.bit_rate + p.gamma + p.backoff_mean;
  const double la = lambda / k;
  const double rho = la * s;
  if (rho >= 1) return std::numeric_limits<double>::infinity();
  double w;
  if (general_pk) {
    const double var = p.backoff_variance +
                       k * p.payload_variance_bits2 / (p.bit_rate * p.bit_rate);
    w = (la * la * var + rho * rho) / (2 * la * (1 - rho));
  } else {
    w = la * s * s / (2 * (1 - rho));
  }
  return (k - 1) / (2 * lambda) + s + w;
}

inline double gain(const Params& p, int k, double lambda) {
  const double fk = system_time(p, k, lambda);
  const double f1 = system_time(p, 1, lambda);
  if (std::isinf(f1)) return -std::numeric_limits<double>::infinity();
  return fk - f1;
}

// Plain bisection on a known bracket [lo, hi], G(lo) > 0 >= G(hi).
inline double bisect_threshold(const Params& p, int k, double lo, double hi,
                               int iterations = 200) {
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gain(p, k, mid) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Exhaustive argmin of F over {1..k_max}, ties to the smaller k; 0 if none
// is stable.
inline int argmin_k(const Params& p, double lambda, int k_max) {
  int best = 0;
  double best_f = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_max; ++k) {
    const double f = system_time(p, k, lambda);
    if (f < best_f) {
      best_f = f;
      best = k;
    }
  }
  return best;
}

// Mean of the j-th-arrival buffer waits for k-batches of a Poisson stream,
// estimated by direct sampling.
inline double sampled_buffer_wait(int k, double lambda, int batches,
                                  unsigned seed) {
  std::mt19937_64 gen(seed);
  std::exponential_distribution<double> gap(lambda);
  double total = 0;
  for (int b = 0; b < batches; ++b) {
    double arrivals[64];
    double t = 0;
    for (int j = 0; j < k; ++j) {
      t += gap(gen);
      arrivals[j] = t;
    }
    for (int j = 0; j < k; ++j) total += t - arrivals[j];
  }
  return total / (static_cast<double>(batches) * k);
}

}  // namespace aggdelay::oracle

#endif  // AGGDELAY_TESTS_ORACLES_H_
