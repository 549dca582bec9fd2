#include "aggdelay/traffic.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aggdelay/error.h"

namespace aggdelay {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

PayloadDistribution PayloadDistribution::deterministic(double bits) {
  require_positive(bits, "payload mean");
  PayloadDistribution d;
  d.family_ = PayloadFamily::kDeterministic;
  d.mean_ = bits;
  d.variance_ = 0;
  d.lo_ = d.hi_ = bits;
  return d;
}

PayloadDistribution PayloadDistribution::exponential(double mean_bits) {
  require_positive(mean_bits, "payload mean");
  PayloadDistribution d;
  d.family_ = PayloadFamily::kExponential;
  d.mean_ = mean_bits;
  d.variance_ = mean_bits * mean_bits;
  d.lo_ = 0;
  d.hi_ = INFINITY;
  return d;
}

PayloadDistribution PayloadDistribution::uniform_range(double lo_bits,
                                                       double hi_bits) {
  if (!(lo_bits >= 0) || !(hi_bits >= lo_bits) || !std::isfinite(hi_bits) ||
      !(hi_bits > 0)) {
    throw DomainError("uniform payload range needs 0 <= lo <= hi, hi > 0");
  }
  PayloadDistribution d;
  d.family_ = PayloadFamily::kUniformRange;
  d.lo_ = lo_bits;
  d.hi_ = hi_bits;
  d.mean_ = 0.5 * (lo_bits + hi_bits);
  const double w = hi_bits - lo_bits;
  d.variance_ = w * w / 12.0;
  return d;
}

PayloadDistribution PayloadDistribution::empirical(
    std::vector<double> samples_bits) {
  if (samples_bits.empty()) {
    throw DomainError("empirical payload needs at least one sample");
  }
  for (double s : samples_bits) {
    if (!(s >= 0) || !std::isfinite(s)) {
      throw DomainError("empirical payload samples must be non-negative");
    }
  }
  const double n = static_cast<double>(samples_bits.size());
  const double mean =
      std::accumulate(samples_bits.begin(), samples_bits.end(), 0.0) / n;
  require_positive(mean, "payload mean");
  double ss = 0;
  for (double s : samples_bits) ss += (s - mean) * (s - mean);

  PayloadDistribution d;
  d.family_ = PayloadFamily::kEmpirical;
  d.mean_ = mean;
  d.variance_ = ss / n;
  auto [lo, hi] = std::minmax_element(samples_bits.begin(), samples_bits.end());
  d.lo_ = *lo;
  d.hi_ = *hi;
  d.samples_ = std::move(samples_bits);
  return d;
}

void validate(const TrafficSpec& traffic) {
  if (!(traffic.lambda_total > 0) || !std::isfinite(traffic.lambda_total)) {
    throw DomainError("lambda must be positive and finite");
  }
  const auto& p = traffic.payload;
  require_positive(p.mean(), "payload mean");
  if (!(p.variance() >= 0)) throw DomainError("payload variance must be >= 0");
}

std::string_view to_string(PayloadFamily family) {
  switch (family) {
    case PayloadFamily::kDeterministic:
      return "deterministic";
    case PayloadFamily::kExponential:
      return "exponential";
    case PayloadFamily::kUniformRange:
      return "uniform";
    case PayloadFamily::kEmpirical:
      return "empirical";
  }
  return "deterministic";
}

}  // namespace aggdelay
