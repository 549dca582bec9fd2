#ifndef AGGDELAY_TRAFFIC_H_
#define AGGDELAY_TRAFFIC_H_

#include <string_view>
#include <vector>

namespace aggdelay {

enum class PayloadFamily { kDeterministic, kExponential, kUniformRange, kEmpirical };

// Payload size distribution, in bits. Payloads are continuous-valued.
// Construct through the named factories; they fix mean and variance.
class PayloadDistribution {
 public:
  PayloadDistribution() = default;

  static PayloadDistribution deterministic(double bits);
  static PayloadDistribution exponential(double mean_bits);
  // Continuous uniform on [lo_bits, hi_bits].
  static PayloadDistribution uniform_range(double lo_bits, double hi_bits);
  // Resampling from `samples_bits` with equal weight; moments are the
  // population moments of the list.
  static PayloadDistribution empirical(std::vector<double> samples_bits);

  PayloadFamily family() const { return family_; }
  double mean() const { return mean_; }
  double variance() const { return variance_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<double>& samples() const { return samples_; }

  friend bool operator==(const PayloadDistribution&,
                         const PayloadDistribution&) = default;

 private:
  PayloadFamily family_ = PayloadFamily::kDeterministic;
  double mean_ = 800;
  double variance_ = 0;
  double lo_ = 800;
  double hi_ = 800;
  std::vector<double> samples_;
};

// Aggregate Poisson arrival rate and per-frame payload distribution.
struct TrafficSpec {
  double lambda_total = 100;  // frames/s
  PayloadDistribution payload;

  TrafficSpec with_lambda(double lambda) const {
    TrafficSpec t = *this;
    t.lambda_total = lambda;
    return t;
  }

  friend bool operator==(const TrafficSpec&, const TrafficSpec&) = default;
};

// Throws DomainError unless lambda_total > 0 and the payload is valid.
void validate(const TrafficSpec& traffic);

std::string_view to_string(PayloadFamily family);

}  // namespace aggdelay

#endif  // AGGDELAY_TRAFFIC_H_
