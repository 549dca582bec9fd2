#ifndef AGGDELAY_MODEL_H_
#define AGGDELAY_MODEL_H_

#include <limits>
#include <string_view>

#include "aggdelay/phy.h"
#include "aggdelay/traffic.h"

namespace aggdelay {

// Value returned for the wait and system time of an unstable queue.
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// Closed form used for the batch queue wait W(k).
enum class WaitForm {
  // W = lambda_a (1/mu)^2 / (2 (1 - rho)); the default.
  kDeterministicService,
  // W = (lambda_a^2 sigma^2 + rho^2) / (2 lambda_a (1 - rho)).
  kGeneralPK,
};

// G(k) = F(k) - F(1) with extended arithmetic. Negative means aggregating
// k frames lowers the mean delay.
class Gain {
 public:
  enum class Kind {
    kFinite,
    kNegativeUnbounded,  // F(1) unbounded, F(k) finite
    kPositiveUnbounded,  // F(k) unbounded, F(1) finite
    kBothUnstable,
  };

  constexpr Gain() = default;
  static Gain zero() { return Gain(); }
  static Gain between(double system_time_k, double system_time_1);

  Kind kind() const { return kind_; }
  bool finite() const { return kind_ == Kind::kFinite; }
  // Seconds; -inf / +inf for the unbounded kinds, NaN for kBothUnstable.
  double seconds() const;
  // G <= 0, counting -inf. False when both queues are unstable.
  bool non_positive() const;

  friend bool operator==(const Gain&, const Gain&) = default;

 private:
  constexpr Gain(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_ = Kind::kFinite;
  double value_ = 0;
};

// One evaluation of the delay chain for batch size k.
struct QueueMetrics {
  int k = 1;
  double lambda = 0;            // frames/s
  double erlang_wait = 0;       // Er(k), s
  double service_mean = 0;      // 1/mu(k), s
  double service_variance = 0;  // sigma(k)^2, s^2
  double lambda_a = 0;          // batches/s
  double rho = 0;
  double queue_wait = 0;   // W(k), s; kUnbounded if unstable
  double system_time = 0;  // F(k), s; kUnbounded if unstable
  Gain gain;
  bool stable = true;
};

// Mean buffer residence (k - 1) / (2 lambda). Requires k >= 1, lambda > 0.
double erlang_wait(int k, double lambda);

// 1/mu(k) = k E[P] / br + gamma + backoff_mean.
double service_time(int k, const PhyProfile& phy, const TrafficSpec& traffic,
                    double backoff_mean);
// Same, with the backoff mean taken from backoff_moments(phy).
double service_time(int k, const PhyProfile& phy, const TrafficSpec& traffic);

// One backoff per aggregated frame plus the sum of k independent payloads:
// Var[Y] + k Var[P] / br^2.
double service_variance(int k, const PhyProfile& phy,
                        const TrafficSpec& traffic);

// Frame arrival rate at which rho(k) reaches 1, i.e. k mu(k).
double stability_limit(int k, const PhyProfile& phy,
                       const TrafficSpec& traffic);

// W(k) at traffic.lambda_total; kUnbounded when rho(k) >= 1.
double queue_wait(int k, const PhyProfile& phy, const TrafficSpec& traffic,
                  WaitForm form = WaitForm::kDeterministicService);

// F(k) = Er(k) + 1/mu(k) + W(k).
double system_time(int k, const PhyProfile& phy, const TrafficSpec& traffic,
                   WaitForm form = WaitForm::kDeterministicService);

// G(k) = F(k) - F(1); exactly zero for k == 1.
Gain gain(int k, const PhyProfile& phy, const TrafficSpec& traffic,
          WaitForm form = WaitForm::kDeterministicService);

// All of the above in one record. Fields are the exact values the individual
// functions return for the same inputs.
QueueMetrics evaluate(int k, const PhyProfile& phy, const TrafficSpec& traffic,
                      WaitForm form = WaitForm::kDeterministicService);

std::string_view to_string(WaitForm form);

}  // namespace aggdelay

#endif  // AGGDELAY_MODEL_H_
