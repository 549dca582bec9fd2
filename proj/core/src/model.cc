#include "aggdelay/model.h"

#include <cmath>
#include <string>

#include "aggdelay/error.h"

namespace aggdelay {
namespace {

void require_k(int k) {
  if (k < 1) throw DomainError("batch size k must be >= 1, got " + std::to_string(k));
}

void require_lambda(double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda)) {
    throw DomainError("lambda must be positive and finite");
  }
}

}  // namespace

Gain Gain::between(double system_time_k, double system_time_1) {
  const bool k_unbounded = std::isinf(system_time_k);
  const bool one_unbounded = std::isinf(system_time_1);
  if (k_unbounded && one_unbounded) return Gain(Kind::kBothUnstable, 0);
  if (one_unbounded) return Gain(Kind::kNegativeUnbounded, 0);
  if (k_unbounded) return Gain(Kind::kPositiveUnbounded, 0);
  return Gain(Kind::kFinite, system_time_k - system_time_1);
}

double Gain::seconds() const {
  switch (kind_) {
    case Kind::kFinite:
      return value_;
    case Kind::kNegativeUnbounded:
      return -kUnbounded;
    case Kind::kPositiveUnbounded:
      return kUnbounded;
    case Kind::kBothUnstable:
      break;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

bool Gain::non_positive() const {
  return kind_ == Kind::kNegativeUnbounded ||
         (kind_ == Kind::kFinite && value_ <= 0);
}

double erlang_wait(int k, double lambda) {
  require_k(k);
  require_lambda(lambda);
  return (k - 1) / (2.0 * lambda);
}

double service_time(int k, const PhyProfile& phy, const TrafficSpec& traffic,
                    double backoff_mean) {
  require_k(k);
  validate(phy);
  const double payload = k * traffic.payload.mean() / phy.bit_rate;
  return payload + overhead_gamma(phy).gamma_total + backoff_mean;
}

double service_time(int k, const PhyProfile& phy, const TrafficSpec& traffic) {
  return service_time(k, phy, traffic, backoff_moments(phy).mean);
}

double service_variance(int k, const PhyProfile& phy,
                        const TrafficSpec& traffic) {
  require_k(k);
  const double inv_rate = 1.0 / phy.bit_rate;
  return backoff_moments(phy).variance +
         inv_rate * inv_rate * k * traffic.payload.variance();
}

double stability_limit(int k, const PhyProfile& phy,
                       const TrafficSpec& traffic) {
  return k / service_time(k, phy, traffic);
}

double queue_wait(int k, const PhyProfile& phy, const TrafficSpec& traffic,
                  WaitForm form) {
  require_k(k);
  require_lambda(traffic.lambda_total);
  const double service = service_time(k, phy, traffic);
  const double lambda_a = traffic.lambda_total / k;
  const double rho = lambda_a * service;
  if (!(rho < 1)) return kUnbounded;
  if (form == WaitForm::kDeterministicService) {
    return lambda_a * service * service / (2.0 * (1.0 - rho));
  }
  const double variance = service_variance(k, phy, traffic);
  return (lambda_a * lambda_a * variance + rho * rho) /
         (2.0 * lambda_a * (1.0 - rho));
}

double system_time(int k, const PhyProfile& phy, const TrafficSpec& traffic,
                   WaitForm form) {
  const double wait = queue_wait(k, phy, traffic, form);
  if (std::isinf(wait)) return kUnbounded;
  return erlang_wait(k, traffic.lambda_total) + service_time(k, phy, traffic) +
         wait;
}

Gain gain(int k, const PhyProfile& phy, const TrafficSpec& traffic,
          WaitForm form) {
  require_k(k);
  require_lambda(traffic.lambda_total);
  if (k == 1) return Gain::zero();
  return Gain::between(system_time(k, phy, traffic, form),
                       system_time(1, phy, traffic, form));
}

QueueMetrics evaluate(int k, const PhyProfile& phy, const TrafficSpec& traffic,
                      WaitForm form) {
  validate(traffic);
  QueueMetrics m;
  m.k = k;
  m.lambda = traffic.lambda_total;
  m.erlang_wait = erlang_wait(k, traffic.lambda_total);
  m.service_mean = service_time(k, phy, traffic);
  m.service_variance = service_variance(k, phy, traffic);
  m.lambda_a = traffic.lambda_total / k;
  m.rho = m.lambda_a * m.service_mean;
  m.stable = m.rho < 1;
  m.queue_wait = queue_wait(k, phy, traffic, form);
  m.system_time = system_time(k, phy, traffic, form);
  m.gain = gain(k, phy, traffic, form);
  return m;
}

std::string_view to_string(WaitForm form) {
  return form == WaitForm::kGeneralPK ? "general-pk" : "deterministic-service";
}

}  // namespace aggdelay
