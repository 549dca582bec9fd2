#ifndef AGGDELAY_SOLVER_H_
#define AGGDELAY_SOLVER_H_

#include <span>
#include <vector>

#include "aggdelay/model.h"

namespace aggdelay {

struct SearchParams {
  double lambda_min = 1.0;  // frames/s
  // Upper end of the scan; <= 0 selects 0.999 of the k = 1 stability limit.
  double lambda_max = 0.0;
  double relative_tolerance = 1e-6;
  int max_iterations = 200;
  int scan_points = 64;

  friend bool operator==(const SearchParams&, const SearchParams&) = default;
};

// Break-even rate lambda*(k) where G(k, lambda) turns non-positive.
struct ThresholdResult {
  int k = 2;
  double lambda_star = 0;
  double lambda_low = 0;   // G > 0 here
  double lambda_high = 0;  // G <= 0 here
  int iterations = 0;
  bool converged = false;
  // G was already <= 0 at lambda_min; lambda_star = lambda_min and the
  // bracket collapses to that point.
  bool at_lower_bound = false;
};

ThresholdResult lambda_threshold(int k, const PhyProfile& phy,
                                 const TrafficSpec& traffic_template,
                                 WaitForm form = WaitForm::kDeterministicService,
                                 const SearchParams& search = {});

struct OptimalK {
  int k_best = 1;
  QueueMetrics metrics;
  bool stable = true;  // false if every k in {1..k_max} is unstable
};

// argmin over k in {1, ..., k_max} of F(k) at traffic.lambda_total, ties to
// the smaller k.
OptimalK optimal_k(const PhyProfile& phy, const TrafficSpec& traffic,
                   WaitForm form, int k_max);

// One (k, lambda) point of a sweep.
struct SweepRow {
  int k = 1;
  double lambda = 0;
  double erlang_wait = 0;
  double service_mean = 0;
  double rho = 0;
  double queue_wait = 0;
  double system_time = 0;
  Gain gain;
  bool stable = true;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

SweepRow to_sweep_row(const QueueMetrics& m);

// Rows in k-major order (k outer, lambda inner). Unstable points are kept.
// `threads` > 1 evaluates points concurrently; the result does not depend
// on it.
std::vector<SweepRow> gain_grid(std::span<const int> k_set,
                                std::span<const double> lambda_grid,
                                const PhyProfile& phy,
                                const TrafficSpec& traffic_template,
                                WaitForm form = WaitForm::kDeterministicService,
                                int threads = 1);

std::vector<double> linear_grid(double lo, double hi, int points);
std::vector<double> geometric_grid(double lo, double hi, int points);

}  // namespace aggdelay

#endif  // AGGDELAY_SOLVER_H_
