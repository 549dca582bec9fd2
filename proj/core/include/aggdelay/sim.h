#ifndef AGGDELAY_SIM_H_
#define AGGDELAY_SIM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "aggdelay/model.h"
#include "aggdelay/phy.h"
#include "aggdelay/traffic.h"

namespace aggdelay {

enum class NodeModel {
  kStandard,    // every frame is transmitted on its own
  kAggregated,  // frames wait in a k-buffer and leave as one frame
};

struct SimConfig {
  NodeModel mode = NodeModel::kStandard;
  int k = 1;  // ignored in kStandard, >= 2 in kAggregated
  // Per-source Poisson rates, superposed into one stream of rate sum().
  std::vector<double> sources = {100.0};
  PhyProfile phy;
  PayloadDistribution payload;
  std::uint64_t seed = 1;
  // The first num_frames arrivals are tracked to delivery; the first
  // warmup_frames of those are excluded from the statistics.
  std::int64_t num_frames = 100000;
  std::int64_t warmup_frames = 0;

  double total_rate() const;
  int batch_size() const { return mode == NodeModel::kStandard ? 1 : k; }
  TrafficSpec traffic() const;
};

// Throws DomainError on an invalid configuration.
void validate(const SimConfig& config);

struct StageBreakdown {
  double buffer_wait = 0;  // arrival to batch formation
  double queue_wait = 0;   // batch formation to start of service
  double service_time = 0;

  friend bool operator==(const StageBreakdown&, const StageBreakdown&) = default;
};

struct SimResult {
  std::int64_t frames_generated = 0;
  std::int64_t frames_measured = 0;
  std::int64_t warmup_frames = 0;
  // Generated but outside the tracked budget at the horizon (still buffered,
  // queued, or beyond num_frames).
  std::int64_t frames_in_flight = 0;
  std::int64_t batches_served = 0;
  double horizon = 0;  // simulated seconds

  double sojourn_mean = 0;
  double sojourn_stddev = 0;
  // 1.96 stddev / sqrt(n); empty when fewer than two frames were measured.
  std::optional<double> ci95_halfwidth;
  StageBreakdown breakdown;
  // 95% half-width for breakdown.buffer_wait, computed over per-batch mean
  // buffer waits (batches fill independently, so these are i.i.d.).
  std::optional<double> buffer_wait_ci95_halfwidth;

  // Exactness anchors, over all transmissions / all generated frames.
  double backoff_mean = 0;
  double payload_mean_bits = 0;
  // Coefficient of variation of times between batch formations. Poisson
  // batch arrivals would give 1; k-batches of a Poisson stream give 1/sqrt(k).
  double inter_batch_cv = 0;

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

// Event-driven FIFO single-server run. Deterministic in (config, seed).
SimResult simulate(const SimConfig& config);

// One SimResult per seed, in seed order, regardless of `threads`.
std::vector<SimResult> replicate(const SimConfig& base,
                                 std::span<const std::uint64_t> seeds,
                                 int threads = 1);

struct ValidationReport {
  int k = 1;
  WaitForm form = WaitForm::kDeterministicService;
  double rho = 0;
  bool diverged = false;  // rho(k) >= 1; no simulation run
  std::optional<SimResult> sim;
  double analytic_system_time = 0;
  double analytic_buffer_wait = 0;
  double absolute_deviation = 0;
  double relative_deviation = 0;
  bool analytic_inside_ci95 = false;
  double inter_batch_cv = 0;
  double poisson_batch_cv = 1;
};

ValidationReport validate_against_model(const SimConfig& config, WaitForm form);

}  // namespace aggdelay

#endif  // AGGDELAY_SIM_H_
