#ifndef AGGDELAY_TOOLS_CLI_OUTPUT_H_
#define AGGDELAY_TOOLS_CLI_OUTPUT_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "aggdelay/sim.h"
#include "aggdelay/solver.h"

namespace aggdelay::cli {

inline constexpr const char* kSweepHeader =
    "k,lambda,erlang_wait_s,service_mean_s,rho,queue_wait_s,system_time_s,"
    "gain_s,stable";

// 12 significant digits, scientific, '.' separator, inf/-inf/nan literals.
std::string format_number(double v);

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);
nlohmann::json sweep_to_json(std::span<const SweepRow> rows);

void write_threshold_csv(std::ostream& os, std::span<const ThresholdResult> rows);
nlohmann::json thresholds_to_json(std::span<const ThresholdResult> rows);

struct OptimalKRow {
  double lambda = 0;
  OptimalK result;
};
void write_optimal_k_csv(std::ostream& os, std::span<const OptimalKRow> rows);
nlohmann::json optimal_k_to_json(std::span<const OptimalKRow> rows);

void write_profiles_csv(std::ostream& os);
nlohmann::json profiles_to_json();

nlohmann::json to_json(const SimResult& r);
// One row per seed.
void write_replications_csv(std::ostream& os,
                            std::span<const std::uint64_t> seeds,
                            std::span<const SimResult> results);

nlohmann::json to_json(const ValidationReport& v);
void write_validation_csv(std::ostream& os, const ValidationReport& v);

}  // namespace aggdelay::cli

#endif  // AGGDELAY_TOOLS_CLI_OUTPUT_H_
