#ifndef AGGDELAY_TOOLS_CLI_CONFIG_H_
#define AGGDELAY_TOOLS_CLI_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aggdelay/error.h"
#include "aggdelay/model.h"
#include "aggdelay/sim.h"
#include "aggdelay/solver.h"

namespace aggdelay::cli {

// Raised for malformed or inconsistent configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class GridScale { kLinear, kGeometric, kList };

struct LambdaGrid {
  GridScale scale = GridScale::kLinear;
  double min = 1;
  double max = 1600;
  int points = 200;
  std::vector<double> values;  // kList only

  std::vector<double> expand() const;
  friend bool operator==(const LambdaGrid&, const LambdaGrid&) = default;
};

struct KRange {
  int min = 2;
  int max = 10;

  std::vector<int> expand() const;
  friend bool operator==(const KRange&, const KRange&) = default;
};

enum class OutputFormat { kCsv, kJson };

struct SimSettings {
  NodeModel mode = NodeModel::kStandard;
  std::uint64_t seed = 1;
  std::int64_t num_frames = 100000;
  std::int64_t warmup_frames = 1000;
  // Empty: one source at the single lambda of the grid.
  std::vector<double> sources;
  int replications = 1;

  friend bool operator==(const SimSettings&, const SimSettings&) = default;
};

struct RunConfig {
  PhyProfile phy = profile_for(Standard::kDot11b, 11e6);
  PayloadDistribution payload = PayloadDistribution::deterministic(800);
  WaitForm form = WaitForm::kDeterministicService;
  KRange k;
  LambdaGrid lambda;
  int k_max = 10;
  SearchParams search;
  SimSettings sim;
  OutputFormat format = OutputFormat::kCsv;
  std::string output_path;  // empty: standard output
  int threads = 1;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Throws ConfigError if any invariant of the run configuration fails.
void check(const RunConfig& config);

// Overlays the keys present in `j` onto `config`. Unknown keys are errors.
void apply_json(const nlohmann::json& j, RunConfig& config);
RunConfig parse_config(const nlohmann::json& j);
// Complete serialization; parse_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& config);

nlohmann::json phy_to_json(const PhyProfile& phy);
PhyProfile phy_from_json(const nlohmann::json& j);

// Named reproduction presets: "fig3", "fig4-<Mbps>", "fig5-<Mbps>".
RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

// Microsecond value u with from_micros(u) == seconds exactly, so durations
// survive a JSON round trip. Exact for any value produced by from_micros.
double to_micros(double seconds);

WaitForm parse_form(const std::string& s);
Standard parse_standard(const std::string& s);
PayloadFamily parse_family(const std::string& s);
NodeModel parse_mode(const std::string& s);

}  // namespace aggdelay::cli

#endif  // AGGDELAY_TOOLS_CLI_CONFIG_H_
