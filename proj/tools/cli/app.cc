#include "app.h"

#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "config.h"
#include "output.h"

namespace aggdelay::cli {
namespace {

using nlohmann::json;

struct Flags {
  std::optional<std::string> preset;
  std::optional<std::string> config_path;
  bool dump_config = false;

  std::optional<std::string> standard;
  std::optional<double> rate;
  std::optional<double> slot_us, difs_us, sifs_us, preamble_us;
  std::optional<int> cw;
  std::optional<std::string> gamma_mode, backoff_mode;

  std::optional<double> payload_bits, payload_bytes, payload_lo_bits, payload_hi_bits;
  std::optional<std::string> payload_family;
  std::optional<std::string> form;
  std::optional<std::string> k;
  std::optional<std::string> lambda;
  std::optional<std::string> lambda_scale;
  std::optional<int> k_max;

  std::optional<double> lambda_min, lambda_max, tolerance;
  std::optional<int> max_iterations, scan_points;

  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> frames, warmup;
  std::optional<std::string> sources;
  std::optional<int> replications;

  std::optional<std::string> format;
  std::optional<std::string> output;
  std::optional<int> threads;
};

std::vector<double> parse_number_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string("bad number '") + item + "' in " + what);
    }
  }
  if (out.empty()) throw ConfigError(std::string(what) + " is empty");
  return out;
}

KRange parse_k(const std::string& s) {
  auto to_int = [&](const std::string& v) {
    try {
      size_t used = 0;
      int k = std::stoi(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return k;
    } catch (const std::exception&) {
      throw ConfigError("bad --k value '" + s + "' (use N or MIN..MAX)");
    }
  };
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const int k = to_int(s);
    return {k, k};
  }
  return {to_int(s.substr(0, dots)), to_int(s.substr(dots + 2))};
}

// "MIN:MAX:POINTS" grid, or a comma-separated list of rates.
LambdaGrid parse_lambda(const std::string& s, GridScale range_scale) {
  if (s.find(':') != std::string::npos) {
    std::stringstream ss(s);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) {
      throw ConfigError("bad --lambda '" + s + "' (use MIN:MAX:POINTS or a list)");
    }
    LambdaGrid g;
    g.scale = range_scale;
    g.min = parse_number_list(parts[0], "--lambda")[0];
    g.max = parse_number_list(parts[1], "--lambda")[0];
    const double points = parse_number_list(parts[2], "--lambda")[0];
    if (points != static_cast<int>(points)) throw ConfigError("--lambda POINTS must be an integer");
    g.points = static_cast<int>(points);
    return g;
  }
  LambdaGrid g;
  g.scale = GridScale::kList;
  g.values = parse_number_list(s, "--lambda");
  return g;
}

RunConfig build_config(const Flags& f) {
  RunConfig c = f.preset ? preset(*f.preset) : RunConfig{};
  if (f.config_path) {
    std::ifstream in(*f.config_path);
    if (!in) throw ConfigError("cannot open config file " + *f.config_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError("config file " + *f.config_path + ": " + e.what());
    }
    apply_json(j, c);
  }

  if (f.standard || f.rate) {
    const Standard s = f.standard ? parse_standard(*f.standard) : c.phy.standard;
    const double rate = f.rate.value_or(c.phy.bit_rate);
    if (s == Standard::kCustom) {
      c.phy.standard = Standard::kCustom;
      c.phy.bit_rate = rate;
      c.phy.ack_rate = rate;
    } else {
      try {
        c.phy = profile_for(s, rate);
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (f.slot_us) c.phy.slot = from_micros(*f.slot_us);
  if (f.difs_us) c.phy.difs = from_micros(*f.difs_us);
  if (f.sifs_us) c.phy.sifs = from_micros(*f.sifs_us);
  if (f.preamble_us) c.phy.preamble = from_micros(*f.preamble_us);
  if (f.cw) c.phy.cw = *f.cw;
  if (f.gamma_mode || f.backoff_mode) {
    json phy = phy_to_json(c.phy);
    if (f.gamma_mode) phy["gamma_mode"] = *f.gamma_mode;
    if (f.backoff_mode) phy["backoff_mode"] = *f.backoff_mode;
    c.phy = phy_from_json(phy);
  }

  if (f.payload_bits || f.payload_bytes || f.payload_family || f.payload_lo_bits ||
      f.payload_hi_bits) {
    json t = json::object();
    if (f.payload_family) t["payload_family"] = *f.payload_family;
    if (f.payload_bits) t["payload_mean_bits"] = *f.payload_bits;
    if (f.payload_bytes) t["payload_mean_bytes"] = *f.payload_bytes;
    if (f.payload_lo_bits) t["payload_lo_bits"] = *f.payload_lo_bits;
    if (f.payload_hi_bits) t["payload_hi_bits"] = *f.payload_hi_bits;
    apply_json(json{{"traffic", t}}, c);
  }
  if (f.form) c.form = parse_form(*f.form);
  if (f.k) c.k = parse_k(*f.k);
  GridScale range_scale = GridScale::kLinear;
  if (f.lambda_scale) {
    if (*f.lambda_scale == "linear") {
      range_scale = GridScale::kLinear;
    } else if (*f.lambda_scale == "geometric") {
      range_scale = GridScale::kGeometric;
    } else {
      throw ConfigError("--lambda-scale must be linear or geometric");
    }
  }
  if (f.lambda) {
    c.lambda = parse_lambda(*f.lambda, range_scale);
  } else if (f.lambda_scale && c.lambda.scale != GridScale::kList) {
    c.lambda.scale = range_scale;
  }
  if (f.k_max) c.k_max = *f.k_max;

  if (f.lambda_min) c.search.lambda_min = *f.lambda_min;
  if (f.lambda_max) c.search.lambda_max = *f.lambda_max;
  if (f.tolerance) c.search.relative_tolerance = *f.tolerance;
  if (f.max_iterations) c.search.max_iterations = *f.max_iterations;
  if (f.scan_points) c.search.scan_points = *f.scan_points;

  if (f.mode) c.sim.mode = parse_mode(*f.mode);
  if (f.seed) c.sim.seed = *f.seed;
  if (f.frames) c.sim.num_frames = *f.frames;
  if (f.warmup) c.sim.warmup_frames = *f.warmup;
  if (f.sources) c.sim.sources = parse_number_list(*f.sources, "--sources");
  if (f.replications) c.sim.replications = *f.replications;

  if (f.format) {
    if (*f.format == "csv") {
      c.format = OutputFormat::kCsv;
    } else if (*f.format == "json") {
      c.format = OutputFormat::kJson;
    } else {
      throw ConfigError("--format must be csv or json");
    }
  }
  if (f.output) c.output_path = *f.output;
  if (f.threads) c.threads = *f.threads;
  check(c);
  return c;
}

double single_lambda(const RunConfig& c, const char* command) {
  const auto grid = c.lambda.expand();
  if (grid.size() != 1) {
    throw ConfigError(std::string(command) + " needs a single --lambda value");
  }
  return grid.front();
}

SimConfig sim_config(const RunConfig& c, bool mode_given) {
  SimConfig s;
  s.mode = c.sim.mode;
  if (!mode_given && c.k.min == c.k.max && c.k.min >= 2) {
    s.mode = NodeModel::kAggregated;
  }
  if (s.mode == NodeModel::kAggregated) {
    if (c.k.min != c.k.max) throw ConfigError("aggregated simulation needs a single --k");
    s.k = c.k.min;
  } else {
    s.k = 1;
  }
  s.sources = c.sim.sources.empty() ? std::vector<double>{single_lambda(c, "simulate")}
                                    : c.sim.sources;
  s.phy = c.phy;
  s.payload = c.payload;
  s.seed = c.sim.seed;
  s.num_frames = c.sim.num_frames;
  s.warmup_frames = c.sim.warmup_frames;
  try {
    validate(s);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return s;
}

void add_common(CLI::App& cmd, Flags& f) {
  cmd.add_option("--preset", f.preset, "fig3, fig4-<Mbps> or fig5-<Mbps>");
  cmd.add_option("--config", f.config_path, "JSON run configuration");
  cmd.add_flag("--dump-config", f.dump_config, "print the resolved configuration as JSON and exit");
  cmd.add_option("--standard", f.standard, "b, g or custom");
  cmd.add_option("--rate", f.rate, "PHY bit rate, bits/s");
  cmd.add_option("--slot-us", f.slot_us);
  cmd.add_option("--difs-us", f.difs_us);
  cmd.add_option("--sifs-us", f.sifs_us);
  cmd.add_option("--preamble-us", f.preamble_us);
  cmd.add_option("--cw", f.cw, "contention window upper bound");
  cmd.add_option("--gamma-mode", f.gamma_mode, "full or caption-only");
  cmd.add_option("--backoff-mode", f.backoff_mode, "slot-uniform or literal");
  cmd.add_option("--payload-bits", f.payload_bits, "mean payload, bits");
  cmd.add_option("--payload-bytes", f.payload_bytes, "mean payload, bytes");
  cmd.add_option("--payload-family", f.payload_family,
                 "deterministic, exponential or uniform");
  cmd.add_option("--payload-lo-bits", f.payload_lo_bits, "uniform payload lower bound");
  cmd.add_option("--payload-hi-bits", f.payload_hi_bits, "uniform payload upper bound");
  cmd.add_option("--form", f.form, "deterministic-service (det) or general-pk (pk)");
  cmd.add_option("--k", f.k, "batch size N or range MIN..MAX");
  cmd.add_option("--lambda", f.lambda, "rate grid MIN:MAX:POINTS or list R1,R2,...");
  cmd.add_option("--lambda-scale", f.lambda_scale, "linear or geometric");
  cmd.add_option("--format", f.format, "csv or json");
  cmd.add_option("--output", f.output, "output path (default: standard output)");
  cmd.add_option("--threads", f.threads, "worker threads for grid evaluation");
}

void add_search(CLI::App& cmd, Flags& f) {
  cmd.add_option("--lambda-min", f.lambda_min);
  cmd.add_option("--lambda-max", f.lambda_max);
  cmd.add_option("--tolerance", f.tolerance, "relative tolerance on lambda");
  cmd.add_option("--max-iter", f.max_iterations);
  cmd.add_option("--scan-points", f.scan_points);
}

void add_sim(CLI::App& cmd, Flags& f) {
  cmd.add_option("--mode", f.mode, "standard or aggregated");
  cmd.add_option("--seed", f.seed);
  cmd.add_option("--frames", f.frames, "frames tracked to delivery");
  cmd.add_option("--warmup", f.warmup, "leading frames excluded from statistics");
  cmd.add_option("--sources", f.sources, "per-source rates R1,R2,...");
  cmd.add_option("--replications", f.replications, "independent seeds seed, seed+1, ...");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frame-aggregation delay model for IEEE 802.11 DCF", "aggdelay"};
  app.require_subcommand(1);
  Flags f;

  auto* profiles = app.add_subcommand("profiles", "list built-in PHY presets");
  profiles->add_option("--format", f.format, "csv or json");
  auto* gain_cmd = app.add_subcommand("gain", "G(k) at a single (k, lambda)");
  auto* sweep = app.add_subcommand("sweep", "G(k) over a (k, lambda) grid");
  auto* threshold = app.add_subcommand("threshold", "break-even lambda*(k) per k");
  auto* optimal = app.add_subcommand("optimal-k", "delay-minimizing k per lambda");
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo node simulation");
  auto* validate_cmd = app.add_subcommand("validate", "simulation vs analytic F(k)");
  for (auto* cmd : {gain_cmd, sweep, threshold, optimal, simulate_cmd, validate_cmd}) {
    add_common(*cmd, f);
  }
  add_search(*threshold, f);
  optimal->add_option("--k-max", f.k_max);
  add_sim(*simulate_cmd, f);
  add_sim(*validate_cmd, f);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitConfigError;
  }

  int status = kExitOk;
  try {
    if (profiles->parsed()) {
      if (f.format && *f.format == "json") {
        out << profiles_to_json().dump(2) << '\n';
      } else {
        write_profiles_csv(out);
      }
      return kExitOk;
    }

    const RunConfig config = build_config(f);
    if (f.dump_config) {
      out << to_json(config).dump(2) << '\n';
      return kExitOk;
    }

    std::ofstream file;
    if (!config.output_path.empty()) {
      file.open(config.output_path);
      if (!file) throw ConfigError("cannot write " + config.output_path);
    }
    std::ostream& data = config.output_path.empty() ? out : file;
    const bool as_json = config.format == OutputFormat::kJson;
    const TrafficSpec traffic{1.0, config.payload};

    if (gain_cmd->parsed() || sweep->parsed()) {
      const auto ks = config.k.expand();
      const auto grid = config.lambda.expand();
      if (gain_cmd->parsed() && (ks.size() != 1 || grid.size() != 1)) {
        throw ConfigError("gain takes a single --k and a single --lambda; use sweep for grids");
      }
      const auto rows = gain_grid(ks, grid, config.phy, traffic, config.form, config.threads);
      if (as_json) {
        data << sweep_to_json(rows).dump(2) << '\n';
      } else {
        write_sweep_csv(data, rows);
      }
    } else if (threshold->parsed()) {
      std::vector<ThresholdResult> rows;
      for (int k : config.k.expand()) {
        if (k < 2) throw ConfigError("threshold needs k >= 2");
        rows.push_back(lambda_threshold(k, config.phy, traffic, config.form, config.search));
        if (!rows.back().converged) {
          err << "threshold: no sign change found for k=" << k << '\n';
          status = kExitNotConverged;
        }
      }
      if (as_json) {
        data << thresholds_to_json(rows).dump(2) << '\n';
      } else {
        write_threshold_csv(data, rows);
      }
    } else if (optimal->parsed()) {
      std::vector<OptimalKRow> rows;
      for (double lambda : config.lambda.expand()) {
        rows.push_back({lambda, optimal_k(config.phy, traffic.with_lambda(lambda),
                                          config.form, config.k_max)});
      }
      if (as_json) {
        data << optimal_k_to_json(rows).dump(2) << '\n';
      } else {
        write_optimal_k_csv(data, rows);
      }
    } else if (simulate_cmd->parsed() || validate_cmd->parsed()) {
      const SimConfig sc = sim_config(config, f.mode.has_value());
      try {
        if (simulate_cmd->parsed()) {
          std::vector<std::uint64_t> seeds;
          for (int i = 0; i < config.sim.replications; ++i) seeds.push_back(sc.seed + i);
          const auto results = replicate(sc, seeds, config.threads);
          if (as_json) {
            if (results.size() == 1) {
              data << to_json(results.front()).dump(2) << '\n';
            } else {
              json arr = json::array();
              for (size_t i = 0; i < results.size(); ++i) {
                json j = to_json(results[i]);
                j["seed"] = seeds[i];
                arr.push_back(j);
              }
              data << arr.dump(2) << '\n';
            }
          } else {
            write_replications_csv(data, seeds, results);
          }
        } else {
          const ValidationReport report = validate_against_model(sc, config.form);
          if (report.diverged) err << "validate: configuration is unstable (rho >= 1)\n";
          if (as_json) {
            data << to_json(report).dump(2) << '\n';
          } else {
            write_validation_csv(data, report);
          }
        }
      } catch (const std::exception& e) {
        err << "simulation error: " << e.what() << '\n';
        return kExitSimulationError;
      }
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return status;
}

}  // namespace aggdelay::cli
