#include "config.h"

#include <cmath>
#include <set>
#include <sstream>

namespace aggdelay::cli {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get(const json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
void maybe(const json& j, const char* key, T& out, const std::string& where) {
  if (j.contains(key)) out = get<T>(j, key, where);
}

void maybe_us(const json& j, const char* key, double& seconds,
              const std::string& where) {
  if (j.contains(key)) seconds = from_micros(get<double>(j, key, where));
}

std::string format_mbps(double rate) {
  std::ostringstream os;
  os << rate / 1e6;
  return os.str();
}

const char* to_string(GridScale s) {
  switch (s) {
    case GridScale::kLinear:
      return "linear";
    case GridScale::kGeometric:
      return "geometric";
    case GridScale::kList:
      return "list";
  }
  return "linear";
}

void apply_payload(const json& j, RunConfig& c) {
  const std::string where = "traffic";
  reject_unknown(j,
                 {"payload_family", "payload_mean_bits", "payload_mean_bytes",
                  "payload_lo_bits", "payload_hi_bits", "payload_samples_bits"},
                 where);
  PayloadFamily family = c.payload.family();
  if (j.contains("payload_family")) {
    family = parse_family(get<std::string>(j, "payload_family", where));
  }
  const bool has_bits = j.contains("payload_mean_bits");
  const bool has_bytes = j.contains("payload_mean_bytes");
  if (has_bits && has_bytes) {
    throw ConfigError(
        "payload_mean_bits and payload_mean_bytes are mutually exclusive");
  }
  double mean = c.payload.mean();
  if (has_bits) mean = get<double>(j, "payload_mean_bits", where);
  if (has_bytes) mean = 8.0 * get<double>(j, "payload_mean_bytes", where);

  try {
    switch (family) {
      case PayloadFamily::kDeterministic:
        c.payload = PayloadDistribution::deterministic(mean);
        break;
      case PayloadFamily::kExponential:
        c.payload = PayloadDistribution::exponential(mean);
        break;
      case PayloadFamily::kUniformRange: {
        if (has_bits || has_bytes) {
          throw ConfigError(
              "uniform payloads take payload_lo_bits/payload_hi_bits, not a mean");
        }
        double lo = c.payload.lo(), hi = c.payload.hi();
        if (c.payload.family() != PayloadFamily::kUniformRange) lo = hi = c.payload.mean();
        maybe(j, "payload_lo_bits", lo, where);
        maybe(j, "payload_hi_bits", hi, where);
        c.payload = PayloadDistribution::uniform_range(lo, hi);
        break;
      }
      case PayloadFamily::kEmpirical: {
        if (has_bits || has_bytes) {
          throw ConfigError(
              "empirical payloads take payload_samples_bits, not a mean");
        }
        auto samples = c.payload.samples();
        maybe(j, "payload_samples_bits", samples, where);
        c.payload = PayloadDistribution::empirical(std::move(samples));
        break;
      }
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("traffic: ") + e.what());
  }
  if (family != PayloadFamily::kEmpirical && j.contains("payload_samples_bits")) {
    throw ConfigError("payload_samples_bits needs payload_family \"empirical\"");
  }
  if (family != PayloadFamily::kUniformRange &&
      (j.contains("payload_lo_bits") || j.contains("payload_hi_bits"))) {
    throw ConfigError("payload_lo_bits/payload_hi_bits need payload_family \"uniform\"");
  }
}

json payload_to_json(const PayloadDistribution& p) {
  json j;
  j["payload_family"] = std::string(aggdelay::to_string(p.family()));
  switch (p.family()) {
    case PayloadFamily::kDeterministic:
    case PayloadFamily::kExponential:
      j["payload_mean_bits"] = p.mean();
      break;
    case PayloadFamily::kUniformRange:
      j["payload_lo_bits"] = p.lo();
      j["payload_hi_bits"] = p.hi();
      break;
    case PayloadFamily::kEmpirical:
      j["payload_samples_bits"] = p.samples();
      break;
  }
  return j;
}

}  // namespace

std::vector<double> LambdaGrid::expand() const {
  try {
    switch (scale) {
      case GridScale::kLinear:
        return linear_grid(min, max, points);
      case GridScale::kGeometric:
        return geometric_grid(min, max, points);
      case GridScale::kList:
        break;
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("lambda grid: ") + e.what());
  }
  if (values.empty()) throw ConfigError("lambda list is empty");
  return values;
}

std::vector<int> KRange::expand() const {
  if (min < 1 || max < min) throw ConfigError("k range needs 1 <= min <= max");
  std::vector<int> ks;
  for (int k = min; k <= max; ++k) ks.push_back(k);
  return ks;
}

void check(const RunConfig& c) {
  try {
    validate(c.phy);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("phy: ") + e.what());
  }
  c.k.expand();
  const auto grid = c.lambda.expand();
  for (double l : grid) {
    if (!(l > 0) || !std::isfinite(l)) {
      throw ConfigError("lambda values must be positive and finite");
    }
  }
  if (c.k_max < 1) throw ConfigError("k_max must be >= 1");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  if (c.sim.replications < 1) throw ConfigError("replications must be >= 1");
  if (c.sim.warmup_frames < 0 || c.sim.num_frames <= c.sim.warmup_frames) {
    throw ConfigError("simulation needs num_frames > warmup_frames >= 0");
  }
}

double to_micros(double seconds) {
  double us = seconds * 1e6;
  if (from_micros(us) == seconds) return us;
  double up = us, down = us;
  for (int i = 0; i < 8; ++i) {
    up = std::nextafter(up, INFINITY);
    down = std::nextafter(down, -INFINITY);
    if (from_micros(up) == seconds) return up;
    if (from_micros(down) == seconds) return down;
  }
  return us;
}

json phy_to_json(const PhyProfile& p) {
  return json{
      {"standard", std::string(aggdelay::to_string(p.standard))},
      {"bit_rate_bps", p.bit_rate},
      {"slot_us", to_micros(p.slot)},
      {"difs_us", to_micros(p.difs)},
      {"sifs_us", to_micros(p.sifs)},
      {"preamble_us", to_micros(p.preamble)},
      {"cw", p.cw},
      {"mac_header_bits", p.mac_header_bits},
      {"crc_bits", p.crc_bits},
      {"ack_bits", p.ack_bits},
      {"ack_rate_bps", p.ack_rate},
      {"backoff_mode", std::string(aggdelay::to_string(p.backoff_mode))},
      {"literal_backoff_us", to_micros(p.literal_backoff)},
      {"gamma_mode", std::string(aggdelay::to_string(p.gamma_mode))},
  };
}

PhyProfile phy_from_json(const json& j) {
  const std::string where = "phy";
  reject_unknown(j,
                 {"standard", "rate_bps", "bit_rate_bps", "slot_us", "difs_us",
                  "sifs_us", "preamble_us", "cw", "mac_header_bits", "crc_bits",
                  "ack_bits", "ack_rate_bps", "backoff_mode",
                  "literal_backoff_us", "gamma_mode"},
                 where);
  if (j.contains("rate_bps") && j.contains("bit_rate_bps")) {
    throw ConfigError("phy: rate_bps and bit_rate_bps are aliases; give one");
  }
  const Standard standard =
      j.contains("standard") ? parse_standard(get<std::string>(j, "standard", where))
                             : Standard::kCustom;
  double rate = 11e6;
  maybe(j, "rate_bps", rate, where);
  maybe(j, "bit_rate_bps", rate, where);

  PhyProfile p;
  if (standard != Standard::kCustom) {
    try {
      p = profile_for(standard, rate);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  } else {
    p.standard = Standard::kCustom;
    p.bit_rate = rate;
    p.ack_rate = rate;
  }
  maybe_us(j, "slot_us", p.slot, where);
  maybe_us(j, "difs_us", p.difs, where);
  maybe_us(j, "sifs_us", p.sifs, where);
  maybe_us(j, "preamble_us", p.preamble, where);
  maybe(j, "cw", p.cw, where);
  maybe(j, "mac_header_bits", p.mac_header_bits, where);
  maybe(j, "crc_bits", p.crc_bits, where);
  maybe(j, "ack_bits", p.ack_bits, where);
  maybe(j, "ack_rate_bps", p.ack_rate, where);
  maybe_us(j, "literal_backoff_us", p.literal_backoff, where);
  if (j.contains("backoff_mode")) {
    const auto m = get<std::string>(j, "backoff_mode", where);
    if (m == "slot-uniform") {
      p.backoff_mode = BackoffMode::kSlotUniform;
    } else if (m == "literal") {
      p.backoff_mode = BackoffMode::kLiteral;
    } else {
      throw ConfigError("backoff_mode must be slot-uniform or literal");
    }
  }
  if (j.contains("gamma_mode")) {
    const auto m = get<std::string>(j, "gamma_mode", where);
    if (m == "full") {
      p.gamma_mode = GammaMode::kFull;
    } else if (m == "caption-only") {
      p.gamma_mode = GammaMode::kCaptionOnly;
    } else {
      throw ConfigError("gamma_mode must be full or caption-only");
    }
  }
  try {
    validate(p);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("phy: ") + e.what());
  }
  return p;
}

void apply_json(const json& j, RunConfig& c) {
  reject_unknown(j,
                 {"phy", "traffic", "form", "k", "lambda_pps", "k_max", "search",
                  "simulation", "output", "threads"},
                 "config");
  if (j.contains("phy")) c.phy = phy_from_json(j.at("phy"));
  if (j.contains("traffic")) apply_payload(j.at("traffic"), c);
  if (j.contains("form")) c.form = parse_form(get<std::string>(j, "form", "config"));
  if (j.contains("k")) {
    const auto& k = j.at("k");
    if (k.is_number_integer()) {
      c.k.min = c.k.max = k.get<int>();
    } else {
      reject_unknown(k, {"min", "max"}, "k");
      maybe(k, "min", c.k.min, "k");
      maybe(k, "max", c.k.max, "k");
    }
  }
  if (j.contains("lambda_pps")) {
    const auto& l = j.at("lambda_pps");
    reject_unknown(l, {"scale", "min", "max", "points", "values"}, "lambda_pps");
    if (l.contains("scale")) {
      const auto s = get<std::string>(l, "scale", "lambda_pps");
      if (s == "linear") {
        c.lambda.scale = GridScale::kLinear;
      } else if (s == "geometric") {
        c.lambda.scale = GridScale::kGeometric;
      } else if (s == "list") {
        c.lambda.scale = GridScale::kList;
      } else {
        throw ConfigError("lambda_pps.scale must be linear, geometric or list");
      }
    }
    maybe(l, "min", c.lambda.min, "lambda_pps");
    maybe(l, "max", c.lambda.max, "lambda_pps");
    maybe(l, "points", c.lambda.points, "lambda_pps");
    if (l.contains("values")) {
      c.lambda.values = get<std::vector<double>>(l, "values", "lambda_pps");
      if (!l.contains("scale")) c.lambda.scale = GridScale::kList;
    }
  }
  maybe(j, "k_max", c.k_max, "config");
  if (j.contains("search")) {
    const auto& s = j.at("search");
    reject_unknown(s,
                   {"lambda_min_pps", "lambda_max_pps", "relative_tolerance",
                    "max_iterations", "scan_points"},
                   "search");
    maybe(s, "lambda_min_pps", c.search.lambda_min, "search");
    maybe(s, "lambda_max_pps", c.search.lambda_max, "search");
    maybe(s, "relative_tolerance", c.search.relative_tolerance, "search");
    maybe(s, "max_iterations", c.search.max_iterations, "search");
    maybe(s, "scan_points", c.search.scan_points, "search");
  }
  if (j.contains("simulation")) {
    const auto& s = j.at("simulation");
    reject_unknown(s,
                   {"mode", "seed", "num_frames", "warmup_frames", "sources_pps",
                    "replications"},
                   "simulation");
    if (s.contains("mode")) c.sim.mode = parse_mode(get<std::string>(s, "mode", "simulation"));
    maybe(s, "seed", c.sim.seed, "simulation");
    maybe(s, "num_frames", c.sim.num_frames, "simulation");
    maybe(s, "warmup_frames", c.sim.warmup_frames, "simulation");
    maybe(s, "sources_pps", c.sim.sources, "simulation");
    maybe(s, "replications", c.sim.replications, "simulation");
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    reject_unknown(o, {"format", "path"}, "output");
    if (o.contains("format")) {
      const auto f = get<std::string>(o, "format", "output");
      if (f == "csv") {
        c.format = OutputFormat::kCsv;
      } else if (f == "json") {
        c.format = OutputFormat::kJson;
      } else {
        throw ConfigError("output.format must be csv or json");
      }
    }
    maybe(o, "path", c.output_path, "output");
  }
  maybe(j, "threads", c.threads, "config");
}

RunConfig parse_config(const json& j) {
  RunConfig c;
  apply_json(j, c);
  check(c);
  return c;
}

json to_json(const RunConfig& c) {
  json lambda{{"scale", to_string(c.lambda.scale)},
              {"min", c.lambda.min},
              {"max", c.lambda.max},
              {"points", c.lambda.points}};
  if (c.lambda.scale == GridScale::kList) lambda["values"] = c.lambda.values;
  return json{
      {"phy", phy_to_json(c.phy)},
      {"traffic", payload_to_json(c.payload)},
      {"form", std::string(aggdelay::to_string(c.form))},
      {"k", {{"min", c.k.min}, {"max", c.k.max}}},
      {"lambda_pps", lambda},
      {"k_max", c.k_max},
      {"search",
       {{"lambda_min_pps", c.search.lambda_min},
        {"lambda_max_pps", c.search.lambda_max},
        {"relative_tolerance", c.search.relative_tolerance},
        {"max_iterations", c.search.max_iterations},
        {"scan_points", c.search.scan_points}}},
      {"simulation",
       {{"mode", c.sim.mode == NodeModel::kAggregated ? "aggregated" : "standard"},
        {"seed", c.sim.seed},
        {"num_frames", c.sim.num_frames},
        {"warmup_frames", c.sim.warmup_frames},
        {"sources_pps", c.sim.sources},
        {"replications", c.sim.replications}}},
      {"output",
       {{"format", c.format == OutputFormat::kJson ? "json" : "csv"},
        {"path", c.output_path}}},
      {"threads", c.threads},
  };
}

// Reproduction presets for the three figure families.
//
// From the figure captions: CW = 16, t_backoff = 20us (used as SLOT),
// E[P] = 800 bits, DIFS/preamble per standard (50/96us for 802.11b,
// 28/22.1us for 802.11g), and the rates and k ranges on the axes.
// Filled in from the 802.11b/g standards because the captions omit them:
// SIFS = 10us, MAC header 192 bits, CRC 32 bits, ACK 112 bits sent at the
// data rate after one preamble. The lambda axis range (1..1600 pps, 200
// points) of fig3 is a choice covering the 11 Mbps stable range.
RunConfig preset(const std::string& name) {
  RunConfig c;
  c.payload = PayloadDistribution::deterministic(800);
  c.form = WaitForm::kDeterministicService;
  if (name == "fig3") {
    c.phy = profile_for(Standard::kDot11b, 11e6);
    c.k = {2, 10};
    c.lambda = LambdaGrid{GridScale::kLinear, 1, 1600, 200, {}};
    return c;
  }
  auto rate_preset = [&](const std::string& prefix, Standard standard) -> bool {
    if (name.rfind(prefix, 0) != 0) return false;
    const std::string mbps = name.substr(prefix.size());
    for (double r : supported_rates(standard)) {
      if (format_mbps(r) == mbps) {
        c.phy = profile_for(standard, r);
        c.k = {2, 20};
        return true;
      }
    }
    throw ConfigError("preset " + name + ": no such " + prefix + "<Mbps> rate");
  };
  if (rate_preset("fig4-", Standard::kDot11b)) return c;
  if (rate_preset("fig5-", Standard::kDot11g)) return c;
  throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names = {"fig3"};
  for (double r : supported_rates(Standard::kDot11b)) names.push_back("fig4-" + format_mbps(r));
  for (double r : supported_rates(Standard::kDot11g)) names.push_back("fig5-" + format_mbps(r));
  return names;
}

WaitForm parse_form(const std::string& s) {
  if (s == "deterministic-service" || s == "det" || s == "md1") {
    return WaitForm::kDeterministicService;
  }
  if (s == "general-pk" || s == "pk") return WaitForm::kGeneralPK;
  throw ConfigError("form must be deterministic-service or general-pk, got '" + s + "'");
}

Standard parse_standard(const std::string& s) {
  if (s == "b" || s == "802.11b") return Standard::kDot11b;
  if (s == "g" || s == "802.11g") return Standard::kDot11g;
  if (s == "custom") return Standard::kCustom;
  throw ConfigError("standard must be b, g or custom, got '" + s + "'");
}

PayloadFamily parse_family(const std::string& s) {
  if (s == "deterministic") return PayloadFamily::kDeterministic;
  if (s == "exponential") return PayloadFamily::kExponential;
  if (s == "uniform") return PayloadFamily::kUniformRange;
  if (s == "empirical") return PayloadFamily::kEmpirical;
  throw ConfigError("payload_family must be deterministic, exponential, uniform or empirical");
}

NodeModel parse_mode(const std::string& s) {
  if (s == "standard") return NodeModel::kStandard;
  if (s == "aggregated") return NodeModel::kAggregated;
  throw ConfigError("simulation mode must be standard or aggregated");
}

}  // namespace aggdelay::cli
