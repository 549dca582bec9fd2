#include "output.h"

#include <charconv>
#include <cmath>

#include "config.h"

namespace aggdelay::cli {
namespace {

using nlohmann::json;

// JSON has no infinities; unbounded values travel as the CSV literals.
json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

const char* bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 11);
  return std::string(buf, res.ptr);
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << kSweepHeader << '\n';
  for (const auto& r : rows) {
    os << r.k << ',' << format_number(r.lambda) << ','
       << format_number(r.erlang_wait) << ',' << format_number(r.service_mean)
       << ',' << format_number(r.rho) << ',' << format_number(r.queue_wait)
       << ',' << format_number(r.system_time) << ','
       << format_number(r.gain.seconds()) << ',' << bool_str(r.stable) << '\n';
  }
}

json sweep_to_json(std::span<const SweepRow> rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"k", r.k},
                   {"lambda", r.lambda},
                   {"erlang_wait_s", r.erlang_wait},
                   {"service_mean_s", r.service_mean},
                   {"rho", r.rho},
                   {"queue_wait_s", number_json(r.queue_wait)},
                   {"system_time_s", number_json(r.system_time)},
                   {"gain_s", number_json(r.gain.seconds())},
                   {"stable", r.stable}});
  }
  return out;
}

void write_threshold_csv(std::ostream& os, std::span<const ThresholdResult> rows) {
  os << "k,lambda_star,lambda_low,lambda_high,iterations,converged,at_lower_bound\n";
  for (const auto& r : rows) {
    os << r.k << ',' << format_number(r.lambda_star) << ','
       << format_number(r.lambda_low) << ',' << format_number(r.lambda_high)
       << ',' << r.iterations << ',' << bool_str(r.converged) << ','
       << bool_str(r.at_lower_bound) << '\n';
  }
}

json thresholds_to_json(std::span<const ThresholdResult> rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"k", r.k},
                   {"lambda_star", r.lambda_star},
                   {"lambda_low", r.lambda_low},
                   {"lambda_high", r.lambda_high},
                   {"iterations", r.iterations},
                   {"converged", r.converged},
                   {"at_lower_bound", r.at_lower_bound}});
  }
  return out;
}

void write_optimal_k_csv(std::ostream& os, std::span<const OptimalKRow> rows) {
  os << "lambda,k_best,system_time_s,gain_s,stable\n";
  for (const auto& r : rows) {
    os << format_number(r.lambda) << ',' << r.result.k_best << ','
       << format_number(r.result.metrics.system_time) << ','
       << format_number(r.result.metrics.gain.seconds()) << ','
       << bool_str(r.result.stable) << '\n';
  }
}

json optimal_k_to_json(std::span<const OptimalKRow> rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"lambda", r.lambda},
                   {"k_best", r.result.k_best},
                   {"system_time_s", number_json(r.result.metrics.system_time)},
                   {"gain_s", number_json(r.result.metrics.gain.seconds())},
                   {"stable", r.result.stable}});
  }
  return out;
}

void write_profiles_csv(std::ostream& os) {
  os << "standard,rate_bps,slot_s,difs_s,sifs_s,preamble_s,cw,mac_header_bits,"
        "crc_bits,ack_bits,ack_rate_bps,gamma_s,backoff_mean_s,stability_limit_pps\n";
  for (Standard s : {Standard::kDot11b, Standard::kDot11g}) {
    for (double rate : supported_rates(s)) {
      const PhyProfile p = profile_for(s, rate);
      const TrafficSpec t{1.0, PayloadDistribution::deterministic(800)};
      os << aggdelay::to_string(s) << ',' << format_number(p.bit_rate) << ','
         << format_number(p.slot) << ',' << format_number(p.difs) << ','
         << format_number(p.sifs) << ',' << format_number(p.preamble) << ','
         << p.cw << ',' << p.mac_header_bits << ',' << p.crc_bits << ','
         << p.ack_bits << ',' << format_number(p.ack_rate) << ','
         << format_number(overhead_gamma(p).gamma_total) << ','
         << format_number(backoff_moments(p).mean) << ','
         << format_number(stability_limit(1, p, t)) << '\n';
    }
  }
}

json profiles_to_json() {
  json out = json::array();
  for (Standard s : {Standard::kDot11b, Standard::kDot11g}) {
    for (double rate : supported_rates(s)) {
      const PhyProfile p = profile_for(s, rate);
      json j = phy_to_json(p);
      j["gamma_us"] = to_micros(overhead_gamma(p).gamma_total);
      out.push_back(j);
    }
  }
  return out;
}

json to_json(const SimResult& r) {
  return json{
      {"frames_generated", r.frames_generated},
      {"frames_measured", r.frames_measured},
      {"warmup_frames", r.warmup_frames},
      {"frames_in_flight", r.frames_in_flight},
      {"batches_served", r.batches_served},
      {"horizon_s", r.horizon},
      {"sojourn_mean_s", r.sojourn_mean},
      {"sojourn_stddev_s", r.sojourn_stddev},
      {"ci95_halfwidth_s",
       r.ci95_halfwidth ? json(*r.ci95_halfwidth) : json(nullptr)},
      {"breakdown",
       {{"buffer_wait_s", r.breakdown.buffer_wait},
        {"queue_wait_s", r.breakdown.queue_wait},
        {"service_time_s", r.breakdown.service_time}}},
      {"buffer_wait_ci95_halfwidth_s",
       r.buffer_wait_ci95_halfwidth ? json(*r.buffer_wait_ci95_halfwidth) : json(nullptr)},
      {"backoff_mean_s", r.backoff_mean},
      {"payload_mean_bits", r.payload_mean_bits},
      {"inter_batch_cv", r.inter_batch_cv},
  };
}

void write_replications_csv(std::ostream& os, std::span<const std::uint64_t> seeds,
                            std::span<const SimResult> results) {
  os << "seed,frames_measured,sojourn_mean_s,sojourn_stddev_s,ci95_halfwidth_s,"
        "buffer_wait_s,queue_wait_s,service_time_s,backoff_mean_s,"
        "payload_mean_bits,inter_batch_cv\n";
  for (size_t i = 0; i < results.size(); ++i) {
    const SimResult& r = results[i];
    os << seeds[i] << ',' << r.frames_measured << ','
       << format_number(r.sojourn_mean) << ',' << format_number(r.sojourn_stddev)
       << ','
       << (r.ci95_halfwidth ? format_number(*r.ci95_halfwidth) : std::string("nan"))
       << ',' << format_number(r.breakdown.buffer_wait) << ','
       << format_number(r.breakdown.queue_wait) << ','
       << format_number(r.breakdown.service_time) << ','
       << format_number(r.backoff_mean) << ','
       << format_number(r.payload_mean_bits) << ','
       << format_number(r.inter_batch_cv) << '\n';
  }
}

json to_json(const ValidationReport& v) {
  json j{
      {"k", v.k},
      {"form", std::string(aggdelay::to_string(v.form))},
      {"rho", v.rho},
      {"diverged", v.diverged},
      {"analytic_system_time_s", number_json(v.analytic_system_time)},
      {"analytic_buffer_wait_s", v.analytic_buffer_wait},
  };
  if (v.sim) {
    j["simulation"] = to_json(*v.sim);
    j["absolute_deviation_s"] = v.absolute_deviation;
    j["relative_deviation"] = v.relative_deviation;
    j["analytic_inside_ci95"] = v.analytic_inside_ci95;
    j["inter_batch_cv"] = v.inter_batch_cv;
    j["poisson_batch_cv"] = v.poisson_batch_cv;
  }
  return j;
}

void write_validation_csv(std::ostream& os, const ValidationReport& v) {
  os << "k,rho,diverged,analytic_system_time_s,simulated_sojourn_mean_s,"
        "ci95_halfwidth_s,absolute_deviation_s,relative_deviation,"
        "analytic_inside_ci95,inter_batch_cv\n";
  const bool ran = v.sim.has_value();
  const double nan = std::nan("");
  os << v.k << ',' << format_number(v.rho) << ',' << bool_str(v.diverged) << ','
     << format_number(v.analytic_system_time) << ','
     << format_number(ran ? v.sim->sojourn_mean : nan) << ','
     << format_number(ran && v.sim->ci95_halfwidth ? *v.sim->ci95_halfwidth : nan)
     << ',' << format_number(ran ? v.absolute_deviation : nan) << ','
     << format_number(ran ? v.relative_deviation : nan) << ','
     << bool_str(v.analytic_inside_ci95) << ','
     << format_number(ran ? v.inter_batch_cv : nan) << '\n';
}

}  // namespace aggdelay::cli
