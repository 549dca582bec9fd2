#include "aggdelay/phy.h"

#include <array>
#include <cmath>
#include <sstream>

#include "aggdelay/error.h"

namespace aggdelay {
namespace {

constexpr std::array<double, 4> kDot11bRates = {1e6, 2e6, 5.5e6, 11e6};
constexpr std::array<double, 8> kDot11gRates = {6e6,  9e6,  12e6, 18e6,
                                                24e6, 36e6, 48e6, 54e6};

bool same_rate(double a, double b) {
  return std::fabs(a - b) <= 1e-9 * std::fabs(b);
}

std::string rate_list(std::span<const double> rates) {
  std::ostringstream os;
  for (size_t i = 0; i < rates.size(); ++i) {
    if (i) os << ", ";
    os << rates[i] / 1e6;
  }
  os << " Mbps";
  return os.str();
}

}  // namespace

std::span<const double> supported_rates(Standard standard) {
  switch (standard) {
    case Standard::kDot11b:
      return kDot11bRates;
    case Standard::kDot11g:
      return kDot11gRates;
    case Standard::kCustom:
      break;
  }
  return {};
}

PhyProfile profile_for(Standard standard, double rate) {
  if (standard == Standard::kCustom) {
    throw DomainError("unsupported rate: custom profiles have no preset rates");
  }
  auto rates = supported_rates(standard);
  bool known = false;
  for (double r : rates) known = known || same_rate(rate, r);
  if (!known) {
    std::ostringstream os;
    os << "unsupported rate " << rate << " bps for 802.11"
       << (standard == Standard::kDot11b ? "b" : "g")
       << "; valid rates: " << rate_list(rates);
    throw DomainError(os.str());
  }

  PhyProfile p;
  p.standard = standard;
  p.bit_rate = rate;
  p.ack_rate = rate;
  // Figure caption values: CW = 16, t_backoff = 20us (read as SLOT).
  p.cw = 16;
  p.slot = from_micros(20);
  p.literal_backoff = from_micros(20);
  if (standard == Standard::kDot11b) {
    p.difs = from_micros(50);
    p.preamble = from_micros(96);
  } else {
    p.difs = from_micros(28);
    p.preamble = from_micros(22.1);
  }
  // Not given by the captions; standard 802.11b/g values.
  p.sifs = from_micros(10);
  p.mac_header_bits = 192;
  p.crc_bits = 32;
  p.ack_bits = 112;
  return p;
}

void validate(const PhyProfile& p) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0) || !std::isfinite(v)) {
      throw DomainError(std::string(name) + " must be a positive finite value");
    }
  };
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0) || !std::isfinite(v)) {
      throw DomainError(std::string(name) + " must be non-negative and finite");
    }
  };
  positive(p.bit_rate, "bit_rate");
  positive(p.ack_rate, "ack_rate");
  non_negative(p.slot, "slot");
  non_negative(p.difs, "difs");
  non_negative(p.sifs, "sifs");
  non_negative(p.preamble, "preamble");
  non_negative(p.literal_backoff, "literal_backoff");
  if (p.cw < 0) throw DomainError("cw must be a non-negative integer");
  if (p.mac_header_bits < 0 || p.crc_bits < 0 || p.ack_bits < 0) {
    throw DomainError("bit counts must be non-negative");
  }
}

OverheadBreakdown overhead_gamma(const PhyProfile& p) {
  validate(p);
  OverheadBreakdown o;
  o.difs = p.difs;
  o.preamble_x2 = 2 * p.preamble;
  if (p.gamma_mode == GammaMode::kFull) {
    o.mac = p.mac_time();
    o.crc = p.crc_time();
    o.sifs = p.sifs;
    o.ack = p.ack_time();
  }
  o.gamma_total = o.difs;
  o.gamma_total += o.preamble_x2;
  o.gamma_total += o.mac;
  o.gamma_total += o.crc;
  o.gamma_total += o.sifs;
  o.gamma_total += o.ack;
  return o;
}

BackoffMoments backoff_moments(const PhyProfile& p) {
  validate(p);
  if (p.backoff_mode == BackoffMode::kLiteral) {
    return {p.literal_backoff, 0.0};
  }
  // Discrete uniform on {0, ..., cw}: E = cw/2, Var = cw (cw + 2) / 12.
  const double cw = p.cw;
  return {p.slot * cw / 2.0, p.slot * p.slot * cw * (cw + 2.0) / 12.0};
}

std::string_view to_string(Standard standard) {
  switch (standard) {
    case Standard::kDot11b:
      return "b";
    case Standard::kDot11g:
      return "g";
    case Standard::kCustom:
      return "custom";
  }
  return "custom";
}

std::string_view to_string(BackoffMode mode) {
  return mode == BackoffMode::kLiteral ? "literal" : "slot-uniform";
}

std::string_view to_string(GammaMode mode) {
  return mode == GammaMode::kCaptionOnly ? "caption-only" : "full";
}

}  // namespace aggdelay
