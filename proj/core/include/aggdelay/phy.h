#ifndef AGGDELAY_PHY_H_
#define AGGDELAY_PHY_H_

#include <span>
#include <string_view>

namespace aggdelay {

enum class Standard { kDot11b, kDot11g, kCustom };

// Every duration built from a microsecond figure goes through here, so the
// microsecond text form can always be recovered exactly.
constexpr double from_micros(double us) { return us / 1e6; }

// How the mean backoff entering the service time is obtained.
enum class BackoffMode {
  // Y = slot * X, X uniform on {0, ..., cw} (cw + 1 outcomes).
  kSlotUniform,
  // Backoff is the fixed constant `literal_backoff`, zero variance.
  kLiteral,
};

// Which terms make up the per-frame constant overhead.
enum class GammaMode {
  kFull,         // difs + 2 preamble + mac + crc + sifs + ack
  kCaptionOnly,  // difs + 2 preamble
};

// Physical-layer timing constants. Durations are seconds, rates bits/s.
struct PhyProfile {
  Standard standard = Standard::kCustom;
  double bit_rate = 11e6;
  double slot = from_micros(20);
  double difs = from_micros(50);
  double sifs = from_micros(10);
  double preamble = from_micros(96);
  int cw = 16;
  int mac_header_bits = 192;
  int crc_bits = 32;
  int ack_bits = 112;
  double ack_rate = 11e6;
  BackoffMode backoff_mode = BackoffMode::kSlotUniform;
  double literal_backoff = from_micros(20);
  GammaMode gamma_mode = GammaMode::kFull;

  double mac_time() const { return mac_header_bits / bit_rate; }
  double crc_time() const { return crc_bits / bit_rate; }
  double ack_time() const { return preamble + ack_bits / ack_rate; }

  friend bool operator==(const PhyProfile&, const PhyProfile&) = default;
};

// Components of gamma. gamma_total is their sum in declaration order.
struct OverheadBreakdown {
  double difs = 0;
  double preamble_x2 = 0;
  double mac = 0;
  double crc = 0;
  double sifs = 0;
  double ack = 0;
  double gamma_total = 0;
};

struct BackoffMoments {
  double mean = 0;      // seconds
  double variance = 0;  // seconds^2
};

// Rates defined for each preset standard, bits/s, ascending.
std::span<const double> supported_rates(Standard standard);

// Preset profile for an 802.11b/g data rate. Throws DomainError
// ("unsupported rate ...") for kCustom or a rate outside the standard's set.
PhyProfile profile_for(Standard standard, double rate);

// Throws DomainError if a rate is non-positive, a duration or bit count is
// negative, or cw is negative.
void validate(const PhyProfile& profile);

OverheadBreakdown overhead_gamma(const PhyProfile& profile);

BackoffMoments backoff_moments(const PhyProfile& profile);

std::string_view to_string(Standard standard);
std::string_view to_string(BackoffMode mode);
std::string_view to_string(GammaMode mode);

}  // namespace aggdelay

#endif  // AGGDELAY_PHY_H_
