#include "aggdelay/model.h"

#include <gtest/gtest.h>

#include <random>

#include "aggdelay/error.h"
#include "oracles.h"

namespace aggdelay {
namespace {

// Frozen from a separate hand evaluation of the 802.11b 11 Mbps preset with
// E[P] = 800 bits: gamma = 378.545us, backoff mean 160us.
constexpr double kF1At100Us = 631.1718220197248;
constexpr double kF5At100Us = 20910.47070008329;
constexpr double kF1At1500Us = 3983.9733439427137;
constexpr double kF5At1500Us = 2402.9115535874275;

PhyProfile b11() { return profile_for(Standard::kDot11b, 11e6); }
TrafficSpec det800(double lambda) {
  return {lambda, PayloadDistribution::deterministic(800)};
}

TEST(ErlangWait, ClosedForm) {
  EXPECT_EQ(erlang_wait(1, 123.0), 0.0);
  EXPECT_DOUBLE_EQ(erlang_wait(5, 100), 0.02);
  EXPECT_DOUBLE_EQ(erlang_wait(3, 1000), 1e-3);
  EXPECT_THROW(erlang_wait(0, 1), DomainError);
  EXPECT_THROW(erlang_wait(2, 0), DomainError);
  EXPECT_THROW(erlang_wait(2, -5), DomainError);
}

TEST(ErlangWait, AgreesWithSampledBatches) {
  const double sampled = oracle::sampled_buffer_wait(5, 100, 200000, 7);
  EXPECT_NEAR(sampled, 0.02, 0.02 * 0.01);
}

TEST(ErlangWait, MonotoneInKAndLambda) {
  for (int k = 2; k < 40; ++k) {
    EXPECT_LT(erlang_wait(k, 50), erlang_wait(k + 1, 50));
    EXPECT_GT(erlang_wait(k, 50), erlang_wait(k, 51));
  }
}

TEST(ServiceTime, Dot11bExamples) {
  EXPECT_NEAR(service_time(1, b11(), det800(1), 160e-6) * 1e6, 611.2727273, 1e-6);
  EXPECT_NEAR(service_time(5, b11(), det800(1), 160e-6) * 1e6, 902.1818182, 1e-6);
  EXPECT_DOUBLE_EQ(service_time(1, b11(), det800(1)), service_time(1, b11(), det800(1), 160e-6));
}

TEST(ServiceTime, PurePayloadTime) {
  PhyProfile p;
  p.difs = p.sifs = p.preamble = 0;
  p.mac_header_bits = p.crc_bits = p.ack_bits = 0;
  TrafficSpec t{1, PayloadDistribution::deterministic(p.bit_rate)};
  EXPECT_DOUBLE_EQ(service_time(1, p, t, 0.0), 1.0);
  EXPECT_THROW(service_time(0, p, t, 0.0), DomainError);
}

TEST(ServiceVariance, Examples) {
  PhyProfile p = b11();
  p.cw = 0;
  EXPECT_EQ(service_variance(3, p, det800(1)), 0.0);

  EXPECT_NEAR(service_variance(4, b11(), det800(1)), 9600e-12, 1e-22);

  TrafficSpec expo{1, PayloadDistribution::exponential(800)};
  const double expected = 2 * (800 / 11e6) * (800 / 11e6);
  EXPECT_NEAR(service_variance(2, p, expo), expected, expected * 1e-12);
  EXPECT_NEAR(expected, 1.058e-8, 1e-11);
  EXPECT_THROW(service_variance(0, p, expo), DomainError);
}

TEST(QueueWait, Dot11bK1Lambda100) {
  const double w = queue_wait(1, b11(), det800(100));
  EXPECT_NEAR(w * 1e6, kF1At100Us - 611.2727272727, 1e-6);
  EXPECT_NEAR(w * 1e6, 19.9, 0.05);
}

TEST(QueueWait, UnstableIsUnbounded) {
  const double limit = stability_limit(1, b11(), det800(1));
  EXPECT_EQ(queue_wait(1, b11(), det800(limit * 1.01)), kUnbounded);
  EXPECT_EQ(system_time(1, b11(), det800(limit * 1.01)), kUnbounded);
  EXPECT_EQ(queue_wait(3, b11(), det800(1e6)), kUnbounded);
}

TEST(QueueWait, GeneralPKReducesToDeterministicWithoutVariance) {
  PhyProfile p = b11();
  p.cw = 0;
  for (double lambda : {10.0, 300.0, 900.0, 1700.0}) {
    for (int k : {1, 2, 7}) {
      const double a = queue_wait(k, p, det800(lambda), WaitForm::kGeneralPK);
      const double b = queue_wait(k, p, det800(lambda), WaitForm::kDeterministicService);
      if (std::isinf(b)) {
        EXPECT_TRUE(std::isinf(a));
        continue;
      }
      EXPECT_LE(std::fabs(a - b), 1e-12 * b) << k << " " << lambda;
    }
  }
}

TEST(QueueWait, GeneralPKDominatesWithVariance) {
  TrafficSpec expo{500, PayloadDistribution::exponential(800)};
  for (int k = 1; k <= 10; ++k) {
    EXPECT_GT(queue_wait(k, b11(), expo, WaitForm::kGeneralPK),
              queue_wait(k, b11(), expo, WaitForm::kDeterministicService));
  }
}

TEST(QueueWait, MonotoneAndDivergesNearSaturation) {
  for (int k : {1, 4}) {
    const double limit = stability_limit(k, b11(), det800(1));
    double prev_w = -1, prev_f = -1;
    for (int i = 1; i < 100; ++i) {
      const double lambda = limit * i / 100.0;
      const double w = queue_wait(k, b11(), det800(lambda));
      ASSERT_GT(w, prev_w);
      prev_w = w;
      if (k == 1) {
        const double f = system_time(k, b11(), det800(lambda));
        ASSERT_GT(f, prev_f);
        prev_f = f;
      }
    }
    const double w90 = queue_wait(k, b11(), det800(0.9 * limit));
    const double w999 = queue_wait(k, b11(), det800(0.999 * limit));
    EXPECT_GE(w999, 10 * w90);
  }
}

TEST(SystemTime, Dot11bAnchors) {
  EXPECT_NEAR(system_time(1, b11(), det800(100)) * 1e6, kF1At100Us, 1e-6);
  EXPECT_NEAR(system_time(5, b11(), det800(100)) * 1e6, kF5At100Us, 1e-6);
  EXPECT_NEAR(system_time(1, b11(), det800(1500)) * 1e6, kF1At1500Us, 1e-6);
  EXPECT_NEAR(system_time(5, b11(), det800(1500)) * 1e6, kF5At1500Us, 1e-6);
}

TEST(Gain, Anchors) {
  EXPECT_EQ(gain(1, b11(), det800(100)), Gain::zero());
  const Gain low = gain(5, b11(), det800(100));
  ASSERT_TRUE(low.finite());
  EXPECT_NEAR(low.seconds() * 1e6, kF5At100Us - kF1At100Us, 1e-6);
  EXPECT_NEAR(low.seconds() * 1e6, 20279.3, 0.1);
  const Gain high = gain(5, b11(), det800(1500));
  ASSERT_TRUE(high.finite());
  EXPECT_NEAR(high.seconds() * 1e6, kF5At1500Us - kF1At1500Us, 1e-6);
  EXPECT_TRUE(high.non_positive());
}

TEST(Gain, ExtendedArithmetic) {
  const double limit1 = stability_limit(1, b11(), det800(1));
  const Gain g = gain(5, b11(), det800(limit1 * 1.05));
  EXPECT_EQ(g.kind(), Gain::Kind::kNegativeUnbounded);
  EXPECT_EQ(g.seconds(), -kUnbounded);
  EXPECT_TRUE(g.non_positive());

  const Gain both = gain(5, b11(), det800(1e7));
  EXPECT_EQ(both.kind(), Gain::Kind::kBothUnstable);
  EXPECT_TRUE(std::isnan(both.seconds()));
  EXPECT_FALSE(both.non_positive());

  EXPECT_EQ(Gain::between(kUnbounded, 1.0).kind(), Gain::Kind::kPositiveUnbounded);
  // k = 1 is zero even when unstable.
  EXPECT_EQ(gain(1, b11(), det800(1e7)), Gain::zero());
}

TEST(Gain, MatchesIndependentOracle) {
  const auto o = overhead_gamma(b11());
  const oracle::Params p{11e6, o.gamma_total, 160e-6, 9600e-12, 800, 0};
  for (int k = 2; k <= 10; ++k) {
    for (double lambda = 50; lambda < 1700; lambda += 97) {
      const double expected = oracle::gain(p, k, lambda);
      const double got = gain(k, b11(), det800(lambda)).seconds();
      if (std::isinf(expected)) {
        EXPECT_EQ(got, expected);
      } else {
        EXPECT_NEAR(got, expected, 1e-12 + 1e-10 * std::fabs(expected));
      }
    }
  }
}

// Random valid configurations; every QueueMetrics must satisfy its type
// invariants.
TEST(Evaluate, InvariantsOnRandomConfigs) {
  std::mt19937_64 gen(20240611);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int trial = 0; trial < 2000; ++trial) {
    PhyProfile p = unit(gen) < 0.5 ? profile_for(Standard::kDot11b, 11e6)
                                   : profile_for(Standard::kDot11g, 24e6);
    p.cw = static_cast<int>(unit(gen) * 64);
    const double mean = 100 + unit(gen) * 12000;
    TrafficSpec t{1 + unit(gen) * 5000, unit(gen) < 0.5
                                           ? PayloadDistribution::deterministic(mean)
                                           : PayloadDistribution::exponential(mean)};
    const int k = 1 + static_cast<int>(unit(gen) * 30);
    const auto form = unit(gen) < 0.5 ? WaitForm::kGeneralPK : WaitForm::kDeterministicService;
    const QueueMetrics m = evaluate(k, p, t, form);

    ASSERT_EQ(m.erlang_wait, (k - 1) / (2 * t.lambda_total));
    ASSERT_EQ(m.erlang_wait == 0, k == 1);
    ASSERT_LE(std::fabs(m.lambda_a * k - t.lambda_total), 1e-15 * t.lambda_total);
    ASSERT_EQ(m.rho, m.lambda_a * m.service_mean);
    ASSERT_EQ(m.stable, m.rho < 1);
    if (!m.stable) {
      ASSERT_EQ(m.queue_wait, kUnbounded);
      ASSERT_EQ(m.system_time, kUnbounded);
    } else {
      ASSERT_EQ(m.system_time, m.erlang_wait + m.service_mean + m.queue_wait);
    }
    ASSERT_EQ(m.queue_wait, queue_wait(k, p, t, form));
    ASSERT_EQ(m.gain, gain(k, p, t, form));
    if (k == 1) ASSERT_EQ(m.gain.seconds(), 0.0);
  }
}

}  // namespace
}  // namespace aggdelay
