#include "aggdelay/solver.h"

#include <gtest/gtest.h>

#include <random>

#include "aggdelay/error.h"
#include "oracles.h"

namespace aggdelay {
namespace {

PhyProfile b11() { return profile_for(Standard::kDot11b, 11e6); }
TrafficSpec det800() { return {1.0, PayloadDistribution::deterministic(800)}; }

oracle::Params oracle_params(const PhyProfile& p, double payload_bits) {
  return {p.bit_rate, overhead_gamma(p).gamma_total, backoff_moments(p).mean,
          backoff_moments(p).variance, payload_bits, 0};
}

void expect_bracket(const ThresholdResult& r, const PhyProfile& p,
                    const TrafficSpec& t, WaitForm form) {
  ASSERT_TRUE(r.converged);
  if (r.at_lower_bound) return;
  const Gain lo = gain(r.k, p, t.with_lambda(r.lambda_low), form);
  const Gain hi = gain(r.k, p, t.with_lambda(r.lambda_high), form);
  EXPECT_FALSE(lo.non_positive());
  EXPECT_TRUE(hi.non_positive());
  EXPECT_LE(r.lambda_high - r.lambda_low, 1e-6 * r.lambda_high);
}

TEST(LambdaThreshold, Dot11bK5MatchesHandBracket) {
  // G(5, 1400) ~ +58us and G(5, 1410) ~ -44us by hand.
  const auto o = oracle_params(b11(), 800);
  EXPECT_GT(oracle::gain(o, 5, 1400), 0);
  EXPECT_LT(oracle::gain(o, 5, 1410), 0);
  const double reference = oracle::bisect_threshold(o, 5, 1400, 1410);

  const ThresholdResult r = lambda_threshold(5, b11(), det800());
  expect_bracket(r, b11(), det800(), WaitForm::kDeterministicService);
  EXPECT_NEAR(r.lambda_star, reference, reference * 1e-6);
  EXPECT_NEAR(r.lambda_star, 1405.786, 0.01);
  EXPECT_LE(r.iterations, 200);
}

TEST(LambdaThreshold, GrowsWithK) {
  const auto r2 = lambda_threshold(2, b11(), det800());
  const auto r10 = lambda_threshold(10, b11(), det800());
  EXPECT_LT(r2.lambda_star, r10.lambda_star);
}

TEST(LambdaThreshold, NoRootBelowRange) {
  SearchParams s;
  s.lambda_min = 1;
  s.lambda_max = 500;
  const auto r = lambda_threshold(5, b11(), det800(), WaitForm::kDeterministicService, s);
  EXPECT_FALSE(r.converged);
}

TEST(LambdaThreshold, AlreadyBeneficialAtLowerBound) {
  SearchParams s;
  s.lambda_min = 1500;
  s.lambda_max = 1600;
  const auto r = lambda_threshold(5, b11(), det800(), WaitForm::kDeterministicService, s);
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.at_lower_bound);
  EXPECT_EQ(r.lambda_star, 1500);
}

TEST(LambdaThreshold, RejectsBadInput) {
  EXPECT_THROW(lambda_threshold(1, b11(), det800()), DomainError);
  SearchParams s;
  s.lambda_min = 10;
  s.lambda_max = 5;
  EXPECT_THROW(lambda_threshold(3, b11(), det800(), WaitForm::kDeterministicService, s), DomainError);
  s = {};
  s.lambda_min = 0;
  EXPECT_THROW(lambda_threshold(3, b11(), det800(), WaitForm::kDeterministicService, s), DomainError);
  s = {};
  s.scan_points = 1;
  EXPECT_THROW(lambda_threshold(3, b11(), det800(), WaitForm::kDeterministicService, s), DomainError);
}

TEST(LambdaThreshold, MaxIterationsLimitReportsNotConverged) {
  SearchParams s;
  s.max_iterations = 2;
  const auto r = lambda_threshold(5, b11(), det800(), WaitForm::kDeterministicService, s);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 2);
}

TEST(LambdaThreshold, NonDecreasingInKForEveryPreset) {
  for (Standard st : {Standard::kDot11b, Standard::kDot11g}) {
    for (double rate : supported_rates(st)) {
      const PhyProfile p = profile_for(st, rate);
      double prev = 0;
      for (int k = 2; k <= 20; ++k) {
        const auto r = lambda_threshold(k, p, det800());
        expect_bracket(r, p, det800(), WaitForm::kDeterministicService);
        EXPECT_GE(r.lambda_star, prev) << rate << " k=" << k;
        prev = r.lambda_star;
      }
    }
  }
}

TEST(OptimalK, LowLoadPicksOne) {
  const auto r = optimal_k(b11(), det800().with_lambda(50), WaitForm::kDeterministicService, 10);
  EXPECT_EQ(r.k_best, 1);
  EXPECT_TRUE(r.stable);
}

TEST(OptimalK, HighLoadAggregates) {
  const auto o = oracle_params(b11(), 800);
  const auto r = optimal_k(b11(), det800().with_lambda(1500), WaitForm::kDeterministicService, 10);
  EXPECT_GE(r.k_best, 2);
  EXPECT_EQ(r.k_best, oracle::argmin_k(o, 1500, 10));
  EXPECT_EQ(r.metrics.k, r.k_best);
}

TEST(OptimalK, AllUnstable) {
  const auto r = optimal_k(b11(), det800().with_lambda(1e6), WaitForm::kDeterministicService, 6);
  EXPECT_FALSE(r.stable);
  EXPECT_EQ(r.k_best, 6);
  EXPECT_THROW(optimal_k(b11(), det800(), WaitForm::kDeterministicService, 0), DomainError);
}

TEST(OptimalK, MatchesExhaustiveArgmin) {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int i = 0; i < 300; ++i) {
    const auto& rates = supported_rates(Standard::kDot11g);
    PhyProfile p = profile_for(Standard::kDot11g, rates[i % rates.size()]);
    const double bits = 200 + unit(gen) * 4000;
    TrafficSpec t{1, PayloadDistribution::deterministic(bits)};
    const double lambda = stability_limit(1, p, t) * (0.05 + 1.5 * unit(gen));
    const int k_max = 1 + static_cast<int>(unit(gen) * 20);
    const auto r = optimal_k(p, t.with_lambda(lambda), WaitForm::kDeterministicService, k_max);
    const int expected = oracle::argmin_k(oracle_params(p, bits), lambda, k_max);
    if (expected == 0) {
      EXPECT_FALSE(r.stable);
    } else {
      EXPECT_EQ(r.k_best, expected) << i;
    }
  }
}

TEST(GainGrid, KOneIsAllZero) {
  const std::vector<int> ks = {1};
  const auto grid = linear_grid(1, 3000, 50);
  for (const auto& row : gain_grid(ks, grid, b11(), det800())) {
    EXPECT_EQ(row.gain.seconds(), 0.0);
  }
}

TEST(GainGrid, RowOrderAndConsistency) {
  const std::vector<int> ks = {2, 3, 4};
  const std::vector<double> ls = {100, 1400, 1700};
  const auto rows = gain_grid(ks, ls, b11(), det800());
  ASSERT_EQ(rows.size(), 9u);
  for (size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].k, ks[i / 3]);
    EXPECT_EQ(rows[i].lambda, ls[i % 3]);
    EXPECT_EQ(rows[i], to_sweep_row(evaluate(rows[i].k, b11(), det800().with_lambda(rows[i].lambda))));
  }
  // 1700 pps is past the k = 1 limit but the rows are kept.
  EXPECT_EQ(rows[2].gain.kind(), Gain::Kind::kNegativeUnbounded);
}

TEST(GainGrid, OneSignChangePerK) {
  const double limit = stability_limit(1, b11(), det800());
  const auto ls = linear_grid(1, 0.999 * limit, 200);
  std::vector<int> ks;
  for (int k = 2; k <= 10; ++k) ks.push_back(k);
  const auto rows = gain_grid(ks, ls, b11(), det800());
  for (size_t ki = 0; ki < ks.size(); ++ki) {
    int changes = 0;
    for (size_t i = 1; i < ls.size(); ++i) {
      const auto& a = rows[ki * ls.size() + i - 1];
      const auto& b = rows[ki * ls.size() + i];
      changes += a.gain.non_positive() != b.gain.non_positive();
    }
    EXPECT_EQ(changes, 1) << "k=" << ks[ki];
    EXPECT_FALSE(rows[ki * ls.size()].gain.non_positive());
  }
}

TEST(GainGrid, ThreadCountDoesNotChangeResult) {
  std::vector<int> ks;
  for (int k = 1; k <= 12; ++k) ks.push_back(k);
  const auto ls = geometric_grid(1, 2000, 97);
  const auto serial = gain_grid(ks, ls, b11(), det800(), WaitForm::kGeneralPK, 1);
  const auto parallel = gain_grid(ks, ls, b11(), det800(), WaitForm::kGeneralPK, 7);
  EXPECT_EQ(serial, parallel);
}

TEST(GainGrid, RejectsEmptyInput) {
  const std::vector<int> none;
  const std::vector<double> ls = {1.0};
  EXPECT_THROW(gain_grid(none, ls, b11(), det800()), DomainError);
  const std::vector<int> bad = {0};
  EXPECT_THROW(gain_grid(bad, ls, b11(), det800()), DomainError);
}

TEST(Grids, Endpoints) {
  const auto lin = linear_grid(1, 1600, 200);
  EXPECT_EQ(lin.front(), 1);
  EXPECT_EQ(lin.back(), 1600);
  EXPECT_EQ(lin.size(), 200u);
  const auto geo = geometric_grid(2, 2000, 4);
  EXPECT_NEAR(geo[1], 20, 1e-9);
  EXPECT_THROW(linear_grid(5, 5, 3), DomainError);
  EXPECT_THROW(geometric_grid(0, 5, 3), DomainError);
}

}  // namespace
}  // namespace aggdelay
