#include "aggdelay/solver.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "aggdelay/error.h"

namespace aggdelay {

ThresholdResult lambda_threshold(int k, const PhyProfile& phy,
                                 const TrafficSpec& traffic_template,
                                 WaitForm form, const SearchParams& search) {
  if (k < 2) throw DomainError("threshold search needs k >= 2");
  const double lambda_max =
      search.lambda_max > 0 ? search.lambda_max
                            : 0.999 * stability_limit(1, phy, traffic_template);
  if (!(search.lambda_min > 0) || !(lambda_max > search.lambda_min) ||
      !std::isfinite(lambda_max)) {
    throw DomainError("search range must satisfy 0 < lambda_min < lambda_max");
  }
  if (!(search.relative_tolerance > 0) || search.max_iterations < 1 ||
      search.scan_points < 2) {
    throw DomainError(
        "search needs tolerance > 0, max_iterations >= 1, scan_points >= 2");
  }

  auto beneficial = [&](double lambda) {
    return gain(k, phy, traffic_template.with_lambda(lambda), form)
        .non_positive();
  };

  ThresholdResult r;
  r.k = k;
  if (beneficial(search.lambda_min)) {
    r.lambda_star = r.lambda_low = r.lambda_high = search.lambda_min;
    r.converged = true;
    r.at_lower_bound = true;
    return r;
  }

  // Geometric scan for the first bracketing pair.
  const auto grid =
      geometric_grid(search.lambda_min, lambda_max, search.scan_points);
  double lo = grid.front();
  double hi = 0;
  bool bracketed = false;
  for (size_t i = 1; i < grid.size(); ++i) {
    if (beneficial(grid[i])) {
      hi = grid[i];
      bracketed = true;
      break;
    }
    lo = grid[i];
  }
  if (!bracketed) {
    r.lambda_low = r.lambda_high = r.lambda_star = lo;
    return r;
  }

  while (hi - lo > search.relative_tolerance * hi &&
         r.iterations < search.max_iterations) {
    const double mid = 0.5 * (lo + hi);
    if (beneficial(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++r.iterations;
  }
  r.lambda_low = lo;
  r.lambda_high = hi;
  r.lambda_star = 0.5 * (lo + hi);
  r.converged = hi - lo <= search.relative_tolerance * hi;
  return r;
}

OptimalK optimal_k(const PhyProfile& phy, const TrafficSpec& traffic,
                   WaitForm form, int k_max) {
  if (k_max < 1) throw DomainError("k_max must be >= 1");
  OptimalK best;
  best.stable = false;
  for (int k = 1; k <= k_max; ++k) {
    QueueMetrics m = evaluate(k, phy, traffic, form);
    if (!m.stable) continue;
    if (!best.stable || m.system_time < best.metrics.system_time) {
      best.k_best = k;
      best.metrics = m;
      best.stable = true;
    }
  }
  if (!best.stable) {
    best.k_best = k_max;
    best.metrics = evaluate(k_max, phy, traffic, form);
  }
  return best;
}

SweepRow to_sweep_row(const QueueMetrics& m) {
  SweepRow row;
  row.k = m.k;
  row.lambda = m.lambda;
  row.erlang_wait = m.erlang_wait;
  row.service_mean = m.service_mean;
  row.rho = m.rho;
  row.queue_wait = m.queue_wait;
  row.system_time = m.system_time;
  row.gain = m.gain;
  row.stable = m.stable;
  return row;
}

std::vector<SweepRow> gain_grid(std::span<const int> k_set,
                                std::span<const double> lambda_grid,
                                const PhyProfile& phy,
                                const TrafficSpec& traffic_template,
                                WaitForm form, int threads) {
  if (k_set.empty() || lambda_grid.empty()) {
    throw DomainError("gain grid needs non-empty k and lambda sets");
  }
  for (int k : k_set) {
    if (k < 1) throw DomainError("k values must be >= 1");
  }
  for (double l : lambda_grid) {
    if (!(l > 0) || !std::isfinite(l)) throw DomainError("lambda values must be > 0");
  }
  validate(phy);

  const size_t n = k_set.size() * lambda_grid.size();
  std::vector<SweepRow> rows(n);
  auto fill = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      const int k = k_set[i / lambda_grid.size()];
      const double lambda = lambda_grid[i % lambda_grid.size()];
      rows[i] = to_sweep_row(
          evaluate(k, phy, traffic_template.with_lambda(lambda), form));
    }
  };

  const size_t workers =
      std::clamp<size_t>(threads < 1 ? 1 : static_cast<size_t>(threads), 1, n);
  if (workers == 1) {
    fill(0, n);
    return rows;
  }
  std::vector<std::jthread> pool;
  const size_t chunk = (n + workers - 1) / workers;
  for (size_t begin = 0; begin < n; begin += chunk) {
    pool.emplace_back(fill, begin, std::min(n, begin + chunk));
  }
  pool.clear();
  return rows;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 2 || !(hi > lo)) {
    throw DomainError("grid needs min < max and at least 2 points");
  }
  std::vector<double> g(points);
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) g[i] = lo + step * i;
  g.back() = hi;
  return g;
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (points < 2 || !(hi > lo) || !(lo > 0)) {
    throw DomainError("geometric grid needs 0 < min < max and at least 2 points");
  }
  std::vector<double> g(points);
  const double ratio = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) g[i] = lo * std::exp(ratio * i);
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace aggdelay
