#include "aggdelay/sim.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <queue>
#include <thread>

#include "aggdelay/error.h"
#include "aggdelay/rng.h"

namespace aggdelay {
namespace {

// Welford running mean / variance.
class RunningStats {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  double sample_variance() const {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }

 private:
  std::int64_t n_ = 0;
  double mean_ = 0;
  double m2_ = 0;
};

class PayloadSampler {
 public:
  PayloadSampler(const PayloadDistribution& dist, std::uint64_t seed)
      : dist_(dist), rng_(seed, Substream::kPayloads) {}

  double draw() {
    switch (dist_.family()) {
      case PayloadFamily::kDeterministic:
        return dist_.mean();
      case PayloadFamily::kExponential:
        return rng_.exponential(dist_.mean());
      case PayloadFamily::kUniformRange:
        return dist_.lo() + (dist_.hi() - dist_.lo()) * rng_.uniform();
      case PayloadFamily::kEmpirical: {
        const auto& s = dist_.samples();
        return s[rng_.uniform_int(s.size() - 1)];
      }
    }
    return dist_.mean();
  }

 private:
  const PayloadDistribution& dist_;
  RandomStream rng_;
};

struct Frame {
  std::int64_t index;
  double arrival;
};

struct Batch {
  std::vector<Frame> frames;
  double formed = 0;
  double payload_bits = 0;
};

enum class EventType { kArrival, kDeparture };

struct Event {
  double time;
  std::uint64_t seq;  // breaks time ties in scheduling order
  EventType type;

  bool operator>(const Event& other) const {
    return time != other.time ? time > other.time : seq > other.seq;
  }
};

}  // namespace

double SimConfig::total_rate() const {
  return std::accumulate(sources.begin(), sources.end(), 0.0);
}

TrafficSpec SimConfig::traffic() const {
  return TrafficSpec{total_rate(), payload};
}

void validate(const SimConfig& c) {
  if (c.sources.empty()) throw DomainError("simulation needs at least one source");
  for (double r : c.sources) {
    if (!(r >= 0) || !std::isfinite(r)) {
      throw DomainError("source rates must be non-negative and finite");
    }
  }
  if (!(c.total_rate() > 0)) throw DomainError("total source rate must be > 0");
  if (c.mode == NodeModel::kAggregated && c.k < 2) {
    throw DomainError("aggregated mode needs k >= 2");
  }
  if (c.warmup_frames < 0 || c.num_frames <= c.warmup_frames) {
    throw DomainError("need num_frames > warmup_frames >= 0");
  }
  validate(c.phy);
  validate(c.traffic());
}

SimResult simulate(const SimConfig& config) {
  validate(config);

  const PhyProfile& phy = config.phy;
  const double gamma = overhead_gamma(phy).gamma_total;
  const double lambda = config.total_rate();
  const auto k = static_cast<size_t>(config.batch_size());

  RandomStream arrivals(config.seed, Substream::kArrivals);
  RandomStream backoffs(config.seed, Substream::kBackoffs);
  PayloadSampler payloads(config.payload, config.seed);

  auto draw_backoff = [&]() {
    if (phy.backoff_mode == BackoffMode::kLiteral) return phy.literal_backoff;
    return phy.slot * static_cast<double>(
                          backoffs.uniform_int(static_cast<std::uint64_t>(phy.cw)));
  };

  std::priority_queue<Event, std::vector<Event>, std::greater<>> calendar;
  std::uint64_t seq = 0;
  auto schedule = [&](double t, EventType type) {
    calendar.push(Event{t, seq++, type});
  };

  Batch buffer;
  buffer.frames.reserve(k);
  std::deque<Batch> waiting;
  std::optional<Batch> in_service;
  double service_start = 0;

  RunningStats sojourn, backoff_stats, payload_stats, inter_batch, batch_buffer;
  double sum_buffer = 0, sum_queue = 0, sum_service = 0;
  double last_formed = 0;
  bool have_formed = false;

  SimResult r;
  r.warmup_frames = config.warmup_frames;
  std::int64_t delivered_tracked = 0;
  double now = 0;

  auto start_service = [&](double t) {
    in_service = std::move(waiting.front());
    waiting.pop_front();
    service_start = t;
    const double y = draw_backoff();
    backoff_stats.add(y);
    schedule(t + gamma + y + in_service->payload_bits / phy.bit_rate,
             EventType::kDeparture);
  };

  schedule(arrivals.exponential(1.0 / lambda), EventType::kArrival);
  while (delivered_tracked < config.num_frames) {
    const Event ev = calendar.top();
    calendar.pop();
    now = ev.time;

    if (ev.type == EventType::kArrival) {
      const double bits = payloads.draw();
      payload_stats.add(bits);
      buffer.frames.push_back(Frame{r.frames_generated++, now});
      buffer.payload_bits += bits;
      if (buffer.frames.size() == k) {
        buffer.formed = now;
        if (have_formed) inter_batch.add(now - last_formed);
        last_formed = now;
        have_formed = true;
        waiting.push_back(std::move(buffer));
        buffer = Batch{};
        buffer.frames.reserve(k);
        if (!in_service) start_service(now);
      }
      schedule(now + arrivals.exponential(1.0 / lambda), EventType::kArrival);
      continue;
    }

    // Departure: every frame of the batch is delivered now.
    ++r.batches_served;
    double batch_buffer_sum = 0;
    int batch_measured = 0;
    for (const Frame& f : in_service->frames) {
      if (f.index >= config.num_frames) continue;
      ++delivered_tracked;
      if (f.index < config.warmup_frames) continue;
      const double buffer_wait = in_service->formed - f.arrival;
      const double queue_wait = service_start - in_service->formed;
      const double service = now - service_start;
      sojourn.add(now - f.arrival);
      batch_buffer_sum += buffer_wait;
      ++batch_measured;
      sum_buffer += buffer_wait;
      sum_queue += queue_wait;
      sum_service += service;
    }
    if (batch_measured > 0) batch_buffer.add(batch_buffer_sum / batch_measured);
    in_service.reset();
    if (!waiting.empty()) start_service(now);
  }

  r.horizon = now;
  r.frames_measured = sojourn.count();
  r.frames_in_flight = r.frames_generated - config.num_frames;
  const auto n = static_cast<double>(r.frames_measured);
  r.sojourn_mean = sojourn.mean();
  r.sojourn_stddev = std::sqrt(sojourn.sample_variance());
  if (r.frames_measured >= 2) {
    r.ci95_halfwidth = 1.96 * r.sojourn_stddev / std::sqrt(n);
  }
  r.breakdown = {sum_buffer / n, sum_queue / n, sum_service / n};
  if (batch_buffer.count() >= 2) {
    r.buffer_wait_ci95_halfwidth =
        1.96 * std::sqrt(batch_buffer.sample_variance() /
                         static_cast<double>(batch_buffer.count()));
  }
  r.backoff_mean = backoff_stats.mean();
  r.payload_mean_bits = payload_stats.mean();
  if (inter_batch.count() >= 2 && inter_batch.mean() > 0) {
    r.inter_batch_cv = std::sqrt(inter_batch.sample_variance()) / inter_batch.mean();
  }
  return r;
}

std::vector<SimResult> replicate(const SimConfig& base,
                                 std::span<const std::uint64_t> seeds,
                                 int threads) {
  validate(base);
  std::vector<SimResult> out(seeds.size());
  auto run = [&](size_t i) {
    SimConfig c = base;
    c.seed = seeds[i];
    out[i] = simulate(c);
  };
  const size_t workers = std::max<size_t>(1, std::min<size_t>(
                                                 threads < 1 ? 1 : threads, seeds.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < seeds.size(); ++i) run(i);
    return out;
  }
  std::vector<std::jthread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (size_t i = w; i < seeds.size(); i += workers) run(i);
    });
  }
  pool.clear();
  return out;
}

ValidationReport validate_against_model(const SimConfig& config, WaitForm form) {
  validate(config);
  ValidationReport v;
  v.k = config.batch_size();
  v.form = form;
  v.poisson_batch_cv = 1.0;

  const TrafficSpec traffic = config.traffic();
  const QueueMetrics m = evaluate(v.k, config.phy, traffic, form);
  v.rho = m.rho;
  v.analytic_buffer_wait = m.erlang_wait;
  v.analytic_system_time = m.system_time;
  if (!m.stable) {
    v.diverged = true;
    return v;
  }

  v.sim = simulate(config);
  const SimResult& s = *v.sim;
  v.absolute_deviation = s.sojourn_mean - m.system_time;
  v.relative_deviation = v.absolute_deviation / m.system_time;
  v.analytic_inside_ci95 =
      s.ci95_halfwidth && std::fabs(v.absolute_deviation) <= *s.ci95_halfwidth;
  v.inter_batch_cv = s.inter_batch_cv;
  return v;
}

}  // namespace aggdelay
