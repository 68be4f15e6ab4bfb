#include "codedxbar/simulator.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <numeric>


#include "codedxbar/coding.hpp"
#include "codedxbar/errors.hpp"
#include "codedxbar/rate_region.hpp"
#include "codedxbar/schedulers.hpp"

namespace codedxbar {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Fraction {
  std::uint64_t num;
  std::uint64_t den;
};

std::vector<Fraction> arrival_probabilities(const RateVector& rates) {
  std::vector<Fraction> out;
  for (const Rational& r : rates) {
    if (r < 0 || r > 1) throw ValidationError("arrival rate " + to_string(r) + " outside [0, 1]");
    if (!r.get_den().fits_ulong_p()) throw ValidationError("rate denominator too large: " + to_string(r));
    out.push_back({r.get_num().get_ui(), r.get_den().get_ui()});
  }
  return out;
}

void check_rates(const SimConfig& config) {
  if (config.rates.size() != config.pattern.num_flows())
    throw DimensionError("rate vector has " + std::to_string(config.rates.size()) +
                         " entries, pattern has " + std::to_string(config.pattern.num_flows()) +
                         " flows");
  if (config.slots < 0) throw ValidationError("negative horizon");
}

Payload random_payload(std::size_t length, Rng& rng) {
  Payload p(length);
  for (std::size_t i = 0; i < length; i += 8) {
    std::uint64_t word = rng.next();
    for (std::size_t b = i; b < std::min(length, i + 8); ++b, word >>= 8)
      p[b] = static_cast<std::uint8_t>(word);
  }
  return p;
}

VertexSet choose_coded(const SimConfig& config, const ConflictGraph& graph,
                       const std::vector<std::int64_t>& weights, VertexSet previous, Rng& rng) {
  if (config.policy == "mwss") return mwss_exact(graph, weights);
  return mwss_randomized(graph, weights, previous, config.candidates, rng);
}

void require_coded_policy(const SimConfig& config) {
  if (config.policy != "mwss" && config.policy != "mwss-rand")
    throw ValidationError("policy '" + config.policy + "' is not an online coded policy");
}

struct Streams {
  explicit Streams(std::uint64_t seed)
      : arrivals(mix_seed(seed, 1)), payloads(mix_seed(seed, 2)), coding(mix_seed(seed, 3)),
        policy(mix_seed(seed, 4)) {}
  Rng arrivals;
  Rng payloads;
  Rng coding;
  Rng policy;
};

Metrics empty_metrics(const TrafficPattern& pattern, long slots) {
  Metrics m;
  m.slots = slots;
  m.arrivals.assign(pattern.num_flows(), 0);
  m.delivered.assign(pattern.num_subflows(), 0);
  m.decoded.assign(pattern.num_subflows(), 0);
  return m;
}

void finish(Metrics& m, const SimConfig& config, const std::vector<long>& per_subflow, long block,
            bool delay_applicable) {
  const TrafficPattern& pattern = config.pattern;
  m.throughput_per_flow.assign(pattern.num_flows(), 0.0);
  for (std::size_t f = 0; f < pattern.num_flows(); ++f) {
    const std::size_t base = pattern.first_subflow(f);
    const std::size_t fanout = pattern.flows()[f].fanout.size();
    long total = 0;
    for (std::size_t j = 0; j < fanout; ++j) total += per_subflow[base + j];
    if (m.slots > 0)
      m.throughput_per_flow[f] = static_cast<double>(total) /
                                 (static_cast<double>(m.slots) * static_cast<double>(fanout));
  }
  if (!delay_applicable || m.delays.empty()) {
    m.mean_delay = kNaN;
    m.p95_delay = kNaN;
  } else {
    std::vector<long> sorted = m.delays;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0;
    for (long d : sorted) sum += static_cast<double>(d);
    m.mean_delay = sum / static_cast<double>(sorted.size());
    // nearest rank
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(sorted.size())));
    m.p95_delay = static_cast<double>(sorted[std::max<std::size_t>(rank, 1) - 1]);
  }
  double sum = 0;
  for (auto b : m.backlog) sum += static_cast<double>(b);
  m.mean_backlog = m.backlog.empty() ? 0.0 : sum / static_cast<double>(m.backlog.size());
  m.backlog_slope = backlog_slope(m.backlog, block);
  m.stable = m.backlog_slope < config.stability_threshold && m.decode_failures == 0;
}

// Per-packet decode progress of one flow batch.
struct Tracker {
  std::vector<long> arrival;
  std::vector<std::uint32_t> outputs_done;
};

void record_decodes(const PolicyDecision& decision, const TrafficPattern& pattern,
                    std::vector<Tracker>& trackers, long slot, Metrics& m) {
  for (const FlowService& s : decision.services) {
    Tracker& tr = trackers[static_cast<std::size_t>(s.flow)];
    const std::size_t fanout = pattern.flows()[static_cast<std::size_t>(s.flow)].fanout.size();
    for (std::size_t i = 0; i < s.delivered.size(); ++i) {
      const auto sf = static_cast<std::size_t>(s.delivered[i]);
      ++m.delivered[sf];
      for (std::size_t idx : s.decoded[i]) {
        ++m.decoded[sf];
        if (++tr.outputs_done[idx] == fanout) m.delays.push_back(slot - tr.arrival[idx]);
      }
    }
  }
}

long count_unstable(const ConflictGraph& graph, VertexSet config) {
  return graph.is_stable(config) ? 0 : 1;
}

}  // namespace

bool is_known_policy(const std::string& policy) {
  return policy == "mwss" || policy == "mwss-rand" || policy == "offline" ||
         policy == "uncoded-rand";
}

SimMode default_mode(const std::string& policy) {
  if (policy == "mwss" || policy == "mwss-rand") return SimMode::kFiniteHorizon;
  if (policy == "offline") return SimMode::kOffline;
  if (policy == "uncoded-rand") return SimMode::kUncoded;
  throw ValidationError("unknown policy '" + policy + "'");
}

std::vector<bool> bernoulli_arrivals(const RateVector& rates, Rng& rng) {
  std::vector<bool> out;
  for (const Fraction& p : arrival_probabilities(rates)) out.push_back(rng.bernoulli(p.num, p.den));
  return out;
}

long batch_length(long delta, const Rational& epsilon) {
  if (delta < 1) throw ValidationError("delta must be positive");
  if (epsilon < 0) throw ValidationError("epsilon must be nonnegative");
  Rational d0 = (1 + epsilon) * delta;
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), d0.get_num_mpz_t(), d0.get_den_mpz_t());
  return c.get_si();
}

double backlog_slope(const std::vector<std::int64_t>& series, long block) {
  if (block < 1) block = 1;
  const std::size_t start = series.size() / 2;
  std::vector<double> ys;
  for (std::size_t i = start; i + static_cast<std::size_t>(block) <= series.size();
       i += static_cast<std::size_t>(block)) {
    double s = 0;
    for (std::size_t j = i; j < i + static_cast<std::size_t>(block); ++j) s += static_cast<double>(series[j]);
    ys.push_back(s / static_cast<double>(block));
  }
  const auto n = static_cast<double>(ys.size());
  if (ys.size() < 2) return 0.0;
  const double xbar = (n - 1) / 2;
  double ybar = 0;
  for (double y : ys) ybar += y;
  ybar /= n;
  double sxy = 0;
  double sxx = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double dx = static_cast<double>(i) - xbar;
    sxy += dx * (ys[i] - ybar);
    sxx += dx * dx;
  }
  return sxy / sxx / static_cast<double>(block);
}

Metrics run_online(const SimConfig& config) {
  check_rates(config);
  require_coded_policy(config);
  const TrafficPattern& pattern = config.pattern;
  const ConflictGraph graph = build_enhanced_conflict_graph(pattern);
  const GaloisField& field = GaloisField::get(config.field_order);
  const auto probs = arrival_probabilities(config.rates);
  Streams rng(config.seed);
  Metrics m = empty_metrics(pattern, config.slots);

  std::vector<CodedFlow> flows;
  for (std::size_t f = 0; f < pattern.num_flows(); ++f)
    flows.emplace_back(static_cast<int>(f), 0, pattern.flows()[f].fanout.size(), field,
                       config.payload_length);
  std::vector<Tracker> trackers(pattern.num_flows());
  std::vector<std::int64_t> x(pattern.num_subflows(), 0);
  VertexSet previous;

  for (long t = 0; t < config.slots; ++t) {
    const VertexSet chosen = choose_coded(config, graph, x, previous, rng.policy);
    if (config.check_invariants) m.invalid_configurations += count_unstable(graph, chosen);
    const PolicyDecision decision = serve_coded(pattern, field, chosen, flows, rng.coding);
    previous = chosen;
    record_decodes(decision, pattern, trackers, t, m);
    for (const FlowService& s : decision.services) {
      m.wasted_transmissions += static_cast<long>(s.subflows.size() - s.delivered.size());
      for (int sf : s.delivered) --x[static_cast<std::size_t>(sf)];
    }

    for (std::size_t f = 0; f < pattern.num_flows(); ++f) {
      if (!rng.arrivals.bernoulli(probs[f].num, probs[f].den)) continue;
      flows[f].pool.add(random_payload(config.payload_length, rng.payloads));
      trackers[f].arrival.push_back(t);
      trackers[f].outputs_done.push_back(0);
      ++m.arrivals[f];
      const std::size_t base = pattern.first_subflow(f);
      for (std::size_t j = 0; j < pattern.flows()[f].fanout.size(); ++j) ++x[base + j];
    }

    std::int64_t total = 0;
    for (std::size_t s = 0; s < x.size(); ++s) {
      total += x[s];
      if (config.check_invariants) {
        const auto f = static_cast<std::size_t>(pattern.subflows()[s].flow);
        const std::size_t pos = s - pattern.first_subflow(f);
        const auto held = static_cast<std::int64_t>(flows[f].pool.size()) -
                          static_cast<std::int64_t>(flows[f].receivers[pos].rank());
        if (x[s] < 0 || m.arrivals[f] != x[s] + m.delivered[s] || held != x[s])
          ++m.conservation_violations;
      }
    }
    m.backlog.push_back(total);
  }
  finish(m, config, m.delivered, 1, false);
  return m;
}

namespace {

struct Batch {
  long index = 0;
  long window_start = 0;
  long ready_slot = 0;
  long frame_start = -1;
  long kappa = 0;
  long clearance = 0;
  std::size_t round_robin = 0;
  std::vector<std::vector<Payload>> originals;  // per flow, arrival order
  std::vector<Tracker> trackers;
  std::vector<CodedFlow> flows;

  Batch(long k, long start, const TrafficPattern& pattern, const GaloisField& field,
        std::size_t payload_length)
      : index(k), window_start(start), originals(pattern.num_flows()),
        trackers(pattern.num_flows()) {
    for (std::size_t f = 0; f < pattern.num_flows(); ++f)
      flows.emplace_back(static_cast<int>(f), k, pattern.flows()[f].fanout.size(), field,
                         payload_length);
  }

  std::size_t packets() const {
    std::size_t n = 0;
    for (const auto& o : originals) n += o.size();
    return n;
  }

  // makes visible every arrival at batch slot < cutoff
  void reveal(long cutoff) {
    for (std::size_t f = 0; f < flows.size(); ++f) {
      PacketPool& pool = flows[f].pool;
      while (pool.size() < originals[f].size() &&
             trackers[f].arrival[pool.size()] - window_start < cutoff)
        pool.add(originals[f][pool.size()]);
    }
  }

  std::vector<std::int64_t> deficiency(const TrafficPattern& pattern) const {
    std::vector<std::int64_t> w(pattern.num_subflows(), 0);
    for (std::size_t s = 0; s < w.size(); ++s) {
      const auto f = static_cast<std::size_t>(pattern.subflows()[s].flow);
      w[s] = static_cast<std::int64_t>(flows[f].pool.size()) -
             static_cast<std::int64_t>(flows[f].receivers[s - pattern.first_subflow(f)].rank());
    }
    return w;
  }

  // arrivals not yet delivered, per sub-flow, counting hidden packets too
  std::int64_t outstanding(const TrafficPattern& pattern, std::size_t s) const {
    const auto f = static_cast<std::size_t>(pattern.subflows()[s].flow);
    return static_cast<std::int64_t>(originals[f].size()) -
           static_cast<std::int64_t>(flows[f].receivers[s - pattern.first_subflow(f)].rank());
  }

  /// Decodes every receiver and compares with the originals.
  bool verify() const {
    for (std::size_t f = 0; f < flows.size(); ++f)
      for (const ReceiverState& r : flows[f].receivers) {
        DecodeResult d;
        try {
          d = r.decode(originals[f].size());
        } catch (const IntegrityError&) {
          return false;
        }
        if (!d.ready || d.payloads != originals[f]) return false;
      }
    return true;
  }
};

// Round-robin clearance: from the pointer onward, add every sub-flow with
// positive deficiency that does not conflict with those already chosen.
VertexSet clearance_group(const ConflictGraph& graph, const std::vector<std::int64_t>& deficiency,
                          std::size_t& pointer) {
  const std::size_t n = deficiency.size();
  VertexSet chosen;
  bool first = true;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = (pointer + i) % n;
    if (deficiency[s] <= 0) continue;
    if (!(graph.neighbors(static_cast<int>(s)) & chosen).empty()) continue;
    chosen.insert(static_cast<int>(s));
    if (first) {
      pointer = (s + 1) % n;
      first = false;
    }
  }
  return chosen;
}

}  // namespace

Metrics run_finite_horizon(const SimConfig& config) {
  check_rates(config);
  require_coded_policy(config);
  const TrafficPattern& pattern = config.pattern;
  const ConflictGraph graph = build_enhanced_conflict_graph(pattern);
  const GaloisField& field = GaloisField::get(config.field_order);
  const auto probs = arrival_probabilities(config.rates);
  const long delta = config.delta;
  const long delta0 = batch_length(delta, config.epsilon);
  if (config.slots < 10 * delta0)
    throw ValidationError("finite-horizon runs need at least 10 batch lengths (" +
                          std::to_string(10 * delta0) + " slots)");
  Streams rng(config.seed);
  Metrics m = empty_metrics(pattern, config.slots);
  std::vector<std::int64_t> x(pattern.num_subflows(), 0);

  std::deque<Batch> queue;  // fully arrived, front is the one in service
  std::optional<Batch> arriving(std::in_place, 0, 0, pattern, field, config.payload_length);
  bool active = false;
  VertexSet previous;
  long busy_run = 0;

  for (long t = 0;; ++t) {
    const bool horizon = t < config.slots;
    if (t > 0 && t % delta0 == 0 && t <= config.slots && arriving) {
      arriving->ready_slot = t;
      queue.push_back(std::move(*arriving));
      arriving.reset();
      if (t < config.slots)
        arriving.emplace(t / delta0, t, pattern, field, config.payload_length);
    }
    if (t == config.slots && arriving) {
      if (config.drain) {
        arriving->ready_slot = t;
        queue.push_back(std::move(*arriving));
      }
      arriving.reset();
    }
    if (!horizon && (!config.drain || queue.empty())) break;

    // service
    bool busy = false;
    while (!queue.empty()) {
      Batch& b = queue.front();
      if (!active) {
        b.frame_start = t;
        active = true;
        if (b.packets() == 0) b.kappa = delta;  // nothing to frame
      }
      if (b.packets() > 0 && b.kappa < delta) {
        b.reveal(delta0 * b.kappa / delta);
        const auto w = b.deficiency(pattern);
        const VertexSet chosen = choose_coded(config, graph, w, previous, rng.policy);
        if (config.check_invariants) m.invalid_configurations += count_unstable(graph, chosen);
        previous = chosen;
        const PolicyDecision d = serve_coded(pattern, field, chosen, b.flows, rng.coding);
        record_decodes(d, pattern, b.trackers, t, m);
        for (const FlowService& s : d.services)
          for (int sf : s.delivered) --x[static_cast<std::size_t>(sf)];
        ++b.kappa;
        busy = true;
        break;
      }
      b.reveal(delta0);
      const auto w = b.deficiency(pattern);
      if (std::any_of(w.begin(), w.end(), [](std::int64_t v) { return v > 0; })) {
        const VertexSet chosen = clearance_group(graph, w, b.round_robin);
        if (config.check_invariants) m.invalid_configurations += count_unstable(graph, chosen);
        const PolicyDecision d = serve_coded(pattern, field, chosen, b.flows, rng.coding);
        record_decodes(d, pattern, b.trackers, t, m);
        for (const FlowService& s : d.services)
          for (int sf : s.delivered) --x[static_cast<std::size_t>(sf)];
        ++b.clearance;
        busy = true;
        break;
      }
      // flush
      bool ok = b.verify();
      for (std::size_t f = 0; f < b.trackers.size() && ok; ++f)
        for (std::uint32_t done : b.trackers[f].outputs_done)
          if (done != pattern.flows()[f].fanout.size()) ok = false;
      if (!ok) ++m.decode_failures;
      ++m.batches_flushed;
      m.clearance.push_back(b.clearance);
      m.completion.push_back(t - b.frame_start);
      m.waiting.push_back(t - b.ready_slot);
      queue.pop_front();
      active = false;
    }
    if (busy) {
      if (m.first_busy_slot < 0) m.first_busy_slot = t;
      ++busy_run;
    } else {
      if (horizon) ++m.idle_slots;
      if (horizon && m.first_busy_slot >= 0) ++m.idle_after_busy;
      if (busy_run > 0) m.busy_periods.push_back(busy_run);
      busy_run = 0;
    }

    if (horizon) {
      for (std::size_t f = 0; f < pattern.num_flows(); ++f) {
        if (!rng.arrivals.bernoulli(probs[f].num, probs[f].den)) continue;
        arriving->originals[f].push_back(random_payload(config.payload_length, rng.payloads));
        arriving->trackers[f].arrival.push_back(t);
        arriving->trackers[f].outputs_done.push_back(0);
        ++m.arrivals[f];
        const std::size_t base = pattern.first_subflow(f);
        for (std::size_t j = 0; j < pattern.flows()[f].fanout.size(); ++j) ++x[base + j];
      }
      std::int64_t total = 0;
      for (std::size_t s = 0; s < x.size(); ++s) {
        total += x[s];
        if (config.check_invariants) {
          const auto f = static_cast<std::size_t>(pattern.subflows()[s].flow);
          std::int64_t held = arriving ? arriving->outstanding(pattern, s) : 0;
          for (const Batch& b : queue) held += b.outstanding(pattern, s);
          if (x[s] < 0 || m.arrivals[f] != x[s] + m.delivered[s] || held != x[s])
            ++m.conservation_violations;
        }
      }
      m.backlog.push_back(total);
    } else {
      ++m.drain_slots;
    }
  }
  if (busy_run > 0) {
    if (config.drain) m.busy_periods.push_back(busy_run);
    else m.open_busy_period = true;
  }
  finish(m, config, m.decoded, delta0, true);
  return m;
}

Metrics run_offline(const SimConfig& config) {
  check_rates(config);
  const TrafficPattern& pattern = config.pattern;
  const ScheduleFrame frame = build_offline_schedule(pattern, config.rates);
  const GaloisField& field = GaloisField::get(config.field_order);
  const auto probs = arrival_probabilities(config.rates);
  const ConflictGraph graph = build_enhanced_conflict_graph(pattern);
  Streams rng(config.seed);
  Metrics m = empty_metrics(pattern, config.slots);
  const long F = frame.frame_length;

  std::vector<std::deque<std::pair<long, Payload>>> fifo(pattern.num_flows());
  std::optional<Batch> batch;

  for (long t = 0; t < config.slots; ++t) {
    if (t % F == 0) {
      batch.emplace(t / F, t, pattern, field, config.payload_length);
      batch->frame_start = t;
      for (std::size_t f = 0; f < pattern.num_flows(); ++f) {
        const long quota = frame.flow_packets[f];
        for (long p = 0; p < quota; ++p) {
          if (config.saturated) {
            batch->originals[f].push_back(random_payload(config.payload_length, rng.payloads));
            batch->trackers[f].arrival.push_back(t);
            ++m.arrivals[f];
          } else {
            if (fifo[f].empty()) break;
            batch->originals[f].push_back(std::move(fifo[f].front().second));
            batch->trackers[f].arrival.push_back(fifo[f].front().first);
            fifo[f].pop_front();
          }
          batch->trackers[f].outputs_done.push_back(0);
        }
      }
      batch->reveal(1);
    }

    const PolicyDecision d = offline_executor(pattern, field, frame, t, batch->flows, rng.coding);
    if (config.check_invariants) m.invalid_configurations += count_unstable(graph, d.config);
    record_decodes(d, pattern, batch->trackers, t, m);

    if (t % F == F - 1) {
      if (!batch->verify()) ++m.decode_failures;
      ++m.batches_flushed;
      m.completion.push_back(F);
      batch.reset();
    }

    if (!config.saturated) {
      for (std::size_t f = 0; f < pattern.num_flows(); ++f) {
        if (!rng.arrivals.bernoulli(probs[f].num, probs[f].den)) continue;
        fifo[f].emplace_back(t, random_payload(config.payload_length, rng.payloads));
        ++m.arrivals[f];
      }
    }
    std::int64_t total = 0;
    for (std::size_t s = 0; s < pattern.num_subflows(); ++s) {
      const auto f = static_cast<std::size_t>(pattern.subflows()[s].flow);
      total += static_cast<std::int64_t>(fifo[f].size());
      if (batch) total += batch->outstanding(pattern, s);
    }
    m.backlog.push_back(total);
  }
  finish(m, config, m.decoded, F, true);
  return m;
}

Metrics run_uncoded(const SimConfig& config) {
  check_rates(config);
  if (config.policy != "uncoded-rand")
    throw ValidationError("policy '" + config.policy + "' is not an uncoded policy");
  const TrafficPattern& pattern = config.pattern;
  const ConflictGraph graph = build_enhanced_conflict_graph(pattern);
  const auto probs = arrival_probabilities(config.rates);
  Streams rng(config.seed);
  Metrics m = empty_metrics(pattern, config.slots);
  UncodedQueues queues(pattern);
  PolicyDecision previous;

  for (long t = 0; t < config.slots; ++t) {
    PolicyDecision d = uncoded_fanout_policy(pattern, queues, previous, config.candidates, rng.policy);
    if (config.check_invariants) m.invalid_configurations += count_unstable(graph, d.config);
    for (const FlowService& s : d.services) {
      const auto f = static_cast<std::size_t>(s.flow);
      for (int sf : s.subflows) {
        ++m.delivered[static_cast<std::size_t>(sf)];
        ++m.decoded[static_cast<std::size_t>(sf)];
      }
      if (auto done = queues.serve(f, s.uncoded_outputs)) m.delays.push_back(t - done->arrival);
    }
    previous = std::move(d);

    for (std::size_t f = 0; f < pattern.num_flows(); ++f) {
      if (!rng.arrivals.bernoulli(probs[f].num, probs[f].den)) continue;
      queues.arrive(f, t);
      ++m.arrivals[f];
    }
    m.backlog.push_back(queues.total_backlog());
  }
  finish(m, config, m.delivered, 1, true);
  return m;
}

Metrics simulate(const SimConfig& config) {
  switch (config.mode) {
    case SimMode::kOnline: return run_online(config);
    case SimMode::kFiniteHorizon: return run_finite_horizon(config);
    case SimMode::kOffline: return run_offline(config);
    case SimMode::kUncoded: return run_uncoded(config);
  }
  throw ValidationError("unknown simulation mode");
}

std::uint64_t run_seed(std::uint64_t master, const Rational& alpha, const std::string& policy) {
  // FNV-1a over "alpha|policy"
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : to_string(alpha) + "|" + policy) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return mix_seed(master, h);
}

std::vector<SweepRow> sweep(const SimConfig& base, const std::vector<Rational>& alphas,
                            const std::vector<std::string>& policies, bool online) {
  for (std::size_t i = 1; i < alphas.size(); ++i)
    if (alphas[i] < alphas[i - 1]) throw ValidationError("alpha list must be nondecreasing");
  std::vector<SweepRow> rows;
  for (const Rational& alpha : alphas)
    for (const std::string& policy : policies) {
      SimConfig c = base;
      c.policy = policy;
      c.mode = default_mode(policy);
      if (online && c.mode == SimMode::kFiniteHorizon) c.mode = SimMode::kOnline;
      c.alpha = alpha;
      c.rates = scale(base.rates, alpha);
      c.seed = run_seed(base.seed, alpha, policy);
      rows.push_back({alpha, policy, c.seed, simulate(c)});
    }
  return rows;
}

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 8);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace

std::string csv_header() {
  return "alpha,policy,seed,slots,mean_delay,p95_delay,mean_backlog,backlog_slope,stable,"
         "decode_failures,throughput_per_flow";
}

std::string csv_row(const SweepRow& row) {
  const Metrics& m = row.metrics;
  std::string tp = "[";
  for (std::size_t i = 0; i < m.throughput_per_flow.size(); ++i) {
    if (i) tp += ",";
    tp += format_double(m.throughput_per_flow[i]);
  }
  tp += "]";
  return format_double(to_double(row.alpha)) + "," + row.policy + "," + std::to_string(row.seed) +
         "," + std::to_string(m.slots) + "," + format_double(m.mean_delay) + "," +
         format_double(m.p95_delay) + "," + format_double(m.mean_backlog) + "," +
         format_double(m.backlog_slope) + "," + (m.stable ? "true" : "false") + "," +
         std::to_string(m.decode_failures) + ",\"" + tp + "\"";
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* value = std::getenv("CODEDXBAR_SEED");
  if (value == nullptr || *value == '\0') return fallback;
  std::uint64_t seed = 0;
  const char* end = value + std::char_traits<char>::length(value);
  auto [ptr, ec] = std::from_chars(value, end, seed);
  if (ec != std::errc{} || ptr != end)
    throw ParseError(std::string("CODEDXBAR_SEED is not an unsigned integer: ") + value, 0, 0);
  return seed;
}

}  // namespace codedxbar
