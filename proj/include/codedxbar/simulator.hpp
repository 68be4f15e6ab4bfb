#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "codedxbar/conflict_graph.hpp"
#include "codedxbar/rational.hpp"
#include "codedxbar/rng.hpp"
#include "codedxbar/traffic.hpp"

namespace codedxbar {

enum class SimMode {
  kOnline,         ///< mwss / mwss-rand on unbounded pools
  kFiniteHorizon,  ///< mwss / mwss-rand on batches of delta0 slots
  kOffline,        ///< frame schedule from the rate region
  kUncoded,        ///< uncoded-rand fanout splitting
};

struct SimConfig {
  TrafficPattern pattern;
  RateVector rates;
  std::string policy = "mwss-rand";
  SimMode mode = SimMode::kFiniteHorizon;
  Rational alpha = 1;  ///< informational; rates are already scaled
  std::uint64_t seed = 1;
  long slots = 100000;
  long delta = 1000;
  Rational epsilon = Rational(1, 200);
  int field_order = 256;
  std::size_t payload_length = 64;
  int candidates = 10;            ///< k for the randomized policies
  bool saturated = true;          ///< offline: exactly r*F packets per flow per frame
  bool drain = false;             ///< finite horizon: finish queued batches after the horizon
  bool check_invariants = true;   ///< stability of every configuration, conservation
  double stability_threshold = 1e-3;
};

/// Default mode for a policy name: finite horizon for the coded online
/// policies, offline for "offline", uncoded for "uncoded-rand". Throws
/// ValidationError on an unknown name.
SimMode default_mode(const std::string& policy);
bool is_known_policy(const std::string& policy);

struct Metrics {
  long slots = 0;         ///< horizon (drain slots excluded)
  long drain_slots = 0;
  double mean_delay = 0;  ///< NaN when no delay was measured or delay is not applicable
  double p95_delay = 0;
  double mean_backlog = 0;
  double backlog_slope = 0;
  bool stable = true;
  long decode_failures = 0;
  std::vector<double> throughput_per_flow;  ///< per output, averaged over the flow's fanout

  std::vector<long> arrivals;        ///< per flow
  std::vector<long> delivered;       ///< per sub-flow: innovative packets (coded) or copies (uncoded)
  std::vector<long> decoded;         ///< per sub-flow: packets recovered at that output
  std::vector<long> delays;          ///< per completed packet, in slots
  std::vector<std::int64_t> backlog; ///< total backlog at the end of each horizon slot

  long conservation_violations = 0;
  long invalid_configurations = 0;
  long wasted_transmissions = 0;

  // finite horizon and offline batches
  long batches_flushed = 0;
  std::vector<long> clearance;       ///< T_k per flushed batch
  std::vector<long> waiting;         ///< W_n: flush slot minus the slot the batch fully arrived
  std::vector<long> completion;      ///< flush slot minus frame start, per flushed batch
  std::vector<long> busy_periods;    ///< completed busy periods
  long idle_slots = 0;
  long first_busy_slot = -1;         ///< -1 when the system never left idle
  long idle_after_busy = 0;          ///< idle horizon slots after the first busy slot
  bool open_busy_period = false;     ///< a busy period was still running at the end
};

/// Per-flow arrival indicators for one slot. Throws ValidationError if a
/// rate lies outside [0, 1].
std::vector<bool> bernoulli_arrivals(const RateVector& rates, Rng& rng);

Metrics run_online(const SimConfig& config);
Metrics run_finite_horizon(const SimConfig& config);
Metrics run_offline(const SimConfig& config);
Metrics run_uncoded(const SimConfig& config);
/// Dispatches on config.mode.
Metrics simulate(const SimConfig& config);

/// delta0 = ceil((1 + epsilon) * delta).
long batch_length(long delta, const Rational& epsilon);

/// Least-squares slope of the block means of the last half of `series`.
double backlog_slope(const std::vector<std::int64_t>& series, long block = 1);

struct SweepRow {
  Rational alpha;
  std::string policy;
  std::uint64_t seed = 0;
  Metrics metrics;
};

/// Per-run seed from the master seed, alpha and policy name.
std::uint64_t run_seed(std::uint64_t master, const Rational& alpha, const std::string& policy);

/// One run per (alpha, policy) with rates = base rates * alpha. Modes come
/// from default_mode unless `online` is set.
std::vector<SweepRow> sweep(const SimConfig& base, const std::vector<Rational>& alphas,
                            const std::vector<std::string>& policies, bool online = false);

std::string csv_header();
std::string csv_row(const SweepRow& row);

/// CODEDXBAR_SEED when set, otherwise `fallback`. Throws ParseError on a
/// malformed value.
std::uint64_t seed_from_env(std::uint64_t fallback);

}  // namespace codedxbar
