#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "codedxbar/coding.hpp"
#include "codedxbar/conflict_graph.hpp"
#include "codedxbar/rate_region.hpp"
#include "codedxbar/rng.hpp"
#include "codedxbar/traffic.hpp"

namespace codedxbar {

std::int64_t set_weight(VertexSet set, std::span<const std::int64_t> weights);

/// Maximum-weight stable set. Zero-weight vertices are never included; ties
/// go to the lexicographically smallest sorted vertex sequence. Branch and
/// bound with a greedy clique-cover bound.
VertexSet mwss_exact(const ConflictGraph& graph, std::span<const std::int64_t> weights,
                     int cap = kDefaultEnumerationCap);

/// Random maximal stable set: shuffled positive-weight vertices first, then
/// the rest, inserted greedily.
VertexSet random_maximal_stable_set(const ConflictGraph& graph,
                                    std::span<const std::int64_t> weights, Rng& rng);

/// Best of `k` random maximal stable sets and `previous`, all restricted to
/// positive-weight vertices. `previous` wins ties.
VertexSet mwss_randomized(const ConflictGraph& graph, std::span<const std::int64_t> weights,
                          VertexSet previous, int k, Rng& rng);

/// Pool plus one receiver per fanout output (fanout order) for one flow batch.
struct CodedFlow {
  CodedFlow(int flow, long batch, std::size_t fanout, const GaloisField& field,
            std::size_t payload_length);
  PacketPool pool;
  std::vector<ReceiverState> receivers;
};

struct FlowService {
  int flow = 0;
  std::vector<int> subflows;             ///< sub-flows connected this slot
  std::vector<int> delivered;            ///< sub-flows that gained a degree of freedom
  std::vector<std::vector<std::size_t>> decoded;  ///< per delivered sub-flow, packets decoded
  std::optional<CodedPacket> packet;     ///< coded policies
  std::uint32_t uncoded_outputs = 0;     ///< uncoded baseline: fanout positions served
};

struct PolicyDecision {
  VertexSet config;
  std::vector<FlowService> services;
};

/// Sub-flows of `config` grouped per flow, in flow order.
std::vector<std::pair<int, std::vector<int>>> group_by_flow(const TrafficPattern& pattern,
                                                           VertexSet config);

/// Serves `config` with coding: per flow, one packet innovative to every
/// connected output that still lacks a degree of freedom; outputs already
/// holding the whole pool get nothing. Throws CodingFailure if no such
/// packet exists.
PolicyDecision serve_coded(const TrafficPattern& pattern, const GaloisField& field,
                           VertexSet config, std::vector<CodedFlow>& flows, Rng& rng);

/// Frame-driven coded service for slot t (taken modulo the frame length).
PolicyDecision offline_executor(const TrafficPattern& pattern, const GaloisField& field,
                                const ScheduleFrame& frame, long slot,
                                std::vector<CodedFlow>& flows, Rng& rng);

/// Multicast VOQ state for uncoded fanout splitting: per-flow FIFO of
/// packets, each with the fanout positions it still has to reach.
class UncodedQueues {
 public:
  struct Packet {
    long arrival;
    std::uint32_t residual;
  };

  explicit UncodedQueues(const TrafficPattern& pattern);

  void arrive(std::size_t flow, long slot);
  const std::deque<Packet>& queue(std::size_t flow) const { return queues_[flow]; }
  /// Sum over queued packets of their residual fanout size.
  std::int64_t backlog(std::size_t flow) const { return backlog_[flow]; }
  std::int64_t total_backlog() const;
  /// Removes `positions` from the head packet's residual fanout. Returns
  /// the departing packet once its residual fanout is empty.
  std::optional<Packet> serve(std::size_t flow, std::uint32_t positions);

 private:
  std::vector<std::deque<Packet>> queues_;
  std::vector<std::int64_t> backlog_;
  std::vector<std::uint32_t> full_;
};

/// Uncoded fanout-splitting baseline. A candidate picks, per input, one
/// backlogged flow and serves its head packet on every residual output not
/// yet taken; its weight is the total residual backlog of the flows it
/// serves. Returns the best of `k` random candidates and `previous`
/// (restricted to the current head packets).
PolicyDecision uncoded_fanout_policy(const TrafficPattern& pattern, const UncodedQueues& queues,
                                     const PolicyDecision& previous, int k, Rng& rng);

}  // namespace codedxbar
