#include "codedxbar/schedulers.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "codedxbar/errors.hpp"

namespace codedxbar {

std::int64_t set_weight(VertexSet set, std::span<const std::int64_t> weights) {
  std::int64_t total = 0;
  for (std::uint64_t b = set.bits(); b; b &= b - 1) total += weights[std::countr_zero(b)];
  return total;
}

namespace {

VertexSet positive_vertices(const ConflictGraph& graph, std::span<const std::int64_t> weights) {
  if (weights.size() != static_cast<std::size_t>(graph.size()))
    throw DimensionError("weight vector has " + std::to_string(weights.size()) +
                         " entries, graph has " + std::to_string(graph.size()) + " vertices");
  VertexSet out;
  for (int v = 0; v < graph.size(); ++v) {
    if (weights[static_cast<std::size_t>(v)] < 0)
      throw ValidationError("negative weight on vertex " + std::to_string(v));
    if (weights[static_cast<std::size_t>(v)] > 0) out.insert(v);
  }
  return out;
}

struct BranchAndBound {
  const ConflictGraph& graph;
  std::span<const std::int64_t> weights;
  VertexSet best;
  std::int64_t best_weight = 0;

  // greedy partition of P into cliques; each clique contributes its heaviest vertex
  std::int64_t bound(VertexSet p) const {
    std::int64_t total = 0;
    while (!p.empty()) {
      VertexSet cand = p;
      std::int64_t heaviest = 0;
      while (!cand.empty()) {
        const int v = cand.front();
        heaviest = std::max(heaviest, weights[static_cast<std::size_t>(v)]);
        p.erase(v);
        cand = cand & graph.neighbors(v);
      }
      total += heaviest;
    }
    return total;
  }

  void expand(VertexSet chosen, std::int64_t weight, VertexSet p) {
    if (p.empty()) {
      if (weight > best_weight) {
        best_weight = weight;
        best = chosen;
      }
      return;
    }
    if (weight + bound(p) <= best_weight) return;
    const int v = p.front();
    VertexSet with = chosen;
    with.insert(v);
    expand(with, weight + weights[static_cast<std::size_t>(v)], p - graph.neighbors(v) - VertexSet::of({v}));
    expand(chosen, weight, p - VertexSet::of({v}));
  }
};

}  // namespace

VertexSet mwss_exact(const ConflictGraph& graph, std::span<const std::int64_t> weights, int cap) {
  if (graph.size() > cap)
    throw SizeCapError("graph has " + std::to_string(graph.size()) + " vertices, cap is " +
                           std::to_string(cap),
                       cap);
  BranchAndBound bb{graph, weights, VertexSet{}, 0};
  bb.expand(VertexSet{}, 0, positive_vertices(graph, weights));
  return bb.best;
}

VertexSet random_maximal_stable_set(const ConflictGraph& graph,
                                    std::span<const std::int64_t> weights, Rng& rng) {
  const VertexSet positive = positive_vertices(graph, weights);
  std::vector<int> first = positive.members();
  std::vector<int> rest = (graph.all() - positive).members();
  rng.shuffle(std::span<int>(first));
  rng.shuffle(std::span<int>(rest));
  VertexSet out;
  VertexSet blocked;
  for (const auto* list : {&first, &rest})
    for (int v : *list)
      if (!blocked.contains(v)) {
        out.insert(v);
        blocked = blocked | graph.neighbors(v) | VertexSet::of({v});
      }
  return out;
}

VertexSet mwss_randomized(const ConflictGraph& graph, std::span<const std::int64_t> weights,
                          VertexSet previous, int k, Rng& rng) {
  const VertexSet positive = positive_vertices(graph, weights);
  if (!graph.is_stable(previous)) throw ValidationError("previous configuration is not stable");
  VertexSet best = previous & positive;
  std::int64_t best_weight = set_weight(best, weights);
  for (int i = 0; i < k; ++i) {
    const VertexSet cand = random_maximal_stable_set(graph, weights, rng) & positive;
    const std::int64_t w = set_weight(cand, weights);
    if (w > best_weight) {
      best = cand;
      best_weight = w;
    }
  }
  return best;
}

CodedFlow::CodedFlow(int flow, long batch, std::size_t fanout, const GaloisField& field,
                     std::size_t payload_length)
    : pool(flow, batch, payload_length),
      receivers(fanout, ReceiverState(field, payload_length)) {}

std::vector<std::pair<int, std::vector<int>>> group_by_flow(const TrafficPattern& pattern,
                                                           VertexSet config) {
  std::vector<std::pair<int, std::vector<int>>> groups;
  for (int s : config.members()) {
    if (s >= static_cast<int>(pattern.num_subflows()))
      throw DimensionError("configuration names sub-flow " + std::to_string(s) + " of " +
                           std::to_string(pattern.num_subflows()));
    const int f = pattern.subflows()[static_cast<std::size_t>(s)].flow;
    if (groups.empty() || groups.back().first != f) groups.push_back({f, {}});
    groups.back().second.push_back(s);
  }
  return groups;
}

PolicyDecision serve_coded(const TrafficPattern& pattern, const GaloisField& field,
                           VertexSet config, std::vector<CodedFlow>& flows, Rng& rng) {
  PolicyDecision decision;
  decision.config = config;
  for (auto& [f, subflows] : group_by_flow(pattern, config)) {
    CodedFlow& cf = flows[static_cast<std::size_t>(f)];
    const std::size_t base = pattern.first_subflow(static_cast<std::size_t>(f));
    const std::size_t n = cf.pool.size();
    FlowService service;
    service.flow = f;
    service.subflows = subflows;
    std::vector<int> need;
    std::vector<const ReceiverState*> receivers;
    for (int s : subflows) {
      const ReceiverState& r = cf.receivers[static_cast<std::size_t>(s) - base];
      if (r.rank() < n) {
        need.push_back(s);
        receivers.push_back(&r);
      }
    }
    if (!need.empty()) {
      auto coeffs = find_innovative(field, n, receivers, rng);
      if (!coeffs)
        throw CodingFailure("no packet of " + pattern.describe_flow(static_cast<std::size_t>(f)) +
                            " is innovative to every scheduled output");
      CodedPacket packet = encode(field, cf.pool, *coeffs);
      for (int s : need) {
        std::vector<std::size_t> decoded;
        if (!cf.receivers[static_cast<std::size_t>(s) - base].absorb(packet, &decoded))
          throw CodingFailure("coded packet was not innovative at " +
                              pattern.describe_subflow(static_cast<std::size_t>(s)));
        service.delivered.push_back(s);
        service.decoded.push_back(std::move(decoded));
      }
      service.packet = std::move(packet);
    }
    decision.services.push_back(std::move(service));
  }
  return decision;
}

PolicyDecision offline_executor(const TrafficPattern& pattern, const GaloisField& field,
                                const ScheduleFrame& frame, long slot,
                                std::vector<CodedFlow>& flows, Rng& rng) {
  if (frame.frame_length <= 0) throw ValidationError("empty schedule frame");
  const VertexSet config = frame.slots[static_cast<std::size_t>(slot % frame.frame_length)];
  return serve_coded(pattern, field, config, flows, rng);
}

UncodedQueues::UncodedQueues(const TrafficPattern& pattern)
    : queues_(pattern.num_flows()), backlog_(pattern.num_flows(), 0) {
  for (const Flow& f : pattern.flows()) {
    if (f.fanout.size() > 32) throw SizeCapError("fanout above 32 outputs", 32);
    full_.push_back(f.fanout.size() == 32 ? ~std::uint32_t{0}
                                          : (std::uint32_t{1} << f.fanout.size()) - 1);
  }
}

void UncodedQueues::arrive(std::size_t flow, long slot) {
  queues_[flow].push_back({slot, full_[flow]});
  backlog_[flow] += std::popcount(full_[flow]);
}

std::int64_t UncodedQueues::total_backlog() const {
  std::int64_t total = 0;
  for (auto b : backlog_) total += b;
  return total;
}

std::optional<UncodedQueues::Packet> UncodedQueues::serve(std::size_t flow,
                                                          std::uint32_t positions) {
  auto& q = queues_[flow];
  if (q.empty()) throw ContractError("serving an empty queue");
  Packet& head = q.front();
  const std::uint32_t hit = head.residual & positions;
  head.residual &= ~positions;
  backlog_[flow] -= std::popcount(hit);
  if (head.residual != 0) return std::nullopt;
  Packet done = head;
  q.pop_front();
  return done;
}

namespace {

struct UncodedCandidate {
  std::vector<std::pair<int, std::uint32_t>> picks;  // flow, fanout positions
  std::int64_t weight = 0;
};

PolicyDecision to_decision(const TrafficPattern& pattern, const UncodedCandidate& c) {
  PolicyDecision d;
  for (auto [f, positions] : c.picks) {
    FlowService s;
    s.flow = f;
    s.uncoded_outputs = positions;
    const std::size_t base = pattern.first_subflow(static_cast<std::size_t>(f));
    for (std::uint32_t b = positions; b; b &= b - 1) {
      const int sf = static_cast<int>(base) + std::countr_zero(b);
      s.subflows.push_back(sf);
      d.config.insert(sf);
    }
    d.services.push_back(std::move(s));
  }
  std::sort(d.services.begin(), d.services.end(),
            [](const FlowService& a, const FlowService& b) { return a.flow < b.flow; });
  return d;
}

}  // namespace

PolicyDecision uncoded_fanout_policy(const TrafficPattern& pattern, const UncodedQueues& queues,
                                     const PolicyDecision& previous, int k, Rng& rng) {
  const auto& flows = pattern.flows();
  std::vector<std::vector<int>> by_input(static_cast<std::size_t>(pattern.num_inputs()));
  for (std::size_t f = 0; f < flows.size(); ++f)
    by_input[static_cast<std::size_t>(flows[f].input)].push_back(static_cast<int>(f));

  UncodedCandidate best;
  for (const FlowService& s : previous.services) {
    const auto& q = queues.queue(static_cast<std::size_t>(s.flow));
    if (q.empty()) continue;
    const std::uint32_t positions = s.uncoded_outputs & q.front().residual;
    if (positions == 0) continue;
    best.picks.push_back({s.flow, positions});
    best.weight += queues.backlog(static_cast<std::size_t>(s.flow));
  }

  std::vector<int> inputs(by_input.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) inputs[i] = static_cast<int>(i);
  for (int trial = 0; trial < k; ++trial) {
    UncodedCandidate cand;
    std::vector<char> taken(static_cast<std::size_t>(pattern.num_outputs()), 0);
    rng.shuffle(std::span<int>(inputs));
    for (int i : inputs) {
      std::vector<int> options = by_input[static_cast<std::size_t>(i)];
      rng.shuffle(std::span<int>(options));
      for (int f : options) {
        const auto& q = queues.queue(static_cast<std::size_t>(f));
        if (q.empty()) continue;
        const auto& fanout = flows[static_cast<std::size_t>(f)].fanout;
        std::uint32_t positions = 0;
        for (std::size_t p = 0; p < fanout.size(); ++p)
          if ((q.front().residual >> p & 1u) && !taken[static_cast<std::size_t>(fanout[p])])
            positions |= std::uint32_t{1} << p;
        if (positions == 0) continue;
        for (std::size_t p = 0; p < fanout.size(); ++p)
          if (positions >> p & 1u) taken[static_cast<std::size_t>(fanout[p])] = 1;
        cand.picks.push_back({f, positions});
        cand.weight += queues.backlog(static_cast<std::size_t>(f));
        break;
      }
    }
    if (cand.weight > best.weight) best = std::move(cand);
  }
  return to_decision(pattern, best);
}

}  // namespace codedxbar
