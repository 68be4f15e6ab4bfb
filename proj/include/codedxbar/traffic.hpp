#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "codedxbar/rational.hpp"

namespace codedxbar {

/// A multicast stream from one input to a fixed output set. Ports are
/// 0-indexed; user-facing text adds one.
struct Flow {
  int input = 0;
  std::vector<int> fanout;
};

/// One (flow, output) component of a flow.
struct SubFlow {
  int flow = 0;
  int input = 0;
  int output = 0;
};

/// Switch workload. Sub-flows are indexed in flow order, then fanout order;
/// every module uses this same indexing.
class TrafficPattern {
 public:
  TrafficPattern() = default;
  TrafficPattern(int num_inputs, int num_outputs, std::vector<Flow> flows);

  int num_inputs() const { return num_inputs_; }
  int num_outputs() const { return num_outputs_; }
  const std::vector<Flow>& flows() const { return flows_; }
  std::size_t num_flows() const { return flows_.size(); }

  const std::vector<SubFlow>& subflows() const { return subflows_; }
  std::size_t num_subflows() const { return subflows_.size(); }
  /// Index of the first sub-flow of `flow`; its sub-flows are contiguous.
  std::size_t first_subflow(std::size_t flow) const { return offsets_[flow]; }
  std::size_t subflow_index(std::size_t flow, int output) const;

  /// "(i, {j,...})" with 1-based ports.
  std::string describe_flow(std::size_t flow) const;
  /// "(i, {J}, j)" with 1-based ports.
  std::string describe_subflow(std::size_t subflow) const;

 private:
  int num_inputs_ = 0;
  int num_outputs_ = 0;
  std::vector<Flow> flows_;
  std::vector<SubFlow> subflows_;
  std::vector<std::size_t> offsets_;
};

using RateVector = std::vector<Rational>;
using EnhancedRateVector = std::vector<Rational>;

struct PatternWithRates {
  TrafficPattern pattern;
  RateVector rates;
};

EnhancedRateVector enhanced_rate_vector(const TrafficPattern& pattern, const RateVector& rates);

struct Admissibility {
  bool admissible = true;
  std::vector<Rational> input_loads;
  std::vector<Rational> output_loads;
};

/// Input and output loads, and whether none exceeds 1.
Admissibility is_admissible(const TrafficPattern& pattern, const RateVector& rates);

RateVector scale(const RateVector& rates, const Rational& factor);

PatternWithRates pattern_fig1();
/// Broadcast from input 1 to all N outputs plus N unicasts from input 2.
PatternWithRates pattern_2xN(int n, const Rational& broadcast_rate,
                             const std::vector<Rational>& unicast_rates);
/// pattern_2xN at the admissible vertex r0 = 1 - 1/N, rj = 1/N.
PatternWithRates pattern_2xN_vertex(int n);
/// The 4x3 load-sweep pattern: broadcast (4/9)a, input-2 unicast
/// (2/9 + 1/100)a to output 1, and 0.01a unicasts 1->1, 3->2, 4->3.
PatternWithRates pattern_4x3_sim(const Rational& alpha);
/// Every possible flow of an M x N switch (each nonempty output subset at
/// each input), rates zero.
TrafficPattern pattern_all_flows(int num_inputs, int num_outputs);

}  // namespace codedxbar
