#include "codedxbar/traffic.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "codedxbar/errors.hpp"

namespace codedxbar {

TrafficPattern::TrafficPattern(int num_inputs, int num_outputs, std::vector<Flow> flows)
    : num_inputs_(num_inputs), num_outputs_(num_outputs), flows_(std::move(flows)) {
  if (num_inputs_ <= 0 || num_outputs_ <= 0)
    throw ValidationError("switch must have at least one input and one output");
  std::set<std::pair<int, std::vector<int>>> seen;
  for (std::size_t f = 0; f < flows_.size(); ++f) {
    const Flow& flow = flows_[f];
    if (flow.input < 0 || flow.input >= num_inputs_)
      throw ValidationError("flow " + std::to_string(f + 1) + ": input out of range");
    if (flow.fanout.empty())
      throw ValidationError("flow " + std::to_string(f + 1) + ": empty fanout");
    std::vector<int> sorted = flow.fanout;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError("flow " + std::to_string(f + 1) + ": duplicate output in fanout");
    if (sorted.front() < 0 || sorted.back() >= num_outputs_)
      throw ValidationError("flow " + std::to_string(f + 1) + ": output out of range");
    if (!seen.emplace(flow.input, sorted).second)
      throw ValidationError("flow " + std::to_string(f + 1) + ": duplicate (input, fanout) pair");
    offsets_.push_back(subflows_.size());
    for (int out : flow.fanout)
      subflows_.push_back(SubFlow{static_cast<int>(f), flow.input, out});
  }
}

std::size_t TrafficPattern::subflow_index(std::size_t flow, int output) const {
  const auto& fanout = flows_.at(flow).fanout;
  auto it = std::find(fanout.begin(), fanout.end(), output);
  if (it == fanout.end()) throw ValidationError("output not in fanout");
  return offsets_[flow] + static_cast<std::size_t>(it - fanout.begin());
}

std::string TrafficPattern::describe_flow(std::size_t flow) const {
  const Flow& f = flows_.at(flow);
  std::string s = "(" + std::to_string(f.input + 1) + ", {";
  for (std::size_t i = 0; i < f.fanout.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(f.fanout[i] + 1);
  }
  return s + "})";
}

std::string TrafficPattern::describe_subflow(std::size_t subflow) const {
  const SubFlow& sf = subflows_.at(subflow);
  std::string flow = describe_flow(static_cast<std::size_t>(sf.flow));
  flow.pop_back();
  return flow + ", " + std::to_string(sf.output + 1) + ")";
}

EnhancedRateVector enhanced_rate_vector(const TrafficPattern& pattern, const RateVector& rates) {
  if (rates.size() != pattern.num_flows())
    throw DimensionError("rate vector has " + std::to_string(rates.size()) +
                         " entries, pattern has " + std::to_string(pattern.num_flows()) +
                         " flows");
  EnhancedRateVector e;
  e.reserve(pattern.num_subflows());
  for (const SubFlow& sf : pattern.subflows()) e.push_back(rates[static_cast<std::size_t>(sf.flow)]);
  return e;
}

Admissibility is_admissible(const TrafficPattern& pattern, const RateVector& rates) {
  if (rates.size() != pattern.num_flows())
    throw DimensionError("rate vector length does not match flow count");
  Admissibility a;
  a.input_loads.assign(static_cast<std::size_t>(pattern.num_inputs()), Rational(0));
  a.output_loads.assign(static_cast<std::size_t>(pattern.num_outputs()), Rational(0));
  for (std::size_t f = 0; f < pattern.num_flows(); ++f) {
    const Flow& flow = pattern.flows()[f];
    a.input_loads[static_cast<std::size_t>(flow.input)] += rates[f];
    for (int out : flow.fanout) a.output_loads[static_cast<std::size_t>(out)] += rates[f];
  }
  auto over = [](const Rational& load) { return load > 1; };
  a.admissible = std::none_of(a.input_loads.begin(), a.input_loads.end(), over) &&
                 std::none_of(a.output_loads.begin(), a.output_loads.end(), over);
  return a;
}

RateVector scale(const RateVector& rates, const Rational& factor) {
  RateVector out;
  out.reserve(rates.size());
  for (const auto& r : rates) out.push_back(r * factor);
  return out;
}

PatternWithRates pattern_fig1() {
  return pattern_2xN(3, Rational(2, 3), {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
}

PatternWithRates pattern_2xN(int n, const Rational& broadcast_rate,
                             const std::vector<Rational>& unicast_rates) {
  if (n < 1) throw ValidationError("2xN pattern needs N >= 1");
  if (unicast_rates.size() != static_cast<std::size_t>(n))
    throw DimensionError("2xN pattern needs exactly N unicast rates");
  if (broadcast_rate < 0) throw ValidationError("negative broadcast rate");
  std::vector<Flow> flows;
  Flow broadcast{0, {}};
  for (int j = 0; j < n; ++j) broadcast.fanout.push_back(j);
  flows.push_back(broadcast);
  RateVector rates{broadcast_rate};
  for (int j = 0; j < n; ++j) {
    if (unicast_rates[static_cast<std::size_t>(j)] < 0) throw ValidationError("negative unicast rate");
    flows.push_back(Flow{1, {j}});
    rates.push_back(unicast_rates[static_cast<std::size_t>(j)]);
  }
  return {TrafficPattern(2, n, std::move(flows)), std::move(rates)};
}

PatternWithRates pattern_2xN_vertex(int n) {
  if (n < 1) throw ValidationError("2xN pattern needs N >= 1");
  return pattern_2xN(n, 1 - Rational(1, n), std::vector<Rational>(static_cast<std::size_t>(n), Rational(1, n)));
}

PatternWithRates pattern_4x3_sim(const Rational& alpha) {
  if (alpha < 0) throw ValidationError("negative load multiplier");
  std::vector<Flow> flows{
      Flow{0, {0, 1, 2}},
      Flow{0, {0}},
      Flow{1, {0}},
      Flow{2, {1}},
      Flow{3, {2}},
  };
  const Rational small(1, 100);
  RateVector rates{Rational(4, 9) * alpha, small * alpha, (Rational(2, 9) + small) * alpha,
                   small * alpha, small * alpha};
  return {TrafficPattern(4, 3, std::move(flows)), std::move(rates)};
}

TrafficPattern pattern_all_flows(int num_inputs, int num_outputs) {
  if (num_outputs > 16) throw ValidationError("too many outputs to enumerate fanout sets");
  // Order per input: by fanout size, then lexicographically.
  std::vector<std::vector<int>> subsets;
  for (unsigned mask = 1; mask < (1u << num_outputs); ++mask) {
    std::vector<int> s;
    for (int j = 0; j < num_outputs; ++j)
      if (mask & (1u << j)) s.push_back(j);
    subsets.push_back(std::move(s));
  }
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](const auto& a, const auto& b) {
                     return a.size() != b.size() ? a.size() < b.size() : a < b;
                   });
  std::vector<Flow> flows;
  for (int i = 0; i < num_inputs; ++i)
    for (const auto& s : subsets) flows.push_back(Flow{i, s});
  return TrafficPattern(num_inputs, num_outputs, std::move(flows));
}

}  // namespace codedxbar
