#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "codedxbar/conflict_graph.hpp"
#include "codedxbar/polytope.hpp"
#include "codedxbar/traffic.hpp"

namespace codedxbar {

struct ColoringTerm {
  VertexSet set;
  Rational weight;
};

/// Fractional weighted coloring: `value` is the minimum total weight of
/// stable sets covering the vertex weights. `dual` is an optimal dual
/// vector over vertices (y >= 0, y(S) <= 1 on every stable set,
/// y.w == value) so the value can be checked without trusting the solver.
struct ColoringSolution {
  Rational value;
  std::vector<ColoringTerm> terms;
  std::vector<Rational> dual;
};

ColoringSolution fractional_weighted_coloring(const ConflictGraph& graph,
                                              const std::vector<Rational>& weights,
                                              int cap = kDefaultEnumerationCap);

/// Checks the dual certificate against every maximal stable set of `graph`,
/// the covering constraints of the terms, and equality of both objectives.
bool certificate_holds(const ConflictGraph& graph, const std::vector<Rational>& weights,
                       const ColoringSolution& solution);

/// Rates whose enhanced rate vector lies in the stable set polytope.
bool in_rate_region(const TrafficPattern& pattern, const RateVector& rates);
/// Minimum fabric speedup to carry `rates` with splitting and coding.
Rational min_speedup(const TrafficPattern& pattern, const RateVector& rates);

struct AdmissibleSpeedup {
  Rational speedup;
  RateVector worst_vertex;
  std::size_t vertices = 0;
};

/// Speedup that makes the whole admissible region achievable: the largest
/// min_speedup over the vertices of { r >= 0 : input/output loads <= 1 }.
AdmissibleSpeedup min_speedup_for_admissible(const TrafficPattern& pattern,
                                             const VertexEnumerationOptions& options = {});

struct Inequality {
  std::string label;
  Rational lhs;
  Rational rhs;
  bool holds() const { return lhs <= rhs; }
};

/// No-coding feasibility of the 2xN broadcast-plus-unicasts pattern.
struct UncodedCheck {
  bool feasible = true;
  Rational min_scale;
  std::vector<Inequality> inequalities;
};

UncodedCheck uncoded_2xN_check(int n, const Rational& broadcast_rate,
                               const std::vector<Rational>& unicast_rates);

/// Cyclic frame of switch configurations. Slot t serves the sub-flows in
/// slots[t]; every sub-flow of a rate-r flow is served exactly r * F times.
struct ScheduleFrame {
  long frame_length = 0;
  std::vector<VertexSet> slots;
  std::vector<ColoringTerm> lambda;
  std::vector<long> flow_service;     ///< slots serving any sub-flow of the flow (T)
  std::vector<long> subflow_service;  ///< slots serving each sub-flow
  std::vector<long> flow_packets;     ///< r * F per flow
};

ScheduleFrame build_offline_schedule(const TrafficPattern& pattern, const RateVector& rates);

nlohmann::json to_json(const ScheduleFrame& frame);

}  // namespace codedxbar
