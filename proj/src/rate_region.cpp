#include "codedxbar/rate_region.hpp"

#include <algorithm>

#include "codedxbar/errors.hpp"
#include "codedxbar/simplex.hpp"

namespace codedxbar {

ColoringSolution fractional_weighted_coloring(const ConflictGraph& graph,
                                              const std::vector<Rational>& weights, int cap) {
  const int n = graph.size();
  if (weights.size() != static_cast<std::size_t>(n))
    throw DimensionError("weight vector length does not match vertex count");
  VertexSet support;
  for (int v = 0; v < n; ++v) {
    if (weights[static_cast<std::size_t>(v)] < 0) throw ValidationError("negative vertex weight");
    if (weights[static_cast<std::size_t>(v)] > 0) support.insert(v);
  }
  if (n > cap)
    throw SizeCapError("fractional coloring: graph has " + std::to_string(n) + " vertices",
                       static_cast<std::size_t>(cap));

  ColoringSolution sol;
  sol.value = 0;
  sol.dual.assign(static_cast<std::size_t>(n), Rational(0));
  if (support.empty()) return sol;

  // Zero-weight vertices never need cover; solve on the induced support.
  std::vector<int> ids;
  ConflictGraph sub = graph.induced(support, &ids);
  std::vector<VertexSet> columns = enumerate_maximal_stable_sets(sub, cap);

  const std::size_t rows = ids.size();
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(columns.size()));
  std::vector<Rational> b(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    b[i] = weights[static_cast<std::size_t>(ids[i])];
    for (std::size_t j = 0; j < columns.size(); ++j)
      a[i][j] = columns[j].contains(static_cast<int>(i)) ? 1 : 0;
  }
  CoveringLpResult lp = solve_covering_lp(a, b, std::vector<Rational>(columns.size(), Rational(1)));

  sol.value = lp.value;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (lp.x[j] <= 0) continue;
    VertexSet original;
    for (int local : columns[j].members()) original.insert(ids[static_cast<std::size_t>(local)]);
    sol.terms.push_back(ColoringTerm{original, lp.x[j]});
  }
  for (std::size_t i = 0; i < rows; ++i) sol.dual[static_cast<std::size_t>(ids[i])] = lp.y[i];
  return sol;
}

bool certificate_holds(const ConflictGraph& graph, const std::vector<Rational>& weights,
                       const ColoringSolution& solution) {
  const int n = graph.size();
  if (solution.dual.size() != static_cast<std::size_t>(n)) return false;
  Rational dual_value = 0;
  for (int v = 0; v < n; ++v) {
    if (solution.dual[static_cast<std::size_t>(v)] < 0) return false;
    dual_value += solution.dual[static_cast<std::size_t>(v)] * weights[static_cast<std::size_t>(v)];
  }
  for (VertexSet s : enumerate_maximal_stable_sets(graph, ConflictGraph::kMaxVertices)) {
    Rational load = 0;
    for (int v : s.members()) load += solution.dual[static_cast<std::size_t>(v)];
    if (load > 1) return false;
  }
  Rational primal_value = 0;
  std::vector<Rational> cover(static_cast<std::size_t>(n), Rational(0));
  for (const auto& term : solution.terms) {
    if (term.weight <= 0 || !graph.is_stable(term.set)) return false;
    primal_value += term.weight;
    for (int v : term.set.members()) cover[static_cast<std::size_t>(v)] += term.weight;
  }
  for (int v = 0; v < n; ++v)
    if (cover[static_cast<std::size_t>(v)] < weights[static_cast<std::size_t>(v)]) return false;
  return primal_value == solution.value && dual_value == solution.value;
}

bool in_rate_region(const TrafficPattern& pattern, const RateVector& rates) {
  return min_speedup(pattern, rates) <= 1;
}

Rational min_speedup(const TrafficPattern& pattern, const RateVector& rates) {
  auto graph = build_enhanced_conflict_graph(pattern);
  return fractional_weighted_coloring(graph, enhanced_rate_vector(pattern, rates)).value;
}

AdmissibleSpeedup min_speedup_for_admissible(const TrafficPattern& pattern,
                                             const VertexEnumerationOptions& options) {
  const std::size_t f = pattern.num_flows();
  const auto ni = static_cast<std::size_t>(pattern.num_inputs());
  const auto no = static_cast<std::size_t>(pattern.num_outputs());
  std::vector<std::vector<Rational>> a(ni + no, std::vector<Rational>(f, Rational(0)));
  for (std::size_t k = 0; k < f; ++k) {
    const Flow& flow = pattern.flows()[k];
    a[static_cast<std::size_t>(flow.input)][k] = 1;
    for (int out : flow.fanout) a[ni + static_cast<std::size_t>(out)][k] = 1;
  }
  // Drop ports that carry no flow; their rows are identically zero.
  std::vector<std::vector<Rational>> rows;
  for (auto& row : a)
    if (std::any_of(row.begin(), row.end(), [](const Rational& v) { return v != 0; }))
      rows.push_back(std::move(row));
  std::vector<Rational> b(rows.size(), Rational(1));

  auto vertices = enumerate_vertices(rows, b, options);
  auto graph = build_enhanced_conflict_graph(pattern);
  AdmissibleSpeedup best;
  best.speedup = 0;
  best.vertices = vertices.size();
  best.worst_vertex.assign(f, Rational(0));
  for (const auto& r : vertices) {
    Rational value = fractional_weighted_coloring(graph, enhanced_rate_vector(pattern, r)).value;
    if (value > best.speedup) {
      best.speedup = value;
      best.worst_vertex = r;
    }
  }
  return best;
}

UncodedCheck uncoded_2xN_check(int n, const Rational& broadcast_rate,
                               const std::vector<Rational>& unicast_rates) {
  if (n < 1) throw ValidationError("2xN check needs N >= 1");
  if (unicast_rates.size() != static_cast<std::size_t>(n))
    throw DimensionError("2xN check needs exactly N unicast rates");
  if (broadcast_rate < 0) throw ValidationError("negative broadcast rate");
  Rational sum = 0;
  for (const auto& r : unicast_rates) {
    if (r < 0) throw ValidationError("negative unicast rate");
    sum += r;
  }
  UncodedCheck check;
  check.inequalities.push_back({"input 2: sum r_i <= 1", sum, Rational(1)});
  for (int i = 0; i < n; ++i)
    check.inequalities.push_back({"output " + std::to_string(i + 1) + ": r_0 + r_" + std::to_string(i + 1) + " <= 1",
                                  broadcast_rate + unicast_rates[static_cast<std::size_t>(i)],
                                  Rational(1)});
  check.inequalities.push_back({"output pairs: 2 r_0 + sum r_i <= 2", 2 * broadcast_rate + sum, Rational(2)});
  check.min_scale = 0;
  for (const auto& q : check.inequalities) check.min_scale = std::max(check.min_scale, Rational(q.lhs / q.rhs));
  check.feasible = check.min_scale <= 1;
  return check;
}

ScheduleFrame build_offline_schedule(const TrafficPattern& pattern, const RateVector& rates) {
  auto graph = build_enhanced_conflict_graph(pattern);
  auto weights = enhanced_rate_vector(pattern, rates);
  ColoringSolution sol = fractional_weighted_coloring(graph, weights);
  if (sol.value > 1)
    throw RegionError("rates are outside the coded rate region (fractional chromatic number " +
                          to_string(sol.value) + ")",
                      to_string(sol.value));

  std::vector<Rational> all = rates;
  for (const auto& t : sol.terms) all.push_back(t.weight);
  mpz_class l = common_denominator(all);
  if (!l.fits_slong_p()) throw SizeCapError("frame length overflows", 0);

  ScheduleFrame frame;
  frame.frame_length = l.get_si();
  frame.lambda = sol.terms;
  for (const auto& t : sol.terms) {
    Rational blocks = t.weight * l;
    for (long k = 0; k < mpz_class(blocks).get_si(); ++k) frame.slots.push_back(t.set);
  }
  frame.slots.resize(static_cast<std::size_t>(frame.frame_length));

  // Keep the earliest r*F services of each sub-flow.
  const std::size_t s = pattern.num_subflows();
  std::vector<long> target(s);
  for (std::size_t v = 0; v < s; ++v) target[v] = mpz_class(weights[v] * l).get_si();
  frame.subflow_service.assign(s, 0);
  for (VertexSet& slot : frame.slots) {
    for (int v : slot.members()) {
      auto& served = frame.subflow_service[static_cast<std::size_t>(v)];
      if (served < target[static_cast<std::size_t>(v)]) ++served;
      else slot.erase(v);
    }
  }
  frame.flow_service.assign(pattern.num_flows(), 0);
  frame.flow_packets.assign(pattern.num_flows(), 0);
  for (std::size_t f = 0; f < pattern.num_flows(); ++f)
    frame.flow_packets[f] = mpz_class(rates[f] * l).get_si();
  for (VertexSet slot : frame.slots) {
    std::vector<bool> seen(pattern.num_flows(), false);
    for (int v : slot.members()) {
      auto flow = static_cast<std::size_t>(pattern.subflows()[static_cast<std::size_t>(v)].flow);
      if (!seen[flow]) {
        seen[flow] = true;
        ++frame.flow_service[flow];
      }
    }
  }
  for (std::size_t v = 0; v < s; ++v)
    if (frame.subflow_service[v] != target[v])
      throw std::logic_error("frame under-serves a sub-flow");
  return frame;
}

nlohmann::json to_json(const ScheduleFrame& frame) {
  nlohmann::json slots = nlohmann::json::array();
  for (VertexSet s : frame.slots) slots.push_back(s.members());
  nlohmann::json lambda = nlohmann::json::array();
  for (const auto& t : frame.lambda) lambda.push_back({to_string(t.weight), t.set.members()});
  return {{"frame_length", frame.frame_length}, {"slots", slots}, {"lambda", lambda}};
}

}  // namespace codedxbar
