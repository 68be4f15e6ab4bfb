#include "codedxbar/conflict_graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "codedxbar/errors.hpp"

namespace codedxbar {

VertexSet VertexSet::of(std::initializer_list<int> vertices) {
  VertexSet s;
  for (int v : vertices) s.insert(v);
  return s;
}

VertexSet VertexSet::from_members(const std::vector<int>& vertices) {
  VertexSet s;
  for (int v : vertices) s.insert(v);
  return s;
}

std::vector<int> VertexSet::members() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

std::vector<int> VertexSet::incidence(int n) const {
  std::vector<int> chi(static_cast<std::size_t>(n), 0);
  for (int v : members()) chi[static_cast<std::size_t>(v)] = 1;
  return chi;
}

bool lexicographically_less(VertexSet a, VertexSet b) {
  auto ma = a.members();
  auto mb = b.members();
  return std::lexicographical_compare(ma.begin(), ma.end(), mb.begin(), mb.end());
}

void sort_lexicographically(std::vector<VertexSet>& sets) {
  std::sort(sets.begin(), sets.end(), lexicographically_less);
}

ConflictGraph::ConflictGraph(int num_vertices) {
  if (num_vertices < 0 || num_vertices > kMaxVertices)
    throw SizeCapError("graph has " + std::to_string(num_vertices) + " vertices",
                       kMaxVertices);
  adjacency_.resize(static_cast<std::size_t>(num_vertices));
}

void ConflictGraph::add_edge(int u, int v) {
  if (u == v) throw ValidationError("self-loop");
  adjacency_.at(static_cast<std::size_t>(u)).insert(v);
  adjacency_.at(static_cast<std::size_t>(v)).insert(u);
}

VertexSet ConflictGraph::all() const {
  return size() == 64 ? VertexSet(~std::uint64_t{0})
                      : VertexSet((std::uint64_t{1} << size()) - 1);
}

std::size_t ConflictGraph::num_edges() const {
  std::size_t twice = 0;
  for (const auto& n : adjacency_) twice += static_cast<std::size_t>(n.size());
  return twice / 2;
}

std::vector<std::pair<int, int>> ConflictGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < size(); ++u)
    for (int v : neighbors(u).members())
      if (u < v) out.emplace_back(u, v);
  return out;
}

bool ConflictGraph::is_stable(VertexSet s) const {
  for (int v : s.members())
    if (!(neighbors(v) & s).empty()) return false;
  return true;
}

bool ConflictGraph::is_clique(VertexSet s) const {
  for (int v : s.members()) {
    VertexSet others = s;
    others.erase(v);
    if (!others.subset_of(neighbors(v))) return false;
  }
  return true;
}

ConflictGraph ConflictGraph::complement() const {
  ConflictGraph c(size());
  for (int v = 0; v < size(); ++v) {
    VertexSet n = all() - neighbors(v);
    n.erase(v);
    c.adjacency_[static_cast<std::size_t>(v)] = n;
  }
  return c;
}

ConflictGraph ConflictGraph::induced(VertexSet keep, std::vector<int>* mapping) const {
  std::vector<int> ids = keep.members();
  ConflictGraph g(static_cast<int>(ids.size()));
  for (std::size_t a = 0; a < ids.size(); ++a)
    for (std::size_t b = a + 1; b < ids.size(); ++b)
      if (adjacent(ids[a], ids[b])) g.add_edge(static_cast<int>(a), static_cast<int>(b));
  if (mapping) *mapping = std::move(ids);
  return g;
}

ConflictGraph build_enhanced_conflict_graph(const TrafficPattern& pattern) {
  const auto& sfs = pattern.subflows();
  if (sfs.size() > static_cast<std::size_t>(ConflictGraph::kMaxVertices))
    throw SizeCapError("pattern has " + std::to_string(sfs.size()) + " sub-flows",
                       ConflictGraph::kMaxVertices);
  ConflictGraph g(static_cast<int>(sfs.size()));
  for (std::size_t u = 0; u < sfs.size(); ++u) {
    for (std::size_t v = u + 1; v < sfs.size(); ++v) {
      bool same_input_other_flow = sfs[u].input == sfs[v].input && sfs[u].flow != sfs[v].flow;
      bool same_output = sfs[u].output == sfs[v].output;
      if (same_input_other_flow || same_output)
        g.add_edge(static_cast<int>(u), static_cast<int>(v));
    }
  }
  return g;
}

namespace {

void check_cap(const ConflictGraph& g, int cap, const char* what) {
  if (g.size() > cap)
    throw SizeCapError(std::string(what) + ": graph has " + std::to_string(g.size()) +
                           " vertices",
                       static_cast<std::size_t>(cap));
}

// Bron-Kerbosch with Tomita pivoting.
void bron_kerbosch(const ConflictGraph& g, VertexSet r, VertexSet p, VertexSet x,
                   std::vector<VertexSet>& out) {
  if (p.empty()) {
    if (x.empty()) out.push_back(r);
    return;
  }
  int pivot = -1;
  int best = -1;
  for (int u : (p | x).members()) {
    int c = (p & g.neighbors(u)).size();
    if (c > best) {
      best = c;
      pivot = u;
    }
  }
  for (int v : (p - g.neighbors(pivot)).members()) {
    VertexSet rv = r;
    rv.insert(v);
    bron_kerbosch(g, rv, p & g.neighbors(v), x & g.neighbors(v), out);
    p.erase(v);
    x.insert(v);
  }
}

}  // namespace

std::vector<VertexSet> maximal_cliques(const ConflictGraph& graph, int cap) {
  check_cap(graph, cap, "maximal clique enumeration");
  std::vector<VertexSet> out;
  if (graph.size() == 0) return out;
  bron_kerbosch(graph, VertexSet{}, graph.all(), VertexSet{}, out);
  sort_lexicographically(out);
  return out;
}

std::vector<VertexSet> enumerate_maximal_stable_sets(const ConflictGraph& graph, int cap) {
  check_cap(graph, cap, "stable set enumeration");
  auto sets = maximal_cliques(graph.complement(), cap);
  for (VertexSet s : sets)
    if (!graph.is_stable(s)) throw std::logic_error("enumerated set is not stable");
  return sets;
}

std::optional<SplitPartition> split_partition(const ConflictGraph& graph) {
  const int n = graph.size();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return graph.neighbors(a).size() > graph.neighbors(b).size();
  });
  std::vector<long> deg;
  for (int v : order) deg.push_back(graph.neighbors(v).size());
  long m = 0;
  for (long i = 1; i <= n; ++i)
    if (deg[static_cast<std::size_t>(i - 1)] >= i - 1) m = i;
  long top = 0, rest = 0;
  for (long i = 0; i < n; ++i) (i < m ? top : rest) += deg[static_cast<std::size_t>(i)];
  if (top != m * (m - 1) + rest) return std::nullopt;
  SplitPartition part;
  for (long i = 0; i < n; ++i)
    (i < m ? part.clique : part.stable).insert(order[static_cast<std::size_t>(i)]);
  if (!graph.is_clique(part.clique) || !graph.is_stable(part.stable))
    throw std::logic_error("split witness failed verification");
  return part;
}

namespace {

// Extends the induced path `path` (path[0] is the smallest cycle vertex).
// `blocked` holds the closed neighbourhoods of path[1..k-1].
bool extend_hole(const ConflictGraph& g, std::vector<int>& path, VertexSet blocked,
                 VertexSet above_start) {
  const int start = path.front();
  const int last = path.back();
  VertexSet candidates = (g.neighbors(last) & above_start) - blocked;
  for (int p : path) candidates.erase(p);
  VertexSet next_blocked = blocked;
  if (path.size() >= 2) {
    next_blocked = next_blocked | g.neighbors(last);
    next_blocked.insert(last);
  }
  for (int v : candidates.members()) {
    if (g.adjacent(v, start)) {
      const std::size_t len = path.size() + 1;
      if (len >= 5 && len % 2 == 1) {
        path.push_back(v);
        return true;
      }
      continue;
    }
    path.push_back(v);
    if (extend_hole(g, path, next_blocked, above_start)) return true;
    path.pop_back();
  }
  return false;
}

}  // namespace

std::optional<std::vector<int>> find_odd_hole(const ConflictGraph& graph) {
  for (int s = 0; s < graph.size(); ++s) {
    VertexSet above;
    for (int v = s + 1; v < graph.size(); ++v) above.insert(v);
    for (int p1 : (graph.neighbors(s) & above).members()) {
      std::vector<int> path{s, p1};
      // p1's successor must avoid s's neighbourhood except when closing.
      if (extend_hole(graph, path, VertexSet{}, above)) return path;
    }
  }
  return std::nullopt;
}

bool is_perfect(const ConflictGraph& graph, int cap) {
  check_cap(graph, cap, "perfect graph test");
  return !find_odd_hole(graph) && !find_odd_hole(graph.complement());
}

std::string to_edge_list(const ConflictGraph& graph) {
  std::ostringstream os;
  for (auto [u, v] : graph.edges()) os << u << ' ' << v << '\n';
  return os.str();
}

nlohmann::json to_json(const ConflictGraph& graph, const TrafficPattern* pattern) {
  nlohmann::json vertices = nlohmann::json::array();
  for (int v = 0; v < graph.size(); ++v) {
    if (pattern) {
      const SubFlow& sf = pattern->subflows().at(static_cast<std::size_t>(v));
      nlohmann::json fanout = nlohmann::json::array();
      for (int j : pattern->flows()[static_cast<std::size_t>(sf.flow)].fanout) fanout.push_back(j + 1);
      vertices.push_back({{"index", v}, {"flow", sf.flow}, {"input", sf.input + 1},
                          {"fanout", fanout}, {"output", sf.output + 1}});
    } else {
      vertices.push_back(v);
    }
  }
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : graph.edges()) edges.push_back({u, v});
  return {{"vertices", vertices}, {"edges", edges}};
}

}  // namespace codedxbar
