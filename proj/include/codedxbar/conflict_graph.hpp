#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "codedxbar/traffic.hpp"

namespace codedxbar {

/// Set of graph vertices as a 64-bit mask. Graphs here never exceed 64
/// vertices; the enumeration caps are lower still.
class VertexSet {
 public:
  constexpr VertexSet() = default;
  constexpr explicit VertexSet(std::uint64_t bits) : bits_(bits) {}
  static VertexSet of(std::initializer_list<int> vertices);
  static VertexSet from_members(const std::vector<int>& vertices);

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(int v) const { return (bits_ >> v) & 1u; }
  int size() const { return std::popcount(bits_); }
  void insert(int v) { bits_ |= std::uint64_t{1} << v; }
  void erase(int v) { bits_ &= ~(std::uint64_t{1} << v); }
  /// Lowest member; set must be nonempty.
  int front() const { return std::countr_zero(bits_); }
  std::vector<int> members() const;
  /// 0/1 incidence vector over n vertices.
  std::vector<int> incidence(int n) const;

  friend constexpr VertexSet operator|(VertexSet a, VertexSet b) { return VertexSet(a.bits_ | b.bits_); }
  friend constexpr VertexSet operator&(VertexSet a, VertexSet b) { return VertexSet(a.bits_ & b.bits_); }
  friend constexpr VertexSet operator-(VertexSet a, VertexSet b) { return VertexSet(a.bits_ & ~b.bits_); }
  friend constexpr bool operator==(VertexSet a, VertexSet b) = default;
  constexpr bool subset_of(VertexSet other) const { return (bits_ & ~other.bits_) == 0; }

 private:
  std::uint64_t bits_ = 0;
};

/// Lexicographic order on sorted member sequences ({0,5} < {1,2}, {0} < {0,3}).
bool lexicographically_less(VertexSet a, VertexSet b);
void sort_lexicographically(std::vector<VertexSet>& sets);

/// Simple undirected graph on at most 64 vertices. When built from a traffic
/// pattern, vertex v is sub-flow v in canonical order.
class ConflictGraph {
 public:
  static constexpr int kMaxVertices = 64;

  explicit ConflictGraph(int num_vertices = 0);

  int size() const { return static_cast<int>(adjacency_.size()); }
  void add_edge(int u, int v);
  bool adjacent(int u, int v) const { return adjacency_[static_cast<std::size_t>(u)].contains(v); }
  VertexSet neighbors(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  VertexSet all() const;
  std::size_t num_edges() const;
  std::vector<std::pair<int, int>> edges() const;
  bool is_stable(VertexSet s) const;
  bool is_clique(VertexSet s) const;
  ConflictGraph complement() const;
  /// Induced subgraph on `keep`; `mapping` receives original vertex ids.
  ConflictGraph induced(VertexSet keep, std::vector<int>* mapping = nullptr) const;

 private:
  std::vector<VertexSet> adjacency_;
};

/// Enhanced conflict graph: sub-flows adjacent iff they sit at the same input
/// in different flows, or share an output.
ConflictGraph build_enhanced_conflict_graph(const TrafficPattern& pattern);

constexpr int kDefaultEnumerationCap = 40;
constexpr int kDefaultPerfectCap = 30;

/// Inclusion-maximal stable sets, sorted lexicographically.
std::vector<VertexSet> enumerate_maximal_stable_sets(const ConflictGraph& graph,
                                                     int cap = kDefaultEnumerationCap);
/// Inclusion-maximal cliques, sorted lexicographically.
std::vector<VertexSet> maximal_cliques(const ConflictGraph& graph,
                                       int cap = kDefaultEnumerationCap);

struct SplitPartition {
  VertexSet clique;
  VertexSet stable;
};

/// Split-graph recognition by the degree-sequence test; returns a witness
/// partition when the graph is split.
std::optional<SplitPartition> split_partition(const ConflictGraph& graph);
inline bool is_split_graph(const ConflictGraph& graph) { return split_partition(graph).has_value(); }

/// An induced odd cycle of length >= 5 in `graph`, if any.
std::optional<std::vector<int>> find_odd_hole(const ConflictGraph& graph);
/// Perfect iff neither the graph nor its complement has an odd hole.
bool is_perfect(const ConflictGraph& graph, int cap = kDefaultPerfectCap);

/// "u v" per line, 0-indexed.
std::string to_edge_list(const ConflictGraph& graph);
/// {"vertices": [...], "edges": [[u, v], ...]}. Vertices carry their
/// sub-flow (1-based ports) when a pattern is given.
nlohmann::json to_json(const ConflictGraph& graph, const TrafficPattern* pattern = nullptr);

}  // namespace codedxbar
