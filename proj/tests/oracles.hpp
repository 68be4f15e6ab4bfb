#pragma once

// Independent brute-force references. Nothing here calls the library's
// algorithms; only plain adjacency queries are shared.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "codedxbar/conflict_graph.hpp"
#include "codedxbar/rng.hpp"

namespace oracle {

using codedxbar::ConflictGraph;

inline std::vector<int> members(std::uint64_t mask) {
  std::vector<int> out;
  for (int v = 0; v < 64; ++v)
    if (mask >> v & 1u) out.push_back(v);
  return out;
}

inline bool is_stable(const ConflictGraph& g, std::uint64_t mask) {
  const auto m = members(mask);
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b)
      if (g.adjacent(m[a], m[b])) return false;
  return true;
}

inline bool is_clique(const ConflictGraph& g, std::uint64_t mask) {
  const auto m = members(mask);
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b)
      if (!g.adjacent(m[a], m[b])) return false;
  return true;
}

template <typename Pred>
std::vector<std::uint64_t> maximal_sets(const ConflictGraph& g, Pred pred) {
  const int n = g.size();
  std::vector<std::uint64_t> good;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
    if (pred(g, s)) good.push_back(s);
  std::vector<std::uint64_t> out;
  for (std::uint64_t s : good) {
    bool maximal = true;
    for (int v = 0; v < n && maximal; ++v)
      if (!(s >> v & 1u) && pred(g, s | (std::uint64_t{1} << v))) maximal = false;
    if (maximal && (s != 0 || n == 0)) out.push_back(s);
  }
  return out;
}

inline std::vector<std::uint64_t> maximal_stable_sets(const ConflictGraph& g) {
  return maximal_sets(g, is_stable);
}

inline std::vector<std::uint64_t> maximal_cliques(const ConflictGraph& g) {
  return maximal_sets(g, is_clique);
}

/// Heaviest stable set; among equal weights the one whose sorted member
/// list is lexicographically smallest.
inline std::uint64_t mwss(const ConflictGraph& g, const std::vector<std::int64_t>& w) {
  const int n = g.size();
  std::uint64_t best = 0;
  std::int64_t best_w = 0;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
    bool positive = true;
    std::int64_t total = 0;
    for (int v : members(s)) {
      if (w[static_cast<std::size_t>(v)] == 0) positive = false;
      total += w[static_cast<std::size_t>(v)];
    }
    if (!positive || !is_stable(g, s)) continue;
    const auto ms = members(s);
    const auto mb = members(best);
    if (total > best_w ||
        (total == best_w && std::lexicographical_compare(ms.begin(), ms.end(), mb.begin(), mb.end()))) {
      best = s;
      best_w = total;
    }
  }
  return best;
}

inline bool is_split(const ConflictGraph& g) {
  const int n = g.size();
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << n); ++k) {
    const std::uint64_t rest = ((std::uint64_t{1} << n) - 1) & ~k;
    if (is_clique(g, k) && is_stable(g, rest)) return true;
  }
  return false;
}

// induced cycle: every member has exactly two neighbours inside and the
// subgraph is connected
inline bool is_induced_cycle(const ConflictGraph& g, std::uint64_t s) {
  const auto m = members(s);
  for (int v : m) {
    int deg = 0;
    for (int u : m)
      if (u != v && g.adjacent(u, v)) ++deg;
    if (deg != 2) return false;
  }
  std::uint64_t seen = std::uint64_t{1} << m[0];
  std::vector<int> stack{m[0]};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : m)
      if (!(seen >> u & 1u) && g.adjacent(u, v)) {
        seen |= std::uint64_t{1} << u;
        stack.push_back(u);
      }
  }
  return seen == s;
}

inline bool has_odd_hole(const ConflictGraph& g) {
  const int n = g.size();
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    const int k = __builtin_popcountll(s);
    if (k >= 5 && k % 2 == 1 && is_induced_cycle(g, s)) return true;
  }
  return false;
}

inline bool is_perfect(const ConflictGraph& g) {
  ConflictGraph c(g.size());
  for (int u = 0; u < g.size(); ++u)
    for (int v = u + 1; v < g.size(); ++v)
      if (!g.adjacent(u, v)) c.add_edge(u, v);
  return !has_odd_hole(g) && !has_odd_hole(c);
}

inline ConflictGraph random_graph(int n, std::uint64_t num, std::uint64_t den, codedxbar::Rng& rng) {
  ConflictGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(num, den)) g.add_edge(u, v);
  return g;
}

inline ConflictGraph cycle(int n) {
  ConflictGraph g(n);
  for (int v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
  return g;
}

/// GF(2^m) multiplication by shift-and-add with reduction polynomial `poly`.
inline std::uint8_t gf_mul(unsigned a, unsigned b, unsigned poly, int m) {
  unsigned r = 0;
  while (b) {
    if (b & 1u) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a >> m & 1u) a ^= poly;
  }
  return static_cast<std::uint8_t>(r);
}

/// Exponent and log tables of GF(256) built by repeated multiplication by
/// the generator 0x03.
struct LogTables {
  std::vector<unsigned> exp = std::vector<unsigned>(510);
  std::vector<int> log = std::vector<int>(256, -1);
  LogTables() {
    unsigned x = 1;
    for (int i = 0; i < 255; ++i) {
      exp[static_cast<std::size_t>(i)] = x;
      log[x] = i;
      x = gf_mul(x, 3, 0x11B, 8);
    }
    for (int i = 255; i < 510; ++i) exp[static_cast<std::size_t>(i)] = exp[static_cast<std::size_t>(i - 255)];
  }
  unsigned mul(unsigned a, unsigned b) const {
    if (a == 0 || b == 0) return 0;
    return exp[static_cast<std::size_t>(log[a] + log[b])];
  }
};

inline unsigned poly_for(int q) { return q == 2 ? 0x3 : q == 16 ? 0x13 : 0x11B; }
inline int degree_for(int q) { return q == 2 ? 1 : q == 16 ? 4 : 8; }

/// Rank over GF(q) by plain Gaussian elimination using gf_mul and inverses
/// found by search.
inline std::size_t rank(std::vector<std::vector<std::uint8_t>> rows, int q) {
  const unsigned poly = poly_for(q);
  const int m = degree_for(q);
  auto inv = [&](unsigned a) {
    for (unsigned b = 1; b < static_cast<unsigned>(q); ++b)
      if (gf_mul(a, b, poly, m) == 1) return b;
    return 0u;
  };
  std::size_t r = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const unsigned iv = inv(rows[r][c]);
    for (auto& x : rows[r]) x = gf_mul(x, iv, poly, m);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const unsigned f = rows[i][c];
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] ^= gf_mul(f, rows[r][j], poly, m);
    }
    ++r;
  }
  return r;
}

}  // namespace oracle
