#include "codedxbar/simplex.hpp"

#include "codedxbar/errors.hpp"

namespace codedxbar {

CoveringLpResult solve_covering_lp(const std::vector<std::vector<Rational>>& a,
                                   const std::vector<Rational>& b,
                                   const std::vector<Rational>& cost) {
  const std::size_t m = a.size();
  const std::size_t n = cost.size();
  if (b.size() != m) throw DimensionError("covering LP: rhs length mismatch");
  for (const auto& row : a)
    if (row.size() != n) throw DimensionError("covering LP: ragged constraint matrix");
  for (const auto& c : cost)
    if (c < 0) throw ValidationError("covering LP: negative cost");

  // Row i reads  -A_i x + s_i = -b_i.  Columns 0..n-1 structural, n..n+m-1 surplus.
  const std::size_t cols = n + m;
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols));
  std::vector<Rational> rhs(m);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = -a[i][j];
    t[i][n + i] = 1;
    rhs[i] = -b[i];
    basis[i] = n + i;
  }
  std::vector<Rational> reduced(cols);
  for (std::size_t j = 0; j < n; ++j) reduced[j] = cost[j];

  CoveringLpResult result;
  Rational ratio, best;
  for (;;) {
    std::size_t leave = m;
    for (std::size_t i = 0; i < m; ++i)
      if (rhs[i] < 0 && (leave == m || basis[i] < basis[leave])) leave = i;
    if (leave == m) break;

    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (t[leave][j] >= 0) continue;
      ratio = reduced[j] / -t[leave][j];
      if (enter == cols || ratio < best) {
        best = ratio;
        enter = j;
      }
    }
    if (enter == cols) throw ValidationError("covering LP is infeasible");

    const Rational pivot = t[leave][enter];
    for (std::size_t j = 0; j < cols; ++j)
      if (sgn(t[leave][j]) != 0) t[leave][j] /= pivot;
    rhs[leave] /= pivot;
    const auto& prow = t[leave];
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || sgn(t[i][enter]) == 0) continue;
      const Rational factor = t[i][enter];
      for (std::size_t j = 0; j < cols; ++j)
        if (sgn(prow[j]) != 0) t[i][j] -= factor * prow[j];
      rhs[i] -= factor * rhs[leave];
    }
    if (sgn(reduced[enter]) != 0) {
      const Rational factor = reduced[enter];
      for (std::size_t j = 0; j < cols; ++j)
        if (sgn(prow[j]) != 0) reduced[j] -= factor * prow[j];
    }
    basis[leave] = enter;
    ++result.pivots;
  }

  result.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) result.x[basis[i]] = rhs[i];
  result.y.resize(m);
  for (std::size_t i = 0; i < m; ++i) result.y[i] = reduced[n + i];
  result.value = 0;
  for (std::size_t j = 0; j < n; ++j) result.value += cost[j] * result.x[j];
  return result;
}

}  // namespace codedxbar
