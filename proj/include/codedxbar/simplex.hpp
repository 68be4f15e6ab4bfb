#pragma once

#include <cstddef>
#include <vector>

#include "codedxbar/rational.hpp"

namespace codedxbar {

struct CoveringLpResult {
  Rational value;
  std::vector<Rational> x;  ///< one entry per column
  std::vector<Rational> y;  ///< dual multipliers, one per row
  std::size_t pivots = 0;
};

/// Exact solve of  min cost.x  s.t.  A x >= b, x >= 0  with cost >= 0.
///
/// Runs the dual simplex method from the all-surplus basis, which is dual
/// feasible because cost >= 0, so no phase one is needed. Leaving and
/// entering choices follow Bland's smallest-index rule. The returned x is a
/// basic solution and y certifies optimality (A^T y <= cost, y >= 0,
/// b.y == value). Throws ValidationError when the system is infeasible.
CoveringLpResult solve_covering_lp(const std::vector<std::vector<Rational>>& a,
                                   const std::vector<Rational>& b,
                                   const std::vector<Rational>& cost);

}  // namespace codedxbar
