#pragma once

#include <cstddef>
#include <vector>

#include "codedxbar/rational.hpp"

namespace codedxbar {

struct VertexEnumerationOptions {
  std::size_t max_dimension = 20;
  std::size_t max_rays = 200000;
};

/// Vertices of the bounded polytope { x >= 0 : A x <= b } (b >= 0), by the
/// double-description method over primitive integer rays of the
/// homogenized cone { (x, t) >= 0 : A x <= b t }. Results are exact,
/// deduplicated and sorted. Throws SizeCapError past either cap and
/// ValidationError when the polytope is unbounded.
std::vector<std::vector<Rational>> enumerate_vertices(const std::vector<std::vector<Rational>>& a,
                                                      const std::vector<Rational>& b,
                                                      const VertexEnumerationOptions& options = {});

}  // namespace codedxbar
