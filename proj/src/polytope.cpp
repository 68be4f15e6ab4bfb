#include "codedxbar/polytope.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

#include "codedxbar/errors.hpp"

namespace codedxbar {
namespace {

using IntVector = std::vector<mpz_class>;

struct Ray {
  IntVector z;
  std::uint64_t tight = 0;  // processed constraints with h.z == 0
};

mpz_class dot(const IntVector& h, const IntVector& z) {
  mpz_class s = 0;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (sgn(h[i]) != 0 && sgn(z[i]) != 0) s += h[i] * z[i];
  return s;
}

void make_primitive(IntVector& z) {
  mpz_class g = 0;
  for (const auto& v : z) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  if (g > 1)
    for (auto& v : z) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
}

}  // namespace

std::vector<std::vector<Rational>> enumerate_vertices(const std::vector<std::vector<Rational>>& a,
                                                      const std::vector<Rational>& b,
                                                      const VertexEnumerationOptions& options) {
  if (a.size() != b.size()) throw DimensionError("vertex enumeration: rhs length mismatch");
  const std::size_t d = a.empty() ? 0 : a.front().size();
  for (const auto& row : a)
    if (row.size() != d) throw DimensionError("vertex enumeration: ragged constraint matrix");
  for (const auto& v : b)
    if (v < 0) throw ValidationError("vertex enumeration: negative right-hand side");
  if (d > options.max_dimension)
    throw SizeCapError("vertex enumeration: dimension " + std::to_string(d), options.max_dimension);
  const std::size_t dim = d + 1;
  const std::size_t total = dim + a.size();
  if (total > 64)
    throw SizeCapError("vertex enumeration: " + std::to_string(total) + " constraints", 64);

  // Constraint k >= dim is  b t - a x >= 0, scaled to integers.
  std::vector<IntVector> rows;
  for (std::size_t k = 0; k < a.size(); ++k) {
    std::vector<Rational> r(a[k].begin(), a[k].end());
    r.push_back(b[k]);
    mpz_class l = common_denominator(r);
    IntVector h(dim);
    for (std::size_t i = 0; i < d; ++i) h[i] = mpz_class(-r[i] * l);
    h[d] = mpz_class(r[d] * l);
    rows.push_back(std::move(h));
  }

  // Orthant start: ray i is tight on every unit constraint but its own.
  std::vector<Ray> rays;
  const std::uint64_t unit_mask = dim == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << dim) - 1;
  for (std::size_t i = 0; i < dim; ++i) {
    Ray r;
    r.z.assign(dim, mpz_class(0));
    r.z[i] = 1;
    r.tight = unit_mask & ~(std::uint64_t{1} << i);
    rays.push_back(std::move(r));
  }

  for (std::size_t k = 0; k < rows.size(); ++k) {
    const IntVector& h = rows[k];
    const std::uint64_t bit = std::uint64_t{1} << (dim + k);
    std::vector<mpz_class> value(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      value[r] = dot(h, rays[r].z);
      int s = sgn(value[r]);
      if (s > 0) pos.push_back(r);
      else if (s < 0) neg.push_back(r);
    }
    if (neg.empty()) {
      for (std::size_t r = 0; r < rays.size(); ++r)
        if (sgn(value[r]) == 0) rays[r].tight |= bit;
      continue;
    }
    std::vector<Ray> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (sgn(value[r]) < 0) continue;
      Ray kept = rays[r];
      if (sgn(value[r]) == 0) kept.tight |= bit;
      next.push_back(std::move(kept));
    }
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        const std::uint64_t common = rays[p].tight & rays[q].tight;
        if (static_cast<std::size_t>(std::popcount(common)) + 2 < dim) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r)
          if (r != p && r != q && (rays[r].tight & common) == common) adjacent = false;
        if (!adjacent) continue;
        Ray fresh;
        fresh.z.resize(dim);
        for (std::size_t i = 0; i < dim; ++i)
          fresh.z[i] = value[p] * rays[q].z[i] - value[q] * rays[p].z[i];
        make_primitive(fresh.z);
        fresh.tight = common | bit;
        next.push_back(std::move(fresh));
        if (next.size() > options.max_rays)
          throw SizeCapError("vertex enumeration: intermediate rays", options.max_rays);
      }
    }
    rays = std::move(next);
  }

  std::vector<std::vector<Rational>> vertices;
  for (const Ray& r : rays) {
    if (sgn(r.z[d]) == 0) throw ValidationError("polytope is unbounded");
    std::vector<Rational> v(d);
    for (std::size_t i = 0; i < d; ++i) {
      v[i] = Rational(r.z[i], r.z[d]);
      v[i].canonicalize();
    }
    vertices.push_back(std::move(v));
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  return vertices;
}

}  // namespace codedxbar
