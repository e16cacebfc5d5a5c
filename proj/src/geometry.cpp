#include "cylab/geometry.hpp"

#include <algorithm>

namespace cylab {

namespace {

// Distinct coordinate offsets covered by [-radius, radius] on a given axis.
std::vector<int32_t> axis_offsets(int axis, int radius, const Geometry& g) {
  std::vector<int32_t> out;
  if (g.is_cylinder() && axis < g.d) {
    int span = std::min<int64_t>(2LL * radius + 1, g.N);
    out.reserve(static_cast<size_t>(span));
    for (int k = 0; k < span; ++k) out.push_back(static_cast<int32_t>(k - span / 2));
    if (span == g.N) {
      // whole torus: canonical residues 0..N-1 relative to center handled below
      out.clear();
      for (int k = 0; k < g.N; ++k) out.push_back(static_cast<int32_t>(k));
    }
  } else {
    out.reserve(static_cast<size_t>(2 * radius + 1));
    for (int k = -radius; k <= radius; ++k) out.push_back(static_cast<int32_t>(k));
  }
  return out;
}

int32_t apply_offset(int axis, int32_t base, int32_t off, const Geometry& g, bool absolute) {
  if (g.is_cylinder() && axis < g.d) {
    int64_t v = absolute ? off : static_cast<int64_t>(base) + off;
    int64_t m = ((v % g.N) + g.N) % g.N;
    return static_cast<int32_t>(m);
  }
  return base + off;
}

}  // namespace

std::vector<Point> ball_points(const Point& center, int radius, const Geometry& g) {
  std::vector<Point> out;
  if (radius < 0) return out;
  int dim = g.ambient();
  std::vector<std::vector<int32_t>> offs(static_cast<size_t>(dim));
  std::vector<bool> absolute(static_cast<size_t>(dim), false);
  size_t total = 1;
  for (int i = 0; i < dim; ++i) {
    offs[static_cast<size_t>(i)] = axis_offsets(i, radius, g);
    absolute[static_cast<size_t>(i)] =
        g.is_cylinder() && i < g.d && 2LL * radius + 1 >= g.N;
    total *= offs[static_cast<size_t>(i)].size();
  }
  out.reserve(total);
  std::vector<size_t> idx(static_cast<size_t>(dim), 0);
  for (;;) {
    Point p = center;
    for (int i = 0; i < dim; ++i)
      p[i] = apply_offset(i, center[i], offs[static_cast<size_t>(i)][idx[static_cast<size_t>(i)]],
                          g, absolute[static_cast<size_t>(i)]);
    out.push_back(p);
    int axis = 0;
    while (axis < dim) {
      if (++idx[static_cast<size_t>(axis)] < offs[static_cast<size_t>(axis)].size()) break;
      idx[static_cast<size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == dim) break;
  }
  return out;
}

std::vector<Point> sphere_points(const Point& center, int radius, const Geometry& g) {
  std::vector<Point> out;
  for (const Point& p : ball_points(center, radius, g))
    if (g.dist_inf(p, center) == radius) out.push_back(p);
  return out;
}

PointSet boundary(const PointSet& u, const Geometry& g) {
  PointSet out;
  for (const Point& p : u)
    for (const Point& q : g.neighbors(p))
      if (!u.contains(q)) out.insert(q);
  return out;
}

PointSet interior_boundary(const PointSet& u, const Geometry& g) {
  PointSet out;
  for (const Point& p : u)
    for (const Point& q : g.neighbors(p))
      if (!u.contains(q)) {
        out.insert(p);
        break;
      }
  return out;
}

Point SlabEmbedding::to_lattice(const Point& p) const {
  if (!in_box(p)) throw std::invalid_argument("point outside embedded box");
  Point q{};
  for (int i = 0; i < cyl.d; ++i) q[i] = cyl.coord_diff(i, p[i], 0);
  q[cyl.d] = p[cyl.d] - center_z;
  return q;
}

Point SlabEmbedding::to_cylinder(const Point& q) const {
  Point p{};
  for (int i = 0; i < cyl.d; ++i) {
    int64_t m = ((static_cast<int64_t>(q[i]) % cyl.N) + cyl.N) % cyl.N;
    p[i] = static_cast<int32_t>(m);
  }
  p[cyl.d] = q[cyl.d] + center_z;
  return p;
}

bool SlabEmbedding::in_box(const Point& p) const {
  Point c{};
  c[cyl.d] = center_z;
  return cyl.dist_inf(p, c) <= radius;
}

SlabEmbedding embed_slab(int center_z, int radius, const Geometry& g) {
  if (!g.is_cylinder()) throw std::invalid_argument("embed_slab needs a cylinder");
  if (radius < 0) throw std::invalid_argument("negative radius");
  if (2LL * radius + 1 > g.N)
    throw std::invalid_argument("box wraps around the torus; needs 2*radius+1 <= N");
  return SlabEmbedding{g, center_z, radius};
}

}  // namespace cylab
