#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace cylab {

// Ambient dimension cap (d + 1). Experiments use d = 2, the geometry accepts
// anything up to this.
inline constexpr int kMaxDim = 8;

// Vertex of either the cylinder (Z/NZ)^d x Z or of Z^(d+1). For the cylinder
// the first d coordinates are residues in [0, N) and coordinate d is the
// unbounded vertical one.
struct Point {
  std::array<int32_t, kMaxDim> c{};

  int32_t& operator[](int i) { return c[static_cast<size_t>(i)]; }
  int32_t operator[](int i) const { return c[static_cast<size_t>(i)]; }
  bool operator==(const Point&) const = default;
};

struct PointHash {
  size_t operator()(const Point& p) const {
    uint64_t h = 0x9e3779b97f4a7c15ull;
    for (int i = 0; i < kMaxDim; i += 2) {
      uint64_t w = (static_cast<uint64_t>(static_cast<uint32_t>(p.c[i])) << 32) |
                   static_cast<uint64_t>(static_cast<uint32_t>(p.c[i + 1]));
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdull;
    }
    return static_cast<size_t>(h ^ (h >> 33));
  }
};

using PointSet = std::unordered_set<Point, PointHash>;

struct Geometry {
  enum class Kind { cylinder, lattice };

  Kind kind = Kind::lattice;
  int d = 2;  // torus dimension; ambient dimension is d + 1
  int N = 0;  // torus side, cylinder only

  static Geometry cylinder(int d, int N) {
    if (d < 1 || N < 1) throw std::invalid_argument("cylinder requires d >= 1, N >= 1");
    if (d + 1 > kMaxDim) throw std::invalid_argument("dimension too large");
    return Geometry{Kind::cylinder, d, N};
  }
  // Z^(ambient_dim); stored with the same d-convention as the cylinder.
  static Geometry lattice(int ambient_dim) {
    if (ambient_dim < 1 || ambient_dim > kMaxDim)
      throw std::invalid_argument("bad ambient dimension");
    return Geometry{Kind::lattice, ambient_dim - 1, 0};
  }

  int ambient() const { return d + 1; }
  int degree() const { return 2 * (d + 1); }
  bool is_cylinder() const { return kind == Kind::cylinder; }

  bool valid(const Point& p) const {
    if (kind == Kind::cylinder) {
      for (int i = 0; i < d; ++i)
        if (p[i] < 0 || p[i] >= N) return false;
    }
    for (int i = ambient(); i < kMaxDim; ++i)
      if (p[i] != 0) return false;
    return true;
  }

  // Move m in [0, degree()): axis m/2, direction +1 for even m, -1 for odd.
  // Torus axes wrap; for N in {1,2} this yields the degenerate multi-edges
  // (each of the 2(d+1) moves still has probability 1/(2(d+1))).
  Point move(Point p, int m) const {
    int axis = m >> 1;
    int32_t dir = (m & 1) ? -1 : 1;
    int32_t v = p[axis] + dir;
    if (kind == Kind::cylinder && axis < d) {
      if (v < 0) v += N;
      if (v >= N) v -= N;
    }
    p[axis] = v;
    return p;
  }

  // All 2(d+1) one-step moves, duplicates retained for N in {1,2}.
  std::vector<Point> neighbors(const Point& p) const {
    std::vector<Point> out;
    out.reserve(static_cast<size_t>(degree()));
    for (int m = 0; m < degree(); ++m) out.push_back(move(p, m));
    return out;
  }

  // Minimal representative of a coordinate difference on axis i.
  int32_t coord_diff(int axis, int32_t a, int32_t b) const {
    int64_t delta = static_cast<int64_t>(a) - b;
    if (kind == Kind::cylinder && axis < d) {
      int64_t m = ((delta % N) + N) % N;
      return static_cast<int32_t>(m <= N - m ? m : m - N);
    }
    return static_cast<int32_t>(delta);
  }

  int dist_inf(const Point& a, const Point& b) const {
    int r = 0;
    for (int i = 0; i < ambient(); ++i) {
      int v = coord_diff(i, a[i], b[i]);
      if (v < 0) v = -v;
      if (v > r) r = v;
    }
    return r;
  }
};

// Closed sup-norm ball spec. Membership agrees with |x - center|_inf <= radius
// in the geometry's metric (torus coordinates fold).
struct BoxSpec {
  Point center{};
  int radius = 0;

  bool contains(const Point& p, const Geometry& g) const {
    return g.dist_inf(p, center) <= radius;
  }
};

std::vector<Point> ball_points(const Point& center, int radius, const Geometry& g);
std::vector<Point> sphere_points(const Point& center, int radius, const Geometry& g);

PointSet boundary(const PointSet& u, const Geometry& g);
PointSet interior_boundary(const PointSet& u, const Geometry& g);

// Identification of a non-wrapping cylinder box with a box of Z^(d+1).
// Box = B(((0,...,0), center_z), radius); requires 2*radius + 1 <= N.
struct SlabEmbedding {
  Geometry cyl;
  int center_z = 0;
  int radius = 0;

  Point to_lattice(const Point& p) const;   // cylinder box -> Z^(d+1) box
  Point to_cylinder(const Point& q) const;  // inverse
  bool in_box(const Point& p) const;
  Geometry lattice_geometry() const { return Geometry::lattice(cyl.ambient()); }
};

SlabEmbedding embed_slab(int center_z, int radius, const Geometry& g);

}  // namespace cylab
