#include <doctest.h>

#include <algorithm>
#include <map>

#include "cylab/geometry.hpp"
#include "cylab/rng.hpp"

using namespace cylab;

namespace {

Point pt(std::initializer_list<int32_t> cs) {
  Point p{};
  int i = 0;
  for (int32_t c : cs) p[i++] = c;
  return p;
}

std::multiset<std::array<int32_t, kMaxDim>> as_multiset(const std::vector<Point>& v) {
  std::multiset<std::array<int32_t, kMaxDim>> out;
  for (const Point& p : v) out.insert(p.c);
  return out;
}

}  // namespace

TEST_CASE("neighbors on the cylinder, generic case") {
  Geometry g = Geometry::cylinder(2, 5);
  auto nb = g.neighbors(pt({0, 0, 0}));
  CHECK(nb.size() == 6);
  auto expect = as_multiset({pt({1, 0, 0}), pt({4, 0, 0}), pt({0, 1, 0}), pt({0, 4, 0}),
                             pt({0, 0, 1}), pt({0, 0, -1})});
  CHECK(as_multiset(nb) == expect);
}

TEST_CASE("neighbors keep multiplicity for degenerate torus sides") {
  Geometry g = Geometry::cylinder(2, 1);
  auto nb = g.neighbors(pt({0, 0, 7}));
  REQUIRE(nb.size() == 6);
  auto ms = as_multiset(nb);
  CHECK(ms.count(pt({0, 0, 7}).c) == 4);  // four torus self-loops
  CHECK(ms.count(pt({0, 0, 8}).c) == 1);
  CHECK(ms.count(pt({0, 0, 6}).c) == 1);

  Geometry g2 = Geometry::cylinder(1, 2);
  auto nb2 = g2.neighbors(pt({0, 3}));
  CHECK(as_multiset(nb2).count(pt({1, 3}).c) == 2);  // double edge across the 2-torus
}

TEST_CASE("neighbors on the full lattice") {
  Geometry g = Geometry::lattice(3);
  auto nb = g.neighbors(pt({0, 0, 0}));
  CHECK(nb.size() == 6);
  for (const Point& q : nb) CHECK(g.dist_inf(q, pt({0, 0, 0})) == 1);
}

TEST_CASE("neighbor relation is symmetric with matching multiplicities") {
  for (int N : {1, 2, 3, 5}) {
    Geometry g = Geometry::cylinder(2, N);
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
      Point p{};
      for (int i = 0; i < 2; ++i) p[i] = static_cast<int32_t>(rng.below(static_cast<uint64_t>(N)));
      p[2] = static_cast<int32_t>(rng.below(11)) - 5;
      for (const Point& q : g.neighbors(p)) {
        auto back = g.neighbors(q);
        auto fwd = g.neighbors(p);
        size_t m1 = static_cast<size_t>(std::count(fwd.begin(), fwd.end(), q));
        size_t m2 = static_cast<size_t>(std::count(back.begin(), back.end(), p));
        CHECK(m1 == m2);
      }
    }
  }
}

TEST_CASE("boundaries: definitions and edge cases") {
  Geometry z2 = Geometry::lattice(2);
  PointSet empty;
  CHECK(boundary(empty, z2).empty());
  CHECK(interior_boundary(empty, z2).empty());

  PointSet single{pt({0, 0})};
  auto bd = boundary(single, z2);
  CHECK(bd.size() == 4);
  CHECK(interior_boundary(single, z2) == single);

  // disjointness / containment hold on random sets
  Geometry cyl = Geometry::cylinder(2, 3);
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    PointSet u;
    for (int i = 0; i < 12; ++i) {
      Point p{};
      p[0] = static_cast<int32_t>(rng.below(3));
      p[1] = static_cast<int32_t>(rng.below(3));
      p[2] = static_cast<int32_t>(rng.below(7)) - 3;
      u.insert(p);
    }
    auto out = boundary(u, cyl);
    auto in = interior_boundary(u, cyl);
    for (const Point& p : out) CHECK(!u.contains(p));
    for (const Point& p : in) CHECK(u.contains(p));
    CHECK(!out.empty());  // finite nonempty set in an infinite graph
  }
}

TEST_CASE("interior boundary of a lattice ball is the sphere (exhaustive scan)") {
  Geometry z3 = Geometry::lattice(3);
  auto ball2 = ball_points(Point{}, 2, z3);
  PointSet u(ball2.begin(), ball2.end());
  auto in_bd = interior_boundary(u, z3);
  // brute-force scan over B(0,3)
  PointSet expected;
  for (const Point& p : ball_points(Point{}, 3, z3)) {
    if (z3.dist_inf(p, Point{}) != 2) continue;
    expected.insert(p);
  }
  CHECK(in_bd == expected);
}

TEST_CASE("ball and sphere enumeration sizes") {
  Geometry z3 = Geometry::lattice(3);
  CHECK(ball_points(Point{}, 2, z3).size() == 125);
  CHECK(sphere_points(Point{}, 2, z3).size() == 98);  // 5^3 - 3^3

  Geometry cyl = Geometry::cylinder(2, 5);
  CHECK(ball_points(Point{}, 3, cyl).size() == 25u * 7u);  // torus saturates
  CHECK(ball_points(Point{}, 1, cyl).size() == 27);
}

TEST_CASE("slab embedding is a graph isomorphism on the box") {
  Geometry g = Geometry::cylinder(2, 9);
  SlabEmbedding em = embed_slab(4, 2, g);
  auto box = ball_points(pt({0, 0, 4}), 2, g);
  REQUIRE(box.size() == 125);

  PointSet image;
  for (const Point& p : box) image.insert(em.to_lattice(p));
  CHECK(image.size() == 125);  // injective

  // adjacency preserved both ways, and sup distances preserved
  Geometry z3 = em.lattice_geometry();
  int adjacencies = 0;
  for (const Point& p : box)
    for (const Point& q : box) {
      bool n_cyl = g.dist_inf(p, q) == 1 && [&] {
        auto nb = g.neighbors(p);
        return std::count(nb.begin(), nb.end(), q) > 0;
      }();
      bool n_lat = z3.dist_inf(em.to_lattice(p), em.to_lattice(q)) == 1 && [&] {
        auto nb = z3.neighbors(em.to_lattice(p));
        return std::count(nb.begin(), nb.end(), em.to_lattice(q)) > 0;
      }();
      CHECK(n_cyl == n_lat);
      if (n_cyl) ++adjacencies;
      CHECK(g.dist_inf(p, q) == z3.dist_inf(em.to_lattice(p), em.to_lattice(q)));
    }
  CHECK(adjacencies == 2 * 300);  // ordered pairs

  // round trip
  for (const Point& p : box) CHECK(em.to_cylinder(em.to_lattice(p)) == p);
}

TEST_CASE("slab embedding edge cases") {
  Geometry g = Geometry::cylinder(2, 5);
  SlabEmbedding em0 = embed_slab(0, 0, g);
  CHECK(em0.to_lattice(pt({0, 0, 0})) == pt({0, 0, 0}));
  CHECK_THROWS(embed_slab(0, 3, g));  // wraps: 2*3+1 > 5
}

TEST_CASE("torus sup-distance folds") {
  Geometry g = Geometry::cylinder(2, 5);
  CHECK(g.dist_inf(pt({0, 0, 0}), pt({4, 0, 0})) == 1);
  CHECK(g.dist_inf(pt({0, 0, 0}), pt({2, 0, 0})) == 2);
  CHECK(g.dist_inf(pt({1, 4, -3}), pt({1, 0, 2})) == 5);
}
