#include <doctest.h>

#include <cmath>
#include <vector>

#include "cylab/rng.hpp"

using namespace cylab;

TEST_CASE("streams are reproducible and order-independent") {
  Rng a = Rng::stream(42, "exp", 7);
  Rng b = Rng::stream(42, "exp", 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

  // replicate 3's stream does not depend on whether others were drawn
  Rng c = Rng::stream(42, "exp", 3);
  Rng other = Rng::stream(42, "exp", 9);
  (void)other.next();
  Rng d = Rng::stream(42, "exp", 3);
  CHECK(c.next() == d.next());

  // different names decorrelate
  Rng e = Rng::stream(42, "exp2", 7);
  CHECK(e.next() != Rng::stream(42, "exp", 7).next());
}

TEST_CASE("below stays in range and is roughly uniform") {
  Rng r(1);
  std::vector<int64_t> counts(6, 0);
  for (int i = 0; i < 60000; ++i) {
    uint64_t v = r.below(6);
    REQUIRE(v < 6);
    ++counts[static_cast<size_t>(v)];
  }
  for (int64_t c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("u01 lies in (0,1)") {
  Rng r(2);
  for (int i = 0; i < 10000; ++i) {
    double u = r.u01();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("poisson and geometric have the right means") {
  Rng r(3);
  double s = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) s += static_cast<double>(r.poisson(3.5));
  CHECK(std::abs(s / n - 3.5) < 3.0 * std::sqrt(3.5 / n));

  s = 0;
  for (int i = 0; i < n; ++i) s += static_cast<double>(r.geometric(0.25));
  // mean 4, variance (1-p)/p^2 = 12
  CHECK(std::abs(s / n - 4.0) < 3.0 * std::sqrt(12.0 / n));
}
