#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cylab/geometry.hpp"
#include "cylab/rng.hpp"

namespace cylab {

using Path = std::vector<Point>;

// Height scales of the concentric level boxes: r_N = N and
// h_N = floor(N * (2 + (log N)^2)), natural logarithm.
int height_scale(int N);

struct WalkStop {
  int64_t time = 0;
  Point position{};
  bool exhausted = false;
};

// Streaming simple random walk; positions are not retained.
class Walk {
 public:
  Walk(const Geometry& g, const Point& start, Rng rng)
      : g_(g), pos_(start), rng_(std::move(rng)) {}

  const Geometry& geometry() const { return g_; }
  const Point& position() const { return pos_; }
  int64_t time() const { return t_; }
  Rng& rng() { return rng_; }

  // One step; returns the move index (axis = m >> 1).
  int step() {
    int m = static_cast<int>(rng_.below(static_cast<uint64_t>(g_.degree())));
    pos_ = g_.move(pos_, m);
    ++t_;
    return m;
  }

  // First time the predicate holds (checked at the current time first, so
  // exit/entrance-time semantics with inf over n >= 0 come out right).
  // Budget exhaustion is a tagged outcome, not an error.
  WalkStop run_until(const std::function<bool(int64_t, const Point&)>& pred, int64_t budget);

 private:
  Geometry g_;
  Point pos_{};
  int64_t t_ = 0;
  Rng rng_;
};

// Vertical skeleton bookkeeping with the strict-past local time convention:
// after k vertical moves, local_time(z) counts skeleton indices m < k at z.
// The visit at the current index is not yet counted; an off-by-one here
// corrupts every level-clock experiment downstream, so the update order is
// fixed in on_vertical_move.
class SkeletonTracker {
 public:
  explicit SkeletonTracker(int32_t z0, bool keep_path = false);

  int64_t jumps() const { return k_; }
  int32_t current_level() const { return zhat_; }
  int64_t local_time(int32_t z) const;
  int64_t sup_local_time() const { return sup_; }
  int32_t argmax_level() const { return argmax_; }

  // Call after the walk makes a vertical move at time rho, landing on z_new.
  void on_vertical_move(int64_t rho, int32_t z_new);

  const std::vector<int64_t>& rho() const { return rho_; }
  const std::vector<int32_t>& zhat() const { return zhat_path_; }

 private:
  void bump(int32_t z);

  int64_t k_ = 0;
  int32_t zhat_ = 0;
  std::vector<int64_t> counts_;
  int32_t base_ = 0;  // counts_[z - base_]
  int64_t sup_ = 0;
  int32_t argmax_ = 0;
  bool keep_path_;
  std::vector<int64_t> rho_;
  std::vector<int32_t> zhat_path_;
};

// Full skeleton of a fixed-length run (jump times, skeleton values).
struct SkeletonRecord {
  std::vector<int64_t> rho;    // rho_0 = 0 < rho_1 < ...
  std::vector<int32_t> zhat;   // zhat_k = Z at rho_k
  int64_t steps = 0;

  // L^z_k with the strict-past convention; recomputed by scan.
  int64_t local_time(int64_t k, int32_t z) const;
};

SkeletonRecord skeleton(const Geometry& g, const Point& start, int64_t steps, Rng rng);

// gamma^z_v: first time the count of distinct visits to level z reaches v.
// v = 0 gives time 0.
WalkStop gamma_level(const Geometry& g, const Point& start, double v, int32_t z,
                     int64_t budget, Rng rng);

// Alternating stopping times of the excursions around level z:
// sigma_k (reach level z, then level z +- r_N), tau_k (next exit of the open
// slab of half-height h_N), and the entrance times H_k.
struct ExcursionSchedule {
  int32_t level = 0;
  int r = 0;
  int h = 0;
  std::vector<int64_t> sigma;
  std::vector<int64_t> tau;
  std::vector<int64_t> entry;  // H_k
  bool exhausted = false;
};

ExcursionSchedule excursion_schedule(const Geometry& g, const Point& start, int32_t z,
                                     int k_count, int64_t budget, Rng rng);

// Number of skeleton visits to the base level before the (k+1)-th exit of
// (-h, h). The return legs from the exit boundary back to the level carry no
// visits and their duration does not enter the statistic, so they are elided;
// the within-slab blocks are simulated step by step.
int64_t sample_level_visits(int h, int k_excursions, Rng& rng);

// One excursion of the i.i.d. law: start uniform on the union of the two
// levels z +- r_N, walk until exiting the open slab of half-height h_N.
Path iid_excursion(int32_t z, const Geometry& g, Rng& rng);

struct TvEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int64_t samples = 0;
  int64_t censored = 0;
};

// Total-variation distance between the law of the walk position at the
// excursion start time sigma (from x_prime outside the slab) and the uniform
// law q on the two levels +-r_N.
//  - mc: empirical plug-in estimate (noise floor ~ sqrt(states/samples)).
//  - kernel: exact torus heat kernel in cosine form averaged over sampled
//    vertical stopping times; upper-bound semantics (TV under the mean).
TvEstimate homogenization_tv_mc(const Point& x_prime, const Geometry& g, int64_t samples,
                                uint64_t seed);
TvEstimate homogenization_tv_kernel(const Point& x_prime, const Geometry& g, int64_t samples,
                                    uint64_t seed);

}  // namespace cylab
