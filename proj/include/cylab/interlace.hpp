#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "cylab/geometry.hpp"
#include "cylab/potential.hpp"
#include "cylab/rng.hpp"
#include "cylab/walk.hpp"

namespace cylab {

// One trajectory of the cloud hitting the window K. Stored as contiguous
// path segments; between consecutive segments the walk made a far excursion
// beyond the guard sphere that provably never touched K (the re-entrance
// point and return probability come from an exact Green-function solve).
struct InterTrajectory {
  double label = 0.0;  // level mark u_i
  Point start{};
  std::vector<Path> segments;
  bool truncated = false;  // truncate mode: guard exit discarded a possible return
};

enum class FarFieldMode {
  resample,  // exact: Bernoulli escape + entrance-law re-entry at guard exits
  truncate   // spec-literal truncation with a reported return-probability bound
};

struct CloudOptions {
  FarFieldMode mode = FarFieldMode::resample;
  int guard_radius = 0;      // 0 = automatic
  double target_eps = 1e-4;  // truncate mode: solve guard radius for this bound
};

struct InterlacementSample {
  std::vector<Point> window;
  double u_max = 0.0;
  double capacity = 0.0;
  std::vector<InterTrajectory> trajectories;
  double eps_ret = 0.0;  // per-trajectory neglected-return bound (0 for resample)
  int guard_radius = 0;
  FarFieldMode mode = FarFieldMode::resample;
};

// Reusable per-window machinery: equilibrium measure via the free Green
// table, factored Gram system, and the entrance-law cache for far-field
// re-entry. Windows symmetric under the octahedral group share cache entries
// across symmetric guard-exit points.
class WindowSampler {
 public:
  WindowSampler(std::vector<Point> window, const CloudOptions& opts = {});

  InterlacementSample sample(double u_max, Rng& rng) const;
  InterTrajectory sample_trajectory(Rng& rng) const;

  // Stream one full cloud without storing paths: visit(position, label) for
  // every step of every trajectory with label <= u_max (positions outside the
  // window included; callers filter).
  void sample_visits(double u_max, Rng& rng,
                     const std::function<void(const Point&, double)>& visit) const;

  double capacity() const { return cap_; }
  const DiscreteMeasure& equilibrium() const { return e_; }
  int guard_radius() const { return guard_; }
  double eps_ret() const { return eps_ret_; }

  // P_y[walk ever enters the window] plus the entrance law, from the exact
  // boundary-restricted Green system.
  double return_probability(const Point& y) const;

 private:
  struct Entrance {
    std::vector<double> cum;  // cumulative entrance weights over bd_
    double p_ret = 0.0;
  };
  template <class Emit>
  bool walk_stream(Rng& rng, Emit&& emit) const;
  const Entrance& entrance_for(const Point& canonical) const;
  bool window_symmetric() const { return symmetric_; }

  std::vector<Point> window_;
  PointSet window_set_;
  int hull_radius_ = 0;
  CloudOptions opts_;
  int guard_ = 0;
  double eps_ret_ = 0.0;

  std::vector<Point> bd_;  // inner boundary (equilibrium support)
  PointIndex bd_index_;
  Eigen::LLT<Eigen::MatrixXd> gram_llt_;
  DiscreteMeasure e_;
  double cap_ = 0.0;
  std::vector<double> start_cum_;
  bool symmetric_ = false;
  mutable std::unordered_map<Point, Entrance, PointHash> cache_;
};

// One-shot cloud for a window K at level budget u_max.
InterlacementSample sample_cloud(const std::vector<Point>& K, double u_max,
                                 const CloudOptions& opts, Rng& rng);

// Dense occupancy/vacancy field over a window W.
class OccupancyField {
 public:
  OccupancyField(const std::vector<Point>& window);

  void mark(const Point& p);          // no-op outside the window
  bool in_window(const Point& p) const;
  bool occupied(const Point& p) const;
  int64_t occupied_count() const { return count_; }
  const std::vector<Point>& window() const { return window_; }
  double level = 0.0;

 private:
  int64_t index_of(const Point& p) const;
  std::vector<Point> window_;
  Point lo_{}, hi_{};
  int64_t stride1_ = 0, stride2_ = 0;
  std::vector<uint8_t> cell_;  // 0 outside, 1 vacant, 2 occupied
  int64_t count_ = 0;
};

// Trace of the trajectories with label <= u on W (monotone in u per sample
// by construction).
OccupancyField occupancy(const InterlacementSample& s, double u,
                         const std::vector<Point>& W);
// Complement view: occupied(p) answers "p vacant".
OccupancyField vacancy(const InterlacementSample& s, double u, const std::vector<Point>& W);

// Each trajectory contributes only its piece up to the first exit of the
// concentric box of radius c_radius (must be below the guard radius).
OccupancyField truncated_occupancy(const InterlacementSample& s, double u,
                                   const std::vector<Point>& A, int c_radius);

// Successive returns to A and departures from C along one trajectory, as
// global step indices into the concatenated segments.
struct ReturnDeparture {
  int64_t r = 0;
  int64_t d = 0;
};
std::vector<ReturnDeparture> returns_departures(const InterTrajectory& traj,
                                                const PointSet& a, const PointSet& c);

}  // namespace cylab
