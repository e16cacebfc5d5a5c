#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "cylab/geometry.hpp"
#include "cylab/rng.hpp"

namespace cylab {

inline constexpr int64_t kNever = std::numeric_limits<int64_t>::max();

// Dense first-visit record of a cylinder walk. Vertical extent grows as the
// walk explores; queries by (torus index, level).
class CylinderTrace {
 public:
  CylinderTrace(const Geometry& g, const Point& start);

  void visit(const Point& p, int64_t t);
  int64_t first_visit_index(int64_t cell) const { return fv_[static_cast<size_t>(cell)]; }
  int64_t first_visit(const Point& p) const;

  int32_t zmin() const { return zmin_; }
  int32_t zmax() const { return zmax_; }
  int64_t torus_volume() const { return yvol_; }
  const Geometry& geometry() const { return g_; }

  int64_t cell_of(const Point& p) const;  // -1 when outside the stored slab
  int64_t cells() const { return static_cast<int64_t>(fv_.size()); }
  int32_t zbase() const { return zbase_; }
  int64_t y_index(const Point& p) const;

  // Torus adjacency table: for each torus index, the 2d wrapped neighbors.
  const std::vector<int32_t>& torus_neighbors() const { return ynbr_; }

 private:
  void ensure_level(int32_t z);

  Geometry g_;
  int64_t yvol_;
  std::vector<int64_t> fv_;
  std::vector<int32_t> ynbr_;
  int32_t zbase_, zmin_, zmax_;
};

// Whether the vertices visited by time n cut the cylinder: no nearest
// neighbor path through unvisited vertices from the level above the trace to
// the level below it. BFS on the slab; exact.
bool disconnects_at(const CylinderTrace& trace, int64_t n);

// Independent union-find implementation of the same predicate.
bool disconnects_at_unionfind(const CylinderTrace& trace, int64_t n);

// Set interface: does the finite set S disconnect the cylinder.
bool disconnects(const PointSet& s, const Geometry& g);

struct DisconnectionResult {
  int64_t time = -1;     // exact disconnection time when not censored
  bool censored = false;
  int64_t budget = 0;
  int64_t probes = 0;    // connectivity probes performed
};

enum class TnSearch { doubling_bisect, incremental };

// Exact disconnection time of a walk from `start` (budgeted; censoring is a
// tagged outcome). doubling_bisect exploits monotonicity of the disconnection
// predicate in n; incremental re-probes after every step and serves as the
// brute-force oracle.
DisconnectionResult disconnection_time(const Geometry& g, const Point& start, int64_t budget,
                                       Rng rng, TnSearch method = TnSearch::doubling_bisect);

// Default step budget for disconnection runs: 64 * N^(2d) * multiplier.
int64_t default_tn_budget(const Geometry& g, double multiplier = 1.0);

struct TnRow {
  uint64_t replicate = 0;
  int64_t t = -1;
  double scaled = 0.0;  // T_N / N^(2d)
  bool censored = false;
};

// Empirical sample of T_N / N^(2d); censored replicates are recorded, never
// dropped.
std::vector<TnRow> tn_distribution(const Geometry& g, int replicates, uint64_t seed,
                                   double budget_multiplier = 1.0);

}  // namespace cylab
