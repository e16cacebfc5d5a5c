#include "cylab/interlace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cylab/green_z3.hpp"

namespace cylab {

namespace {

const Geometry kZ3 = Geometry::lattice(3);

int hull_radius_of(const std::vector<Point>& pts) {
  int r = 0;
  for (const Point& p : pts)
    for (int i = 0; i < 3; ++i) r = std::max(r, std::abs(p[i]));
  return r;
}

// octahedral canonical form: |coordinates| sorted descending
Point canonical_of(const Point& y, int perm[3], int sign[3]) {
  int order[3] = {0, 1, 2};
  std::sort(order, order + 3,
            [&](int a, int b) { return std::abs(y[a]) > std::abs(y[b]); });
  Point c{};
  for (int i = 0; i < 3; ++i) {
    perm[i] = order[i];
    sign[i] = y[order[i]] < 0 ? -1 : 1;
    c[i] = std::abs(y[order[i]]);
  }
  return c;
}

}  // namespace

WindowSampler::WindowSampler(std::vector<Point> window, const CloudOptions& opts)
    : window_(std::move(window)), opts_(opts) {
  if (window_.empty()) throw std::invalid_argument("WindowSampler: empty window");
  window_set_ = PointSet(window_.begin(), window_.end());
  hull_radius_ = hull_radius_of(window_);

  // equilibrium support and Gram system on the inner boundary
  PointSet inner = interior_boundary(window_set_, kZ3);
  bd_.assign(inner.begin(), inner.end());
  std::sort(bd_.begin(), bd_.end(), [](const Point& a, const Point& b) { return a.c < b.c; });
  for (size_t i = 0; i < bd_.size(); ++i) bd_index_[bd_[i]] = static_cast<int>(i);

  int n = static_cast<int>(bd_.size());
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Point& a = bd_[static_cast<size_t>(i)];
      const Point& b = bd_[static_cast<size_t>(j)];
      gram(i, j) = green_z3::at(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
    }
  gram_llt_.compute(gram);
  Eigen::VectorXd e = gram_llt_.solve(Eigen::VectorXd::Ones(n));

  start_cum_.reserve(static_cast<size_t>(n));
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double w = std::max(0.0, e(i));
    e_.support.push_back(bd_[static_cast<size_t>(i)]);
    e_.weight.push_back(w);
    acc += w;
    start_cum_.push_back(acc);
  }
  cap_ = acc;

  // guard radius: for resample a thin margin suffices (the entrance solve is
  // exact at any distance); for truncate it is solved from the target bound
  if (opts_.guard_radius > 0) {
    guard_ = opts_.guard_radius;
  } else if (opts_.mode == FarFieldMode::resample) {
    guard_ = hull_radius_ + 4;
  } else {
    guard_ = std::max(2 * hull_radius_ + 2, 8);
    while (cap_ * green_z3::at(guard_ + 1 - hull_radius_, 0, 0) > opts_.target_eps)
      guard_ = guard_ * 3 / 2 + 1;
  }
  if (guard_ <= hull_radius_) throw std::invalid_argument("guard radius inside window");
  if (opts_.mode == FarFieldMode::resample &&
      guard_ + 1 + hull_radius_ > green_z3::table_radius())
    throw std::invalid_argument("window+guard exceed the Green table range");
  eps_ret_ = opts_.mode == FarFieldMode::truncate
                 ? cap_ * green_z3::at(guard_ + 1 - hull_radius_, 0, 0)
                 : 0.0;

  // octahedral symmetry lets guard-exit points share entrance-law cache
  // entries through their canonical form
  symmetric_ = true;
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int g_id = 0; g_id < 48 && symmetric_; ++g_id) {
    const int* pr = perms[g_id % 6];
    int signs = g_id / 6;
    for (const Point& w : window_) {
      Point t{};
      for (int i = 0; i < 3; ++i)
        t[i] = ((signs >> i) & 1 ? -1 : 1) * w[pr[i]];
      if (!window_set_.contains(t)) {
        symmetric_ = false;
        break;
      }
    }
  }
}

const WindowSampler::Entrance& WindowSampler::entrance_for(const Point& key) const {
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  int n = static_cast<int>(bd_.size());
  Eigen::VectorXd gy(n);
  for (int i = 0; i < n; ++i) {
    const Point& x = bd_[static_cast<size_t>(i)];
    gy(i) = green_z3::at(key[0] - x[0], key[1] - x[1], key[2] - x[2]);
  }
  Eigen::VectorXd h = gram_llt_.solve(gy);
  Entrance e;
  e.cum.reserve(static_cast<size_t>(n));
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += std::max(0.0, h(i));
    e.cum.push_back(acc);
  }
  e.p_ret = std::min(acc, 1.0);
  return cache_.emplace(key, std::move(e)).first->second;
}

double WindowSampler::return_probability(const Point& y) const {
  if (window_set_.contains(y)) return 1.0;
  if (symmetric_) {
    int perm[3], sign[3];
    return entrance_for(canonical_of(y, perm, sign)).p_ret;
  }
  return entrance_for(y).p_ret;
}

// Core trajectory walk: emit(pos, segment_start) per position; returns
// whether the trajectory was cut by plain truncation.
template <class Emit>
bool WindowSampler::walk_stream(Rng& rng, Emit&& emit) const {
  double u = rng.u01() * cap_;
  size_t i0 = static_cast<size_t>(
      std::upper_bound(start_cum_.begin(), start_cum_.end(), u) - start_cum_.begin());
  if (i0 >= bd_.size()) i0 = bd_.size() - 1;
  Point pos = bd_[i0];
  emit(pos, true);

  for (;;) {
    // walk until leaving the closed guard ball
    int exceeded = -1;
    while (exceeded < 0) {
      int m = static_cast<int>(rng.below(6));
      pos = kZ3.move(pos, m);
      emit(pos, false);
      int axis = m >> 1;
      if (std::abs(pos[axis]) > guard_) exceeded = axis;
    }

    if (opts_.mode == FarFieldMode::truncate) return true;

    // exact far field: escape forever, or re-enter at the entrance law
    const Entrance* ent;
    int perm[3] = {0, 1, 2}, sign[3] = {1, 1, 1};
    if (symmetric_) {
      Point key = canonical_of(pos, perm, sign);
      ent = &entrance_for(key);
    } else {
      ent = &entrance_for(pos);
    }
    if (!rng.bernoulli(ent->p_ret)) return false;
    double v = rng.u01() * ent->p_ret;
    size_t j = static_cast<size_t>(
        std::upper_bound(ent->cum.begin(), ent->cum.end(), v) - ent->cum.begin());
    if (j >= bd_.size()) j = bd_.size() - 1;
    Point entry = bd_[j];
    if (symmetric_) {
      // map the canonical-frame entrance point back to the original frame
      Point mapped{};
      for (int i = 0; i < 3; ++i) mapped[perm[i]] = static_cast<int32_t>(sign[i]) * entry[i];
      entry = mapped;
    }
    pos = entry;
    emit(pos, true);
  }
}

InterTrajectory WindowSampler::sample_trajectory(Rng& rng) const {
  InterTrajectory traj;
  bool first = true;
  traj.truncated = walk_stream(rng, [&](const Point& p, bool segment_start) {
    if (segment_start) {
      if (first) {
        traj.start = p;
        first = false;
      }
      traj.segments.emplace_back();
    }
    traj.segments.back().push_back(p);
  });
  return traj;
}

InterlacementSample WindowSampler::sample(double u_max, Rng& rng) const {
  InterlacementSample s;
  s.window = window_;
  s.u_max = u_max;
  s.capacity = cap_;
  s.eps_ret = eps_ret_;
  s.guard_radius = guard_;
  s.mode = opts_.mode;
  if (u_max <= 0.0) return s;
  int64_t count = rng.poisson(u_max * cap_);
  s.trajectories.reserve(static_cast<size_t>(count));
  for (int64_t i = 0; i < count; ++i) {
    InterTrajectory t = sample_trajectory(rng);
    t.label = rng.u01() * u_max;
    s.trajectories.push_back(std::move(t));
  }
  return s;
}

void WindowSampler::sample_visits(double u_max, Rng& rng,
                                  const std::function<void(const Point&, double)>& visit) const {
  if (u_max <= 0.0) return;
  int64_t count = rng.poisson(u_max * cap_);
  for (int64_t i = 0; i < count; ++i) {
    double label = rng.u01() * u_max;
    walk_stream(rng, [&](const Point& p, bool) { visit(p, label); });
  }
}

InterlacementSample sample_cloud(const std::vector<Point>& K, double u_max,
                                 const CloudOptions& opts, Rng& rng) {
  WindowSampler sampler(K, opts);
  return sampler.sample(u_max, rng);
}

OccupancyField::OccupancyField(const std::vector<Point>& window) : window_(window) {
  if (window_.empty()) throw std::invalid_argument("OccupancyField: empty window");
  lo_ = hi_ = window_[0];
  for (const Point& p : window_)
    for (int i = 0; i < 3; ++i) {
      lo_[i] = std::min(lo_[i], p[i]);
      hi_[i] = std::max(hi_[i], p[i]);
    }
  stride2_ = hi_[2] - lo_[2] + 1;
  stride1_ = (hi_[1] - lo_[1] + 1) * stride2_;
  int64_t total = (hi_[0] - lo_[0] + 1) * stride1_;
  cell_.assign(static_cast<size_t>(total), 0);
  for (const Point& p : window_) cell_[static_cast<size_t>(index_of(p))] = 1;
}

int64_t OccupancyField::index_of(const Point& p) const {
  for (int i = 0; i < 3; ++i)
    if (p[i] < lo_[i] || p[i] > hi_[i]) return -1;
  return (p[0] - lo_[0]) * stride1_ + (p[1] - lo_[1]) * stride2_ + (p[2] - lo_[2]);
}

void OccupancyField::mark(const Point& p) {
  int64_t i = index_of(p);
  if (i < 0 || cell_[static_cast<size_t>(i)] == 0) return;
  if (cell_[static_cast<size_t>(i)] == 1) {
    cell_[static_cast<size_t>(i)] = 2;
    ++count_;
  }
}

bool OccupancyField::in_window(const Point& p) const {
  int64_t i = index_of(p);
  return i >= 0 && cell_[static_cast<size_t>(i)] != 0;
}

bool OccupancyField::occupied(const Point& p) const {
  int64_t i = index_of(p);
  return i >= 0 && cell_[static_cast<size_t>(i)] == 2;
}

OccupancyField occupancy(const InterlacementSample& s, double u,
                         const std::vector<Point>& W) {
  if (u > s.u_max + 1e-12) throw std::invalid_argument("occupancy: u exceeds sampled budget");
  OccupancyField f(W);
  f.level = u;
  for (const InterTrajectory& t : s.trajectories) {
    if (t.label > u) continue;
    for (const Path& seg : t.segments)
      for (const Point& p : seg) f.mark(p);
  }
  return f;
}

OccupancyField vacancy(const InterlacementSample& s, double u, const std::vector<Point>& W) {
  OccupancyField occ = occupancy(s, u, W);
  // flip occupied/vacant in place
  OccupancyField vac(W);
  vac.level = u;
  for (const Point& p : W)
    if (!occ.occupied(p)) vac.mark(p);
  return vac;
}

OccupancyField truncated_occupancy(const InterlacementSample& s, double u,
                                   const std::vector<Point>& A, int c_radius) {
  if (c_radius >= s.guard_radius)
    throw std::invalid_argument("truncated_occupancy: C must sit inside the guard ball");
  OccupancyField f(A);
  f.level = u;
  for (const InterTrajectory& t : s.trajectories) {
    if (t.label > u) continue;
    // the first exit of the C box happens within the first segment
    bool done = false;
    for (const Path& seg : t.segments) {
      for (const Point& p : seg) {
        int a = std::max({std::abs(p[0]), std::abs(p[1]), std::abs(p[2])});
        if (a > c_radius) {
          done = true;
          break;
        }
        f.mark(p);
      }
      if (done) break;
    }
  }
  return f;
}

std::vector<ReturnDeparture> returns_departures(const InterTrajectory& traj,
                                                const PointSet& a, const PointSet& c) {
  std::vector<ReturnDeparture> out;
  int64_t idx = 0;
  bool in_return = false;  // between R_k and D_k
  int64_t r_pending = 0;
  for (const Path& seg : traj.segments) {
    for (const Point& p : seg) {
      if (!in_return) {
        if (a.contains(p)) {
          r_pending = idx;
          in_return = true;
        }
      } else {
        if (!c.contains(p)) {
          out.push_back({r_pending, idx});
          in_return = false;
        }
      }
      ++idx;
    }
  }
  if (in_return) out.push_back({r_pending, -1});  // no departure observed
  return out;
}

}  // namespace cylab
