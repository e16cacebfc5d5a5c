#include "cylab/disconnect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cylab/walk.hpp"

namespace cylab {

CylinderTrace::CylinderTrace(const Geometry& g, const Point& start) : g_(g) {
  if (!g.is_cylinder()) throw std::invalid_argument("CylinderTrace: cylinder only");
  yvol_ = 1;
  for (int i = 0; i < g.d; ++i) yvol_ *= g.N;
  zbase_ = zmin_ = zmax_ = start[g.d];
  fv_.assign(static_cast<size_t>(yvol_), kNever);

  ynbr_.resize(static_cast<size_t>(yvol_) * static_cast<size_t>(2 * g.d));
  for (int64_t y = 0; y < yvol_; ++y) {
    // decode torus index, row-major with axis 0 slowest
    int64_t rem = y;
    int32_t coord[kMaxDim];
    for (int i = g.d - 1; i >= 0; --i) {
      coord[i] = static_cast<int32_t>(rem % g.N);
      rem /= g.N;
    }
    for (int axis = 0; axis < g.d; ++axis) {
      for (int dir = 0; dir < 2; ++dir) {
        int32_t c = coord[axis] + (dir == 0 ? 1 : -1);
        if (c < 0) c += g.N;
        if (c >= g.N) c -= g.N;
        int64_t idx = 0;
        for (int i = 0; i < g.d; ++i) idx = idx * g.N + (i == axis ? c : coord[i]);
        ynbr_[static_cast<size_t>(y) * static_cast<size_t>(2 * g.d) +
              static_cast<size_t>(2 * axis + dir)] = static_cast<int32_t>(idx);
      }
    }
  }
  visit(start, 0);
}

int64_t CylinderTrace::y_index(const Point& p) const {
  int64_t idx = 0;
  for (int i = 0; i < g_.d; ++i) idx = idx * g_.N + p[i];
  return idx;
}

void CylinderTrace::ensure_level(int32_t z) {
  if (z < zbase_) {
    size_t grow = static_cast<size_t>(zbase_ - z) * static_cast<size_t>(yvol_);
    fv_.insert(fv_.begin(), grow, kNever);
    zbase_ = z;
  } else {
    int64_t need = (static_cast<int64_t>(z) - zbase_ + 1) * yvol_;
    if (need > static_cast<int64_t>(fv_.size())) fv_.resize(static_cast<size_t>(need), kNever);
  }
}

void CylinderTrace::visit(const Point& p, int64_t t) {
  int32_t z = p[g_.d];
  ensure_level(z);
  zmin_ = std::min(zmin_, z);
  zmax_ = std::max(zmax_, z);
  size_t cell = static_cast<size_t>((static_cast<int64_t>(z) - zbase_) * yvol_ + y_index(p));
  if (fv_[cell] > t) fv_[cell] = t;
}

int64_t CylinderTrace::cell_of(const Point& p) const {
  int32_t z = p[g_.d];
  if (z < zbase_) return -1;
  int64_t cell = (static_cast<int64_t>(z) - zbase_) * yvol_ + y_index(p);
  return cell < static_cast<int64_t>(fv_.size()) ? cell : -1;
}

int64_t CylinderTrace::first_visit(const Point& p) const {
  int64_t cell = cell_of(p);
  return cell < 0 ? kNever : fv_[static_cast<size_t>(cell)];
}

namespace {

// Shared slab view for the connectivity probes: levels [zmin-1, zmax+1],
// everything outside the stored trace is vacant.
struct SlabView {
  const CylinderTrace& tr;
  int64_t n;
  int32_t zlo, zhi;
  int64_t yvol;

  SlabView(const CylinderTrace& t, int64_t n_) : tr(t), n(n_) {
    zlo = tr.zmin() - 1;
    zhi = tr.zmax() + 1;
    yvol = tr.torus_volume();
  }
  int64_t levels() const { return static_cast<int64_t>(zhi) - zlo + 1; }
  int64_t cells() const { return levels() * yvol; }
  bool vacant(int64_t cell) const {  // cell = (z - zlo)*yvol + y
    int32_t z = static_cast<int32_t>(cell / yvol + zlo);
    if (z <= tr.zmin() - 1 || z >= tr.zmax() + 1) return true;
    int64_t tcell = (static_cast<int64_t>(z) - tr.zbase()) * yvol + cell % yvol;
    return tr.first_visit_index(tcell) > n;
  }
};

}  // namespace

bool disconnects_at(const CylinderTrace& trace, int64_t n) {
  SlabView s(trace, n);
  const auto& ynbr = trace.torus_neighbors();
  int twod = 2 * trace.geometry().d;

  std::vector<uint8_t> seen(static_cast<size_t>(s.cells()), 0);
  std::vector<int64_t> queue;
  queue.reserve(static_cast<size_t>(s.cells()));
  // seed from the fully vacant level above the trace
  int64_t top_base = (s.levels() - 1) * s.yvol;
  for (int64_t y = 0; y < s.yvol; ++y) {
    queue.push_back(top_base + y);
    seen[static_cast<size_t>(top_base + y)] = 1;
  }
  while (!queue.empty()) {
    int64_t cell = queue.back();
    queue.pop_back();
    if (cell < s.yvol) return false;  // reached the level below the trace
    int64_t y = cell % s.yvol;
    auto try_push = [&](int64_t c) {
      if (c < 0 || c >= s.cells() || seen[static_cast<size_t>(c)]) return;
      if (!s.vacant(c)) return;
      seen[static_cast<size_t>(c)] = 1;
      queue.push_back(c);
    };
    try_push(cell - s.yvol);
    try_push(cell + s.yvol);
    for (int j = 0; j < twod; ++j)
      try_push(cell - y + ynbr[static_cast<size_t>(y) * static_cast<size_t>(twod) +
                               static_cast<size_t>(j)]);
  }
  return true;
}

namespace {

struct UnionFind {
  std::vector<int32_t> parent;
  explicit UnionFind(int64_t n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int32_t find(int32_t x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int32_t a, int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<size_t>(a)] = b;
  }
};

}  // namespace

bool disconnects_at_unionfind(const CylinderTrace& trace, int64_t n) {
  SlabView s(trace, n);
  const auto& ynbr = trace.torus_neighbors();
  int twod = 2 * trace.geometry().d;
  int64_t cells = s.cells();
  UnionFind uf(cells + 2);
  int32_t top = static_cast<int32_t>(cells);
  int32_t bot = static_cast<int32_t>(cells + 1);

  for (int64_t cell = 0; cell < cells; ++cell) {
    if (!s.vacant(cell)) continue;
    int32_t c32 = static_cast<int32_t>(cell);
    if (cell < s.yvol) uf.unite(c32, bot);
    if (cell >= cells - s.yvol) uf.unite(c32, top);
    int64_t up = cell + s.yvol;
    if (up < cells && s.vacant(up)) uf.unite(c32, static_cast<int32_t>(up));
    int64_t y = cell % s.yvol;
    for (int j = 0; j < twod; ++j) {
      int64_t q = cell - y + ynbr[static_cast<size_t>(y) * static_cast<size_t>(twod) +
                                   static_cast<size_t>(j)];
      if (q > cell && s.vacant(q)) uf.unite(c32, static_cast<int32_t>(q));
    }
  }
  return uf.find(top) != uf.find(bot);
}

bool disconnects(const PointSet& s, const Geometry& g) {
  if (!g.is_cylinder()) throw std::invalid_argument("disconnects: cylinder only");
  if (s.empty()) return false;
  // reuse the dense machinery: load the set into a trace at time 0
  Point any = *s.begin();
  CylinderTrace tr(g, any);
  for (const Point& p : s) tr.visit(p, 0);
  return disconnects_at(tr, 0);
}

int64_t default_tn_budget(const Geometry& g, double multiplier) {
  double scale = std::pow(static_cast<double>(g.N), 2.0 * g.d);
  return static_cast<int64_t>(64.0 * scale * multiplier) + 64;
}

DisconnectionResult disconnection_time(const Geometry& g, const Point& start, int64_t budget,
                                       Rng rng, TnSearch method) {
  if (!g.is_cylinder()) throw std::invalid_argument("disconnection_time: cylinder only");
  CylinderTrace trace(g, start);
  Walk w(g, start, std::move(rng));
  DisconnectionResult out;
  out.budget = budget;

  if (method == TnSearch::incremental) {
    for (;;) {
      ++out.probes;
      if (disconnects_at(trace, w.time())) {
        out.time = w.time();
        return out;
      }
      if (w.time() >= budget) {
        out.censored = true;
        return out;
      }
      w.step();
      trace.visit(w.position(), w.time());
    }
  }

  // doubling horizons, then exact bisection on the monotone predicate
  double scale = std::pow(static_cast<double>(g.N), 2.0 * g.d);
  int64_t horizon = std::max<int64_t>(4, static_cast<int64_t>(scale));
  int64_t lo = -1;  // largest time known not to disconnect
  for (;;) {
    horizon = std::min(horizon, budget);
    while (w.time() < horizon) {
      w.step();
      trace.visit(w.position(), w.time());
    }
    ++out.probes;
    if (disconnects_at(trace, horizon)) break;
    lo = horizon;
    if (horizon == budget) {
      out.censored = true;
      return out;
    }
    horizon *= 2;
  }
  int64_t hi = horizon;  // disconnects at hi, not at lo
  while (hi - lo > 1) {
    int64_t mid = lo + (hi - lo) / 2;
    ++out.probes;
    if (disconnects_at(trace, mid))
      hi = mid;
    else
      lo = mid;
  }
  out.time = hi;
  return out;
}

std::vector<TnRow> tn_distribution(const Geometry& g, int replicates, uint64_t seed,
                                   double budget_multiplier) {
  if (g.d < 2) throw std::invalid_argument("tn_distribution: requires d >= 2");
  int64_t budget = default_tn_budget(g, budget_multiplier);
  double scale = std::pow(static_cast<double>(g.N), 2.0 * g.d);
  std::vector<TnRow> rows;
  rows.reserve(static_cast<size_t>(replicates));
  for (int rep = 0; rep < replicates; ++rep) {
    Rng rng = Rng::stream(seed, "tn-dist", static_cast<uint64_t>(rep));
    Point start{};  // P_0: start at the torus origin of level 0
    DisconnectionResult r = disconnection_time(g, start, budget, std::move(rng));
    TnRow row;
    row.replicate = static_cast<uint64_t>(rep);
    row.censored = r.censored;
    row.t = r.censored ? budget : r.time;
    row.scaled = static_cast<double>(row.t) / scale;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cylab
