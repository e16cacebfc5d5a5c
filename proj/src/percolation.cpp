#include "cylab/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cylab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Cube {
  int half = 0;  // grid covers [-half, half]^3
  int side = 0;

  explicit Cube(int h) : half(h), side(2 * h + 1) {}
  int64_t cells() const { return static_cast<int64_t>(side) * side * side; }
  int64_t index(int x, int y, int z) const {
    return (static_cast<int64_t>(x + half) * side + (y + half)) * side + (z + half);
  }
};

// Fill one sample's min-label grid by streaming a cloud.
std::vector<double> min_label_grid(const WindowSampler& sampler, const Cube& cube,
                                   double u_max, Rng& rng) {
  std::vector<double> grid(static_cast<size_t>(cube.cells()), kInf);
  sampler.sample_visits(u_max, rng, [&](const Point& p, double label) {
    if (std::abs(p[0]) > cube.half || std::abs(p[1]) > cube.half || std::abs(p[2]) > cube.half)
      return;
    double& cell = grid[static_cast<size_t>(cube.index(p[0], p[1], p[2]))];
    if (label < cell) cell = label;
  });
  return grid;
}

// Is there a vacant nearest-neighbor path from the inner ball B(0, from) to
// the sphere S(0, to)? vacant = min label > u.
bool crossing_bfs(const std::vector<double>& grid, const Cube& cube, double u, int from,
                  int to) {
  std::vector<uint8_t> seen(grid.size(), 0);
  std::vector<int64_t> queue;
  auto vacant = [&](int64_t c) { return grid[static_cast<size_t>(c)] > u; };
  for (int x = -from; x <= from; ++x)
    for (int y = -from; y <= from; ++y)
      for (int z = -from; z <= from; ++z) {
        int64_t c = cube.index(x, y, z);
        if (vacant(c)) {
          seen[static_cast<size_t>(c)] = 1;
          queue.push_back(c);
        }
      }
  const int64_t s = cube.side;
  const int64_t strides[3] = {s * s, s, 1};
  while (!queue.empty()) {
    int64_t c = queue.back();
    queue.pop_back();
    int64_t rem = c;
    int x = static_cast<int>(rem / (s * s)) - cube.half;
    rem %= s * s;
    int y = static_cast<int>(rem / s) - cube.half;
    int z = static_cast<int>(rem % s) - cube.half;
    if (std::max({std::abs(x), std::abs(y), std::abs(z)}) == to) return true;
    int coord[3] = {x, y, z};
    for (int axis = 0; axis < 3; ++axis)
      for (int dir = -1; dir <= 1; dir += 2) {
        if (std::abs(coord[axis] + dir) > to ||
            (axis == 0 && std::abs(x + dir) > cube.half) ||
            (axis == 1 && std::abs(y + dir) > cube.half) ||
            (axis == 2 && std::abs(z + dir) > cube.half))
          continue;
        int64_t q = c + dir * strides[axis];
        if (!seen[static_cast<size_t>(q)] && vacant(q)) {
          seen[static_cast<size_t>(q)] = 1;
          queue.push_back(q);
        }
      }
  }
  return false;
}

}  // namespace

PercolationLab::PercolationLab(std::vector<int> scales, int64_t samples, double u_max,
                               uint64_t seed)
    : scales_(std::move(scales)), samples_(samples), u_max_(u_max) {
  if (scales_.empty() || samples <= 0) throw std::invalid_argument("PercolationLab: bad config");
  std::sort(scales_.begin(), scales_.end());
  for (int L : scales_) {
    ScaleData sd;
    sd.L = L;
    sd.side = 4 * L + 1;
    Cube cube(2 * L);
    WindowSampler sampler(ball_points(Point{}, 2 * L, Geometry::lattice(3)), CloudOptions{});
    sd.min_label.reserve(static_cast<size_t>(samples));
    for (int64_t i = 0; i < samples; ++i) {
      Rng rng = Rng::stream(seed, "perc-scale-" + std::to_string(L), static_cast<uint64_t>(i));
      sd.min_label.push_back(min_label_grid(sampler, cube, u_max_, rng));
    }
    data_.push_back(std::move(sd));
  }
}

const PercolationLab::ScaleData& PercolationLab::data_for(int L) const {
  for (const ScaleData& sd : data_)
    if (sd.L == L) return sd;
  throw std::invalid_argument("PercolationLab: unknown scale");
}

CrossingEstimate PercolationLab::crossing(double u, int L) const {
  if (u > u_max_ + 1e-12) throw std::invalid_argument("crossing: u beyond sampled budget");
  const ScaleData& sd = data_for(L);
  Cube cube(2 * L);
  CrossingEstimate est;
  est.u = u;
  est.L = L;
  est.samples = samples_;
  for (const auto& grid : sd.min_label)
    if (crossing_bfs(grid, cube, u, L, 2 * L)) ++est.successes;
  est.ci = wilson_ci(est.successes, est.samples);
  return est;
}

ExponentFit PercolationLab::alpha(double u) const {
  ExponentFit fit;
  fit.u = u;
  std::vector<double> xs, ys, sig;
  for (int L : scales_) {
    CrossingEstimate est = crossing(u, L);
    fit.scales.push_back(L);
    fit.p_hat.push_back(est.ci.p_hat);
    if (est.successes == 0) {
      fit.degenerate = true;
      continue;
    }
    double p_tilde = (static_cast<double>(est.successes) + 0.5) /
                     (static_cast<double>(est.samples) + 1.0);
    xs.push_back(std::log(static_cast<double>(L)));
    ys.push_back(-std::log(est.ci.p_hat));
    sig.push_back(std::sqrt(p_tilde * (1.0 - p_tilde) / static_cast<double>(est.samples)) /
                  p_tilde);
  }
  if (!fit.degenerate && xs.size() >= 2) fit.line = weighted_line_fit(xs, ys, sig);
  return fit;
}

bool PercolationLab::criterion(double u) const {
  ExponentFit fit = alpha(u);
  fit_log_.push_back(fit);
  if (fit.degenerate) return true;  // decay too fast to resolve: clearly positive
  return fit.alpha() - 2.0 * fit.alpha_se() > 0.0;
}

UstarstarResult PercolationLab::ustarstar(const std::vector<double>& u_grid, double z_crit,
                                          double tol) const {
  if (u_grid.size() < 2) throw std::invalid_argument("ustarstar: grid too small");
  fit_log_.clear();
  std::vector<bool> crit;
  crit.reserve(u_grid.size());
  for (double u : u_grid) {
    ExponentFit fit = alpha(u);
    fit_log_.push_back(fit);
    bool c = fit.degenerate || fit.alpha() - z_crit * fit.alpha_se() > 0.0;
    crit.push_back(c);
  }

  UstarstarResult out;
  // flag non-monotone patterns (noise near the transition)
  bool seen_true = false;
  for (bool c : crit) {
    if (c) seen_true = true;
    if (seen_true && !c) out.monotone = false;
  }
  size_t first_true = crit.size();
  for (size_t i = 0; i < crit.size(); ++i)
    if (crit[i]) {
      first_true = i;
      break;
    }
  if (first_true == crit.size() || first_true == 0) {
    out.bracketed = false;
    out.fits = fit_log_;
    return out;
  }
  double lo = u_grid[first_true - 1];
  double hi = u_grid[first_true];
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    ExponentFit fit = alpha(mid);
    fit_log_.push_back(fit);
    bool c = fit.degenerate || fit.alpha() - z_crit * fit.alpha_se() > 0.0;
    (c ? hi : lo) = mid;
  }
  out.lo = lo;
  out.hi = hi;
  out.bracketed = true;
  out.fits = fit_log_;
  return out;
}

CrossingEstimate crossing_probability(double u, int L, int64_t samples, uint64_t seed) {
  PercolationLab lab({L}, samples, u, seed);
  return lab.crossing(u, L);
}

ExponentFit alpha_fit(double u, const std::vector<int>& scales, int64_t samples,
                      uint64_t seed) {
  if (scales.size() < 3) throw std::invalid_argument("alpha_fit: need >= 3 scales");
  PercolationLab lab(scales, samples, u, seed);
  return lab.alpha(u);
}

EtaProxyTable eta_proxy_scan(const std::vector<double>& u_grid, const std::vector<int>& l_grid,
                             int64_t samples, uint64_t seed) {
  if (u_grid.empty() || l_grid.empty()) throw std::invalid_argument("eta_proxy_scan: empty grid");
  int l_max = *std::max_element(l_grid.begin(), l_grid.end());
  double u_max = *std::max_element(u_grid.begin(), u_grid.end());
  Cube cube(l_max);
  WindowSampler sampler(ball_points(Point{}, l_max, Geometry::lattice(3)), CloudOptions{});

  std::vector<std::vector<double>> grids;
  grids.reserve(static_cast<size_t>(samples));
  for (int64_t i = 0; i < samples; ++i) {
    Rng rng = Rng::stream(seed, "eta-proxy", static_cast<uint64_t>(i));
    grids.push_back(min_label_grid(sampler, cube, u_max, rng));
  }

  EtaProxyTable table;
  table.u_grid = u_grid;
  table.l_grid = l_grid;
  for (double u : u_grid) {
    std::vector<CrossingEstimate> row;
    for (int L : l_grid) {
      CrossingEstimate est;
      est.u = u;
      est.L = L;
      est.samples = samples;
      for (const auto& grid : grids)
        if (crossing_bfs(grid, cube, u, 0, L)) ++est.successes;
      est.ci = wilson_ci(est.successes, est.samples);
      row.push_back(est);
    }
    table.rows.push_back(std::move(row));
  }

  // largest grid u whose proxy stays bounded away from zero at every scale
  const double floor = 0.02;
  for (size_t iu = 0; iu < u_grid.size(); ++iu) {
    bool ok = true;
    for (const CrossingEstimate& est : table.rows[iu])
      if (est.ci.lo <= floor) ok = false;
    if (ok) {
      table.ustar_proxy = u_grid[iu];
      table.ustar_found = true;
    }
  }
  return table;
}

}  // namespace cylab
