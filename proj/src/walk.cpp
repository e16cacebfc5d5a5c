#include "cylab/walk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cylab/stats.hpp"

namespace cylab {

int height_scale(int N) {
  if (N < 1) throw std::invalid_argument("height_scale: N >= 1");
  double lg = std::log(static_cast<double>(N));
  return static_cast<int>(std::floor(N * (2.0 + lg * lg)));
}

WalkStop Walk::run_until(const std::function<bool(int64_t, const Point&)>& pred,
                         int64_t budget) {
  for (;;) {
    if (pred(t_, pos_)) return {t_, pos_, false};
    if (t_ >= budget) return {t_, pos_, true};
    step();
  }
}

SkeletonTracker::SkeletonTracker(int32_t z0, bool keep_path)
    : zhat_(z0), base_(z0), keep_path_(keep_path) {
  counts_.assign(1, 0);
  if (keep_path_) {
    rho_.push_back(0);
    zhat_path_.push_back(z0);
  }
}

int64_t SkeletonTracker::local_time(int32_t z) const {
  int64_t off = static_cast<int64_t>(z) - base_;
  if (off < 0 || off >= static_cast<int64_t>(counts_.size())) return 0;
  return counts_[static_cast<size_t>(off)];
}

void SkeletonTracker::bump(int32_t z) {
  int64_t off = static_cast<int64_t>(z) - base_;
  if (off < 0) {
    counts_.insert(counts_.begin(), static_cast<size_t>(-off), 0);
    base_ = z;
    off = 0;
  } else if (off >= static_cast<int64_t>(counts_.size())) {
    counts_.resize(static_cast<size_t>(off) + 1, 0);
  }
  int64_t c = ++counts_[static_cast<size_t>(off)];
  if (c > sup_) {
    sup_ = c;
    argmax_ = z;
  }
}

void SkeletonTracker::on_vertical_move(int64_t rho, int32_t z_new) {
  // the index we are leaving joins the strict past
  bump(zhat_);
  ++k_;
  zhat_ = z_new;
  if (keep_path_) {
    rho_.push_back(rho);
    zhat_path_.push_back(z_new);
  }
}

int64_t SkeletonRecord::local_time(int64_t k, int32_t z) const {
  int64_t n = 0;
  int64_t upto = std::min<int64_t>(k, static_cast<int64_t>(zhat.size()));
  for (int64_t m = 0; m < upto; ++m)
    if (zhat[static_cast<size_t>(m)] == z) ++n;
  return n;
}

SkeletonRecord skeleton(const Geometry& g, const Point& start, int64_t steps, Rng rng) {
  if (!g.is_cylinder()) throw std::invalid_argument("skeleton: cylinder walks only");
  Walk w(g, start, std::move(rng));
  SkeletonRecord rec;
  rec.rho.push_back(0);
  rec.zhat.push_back(start[g.d]);
  while (w.time() < steps) {
    int m = w.step();
    if ((m >> 1) == g.d) {
      rec.rho.push_back(w.time());
      rec.zhat.push_back(w.position()[g.d]);
    }
  }
  rec.steps = steps;
  return rec;
}

WalkStop gamma_level(const Geometry& g, const Point& start, double v, int32_t z,
                     int64_t budget, Rng rng) {
  if (v < 0) throw std::invalid_argument("gamma_level: v >= 0");
  if (v == 0.0) return {0, start, false};
  Walk w(g, start, std::move(rng));
  SkeletonTracker sk(start[g.d]);
  while (w.time() < budget) {
    int m = w.step();
    if ((m >> 1) == g.d) {
      sk.on_vertical_move(w.time(), w.position()[g.d]);
      if (static_cast<double>(sk.local_time(z)) >= v) return {w.time(), w.position(), false};
    }
  }
  return {w.time(), w.position(), true};
}

ExcursionSchedule excursion_schedule(const Geometry& g, const Point& start, int32_t z,
                                     int k_count, int64_t budget, Rng rng) {
  if (!g.is_cylinder()) throw std::invalid_argument("excursion_schedule: cylinder only");
  ExcursionSchedule out;
  out.level = z;
  out.r = g.N;
  out.h = height_scale(g.N);

  Walk w(g, start, std::move(rng));
  auto zc = [&] { return w.position()[g.d]; };
  auto run_z = [&](auto&& stop) -> bool {
    while (!stop()) {
      if (w.time() >= budget) return false;
      w.step();
    }
    return true;
  };

  for (int k = 0; k < k_count; ++k) {
    // entrance H_k: reach level z (for k >= 1, starting just outside the slab)
    if (!run_z([&] { return zc() == z; })) {
      out.exhausted = true;
      return out;
    }
    out.entry.push_back(w.time());
    // sigma_k: continue until one of the two levels z +- r
    if (!run_z([&] { return std::abs(zc() - z) == out.r; })) {
      out.exhausted = true;
      return out;
    }
    out.sigma.push_back(w.time());
    // tau_k: exit the open slab (z - h, z + h)
    if (!run_z([&] { return std::abs(zc() - z) >= out.h; })) {
      out.exhausted = true;
      return out;
    }
    out.tau.push_back(w.time());
  }
  return out;
}

int64_t sample_level_visits(int h, int k_excursions, Rng& rng) {
  // Each block: skeleton walk from the level until |displacement| reaches h,
  // counting the skeleton indices at 0 (arrival included). Return legs from
  // the exit boundary back to the level carry no visits and their duration
  // does not enter the statistic, so they are elided.
  int64_t total = 0;
  for (int k = 0; k <= k_excursions; ++k) {
    int32_t pos = 0;
    ++total;
    for (;;) {
      pos += rng.bernoulli(0.5) ? 1 : -1;
      if (std::abs(pos) >= h) break;
      if (pos == 0) ++total;
    }
  }
  return total;
}

Path iid_excursion(int32_t z, const Geometry& g, Rng& rng) {
  if (!g.is_cylinder()) throw std::invalid_argument("iid_excursion: cylinder only");
  int r = g.N;
  int h = height_scale(g.N);
  Point start{};
  for (int i = 0; i < g.d; ++i)
    start[i] = static_cast<int32_t>(rng.below(static_cast<uint64_t>(g.N)));
  start[g.d] = z + (rng.bernoulli(0.5) ? r : -r);

  Path path{start};
  Walk w(g, start, Rng(rng.next()));
  while (std::abs(w.position()[g.d] - z) < h) {
    w.step();
    path.push_back(w.position());
  }
  return path;
}

namespace {

// 1-D torus heat kernel at time t for a coordinate walk with rate 1 to each
// side: p_t(j) = (1/N) sum_m exp(-2(1 - cos(2 pi m/N)) t) cos(2 pi m j/N).
std::vector<double> torus_kernel(int N, double t) {
  std::vector<double> p(static_cast<size_t>(N), 0.0);
  const double two_pi = 6.28318530717958647692;
  for (int j = 0; j < N; ++j) {
    double s = 0.0;
    for (int m = 0; m < N; ++m) {
      double lam = 2.0 * (1.0 - std::cos(two_pi * m / N));
      s += std::exp(-lam * t) * std::cos(two_pi * m * j / N);
    }
    p[static_cast<size_t>(j)] = s / N;
  }
  return p;
}

}  // namespace

TvEstimate homogenization_tv_mc(const Point& x_prime, const Geometry& g, int64_t samples,
                                uint64_t seed) {
  if (!g.is_cylinder()) throw std::invalid_argument("homogenization_tv: cylinder only");
  int r = g.N;
  int h = height_scale(g.N);
  if (std::abs(x_prime[g.d]) < h)
    throw std::invalid_argument("x_prime must lie outside the slab");

  int64_t cells = 2;
  for (int i = 0; i < g.d; ++i) cells *= g.N;
  std::vector<int64_t> hits(static_cast<size_t>(cells), 0);
  const int64_t budget = 20'000'000;
  int64_t censored = 0;

  for (int64_t s = 0; s < samples; ++s) {
    Walk w(g, x_prime, Rng::stream(seed, "homog-mc", static_cast<uint64_t>(s)));
    bool reached_level = false;
    bool done = false;
    while (w.time() < budget) {
      int32_t z = w.position()[g.d];
      if (!reached_level && z == 0) reached_level = true;
      if (reached_level && std::abs(z) == r) {
        done = true;
        break;
      }
      w.step();
    }
    if (!done) {
      ++censored;
      continue;
    }
    int64_t idx = w.position()[g.d] > 0 ? 1 : 0;
    for (int i = 0; i < g.d; ++i) idx = idx * g.N + w.position()[i];
    ++hits[static_cast<size_t>(idx)];
  }

  int64_t n = samples - censored;
  double tv = 0.0;
  for (int64_t c : hits)
    tv += std::abs(static_cast<double>(c) / static_cast<double>(n) -
                   1.0 / static_cast<double>(cells));
  tv *= 0.5;
  // the plug-in estimate has a noise floor of about sqrt(cells / n)
  double floor_err = std::sqrt(static_cast<double>(cells) / static_cast<double>(n));
  return {tv, floor_err, samples, censored};
}

TvEstimate homogenization_tv_kernel(const Point& x_prime, const Geometry& g, int64_t samples,
                                    uint64_t seed) {
  if (!g.is_cylinder()) throw std::invalid_argument("homogenization_tv: cylinder only");
  int r = g.N;
  int h = height_scale(g.N);
  int32_t z0 = x_prime[g.d];
  if (std::abs(z0) < h) throw std::invalid_argument("x_prime must lie outside the slab");

  // TV is bounded by a multiple of exp(-lambda_1 t); past t_cap the
  // contribution underflows and the sample scores zero.
  const double two_pi = 6.28318530717958647692;
  double lam1 = g.N == 1 ? 4.0 : 2.0 * (1.0 - std::cos(two_pi / g.N));
  double t_cap = 700.0 / lam1;

  std::vector<double> tvs;
  tvs.reserve(static_cast<size_t>(samples));
  for (int64_t s = 0; s < samples; ++s) {
    Rng rng = Rng::stream(seed, "homog-kernel", static_cast<uint64_t>(s));
    // vertical continuous-time walk at rate 2: first hit the level, then +-r
    double t = 0.0;
    int32_t z = z0;
    bool reached = z == 0;
    bool capped = false;
    while (!(reached && std::abs(z - 0) == r)) {
      t += rng.exponential(2.0);
      if (t > t_cap) {
        capped = true;
        break;
      }
      z += rng.bernoulli(0.5) ? 1 : -1;
      if (z == 0) reached = true;
    }
    if (capped) {
      tvs.push_back(0.0);
      continue;
    }
    std::vector<double> k1 = torus_kernel(g.N, t);
    double unif = 1.0;
    for (int i = 0; i < g.d; ++i) unif /= g.N;
    double tv = 0.0;
    std::vector<int> idx(static_cast<size_t>(g.d), 0);
    for (;;) {
      double prob = 1.0;
      for (int i = 0; i < g.d; ++i) {
        int delta = (idx[static_cast<size_t>(i)] - x_prime[i]) % g.N;
        if (delta < 0) delta += g.N;
        prob *= k1[static_cast<size_t>(delta)];
      }
      tv += std::abs(prob - unif);
      int axis = 0;
      while (axis < g.d && ++idx[static_cast<size_t>(axis)] == g.N) {
        idx[static_cast<size_t>(axis)] = 0;
        ++axis;
      }
      if (axis == g.d) break;
    }
    tvs.push_back(0.5 * tv);  // the +-r split is exact by reflection symmetry
  }
  return {mean(tvs), sem(tvs), samples, 0};
}

}  // namespace cylab
