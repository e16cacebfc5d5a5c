#include "cylab/potential.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cylab/green_z3.hpp"

namespace cylab {

namespace {

PointIndex build_index(const std::vector<Point>& pts) {
  PointIndex idx;
  idx.reserve(pts.size() * 2);
  for (size_t i = 0; i < pts.size(); ++i) {
    if (!idx.emplace(pts[i], static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate point in vertex set");
  }
  return idx;
}

Eigen::SparseMatrix<double> killed_operator(const std::vector<Point>& U, const Geometry& g,
                                            const PointIndex& idx) {
  const double step = 1.0 / g.degree();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(U.size() * static_cast<size_t>(g.degree() + 1));
  for (size_t i = 0; i < U.size(); ++i) {
    trip.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
    for (int m = 0; m < g.degree(); ++m) {
      auto it = idx.find(g.move(U[i], m));
      if (it != idx.end()) trip.emplace_back(static_cast<int>(i), it->second, -step);
    }
  }
  Eigen::SparseMatrix<double> a(static_cast<int>(U.size()), static_cast<int>(U.size()));
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

}  // namespace

GreenTable::GreenTable(std::vector<Point> domain, Eigen::MatrixXd values)
    : domain_(std::move(domain)), index_(build_index(domain_)), g_(std::move(values)) {}

double GreenTable::at(const Point& x, const Point& y) const {
  auto ix = index_.find(x);
  auto iy = index_.find(y);
  if (ix == index_.end() || iy == index_.end()) return 0.0;
  return g_(ix->second, iy->second);
}

int GreenTable::index_of(const Point& p) const {
  auto it = index_.find(p);
  return it == index_.end() ? -1 : it->second;
}

double GreenTable::max_asymmetry() const {
  double w = 0.0;
  for (int i = 0; i < g_.rows(); ++i)
    for (int j = i + 1; j < g_.cols(); ++j) w = std::max(w, std::abs(g_(i, j) - g_(j, i)));
  return w;
}

GreenTable green_exact(const std::vector<Point>& U, const Geometry& g,
                       const GreenExactOptions& opts) {
  if (U.empty()) return GreenTable({}, Eigen::MatrixXd());
  if (U.size() > opts.dense_cap)
    throw std::invalid_argument("green_exact: domain exceeds dense size cap");
  PointIndex idx = build_index(U);
  Eigen::MatrixXd a = Eigen::MatrixXd(killed_operator(U, g, idx));
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd green = a.ldlt().solve(id);
  return GreenTable(U, std::move(green));
}

Eigen::VectorXd green_column_cg(const std::vector<Point>& U, const Geometry& g,
                                const Point& x, double tol) {
  PointIndex idx = build_index(U);
  auto it = idx.find(x);
  if (it == idx.end()) throw std::invalid_argument("green_column_cg: x not in U");
  Eigen::SparseMatrix<double> a = killed_operator(U, g, idx);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(a.rows());
  rhs(it->second) = 1.0;
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(tol);
  cg.setMaxIterations(20000);
  cg.compute(a);
  return cg.solve(rhs);
}

namespace {

// P_y[exit U before hitting K] for y in U \ K, by absorbing solve.
Eigen::VectorXd escape_before_hit(const std::vector<Point>& D, const Geometry& g,
                                  const PointIndex& d_index, const PointIndex& k_index) {
  const double step = 1.0 / g.degree();
  Eigen::SparseMatrix<double> a = killed_operator(D, g, d_index);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(a.rows());
  for (size_t i = 0; i < D.size(); ++i) {
    for (int m = 0; m < g.degree(); ++m) {
      Point q = g.move(D[i], m);
      if (d_index.contains(q) || k_index.contains(q)) continue;
      b(static_cast<int>(i)) += step;  // one-step exit from U
    }
  }
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
  return solver.solve(b);
}

}  // namespace

CapacityResult equilibrium_exact(const std::vector<Point>& K, const std::vector<Point>& U,
                                 const Geometry& g) {
  PointIndex k_index = build_index(K);
  PointIndex u_index = build_index(U);
  for (const Point& p : K)
    if (!u_index.contains(p)) throw std::invalid_argument("equilibrium_exact: K not within U");

  std::vector<Point> D;
  D.reserve(U.size() - K.size());
  for (const Point& p : U)
    if (!k_index.contains(p)) D.push_back(p);
  PointIndex d_index = build_index(D);

  Eigen::VectorXd phi;
  if (!D.empty()) phi = escape_before_hit(D, g, d_index, k_index);

  const double step = 1.0 / g.degree();
  CapacityResult out;
  out.method = CapacityMethod::exact_solve;
  for (const Point& x : K) {
    double e = 0.0;
    for (int m = 0; m < g.degree(); ++m) {
      Point q = g.move(x, m);
      if (k_index.contains(q)) continue;  // immediate re-hit
      auto it = d_index.find(q);
      e += step * (it == d_index.end() ? 1.0 : phi(it->second));
    }
    if (e > 0.0) {
      out.measure.support.push_back(x);
      out.measure.weight.push_back(e);
    }
  }
  out.value = out.measure.total();
  return out;
}

HittingIdentity hitting_identity_check(const Point& x, const std::vector<Point>& K,
                                       const std::vector<Point>& U, const Geometry& g) {
  PointIndex k_index = build_index(K);
  PointIndex u_index = build_index(U);
  if (!u_index.contains(x)) throw std::invalid_argument("hitting_identity_check: x not in U");

  HittingIdentity out;
  if (k_index.contains(x)) {
    out.lhs = 1.0;
  } else {
    std::vector<Point> D;
    for (const Point& p : U)
      if (!k_index.contains(p)) D.push_back(p);
    PointIndex d_index = build_index(D);
    Eigen::VectorXd esc = escape_before_hit(D, g, d_index, k_index);
    out.lhs = 1.0 - esc(d_index.at(x));
  }

  GreenTable green = green_exact(U, g);
  CapacityResult eq = equilibrium_exact(K, U, g);
  double rhs = 0.0;
  for (size_t i = 0; i < eq.measure.support.size(); ++i)
    rhs += green.at(x, eq.measure.support[i]) * eq.measure.weight[i];
  out.rhs = rhs;
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

bool sandwich_check(const Point& x, const std::vector<Point>& K,
                    const std::vector<Point>& U, const Geometry& g, double slack) {
  GreenTable green = green_exact(U, g);
  double num = 0.0;
  for (const Point& k : K) num += green.at(x, k);
  double smin = std::numeric_limits<double>::infinity();
  double smax = 0.0;
  for (const Point& y : K) {
    double s = 0.0;
    for (const Point& k : K) s += green.at(y, k);
    smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  HittingIdentity hit = hitting_identity_check(x, K, U, g);
  return num / smax <= hit.lhs + slack && hit.lhs <= num / smin + slack;
}

Eigen::MatrixXd entrance_law(const std::vector<Point>& U, const std::vector<Point>& K,
                             const Geometry& g, const PointIndex& u_index) {
  PointIndex k_index = build_index(K);
  std::vector<Point> D;
  std::vector<int> d_to_u;
  for (const Point& p : U)
    if (!k_index.contains(p)) {
      D.push_back(p);
      d_to_u.push_back(u_index.at(p));
    }
  PointIndex d_index = build_index(D);

  const double step = 1.0 / g.degree();
  Eigen::SparseMatrix<double> a = killed_operator(D, g, d_index);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<int>(D.size()), static_cast<int>(K.size()));
  for (size_t i = 0; i < D.size(); ++i)
    for (int m = 0; m < g.degree(); ++m) {
      auto it = k_index.find(g.move(D[i], m));
      if (it != k_index.end()) b(static_cast<int>(i), it->second) += step;
    }

  Eigen::MatrixXd law = Eigen::MatrixXd::Zero(static_cast<int>(U.size()), static_cast<int>(K.size()));
  if (!D.empty()) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
    Eigen::MatrixXd psi = solver.solve(b);
    for (size_t i = 0; i < D.size(); ++i) law.row(d_to_u[static_cast<size_t>(i)]) = psi.row(static_cast<int>(i));
  }
  for (size_t j = 0; j < K.size(); ++j) law(u_index.at(K[j]), static_cast<int>(j)) = 1.0;
  return law;
}

namespace {

int bounding_radius(const std::vector<Point>& K, int ambient) {
  int r = 0;
  for (const Point& p : K)
    for (int i = 0; i < ambient; ++i) r = std::max(r, std::abs(p[i]));
  return r;
}

CapacityResult equilibrium_gram_z3(const std::vector<Point>& K, const Geometry& g) {
  // Solve sum_x' g(x - x') e(x') = 1 on the inner boundary; the unique
  // solution of the boundary-restricted Gram system is the equilibrium
  // measure (interior points carry zero mass).
  PointSet kset(K.begin(), K.end());
  PointSet inner = interior_boundary(kset, g);
  std::vector<Point> bd(inner.begin(), inner.end());
  std::sort(bd.begin(), bd.end(), [](const Point& a, const Point& b) { return a.c < b.c; });

  int n = static_cast<int>(bd.size());
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      gram(i, j) = green_z3::at(bd[static_cast<size_t>(i)][0] - bd[static_cast<size_t>(j)][0],
                                bd[static_cast<size_t>(i)][1] - bd[static_cast<size_t>(j)][1],
                                bd[static_cast<size_t>(i)][2] - bd[static_cast<size_t>(j)][2]);
  Eigen::VectorXd e = gram.ldlt().solve(Eigen::VectorXd::Ones(n));

  CapacityResult out;
  out.method = CapacityMethod::exact_solve;
  for (int i = 0; i < n; ++i) {
    out.measure.support.push_back(bd[static_cast<size_t>(i)]);
    out.measure.weight.push_back(e(i));
  }
  out.value = out.measure.total();
  return out;
}

CapacityResult equilibrium_bigbox(const std::vector<Point>& K, const Geometry& g, int base) {
  if (base <= 0) base = std::max(8, 4 * bounding_radius(K, g.ambient()) + 4);
  double caps[3];
  double radii[3];
  CapacityResult last;
  for (int i = 0; i < 3; ++i) {
    int r = base << i;
    std::vector<Point> box = ball_points(Point{}, r, g);
    last = equilibrium_exact(K, box, g);
    caps[i] = last.value;
    radii[i] = static_cast<double>(r);
  }
  // cap_U(K) decreases to cap(K) like a/R; eliminate the 1/R term with the
  // two largest boxes and use the third for an error estimate.
  auto rich = [](double c1, double r1, double c2, double r2) {
    return (c2 / r1 - c1 / r2) / (1.0 / r1 - 1.0 / r2);
  };
  double extrap01 = rich(caps[0], radii[0], caps[1], radii[1]);
  double extrap12 = rich(caps[1], radii[1], caps[2], radii[2]);

  CapacityResult out = last;
  out.method = CapacityMethod::bigbox_extrapolation;
  double scale = extrap12 / caps[2];
  out.value = extrap12;
  for (double& w : out.measure.weight) w *= scale;  // keep mass = value
  out.std_error = std::abs(extrap12 - extrap01);
  return out;
}

CapacityResult equilibrium_mc(const std::vector<Point>& K, const Geometry& g,
                              const InfiniteCapacityOptions& opts) {
  PointSet kset(K.begin(), K.end());
  PointSet inner = interior_boundary(kset, g);
  std::vector<Point> bd(inner.begin(), inner.end());
  std::sort(bd.begin(), bd.end(), [](const Point& a, const Point& b) { return a.c < b.c; });

  int krad = bounding_radius(K, g.ambient());
  int guard = opts.guard_radius;
  double eps = 0.0;
  if (g.ambient() == 3) {
    // Bound the neglected return via the free Green function: from any guard
    // exit point, P[H_K < inf] <= |K| * max g over the guard shell.
    auto bound_at = [&](int r) {
      return static_cast<double>(K.size()) * green_z3::at(r - krad, 0, 0);
    };
    if (guard <= 0) {
      guard = std::max(2 * krad + 2, 8);
      while (bound_at(guard) > opts.target_eps) guard = guard * 3 / 2 + 1;
    }
    eps = bound_at(guard);
  } else {
    if (guard <= 0) guard = std::max(2 * krad + 2, 16);
    // Measure the return-rate constant empirically (paper-style constants are
    // not specified): fraction of walks from half the guard distance that
    // come back to K, extrapolated by the (d-1) power law.
    Rng pilot(opts.seed ^ 0x706c6f74ull);
    int r_half = std::max(krad + 2, guard / 2);
    int64_t nret = 0;
    const int64_t pilots = 4000;
    for (int64_t i = 0; i < pilots; ++i) {
      Point p{};
      p[0] = static_cast<int32_t>(r_half);
      for (;;) {
        int m = static_cast<int>(pilot.below(static_cast<uint64_t>(g.degree())));
        p = g.move(p, m);
        int axis = m >> 1;
        if (std::abs(p[axis]) > 4 * guard) break;
        if (kset.contains(p)) {
          ++nret;
          break;
        }
        bool outside = std::abs(p[axis]) > 4 * guard;
        if (outside) break;
      }
    }
    double c_emp = (static_cast<double>(nret) / pilots) * std::pow(r_half, g.ambient() - 2);
    eps = c_emp * std::pow(static_cast<double>(guard), -(g.ambient() - 2));
  }

  Rng rng(opts.seed);
  int64_t per_point = std::max<int64_t>(1, opts.samples / static_cast<int64_t>(bd.size()));
  CapacityResult out;
  out.method = CapacityMethod::mc_escape;
  out.seed = opts.seed;
  double var_sum = 0.0;
  for (const Point& x : bd) {
    int64_t escaped = 0;
    for (int64_t s = 0; s < per_point; ++s) {
      Point p = x;
      bool esc = true;
      for (;;) {
        p = g.move(p, static_cast<int>(rng.below(static_cast<uint64_t>(g.degree()))));
        if (kset.contains(p)) {
          esc = false;
          break;
        }
        bool out_of_guard = false;
        for (int i = 0; i < g.ambient(); ++i)
          if (std::abs(p[i]) > guard) {
            out_of_guard = true;
            break;
          }
        if (out_of_guard) break;
      }
      if (esc) ++escaped;
    }
    double p_hat = static_cast<double>(escaped) / static_cast<double>(per_point);
    // escape-to-guard overestimates escape-to-infinity by at most eps
    double corrected = std::max(0.0, p_hat - 0.5 * eps * p_hat);
    out.measure.support.push_back(x);
    out.measure.weight.push_back(corrected);
    var_sum += p_hat * (1.0 - p_hat) / static_cast<double>(per_point);
  }
  out.value = out.measure.total();
  out.std_error = std::sqrt(var_sum);
  out.truncation_bound = 0.5 * eps * out.value;
  return out;
}

}  // namespace

CapacityResult equilibrium_infinite(const std::vector<Point>& K, const Geometry& g,
                                    const InfiniteCapacityOptions& opts) {
  if (g.is_cylinder() || g.ambient() < 3)
    throw std::invalid_argument("equilibrium_infinite: needs transient Z^(d+1), d+1 >= 3");
  switch (opts.method) {
    case CapacityMethod::exact_solve:
      if (g.ambient() != 3)
        throw std::invalid_argument("exact infinite-volume solve only tabulated for Z^3");
      if (2 * bounding_radius(K, 3) > green_z3::table_radius())
        throw std::invalid_argument("K too large for the Green table");
      return equilibrium_gram_z3(K, g);
    case CapacityMethod::bigbox_extrapolation:
      return equilibrium_bigbox(K, g, opts.bigbox_base);
    case CapacityMethod::mc_escape:
      return equilibrium_mc(K, g, opts);
  }
  throw std::logic_error("unreachable");
}

double hit_probability_z3(const Point& y, const DiscreteMeasure& e_k) {
  double p = 0.0;
  for (size_t i = 0; i < e_k.support.size(); ++i) {
    const Point& x = e_k.support[i];
    p += green_z3::at(y[0] - x[0], y[1] - x[1], y[2] - x[2]) * e_k.weight[i];
  }
  return p;
}

}  // namespace cylab
