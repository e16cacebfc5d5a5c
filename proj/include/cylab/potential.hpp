#pragma once

#include <Eigen/Dense>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cylab/geometry.hpp"
#include "cylab/rng.hpp"

namespace cylab {

using PointIndex = std::unordered_map<Point, int, PointHash>;

// Finitely supported nonnegative measure on vertices.
struct DiscreteMeasure {
  std::vector<Point> support;
  std::vector<double> weight;

  double total() const {
    double s = 0.0;
    for (double w : weight) s += w;
    return s;
  }
};

// Green function of the walk killed outside a finite set U: g_U(x,x') solves
// (I - P_U) G = I with P_U the walk restricted to U. Symmetric, zero outside.
class GreenTable {
 public:
  GreenTable(std::vector<Point> domain, Eigen::MatrixXd values);

  double at(const Point& x, const Point& y) const;
  int index_of(const Point& p) const;
  const std::vector<Point>& domain() const { return domain_; }
  const Eigen::MatrixXd& matrix() const { return g_; }
  double max_asymmetry() const;

 private:
  std::vector<Point> domain_;
  PointIndex index_;
  Eigen::MatrixXd g_;
};

struct GreenExactOptions {
  size_t dense_cap = 20000;  // guard for the dense solve
};

GreenTable green_exact(const std::vector<Point>& U, const Geometry& g,
                       const GreenExactOptions& opts = {});

// Independent iterative route (conjugate gradient, relative residual 1e-12);
// returns the column g_U(., x). Used to cross-check the dense factorization.
Eigen::VectorXd green_column_cg(const std::vector<Point>& U, const Geometry& g,
                                const Point& x, double tol = 1e-12);

enum class CapacityMethod { exact_solve, mc_escape, bigbox_extrapolation };

struct CapacityResult {
  double value = 0.0;
  DiscreteMeasure measure;
  CapacityMethod method = CapacityMethod::exact_solve;
  double std_error = 0.0;
  double truncation_bound = 0.0;
  uint64_t seed = 0;
};

// e_{K,U}(x) = P_x[return to K after exiting U] complement; absorbing-chain
// solve. Requires K subset of finite U.
CapacityResult equilibrium_exact(const std::vector<Point>& K, const std::vector<Point>& U,
                                 const Geometry& g);

struct HittingIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

// lhs = P_x[H_K < T_U] by absorbing solve; rhs = sum_x' g_U(x,x') e_{K,U}(x').
HittingIdentity hitting_identity_check(const Point& x, const std::vector<Point>& K,
                                       const std::vector<Point>& U, const Geometry& g);

// Green-ratio sandwich around P_x[H_K < T_U]; true when both bounds hold
// within slack.
bool sandwich_check(const Point& x, const std::vector<Point>& K,
                    const std::vector<Point>& U, const Geometry& g, double slack = 1e-10);

// Entrance law matrix E(y, j) = P_y[H_K < T_U, X_{H_K} = K[j]] for y in U
// (rows indexed like U; rows of K points are unit rows).
Eigen::MatrixXd entrance_law(const std::vector<Point>& U, const std::vector<Point>& K,
                             const Geometry& g, const PointIndex& u_index);

struct InfiniteCapacityOptions {
  CapacityMethod method = CapacityMethod::exact_solve;
  int guard_radius = 0;    // 0 = solve automatically from target below
  double target_eps = 1e-4;
  int64_t samples = 100000;
  uint64_t seed = 1;
  int bigbox_base = 0;     // 0 = automatic
};

// Equilibrium measure / capacity relative to the whole lattice (transient
// case, ambient dimension >= 3).
//  - exact_solve: Gram system on the inner boundary using the free Green
//    function table (ambient dimension 3 only).
//  - bigbox_extrapolation: exact solves in growing boxes, Richardson step.
//  - mc_escape: escape sampling with a guard sphere; the neglected
//    return-after-guard probability is reported as truncation_bound.
CapacityResult equilibrium_infinite(const std::vector<Point>& K, const Geometry& g,
                                    const InfiniteCapacityOptions& opts = {});

// P_y[H_K < infinity] = sum_x g(y-x) e_K(x) for the free walk on Z^3.
double hit_probability_z3(const Point& y, const DiscreteMeasure& e_k);

}  // namespace cylab
