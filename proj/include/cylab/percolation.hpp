#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cylab/interlace.hpp"
#include "cylab/stats.hpp"

namespace cylab {

// Vacant-set observables for the interlacement on Z^3. Scans are label
// coupled: one frozen sample set per scale serves every level u below the
// sampled budget, so monotonicity in u is exact per sample.

struct CrossingEstimate {
  double u = 0.0;
  int L = 0;
  int64_t samples = 0;
  int64_t successes = 0;
  WilsonCI ci;
};

struct ExponentFit {
  double u = 0.0;
  std::vector<int> scales;
  std::vector<double> p_hat;
  bool degenerate = false;  // some crossing estimate hit zero: decay faster
                            // than resolvable at these scales
  LineFit line;             // -log p over log L
  double alpha() const { return line.slope; }
  double alpha_se() const { return line.slope_se; }
};

struct UstarstarResult {
  double lo = 0.0;
  double hi = 0.0;
  bool bracketed = false;
  bool monotone = true;  // criterion pattern along the grid
  std::vector<ExponentFit> fits;
  std::string caveat = "finite-size estimate, not the true critical value";
};

// Frozen coupled sample sets for a family of scales; every query below
// reuses them.
class PercolationLab {
 public:
  PercolationLab(std::vector<int> scales, int64_t samples, double u_max, uint64_t seed);

  CrossingEstimate crossing(double u, int L) const;
  ExponentFit alpha(double u) const;
  // bisection on the criterion "alpha positive at z_crit standard errors"
  UstarstarResult ustarstar(const std::vector<double>& u_grid, double z_crit = 2.0,
                            double tol = 0.25) const;

  const std::vector<int>& scales() const { return scales_; }
  double u_max() const { return u_max_; }

 private:
  struct ScaleData {
    int L = 0;
    int side = 0;  // dense cube side 4L+1
    // per sample: min trajectory label covering each cell (inf when vacant
    // at every level)
    std::vector<std::vector<double>> min_label;
  };
  const ScaleData& data_for(int L) const;
  bool criterion(double u) const;

  std::vector<int> scales_;
  int64_t samples_ = 0;
  double u_max_ = 0.0;
  std::vector<ScaleData> data_;
  mutable std::vector<ExponentFit> fit_log_;
};

// One-off estimates (build their own frozen samples).
CrossingEstimate crossing_probability(double u, int L, int64_t samples, uint64_t seed);
ExponentFit alpha_fit(double u, const std::vector<int>& scales, int64_t samples,
                      uint64_t seed);

// Finite-size proxy for the percolation probability: P[0 connected to the
// sphere of radius L inside the vacant set]. A whole (u, L) table off one
// frozen sample set at the largest scale; nesting in L is exact per sample.
struct EtaProxyTable {
  std::vector<double> u_grid;
  std::vector<int> l_grid;
  std::vector<std::vector<CrossingEstimate>> rows;  // rows[iu][iL]
  double ustar_proxy = 0.0;  // largest grid u with proxy bounded away from 0
  bool ustar_found = false;
};
EtaProxyTable eta_proxy_scan(const std::vector<double>& u_grid, const std::vector<int>& l_grid,
                             int64_t samples, uint64_t seed);

}  // namespace cylab
