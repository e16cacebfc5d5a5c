#pragma once

#include <cstdint>
#include <vector>

namespace cylab {

struct WilsonCI {
  double p_hat = 0.0;
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval; z defaults to the 95% two-sided quantile.
WilsonCI wilson_ci(int64_t successes, int64_t trials, double z = 1.959963984540054);

struct ChiSquareResult {
  double stat = 0.0;
  int dof = 0;
  double pvalue = 1.0;
};

// Goodness of fit of observed counts against cell probabilities. Cells with
// expected count below min_expected are pooled into their right neighbor.
ChiSquareResult chi_square_gof(const std::vector<int64_t>& counts,
                               const std::vector<double>& probs,
                               double min_expected = 5.0);

// One-sample KS against a discrete CDF evaluated at the sorted sample values.
// For discrete data the asymptotic p-value is conservative.
struct KSResult {
  double d = 0.0;
  double pvalue = 1.0;
};
KSResult ks_test_sorted(const std::vector<double>& sorted_sample,
                        const std::vector<double>& cdf_at_values);

// Two-sample KS (asymptotic p-value).
KSResult ks_two_sample(std::vector<double> a, std::vector<double> b);

double ks_pvalue(double d, double effective_n);

// Weighted least squares line y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double chi2 = 0.0;  // weighted residual sum of squares
  int dof = 0;
};
LineFit weighted_line_fit(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& sigma);

double mean(const std::vector<double>& v);
// Standard error of the mean.
double sem(const std::vector<double>& v);
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace cylab
