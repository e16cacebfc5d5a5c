#include "cylab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace cylab {

WilsonCI wilson_ci(int64_t successes, int64_t trials, double z) {
  if (trials <= 0) return {};
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

ChiSquareResult chi_square_gof(const std::vector<int64_t>& counts,
                               const std::vector<double>& probs,
                               double min_expected) {
  if (counts.size() != probs.size() || counts.empty())
    throw std::invalid_argument("chi_square_gof: size mismatch");
  int64_t n = 0;
  for (int64_t c : counts) n += c;
  // pool low-expectation cells left to right
  std::vector<double> exp_pooled;
  std::vector<double> obs_pooled;
  double e_acc = 0.0, o_acc = 0.0;
  for (size_t i = 0; i < counts.size(); ++i) {
    e_acc += static_cast<double>(n) * probs[i];
    o_acc += static_cast<double>(counts[i]);
    if (e_acc >= min_expected) {
      exp_pooled.push_back(e_acc);
      obs_pooled.push_back(o_acc);
      e_acc = o_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (exp_pooled.empty()) {
      exp_pooled.push_back(e_acc);
      obs_pooled.push_back(o_acc);
    } else {
      exp_pooled.back() += e_acc;
      obs_pooled.back() += o_acc;
    }
  }
  ChiSquareResult r;
  r.dof = static_cast<int>(exp_pooled.size()) - 1;
  for (size_t i = 0; i < exp_pooled.size(); ++i) {
    double diff = obs_pooled[i] - exp_pooled[i];
    r.stat += diff * diff / exp_pooled[i];
  }
  r.pvalue = r.dof > 0 ? boost::math::gamma_q(0.5 * r.dof, 0.5 * r.stat) : 1.0;
  return r;
}

double ks_pvalue(double d, double effective_n) {
  // Kolmogorov asymptotic with the Stephens small-sample adjustment.
  double sn = std::sqrt(effective_n);
  double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 1e-8) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

KSResult ks_test_sorted(const std::vector<double>& sorted_sample,
                        const std::vector<double>& cdf_at_values) {
  if (sorted_sample.size() != cdf_at_values.size() || sorted_sample.empty())
    throw std::invalid_argument("ks_test_sorted: size mismatch");
  size_t n = sorted_sample.size();
  double d = 0.0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && sorted_sample[j + 1] == sorted_sample[i]) ++j;
    double ecdf_before = static_cast<double>(i) / static_cast<double>(n);
    double ecdf_after = static_cast<double>(j + 1) / static_cast<double>(n);
    double f = cdf_at_values[i];
    d = std::max(d, std::abs(ecdf_after - f));
    d = std::max(d, std::abs(f - ecdf_before));
    i = j + 1;
  }
  return {d, ks_pvalue(d, static_cast<double>(n))};
}

KSResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    double fa = static_cast<double>(i) / static_cast<double>(a.size());
    double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  double ne = static_cast<double>(a.size()) * static_cast<double>(b.size()) /
              static_cast<double>(a.size() + b.size());
  return {d, ks_pvalue(d, ne)};
}

LineFit weighted_line_fit(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& sigma) {
  if (x.size() != y.size() || x.size() != sigma.size() || x.size() < 2)
    throw std::invalid_argument("weighted_line_fit: need >= 2 points");
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    double w = 1.0 / (sigma[i] * sigma[i]);
    sw += w;
    swx += w * x[i];
    swy += w * y[i];
    swxx += w * x[i] * x[i];
    swxy += w * x[i] * y[i];
  }
  double det = sw * swxx - swx * swx;
  LineFit f;
  f.slope = (sw * swxy - swx * swy) / det;
  f.intercept = (swxx * swy - swx * swxy) / det;
  f.slope_se = std::sqrt(sw / det);
  f.dof = static_cast<int>(x.size()) - 2;
  for (size_t i = 0; i < x.size(); ++i) {
    double r = (y[i] - f.intercept - f.slope * x[i]) / sigma[i];
    f.chi2 += r * r;
  }
  return f;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sem(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v);
  double s2 = 0.0;
  for (double x : v) s2 += (x - m) * (x - m);
  s2 /= static_cast<double>(v.size() - 1);
  return std::sqrt(s2 / static_cast<double>(v.size()));
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  if (q <= 0.0) return sorted.front();
  if (q >= 1.0) return sorted.back();
  double pos = q * static_cast<double>(sorted.size() - 1);
  size_t lo = static_cast<size_t>(pos);
  double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

}  // namespace cylab
