#include "cylab/limitlaw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cylab/rng.hpp"

namespace cylab {

namespace {

constexpr double kSwitch = 20.0;  // series/asymptotic switch point
constexpr double kLn2 = 0.69314718055994530942;
constexpr double kPi = 3.14159265358979323846;

double series_i(int nu, double x) {
  // sum over k of (x/2)^(2k+nu) / (k! (k+nu)!); no cancellation, x <= ~20
  double half = 0.5 * x;
  double term = nu == 0 ? 1.0 : half;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= half * half / (static_cast<double>(k) * (k + nu));
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

double asym_i_scaled(int nu, double x) {
  // e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k prod_{j<=k}(mu-(2j-1)^2)/(k! (8x)^k)
  double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double prev = std::abs(term);
  for (int k = 1; k < 60; ++k) {
    double f = (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * x * k);
    term *= -f;
    if (std::abs(term) > prev) break;  // semiconvergent: stop at the smallest term
    prev = std::abs(term);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

}  // namespace

double bessel_i_scaled(int nu, double x) {
  if (nu != 0 && nu != 1) throw std::invalid_argument("bessel: only indices 0 and 1");
  if (x < 0) throw std::invalid_argument("bessel: x >= 0");
  if (x < kSwitch) return series_i(nu, x) * std::exp(-x);
  return asym_i_scaled(nu, x);
}

double bessel_i(int nu, double x) {
  if (nu != 0 && nu != 1) throw std::invalid_argument("bessel: only indices 0 and 1");
  if (x < 0) throw std::invalid_argument("bessel: x >= 0");
  if (x < kSwitch) return series_i(nu, x);
  return asym_i_scaled(nu, x) * std::exp(x);  // overflows to inf past ~709, by design
}

double bessel_i1_over_i0(double x) {
  if (x < 0) throw std::invalid_argument("bessel ratio: x >= 0");
  if (x == 0.0) return 0.0;
  // Gauss continued fraction: I1/I0 = (x/2) / (1 + (x^2/4)/(2 + (x^2/4)/(3 + ...)))
  double q = 0.25 * x * x;
  double f = 0.0;
  for (int k = 60 + static_cast<int>(x); k >= 1; --k) f = q / (static_cast<double>(k + 1) + f);
  return 0.5 * x / (1.0 + f);
}

std::complex<double> bessel_ratio_complex(std::complex<double> z) {
  if (z == std::complex<double>(0.0, 0.0)) return {0.0, 0.0};
  std::complex<double> q = 0.25 * z * z;
  std::complex<double> f = 0.0;
  int terms = 60 + static_cast<int>(std::abs(z));
  for (int k = terms; k >= 1; --k) f = q / (static_cast<double>(k + 1) + f);
  return 0.5 * z / (1.0 + f);
}

double zeta_laplace(double theta, double u) {
  if (theta < 0 || u <= 0) throw std::invalid_argument("zeta_laplace: theta >= 0, u > 0");
  if (theta == 0.0) return 1.0;
  double tu = theta * u;
  double w = 0.5 * tu;
  double ratio = bessel_i1_over_i0(w);
  if (w > 30.0) {
    // sinh(w)^2 = e^{2w}(1 - e^{-2w})^2 / 4
    double em = std::exp(-2.0 * w);
    return 4.0 * tu * em / ((1.0 - em) * (1.0 - em)) * ratio;
  }
  double sh = std::sinh(w);
  return tu / (sh * sh) * ratio;
}

std::complex<double> zeta_transform_lambda(std::complex<double> lambda, double u) {
  // lambda = theta^2/2; principal square root keeps Re theta >= 0
  std::complex<double> theta = std::sqrt(2.0 * lambda);
  std::complex<double> tu = theta * u;
  std::complex<double> w = 0.5 * tu;
  std::complex<double> ratio = bessel_ratio_complex(w);
  if (w.real() > 30.0) {
    std::complex<double> em = std::exp(-2.0 * w);
    std::complex<double> one(1.0, 0.0);
    return 4.0 * tu * em / ((one - em) * (one - em)) * ratio;
  }
  std::complex<double> sh = std::sinh(w);
  return tu / (sh * sh) * ratio;
}

namespace {

// Laplace transform of the tail function: (1 - psi(lambda)) / lambda.
std::complex<double> tail_transform(std::complex<double> lambda, double u) {
  return (1.0 - zeta_transform_lambda(lambda, u)) / lambda;
}

double tail_gaver(double s, double u, int n) {
  if (n % 2) ++n;
  int half = n / 2;
  // Gaver-Stehfest weights; exact small factorials
  auto fact = [](int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    double a = 0.0;
    for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
      a += std::pow(static_cast<double>(j), half) * fact(2 * j) /
           (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
    }
    if ((k + half) % 2) a = -a;
    double lam = k * kLn2 / s;
    sum += a * tail_transform({lam, 0.0}, u).real();
  }
  return sum * kLn2 / s;
}

double tail_talbot(double s, double u, int m) {
  // fixed Talbot contour (Abate-Valko)
  double r = 2.0 * m / (5.0 * s);
  double sum = 0.5 * std::exp(r * s) * tail_transform({r, 0.0}, u).real();
  for (int k = 1; k < m; ++k) {
    double th = k * kPi / m;
    double cot = std::cos(th) / std::sin(th);
    std::complex<double> lam(r * th * cot, r * th);
    double sigma = th + (th * cot - 1.0) * cot;
    std::complex<double> expo = std::exp(lam * s);
    if (!std::isfinite(expo.real()) || std::abs(expo) < 1e-300) continue;
    std::complex<double> term = expo * tail_transform(lam, u) *
                                std::complex<double>(1.0, sigma);
    sum += term.real();
  }
  return sum * r / m;
}

}  // namespace

TailResult zeta_tail(double s, double u, int gaver_terms, int talbot_terms, double flag_tol) {
  if (s <= 0 || u <= 0) throw std::invalid_argument("zeta_tail: s, u > 0");
  TailResult out;
  out.gaver = tail_gaver(s, u, gaver_terms);
  out.talbot = tail_talbot(s, u, talbot_terms);
  out.err = std::abs(out.gaver - out.talbot);
  out.flagged = out.err > flag_tol;
  out.value = std::clamp(out.talbot, 0.0, 1.0);
  return out;
}

ZetaMcResult zeta_mc(double u, int m, int64_t replicates, uint64_t seed) {
  if (m < 10) throw std::invalid_argument("zeta_mc: m >= 10");
  if (u <= 0) throw std::invalid_argument("zeta_mc: u > 0");
  ZetaMcResult out;
  out.m = m;
  out.u = u;
  int64_t threshold = static_cast<int64_t>(std::ceil(u * m));
  double m2 = static_cast<double>(m) * m;
  // zeta has an exponential upper tail; this budget censors essentially never
  int64_t budget = static_cast<int64_t>(m2 * (50.0 * u * u + 50.0));

  for (int64_t rep = 0; rep < replicates; ++rep) {
    Rng rng = Rng::stream(seed, "zeta-mc", static_cast<uint64_t>(rep));
    // strict-past local time of the walk itself: the count at the departed
    // position becomes visible at the next index
    std::vector<int64_t> counts(64, 0);
    int64_t base = -32;
    int32_t pos = 0;
    int64_t best = 0;
    int64_t k = 0;
    bool done = false;
    while (k < budget) {
      int64_t off = pos - base;
      if (off < 0) {
        counts.insert(counts.begin(), 64, 0);
        base -= 64;
        off += 64;
      } else if (off >= static_cast<int64_t>(counts.size())) {
        counts.resize(counts.size() + 64, 0);
      }
      int64_t c = ++counts[static_cast<size_t>(off)];
      ++k;
      if (c > best) best = c;
      if (best >= threshold) {
        out.samples.push_back(static_cast<double>(k) / m2);
        done = true;
        break;
      }
      pos += rng.bernoulli(0.5) ? 1 : -1;
    }
    if (!done) ++out.censored;
  }
  return out;
}

McTransform empirical_transform(const std::vector<double>& samples, double theta) {
  McTransform t;
  if (samples.empty()) return t;
  double lam = 0.5 * theta * theta;
  double sum = 0.0, sum2 = 0.0;
  for (double s : samples) {
    double v = std::exp(-lam * s);
    sum += v;
    sum2 += v * v;
  }
  double n = static_cast<double>(samples.size());
  t.value = sum / n;
  double var = (sum2 / n - t.value * t.value) / (n - 1.0);
  t.std_error = std::sqrt(std::max(0.0, var));
  return t;
}

}  // namespace cylab
