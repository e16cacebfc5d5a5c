#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace cylab {

// Modified Bessel functions of index 0 and 1. In-house: power series up to
// the switch point x = 20, optimally truncated asymptotic series beyond
// (both regimes give close to full double precision; the switch point is
// where the asymptotic's smallest term drops below 1e-17).
double bessel_i(int nu, double x);
double bessel_i_scaled(int nu, double x);  // e^{-x} I_nu(x), overflow-safe
double bessel_i1_over_i0(double x);        // Gauss continued fraction
std::complex<double> bessel_ratio_complex(std::complex<double> z);

// Laplace transform of the first time the supremum of Brownian local time
// reaches u, evaluated at theta: E[exp(-theta^2/2 * zeta(u))]. Continuous
// extension 1 at theta = 0. The formula depends on theta and u only through
// theta*u, which makes the diffusive scaling identity exact in code.
double zeta_laplace(double theta, double u);

// Same transform as a function of lambda = theta^2/2, continued to the
// complex plane (needed by the Talbot contour).
std::complex<double> zeta_transform_lambda(std::complex<double> lambda, double u);

struct TailResult {
  double value = 0.0;       // monotone-corrected consensus value
  double err = 0.0;         // disagreement of the two inversion methods
  double gaver = 0.0;       // Gaver-Stehfest estimate
  double talbot = 0.0;      // fixed-Talbot estimate
  bool flagged = false;     // methods disagree beyond tolerance
};

// P[zeta(u) >= s] by numerical inversion of (1 - transform)/lambda with two
// independent methods; their disagreement is the reported error.
TailResult zeta_tail(double s, double u, int gaver_terms = 14, int talbot_terms = 32,
                     double flag_tol = 1e-4);

struct ZetaMcResult {
  std::vector<double> samples;  // values of (first time sup local time >= u*m) / m^2
  int64_t censored = 0;
  int m = 0;
  double u = 0.0;
};

// Discrete local-time approximation of zeta(u): 1-D simple random walk,
// threshold u*m on the strict-past level counts, time rescaled by m^2.
ZetaMcResult zeta_mc(double u, int m, int64_t replicates, uint64_t seed);

// Empirical transform E[exp(-theta^2/2 * sample)] with its standard error.
struct McTransform {
  double value = 0.0;
  double std_error = 0.0;
};
McTransform empirical_transform(const std::vector<double>& samples, double theta);

}  // namespace cylab
