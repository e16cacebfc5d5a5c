#include "cylab/green_z3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cylab::green_z3 {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 16-point Gauss-Legendre nodes/weights (positive half of [-1,1]).
constexpr double kGlX[8] = {0.0950125098376374, 0.2816035507792589,
                            0.4580167776572274, 0.6178762444026438,
                            0.7554044083550030, 0.8656312023878318,
                            0.9445750230732326, 0.9894009349916499};
constexpr double kGlW[8] = {0.1894506104550685, 0.1826034150449236,
                            0.1691565193950025, 0.1495959888165767,
                            0.1246289712555339, 0.0951585116824928,
                            0.0622535239386479, 0.0271524594117541};

template <class F>
double gl_panels(F&& f, double lo, double hi, int panels) {
  double total = 0.0;
  double w = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    double a = lo + p * w;
    double mid = a + 0.5 * w;
    double half = 0.5 * w;
    double s = 0.0;
    for (int i = 0; i < 8; ++i)
      s += kGlW[i] * (f(mid + half * kGlX[i]) + f(mid - half * kGlX[i]));
    total += s * half;
  }
  return total;
}

// Integrand of the reduced 2-D integral at (k1, k2) with vertical
// displacement a integrated out analytically:
//   cos(k1 b) cos(k2 c) q^a / sqrt(A^2 - 1),
// A = 3 - cos k1 - cos k2, q = A - sqrt(A^2-1) = 1/(A + sqrt(A^2-1)).
struct Reduced {
  int a, b, c;

  double eval(double k1, double k2) const {
    double s1 = std::sin(0.5 * k1), s2 = std::sin(0.5 * k2);
    double am1 = 2.0 * (s1 * s1 + s2 * s2);  // A - 1, accurate near 0
    double sq = std::sqrt(am1 * (2.0 + am1));
    double q = 1.0 / (1.0 + am1 + sq);
    return std::cos(k1 * b) * std::cos(k2 * c) * std::pow(q, a) / sq;
  }

  // polar form around the origin, regularized by the Jacobian r
  double eval_polar(double r, double th) const {
    double k1 = r * std::cos(th), k2 = r * std::sin(th);
    double s1 = std::sin(0.5 * k1), s2 = std::sin(0.5 * k2);
    double am1 = 2.0 * (s1 * s1 + s2 * s2);
    double sq = std::sqrt(am1 * (2.0 + am1));
    if (sq == 0.0) return 1.0;  // r == 0 limit
    double q = 1.0 / (1.0 + am1 + sq);
    return std::cos(k1 * b) * std::cos(k2 * c) * std::pow(q, a) * (r / sq);
  }
};

double integrate(const Reduced& f, int density) {
  const double r0 = 0.5;
  int freq1 = f.b + f.a / 2 + 2;
  int freq2 = f.c + f.a / 2 + 2;
  auto panels = [&](double range, int freq) {
    return std::max(2, static_cast<int>(std::ceil(range * freq * density / 5.0)));
  };

  // quarter disc r <= r0 in polar coordinates
  int pr = panels(r0, f.a + f.b + f.c + 4);
  int pth = panels(0.5 * kPi, std::max(f.b, f.c) + 2);
  double disc = gl_panels(
      [&](double th) {
        return gl_panels([&](double r) { return f.eval_polar(r, th); }, 0.0, r0, pr);
      },
      0.0, 0.5 * kPi, pth);

  // sliver [0,r0]^2 minus the quarter disc
  auto sliver_half = [&](double th_lo, double th_hi, bool use_cos) {
    return gl_panels(
        [&](double th) {
          double rmax = r0 / (use_cos ? std::cos(th) : std::sin(th));
          return gl_panels([&](double r) { return f.eval_polar(r, th); }, r0, rmax,
                           std::max(2, pr / 4));
        },
        th_lo, th_hi, std::max(2, pth / 2));
  };
  double sliver = sliver_half(0.0, 0.25 * kPi, true) + sliver_half(0.25 * kPi, 0.5 * kPi, false);

  // rectangles covering the rest of [0,pi]^2
  double rect1 = gl_panels(
      [&](double k1) {
        return gl_panels([&](double k2) { return f.eval(k1, k2); }, 0.0, kPi,
                         panels(kPi, freq2));
      },
      r0, kPi, panels(kPi - r0, freq1));
  double rect2 = gl_panels(
      [&](double k2) {
        return gl_panels([&](double k1) { return f.eval(k1, k2); }, 0.0, r0,
                         panels(r0, freq1));
      },
      r0, kPi, panels(kPi - r0, freq2));

  return (3.0 / (kPi * kPi)) * (disc + sliver + rect1 + rect2);
}

}  // namespace

double quadrature(int x1, int x2, int x3) {
  int v[3] = {std::abs(x1), std::abs(x2), std::abs(x3)};
  std::sort(v, v + 3);  // v[2] largest -> analytic direction
  Reduced f{v[2], v[1], v[0]};
  double coarse = integrate(f, 2);
  double fine = integrate(f, 3);
  if (std::abs(fine - coarse) > 1e-10 * std::max(1.0, std::abs(fine)))
    return integrate(f, 5);
  return fine;
}

int table_radius() { return kTableRadius; }

double asymptotic(int x1, int x2, int x3) {
  double r2 = static_cast<double>(x1) * x1 + static_cast<double>(x2) * x2 +
              static_cast<double>(x3) * x3;
  double r = std::sqrt(r2);
  double s4 = (std::pow(static_cast<double>(x1), 4) + std::pow(static_cast<double>(x2), 4) +
               std::pow(static_cast<double>(x3), 4)) /
              (r2 * r2);
  return (3.0 / (2.0 * kPi)) / r + (kAsymC1 + kAsymC2 * s4) / (r2 * r);
}

double at(int x1, int x2, int x3) {
  int v[3] = {std::abs(x1), std::abs(x2), std::abs(x3)};
  std::sort(v, v + 3);
  int a = v[2], b = v[1], c = v[0];
  if (a <= kTableRadius) {
    // tetrahedral index over 0 <= c <= b <= a
    size_t idx = static_cast<size_t>(a) * (a + 1) * (a + 2) / 6 +
                 static_cast<size_t>(b) * (b + 1) / 2 + static_cast<size_t>(c);
    return kTable[idx];
  }
  if (kTableRadius < 0) throw std::logic_error("green_z3 table not generated");
  return asymptotic(a, b, c);
}

double at(const Point& p) { return at(p[0], p[1], p[2]); }

}  // namespace cylab::green_z3
