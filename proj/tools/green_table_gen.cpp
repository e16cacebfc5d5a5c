// Regenerates src/green_z3_table.cpp: the tabulated free Green function of
// simple random walk on Z^3 for |x|_inf <= radius, plus fitted coefficients
// for the far-field expansion. Run from anywhere:
//
//   green_table_gen [radius] [output.cpp]
//
// Self-checks: Watson's closed form for g(0), the one-step identity
// g(e1) = g(0) - 1, discrete harmonicity across the whole table, and
// agreement of the fitted far-field form with direct quadrature.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "cylab/green_z3.hpp"

namespace {

size_t tet_index(int a, int b, int c) {
  return static_cast<size_t>(a) * (a + 1) * (a + 2) / 6 +
         static_cast<size_t>(b) * (b + 1) / 2 + static_cast<size_t>(c);
}

struct Entry {
  int a, b, c;
};

double watson_g0() {
  const double pi = 3.14159265358979323846;
  return std::sqrt(6.0) / (32.0 * pi * pi * pi) * std::tgamma(1.0 / 24.0) *
         std::tgamma(5.0 / 24.0) * std::tgamma(7.0 / 24.0) * std::tgamma(11.0 / 24.0);
}

}  // namespace

int main(int argc, char** argv) {
  int radius = argc > 1 ? std::atoi(argv[1]) : 47;
  std::string out_path = argc > 2 ? argv[2] : "src/green_z3_table.cpp";

  std::vector<Entry> entries;
  for (int a = 0; a <= radius; ++a)
    for (int b = 0; b <= a; ++b)
      for (int c = 0; c <= b; ++c) entries.push_back({a, b, c});
  std::vector<double> table(entries.size());

  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<size_t> cursor{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < hw; ++t)
    pool.emplace_back([&] {
      for (;;) {
        size_t i = cursor.fetch_add(1);
        if (i >= entries.size()) return;
        const Entry& e = entries[i];
        table[tet_index(e.a, e.b, e.c)] = cylab::green_z3::quadrature(e.a, e.b, e.c);
        if (i % 2000 == 0) std::fprintf(stderr, "  %zu / %zu\n", i, entries.size());
      }
    });
  for (auto& th : pool) th.join();

  auto lookup = [&](int x, int y, int z) {
    int v[3] = {std::abs(x), std::abs(y), std::abs(z)};
    if (v[0] < v[1]) std::swap(v[0], v[1]);
    if (v[1] < v[2]) std::swap(v[1], v[2]);
    if (v[0] < v[1]) std::swap(v[0], v[1]);
    return table[tet_index(v[0], v[1], v[2])];
  };

  // self-checks
  double g0 = lookup(0, 0, 0);
  double g0_ref = watson_g0();
  std::fprintf(stderr, "g(0) = %.15f  closed form = %.15f  rel err = %.2e\n", g0, g0_ref,
               std::abs(g0 - g0_ref) / g0_ref);
  std::fprintf(stderr, "g(e1) - (g(0)-1) = %.2e\n", lookup(1, 0, 0) - (g0 - 1.0));

  double worst_harm = 0.0;
  for (const Entry& e : entries) {
    if (e.a >= radius) continue;  // need all six neighbors inside the table
    double nb = lookup(e.a + 1, e.b, e.c) + lookup(e.a - 1, e.b, e.c) +
                lookup(e.a, e.b + 1, e.c) + lookup(e.a, e.b - 1, e.c) +
                lookup(e.a, e.b, e.c + 1) + lookup(e.a, e.b, e.c - 1);
    double resid = lookup(e.a, e.b, e.c) - nb / 6.0 - (e.a == 0 && e.b == 0 && e.c == 0 ? 1.0 : 0.0);
    worst_harm = std::max(worst_harm, std::abs(resid));
  }
  std::fprintf(stderr, "max harmonicity residual = %.2e\n", worst_harm);

  // fit far-field correction: g - (3/2pi)/r = (c1 + c2*s4)/r^3
  const double pi = 3.14159265358979323846;
  double m11 = 0, m12 = 0, m22 = 0, v1 = 0, v2 = 0;
  for (const Entry& e : entries) {
    double r2 = static_cast<double>(e.a) * e.a + static_cast<double>(e.b) * e.b +
                static_cast<double>(e.c) * e.c;
    double r = std::sqrt(r2);
    if (r < 30.0 || r > 46.0) continue;
    double s4 = (std::pow(double(e.a), 4) + std::pow(double(e.b), 4) + std::pow(double(e.c), 4)) /
                (r2 * r2);
    double y = (lookup(e.a, e.b, e.c) - (3.0 / (2.0 * pi)) / r) * (r2 * r);
    m11 += 1.0;
    m12 += s4;
    m22 += s4 * s4;
    v1 += y;
    v2 += s4 * y;
  }
  double det = m11 * m22 - m12 * m12;
  double c1 = (m22 * v1 - m12 * v2) / det;
  double c2 = (m11 * v2 - m12 * v1) / det;
  std::fprintf(stderr, "asymptotic fit: c1 = %.12f  c2 = %.12f\n", c1, c2);

  double worst_fit = 0.0;
  for (const Entry& e : entries) {
    double r = std::sqrt(static_cast<double>(e.a) * e.a + static_cast<double>(e.b) * e.b +
                         static_cast<double>(e.c) * e.c);
    if (r < 40.0) continue;
    double r2 = r * r;
    double s4 = (std::pow(double(e.a), 4) + std::pow(double(e.b), 4) + std::pow(double(e.c), 4)) /
                (r2 * r2);
    double asym = (3.0 / (2.0 * pi)) / r + (c1 + c2 * s4) / (r2 * r);
    worst_fit = std::max(worst_fit, std::abs(asym - lookup(e.a, e.b, e.c)) / lookup(e.a, e.b, e.c));
  }
  std::fprintf(stderr, "max rel err of far-field form at r >= 40: %.2e\n", worst_fit);

  std::FILE* f = std::fopen(out_path.c_str(), "w");
  if (!f) {
    std::fprintf(stderr, "cannot open %s\n", out_path.c_str());
    return 1;
  }
  std::fprintf(f, "// Generated by tools/green_table_gen (radius %d). Do not edit.\n", radius);
  std::fprintf(f, "#include \"cylab/green_z3.hpp\"\n\n");
  std::fprintf(f, "namespace cylab::green_z3 {\n");
  std::fprintf(f, "const int kTableRadius = %d;\n", radius);
  std::fprintf(f, "const double kAsymC1 = %.17g;\n", c1);
  std::fprintf(f, "const double kAsymC2 = %.17g;\n", c2);
  std::fprintf(f, "const double kTable[%zu] = {\n", table.size());
  for (size_t i = 0; i < table.size(); ++i)
    std::fprintf(f, "%.17g,%s", table[i], (i % 4 == 3) ? "\n" : " ");
  std::fprintf(f, "};\n}  // namespace cylab::green_z3\n");
  std::fclose(f);
  std::fprintf(stderr, "wrote %s (%zu entries)\n", out_path.c_str(), table.size());
  return worst_harm < 1e-9 ? 0 : 2;
}
