#pragma once

#include "cylab/geometry.hpp"

namespace cylab::green_z3 {

// Free Green function of the simple random walk on Z^3 (expected visits to x
// from the origin). Direct numerical integration of the characteristic
// function representation, after integrating out the coordinate with the
// largest displacement in closed form. Oracle-grade; relative error target
// around 1e-12. Slow, meant for table generation and spot checks.
double quadrature(int x1, int x2, int x3);

// Fast evaluation: precomputed table up to |x|_inf <= table_radius(), then
// the two-term 1/|x| expansion with fitted direction coefficients.
double at(int x1, int x2, int x3);
double at(const Point& p);

int table_radius();

// Second-order asymptotic used beyond the table.
double asymptotic(int x1, int x2, int x3);

// Defined in the generated table translation unit.
extern const int kTableRadius;
extern const double kTable[];
extern const double kAsymC1;
extern const double kAsymC2;

}  // namespace cylab::green_z3
