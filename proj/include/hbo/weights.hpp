#pragma once
// Truncated radial weights: equal to <x> = sqrt(1+|x|^2) up to radius N,
// constant 2N beyond 3N, joined by a C2 monotone quintic blend whose radial
// slope stays <= 1 (checked by dense sampling in the tests, N >= 2).
#include "hbo/grid.hpp"

namespace hbo {

struct TruncatedWeight {
    Grid grid;
    double N = 0.0;
    RealField values;
};

// Scalar radial profile and its slope; exposed for dense sampling.
double truncated_weight_radial(double N, double rho);
double truncated_weight_radial_slope(double N, double rho);

// Samples the radial profile on the grid. Warns (stderr) when 3N >= L.
TruncatedWeight truncated_weight(const Grid& g, double N);

// <x> sampled on the grid.
RealField bracket_weight(const Grid& g);

// (sum weight(x)^(2r) u(x)^2 dx^d)^(1/2), rectangle rule.
double weighted_l2(const RealField& u, const RealField& weight, double r);

}
