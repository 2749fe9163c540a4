#include "hbo/weights.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hbo {

namespace {

// Quintic Hermite basis on [0,1] for value/slope/curvature data at both ends.
// With the right-end data all zero only the left-end triple contributes.
double blend_value(double s, double v0, double m0, double a0, double v1) {
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    const double h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    const double h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
    const double h3 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    return v0 * h0 + m0 * h1 + a0 * h2 + v1 * h3;
}

double blend_slope(double s, double v0, double m0, double a0, double v1) {
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    const double d0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
    const double d1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
    const double d2 = s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4;
    const double d3 = 30.0 * s2 - 60.0 * s3 + 30.0 * s4;
    return v0 * d0 + m0 * d1 + a0 * d2 + v1 * d3;
}

}  // namespace

double truncated_weight_radial(double N, double rho) {
    if (N <= 0.0) throw std::invalid_argument("truncated weight: N must be positive");
    rho = std::abs(rho);
    if (rho <= N) return std::sqrt(1.0 + rho * rho);
    if (rho >= 3.0 * N) return 2.0 * N;
    const double W = 2.0 * N;
    const double s = (rho - N) / W;
    const double bracket = std::sqrt(1.0 + N * N);
    const double v0 = bracket;
    const double m0 = W * (N / bracket);
    const double a0 = W * W / (bracket * bracket * bracket);
    return blend_value(s, v0, m0, a0, 2.0 * N);
}

double truncated_weight_radial_slope(double N, double rho) {
    if (N <= 0.0) throw std::invalid_argument("truncated weight: N must be positive");
    rho = std::abs(rho);
    if (rho < N) return rho / std::sqrt(1.0 + rho * rho);
    if (rho > 3.0 * N) return 0.0;
    const double W = 2.0 * N;
    const double s = (rho - N) / W;
    const double bracket = std::sqrt(1.0 + N * N);
    const double v0 = bracket;
    const double m0 = W * (N / bracket);
    const double a0 = W * W / (bracket * bracket * bracket);
    return blend_slope(s, v0, m0, a0, 2.0 * N) / W;
}

TruncatedWeight truncated_weight(const Grid& g, double N) {
    if (N <= 0.0) throw std::invalid_argument("truncated weight: N must be positive");
    if (3.0 * N >= g.L)
        std::fprintf(stderr, "truncated weight: plateau radius 3N = %g reaches past the box half-width L = %g\n",
                     3.0 * N, g.L);
    TruncatedWeight w{g, N, make_real_field(g)};
    for (std::size_t i = 0; i < g.size; ++i) {
        auto x = point(g, unravel(g, i));
        double rho = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        w.values.v[i] = truncated_weight_radial(N, rho);
    }
    return w;
}

RealField bracket_weight(const Grid& g) {
    RealField w = make_real_field(g);
    for (std::size_t i = 0; i < g.size; ++i) {
        auto x = point(g, unravel(g, i));
        w.v[i] = std::sqrt(1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    }
    return w;
}

double weighted_l2(const RealField& u, const RealField& weight, double r) {
    if (!(u.grid == weight.grid))
        throw std::invalid_argument("weighted norm: field and weight live on different grids");
    SumAccumulator acc;
    for (std::size_t i = 0; i < u.grid.size; ++i)
        acc.add(std::pow(weight.v[i], 2.0 * r) * u.v[i] * u.v[i]);
    return std::sqrt(acc.value() * cell_volume(u.grid));
}

}  // namespace hbo
