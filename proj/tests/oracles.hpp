#pragma once

// Shared independent oracles for the test suites. These deliberately avoid
// the library's FFT/multiplier code paths: direct DFT summation, composite
// Simpson quadrature, and central finite differences.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "hbo/grid.hpp"

namespace oracle {

// Direct O(size^2) evaluation of F(xi_k) = dx^d sum_j f(x_j) e^{-i x_j . xi_k}.
inline std::vector<std::complex<double>> brute_dft(const hbo::RealField& f) {
    const hbo::Grid& g = f.grid;
    std::vector<std::complex<double>> out(g.size);
    const double vol = hbo::cell_volume(g);
    for (std::size_t ik = 0; ik < g.size; ++ik) {
        auto xi = hbo::frequency(g, hbo::unravel(g, ik));
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t jx = 0; jx < g.size; ++jx) {
            auto x = hbo::point(g, hbo::unravel(g, jx));
            double phase = 0.0;
            for (int a = 0; a < g.d; ++a) phase += x[a] * xi[a];
            acc += f.v[jx] * std::complex<double>(std::cos(phase), -std::sin(phase));
        }
        out[ik] = acc * vol;
    }
    return out;
}

// Composite Simpson on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& fn, double a, double b, int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double acc = fn(a) + fn(b);
    for (int i = 1; i < panels; ++i) acc += fn(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Central finite-difference derivative of given order (1..4) with step h.
inline double central_fd(const std::function<double(double)>& fn, double x, int ord, double h) {
    switch (ord) {
        case 1:
            return (fn(x + h) - fn(x - h)) / (2.0 * h);
        case 2:
            return (fn(x + h) - 2.0 * fn(x) + fn(x - h)) / (h * h);
        case 3:
            return (fn(x + 2 * h) - 2.0 * fn(x + h) + 2.0 * fn(x - h) - fn(x - 2 * h)) /
                   (2.0 * h * h * h);
        case 4:
            return (fn(x + 2 * h) - 4.0 * fn(x + h) + 6.0 * fn(x) - 4.0 * fn(x - h) +
                    fn(x - 2 * h)) /
                   (h * h * h * h);
        default:
            return 0.0;
    }
}

inline std::complex<double> central_fd_complex(const std::function<std::complex<double>(double)>& fn,
                                               double x, int ord, double h) {
    auto re = [&](double t) { return fn(t).real(); };
    auto im = [&](double t) { return fn(t).imag(); };
    return {central_fd(re, x, ord, h), central_fd(im, x, ord, h)};
}

// Long-double central difference of one order along one axis.
inline long double central_fd_l(const std::function<long double(long double)>& fn, long double x,
                                int ord, long double h) {
    switch (ord) {
        case 1:
            return (fn(x + h) - fn(x - h)) / (2.0L * h);
        case 2:
            return (fn(x + h) - 2.0L * fn(x) + fn(x - h)) / (h * h);
        case 3:
            return (fn(x + 2 * h) - 2.0L * fn(x + h) + 2.0L * fn(x - h) - fn(x - 2 * h)) /
                   (2.0L * h * h * h);
        case 4:
            return (fn(x + 2 * h) - 4.0L * fn(x + h) + 6.0L * fn(x) - 4.0L * fn(x - h) +
                    fn(x - 2 * h)) /
                   (h * h * h * h);
        default:
            return 0.0L;
    }
}

// Richardson-extrapolated version: cancels the h^2 truncation term.
inline long double richardson_fd(const std::function<long double(long double)>& fn, long double x,
                                 int ord, long double h) {
    long double d1 = central_fd_l(fn, x, ord, h);
    long double d2 = central_fd_l(fn, x, ord, h / 2.0L);
    return (4.0L * d2 - d1) / 3.0L;
}

// Mixed partial d^beta of a scalar function of a 3-vector, one axis at a time,
// extended precision with Richardson extrapolation at each level.
inline long double mixed_partial(const std::function<long double(std::array<long double, 3>)>& fn,
                                 std::array<long double, 3> xi, std::array<int, 3> beta,
                                 long double h) {
    for (int a = 0; a < 3; ++a) {
        if (beta[a] > 0) {
            std::array<int, 3> rest = beta;
            rest[a] = 0;
            auto along = [&](long double t) {
                auto p = xi;
                p[a] = t;
                return mixed_partial(fn, p, rest, h);
            };
            return richardson_fd(along, xi[a], beta[a], h);
        }
    }
    return fn(xi);
}

}  // namespace oracle
