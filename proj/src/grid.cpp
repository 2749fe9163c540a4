#include "hbo/grid.hpp"

#include <stdexcept>
#include <string>

namespace hbo {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}

Grid make_grid(int d, int n, double L) {
    if (d < 1 || d > 3) throw std::invalid_argument("grid: d must be 1, 2, or 3");
    if (n < 8 || !power_of_two(n)) throw std::invalid_argument("grid: n must be a power of two >= 8");
    if (!(L > 0.0)) throw std::invalid_argument("grid: L must be positive");
    Grid g;
    g.d = d;
    g.n = n;
    g.L = L;
    g.dx = 2.0 * L / n;
    g.k0 = M_PI / L;
    g.size = 1;
    for (int a = 0; a < d; ++a) g.size *= static_cast<std::size_t>(n);
    return g;
}

RealField make_real_field(const Grid& g) {
    RealField f;
    f.grid = g;
    f.v.assign(g.size, 0.0);
    return f;
}

SpectralField make_spectral_field(const Grid& g) {
    SpectralField f;
    f.grid = g;
    f.c.assign(g.size, std::complex<double>(0.0, 0.0));
    return f;
}

int order(const MultiIndex& beta) { return beta[0] + beta[1] + beta[2]; }

void validate_multi_index(const MultiIndex& beta, const Grid& g, int max_order) {
    for (int a = 0; a < 3; ++a) {
        if (beta[a] < 0) throw std::invalid_argument("multi-index: negative entry");
        if (a >= g.d && beta[a] != 0)
            throw std::invalid_argument("multi-index: nonzero entry beyond grid dimension");
    }
    if (order(beta) > max_order)
        throw std::invalid_argument("multi-index: order exceeds supported maximum " +
                                    std::to_string(max_order));
}

double compensated_sum(const std::vector<double>& terms) {
    SumAccumulator acc;
    for (double x : terms) acc.add(x);
    return acc.value();
}

double cell_volume(const Grid& g) {
    double v = 1.0;
    for (int a = 0; a < g.d; ++a) v *= g.dx;
    return v;
}

double integrate(const RealField& f) {
    SumAccumulator acc;
    for (double x : f.v) acc.add(x);
    return acc.value() * cell_volume(f.grid);
}

double integrate_product(const RealField& f, const RealField& g) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("integrate_product: grid mismatch");
    SumAccumulator acc;
    for (std::size_t i = 0; i < f.v.size(); ++i) acc.add(f.v[i] * g.v[i]);
    return acc.value() * cell_volume(f.grid);
}

double l2_norm(const RealField& f) {
    SumAccumulator acc;
    for (double x : f.v) acc.add(x * x);
    return std::sqrt(acc.value() * cell_volume(f.grid));
}

double max_abs(const RealField& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace hbo
