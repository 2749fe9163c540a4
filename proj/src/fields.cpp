#include "hbo/fields.hpp"

#include <cmath>
#include <stdexcept>

#include "hbo/transform.hpp"

namespace hbo {

RealField gaussian(const Grid& g, const std::array<double, 3>& center, double width,
                   double amplitude) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian: width must be positive");
    RealField f = make_real_field(g);
    const double inv2w2 = 1.0 / (2.0 * width * width);
    for (std::size_t i = 0; i < g.size; ++i) {
        auto x = point(g, unravel(g, i));
        double r2 = 0.0;
        for (int a = 0; a < g.d; ++a) {
            double dxa = x[a] - center[a];
            r2 += dxa * dxa;
        }
        f.v[i] = amplitude * std::exp(-r2 * inv2w2);
    }
    return f;
}

RealField dx1_gaussian(const Grid& g, const std::array<double, 3>& center, double width,
                       double amplitude) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian: width must be positive");
    RealField f = make_real_field(g);
    const double inv2w2 = 1.0 / (2.0 * width * width);
    const double invw2 = 1.0 / (width * width);
    for (std::size_t i = 0; i < g.size; ++i) {
        auto x = point(g, unravel(g, i));
        double r2 = 0.0;
        for (int a = 0; a < g.d; ++a) {
            double dxa = x[a] - center[a];
            r2 += dxa * dxa;
        }
        f.v[i] = -amplitude * (x[0] - center[0]) * invw2 * std::exp(-r2 * inv2w2);
    }
    return f;
}

RealField compact_bump(const Grid& g, const std::array<double, 3>& center, double radius,
                       double amplitude) {
    if (!(radius > 0.0)) throw std::invalid_argument("compact_bump: radius must be positive");
    RealField f = make_real_field(g);
    for (std::size_t i = 0; i < g.size; ++i) {
        auto x = point(g, unravel(g, i));
        double r2 = 0.0;
        for (int a = 0; a < g.d; ++a) {
            double dxa = x[a] - center[a];
            r2 += dxa * dxa;
        }
        double s = r2 / (radius * radius);
        f.v[i] = s < 1.0 ? amplitude * std::exp(1.0 - 1.0 / (1.0 - s)) : 0.0;
    }
    return f;
}

std::uint64_t mix_seed(std::uint64_t seed) {
    // splitmix64 step; stable across platforms.
    seed += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = seed;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform_double(std::uint64_t& state, double lo, double hi) {
    state = mix_seed(state);
    double u = static_cast<double>(state >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

RealField random_band_limited(const Grid& g, int kmax, std::uint64_t seed, bool zero_mean) {
    if (kmax < 1 || kmax >= g.n / 2)
        throw std::invalid_argument("random_band_limited: kmax must be in [1, n/2)");
    SpectralField F = make_spectral_field(g);
    std::uint64_t state = mix_seed(seed ^ 0x5bd1e995ULL);
    // Walk lattice sites in storage order; assign each conjugate pair once.
    for (std::size_t i = 0; i < g.size; ++i) {
        auto iv = unravel(g, i);
        bool in_band = true;
        int first_nonzero = 0;
        bool all_zero = true;
        for (int a = 0; a < g.d; ++a) {
            int k = signed_mode(iv[a], g.n);
            if (std::abs(k) > kmax) in_band = false;
            if (k != 0 && all_zero) {
                all_zero = false;
                first_nonzero = k;
            }
        }
        if (!in_band) continue;
        if (all_zero) {
            if (!zero_mean) F.c[i] = {uniform_double(state, -1.0, 1.0), 0.0};
            continue;
        }
        // Fill only the half-lattice with leading signed mode > 0; mirror the rest.
        if (first_nonzero < 0) continue;
        double re = uniform_double(state, -1.0, 1.0);
        double im = uniform_double(state, -1.0, 1.0);
        F.c[i] = {re, im};
        std::array<int, 3> mirror{0, 0, 0};
        for (int a = 0; a < g.d; ++a) {
            int k = signed_mode(iv[a], g.n);
            int mk = -k;
            mirror[a] = mk >= 0 ? mk : mk + g.n;
        }
        F.c[ravel(g, mirror)] = {re, -im};
    }
    return inverse_transform(F);
}

}  // namespace hbo
