#pragma once

// Periodic grid on [-L, L)^d approximating R^d, d in {1,2,3}.
// Sample points x_i = -L + i*dx with dx = 2L/n; frequency lattice
// xi_k = (pi/L)*k with integer k in [-n/2, n/2) per axis.
// Storage is row-major over axes, FFT (wrap-around) ordering in frequency.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace hbo {

struct Grid {
    int d = 0;
    int n = 0;
    double L = 0.0;
    double dx = 0.0;        // 2L/n
    double k0 = 0.0;        // pi/L, frequency lattice spacing
    std::size_t size = 0;   // n^d

    bool operator==(const Grid& o) const {
        return d == o.d && n == o.n && L == o.L;
    }
};

// Validates d in {1,2,3}, n a power of two >= 8, L > 0.
Grid make_grid(int d, int n, double L);

struct RealField {
    Grid grid;
    std::vector<double> v;
};

struct SpectralField {
    Grid grid;
    std::vector<std::complex<double>> c;
};

RealField make_real_field(const Grid& g);
SpectralField make_spectral_field(const Grid& g);

// Multi-index over axes; entries beyond grid.d must be zero.
using MultiIndex = std::array<int, 3>;

int order(const MultiIndex& beta);
// Throws unless all entries >= 0 and entries for axes >= d vanish.
void validate_multi_index(const MultiIndex& beta, const Grid& g, int max_order);

inline int signed_mode(int i, int n) { return i < n / 2 ? i : i - n; }

inline std::array<int, 3> unravel(const Grid& g, std::size_t idx) {
    std::array<int, 3> iv{0, 0, 0};
    for (int a = g.d - 1; a >= 0; --a) {
        iv[a] = static_cast<int>(idx % g.n);
        idx /= g.n;
    }
    return iv;
}

inline std::size_t ravel(const Grid& g, const std::array<int, 3>& iv) {
    std::size_t idx = 0;
    for (int a = 0; a < g.d; ++a) idx = idx * g.n + static_cast<std::size_t>(iv[a]);
    return idx;
}

inline std::array<double, 3> point(const Grid& g, const std::array<int, 3>& iv) {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < g.d; ++a) x[a] = -g.L + g.dx * iv[a];
    return x;
}

inline std::array<double, 3> frequency(const Grid& g, const std::array<int, 3>& iv) {
    std::array<double, 3> xi{0.0, 0.0, 0.0};
    for (int a = 0; a < g.d; ++a) xi[a] = g.k0 * signed_mode(iv[a], g.n);
    return xi;
}

// True when the mode is its own conjugate partner (every component 0 or -n/2).
inline bool self_paired(const Grid& g, const std::array<int, 3>& iv) {
    for (int a = 0; a < g.d; ++a) {
        if (iv[a] != 0 && iv[a] != g.n / 2) return false;
    }
    return true;
}

// Compensated (Neumaier) summation; quadratures route through this so that
// conservation diagnostics are not polluted by naive-sum roundoff.
double compensated_sum(const std::vector<double>& terms);

class SumAccumulator {
  public:
    void add(double x) {
        double t = s_ + x;
        if (std::abs(s_) >= std::abs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// Box quadrature: sum of samples times dx^d.
double integrate(const RealField& f);
// Quadrature of a pointwise transform of one or two fields.
double integrate_product(const RealField& f, const RealField& g);

double l2_norm(const RealField& f);
double max_abs(const RealField& f);
double cell_volume(const Grid& g);

}  // namespace hbo
