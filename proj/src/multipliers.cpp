#include "hbo/multipliers.hpp"

#include <cmath>
#include <stdexcept>

#include "hbo/transform.hpp"

namespace hbo {

namespace {

double norm3(const std::array<double, 3>& xi) {
    return std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
}

void check_axis(int l, const Grid& g) {
    if (l < 1 || l > g.d) throw std::invalid_argument("axis index out of range for grid dimension");
}

// Apply with the realness fix: self-paired modes take Re(symbol).
SpectralField apply_symmetrized(const SpectralField& F, const Multiplier& m) {
    const Grid& g = F.grid;
    SpectralField out = make_spectral_field(g);
    for (std::size_t i = 0; i < g.size; ++i) {
        std::complex<double> val;
        if (i == 0) {  // all-zero mode is storage index 0
            val = m.zero_mode;
        } else {
            auto iv = unravel(g, i);
            val = m.symbol(frequency(g, iv));
            if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
                throw std::runtime_error("non-finite symbol value at lattice point");
            if (self_paired(g, iv)) val = std::complex<double>(val.real(), 0.0);
        }
        out.c[i] = val * F.c[i];
    }
    return out;
}

}  // namespace

std::vector<std::complex<double>> multiplier_table(const Grid& g, const Multiplier& m) {
    std::vector<std::complex<double>> table(g.size);
    table[0] = m.zero_mode;
    for (std::size_t i = 1; i < g.size; ++i) {
        auto iv = unravel(g, i);
        auto val = m.symbol(frequency(g, iv));
        if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
            throw std::runtime_error("non-finite symbol value at lattice point");
        if (self_paired(g, iv)) val = std::complex<double>(val.real(), 0.0);
        table[i] = val;
    }
    return table;
}

SpectralField apply_multiplier(const SpectralField& F, const Multiplier& m) {
    const Grid& g = F.grid;
    SpectralField out = make_spectral_field(g);
    for (std::size_t i = 0; i < g.size; ++i) {
        std::complex<double> val;
        if (i == 0) {
            val = m.zero_mode;
        } else {
            val = m.symbol(frequency(g, unravel(g, i)));
            if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
                throw std::runtime_error("non-finite symbol value at lattice point");
        }
        out.c[i] = val * F.c[i];
    }
    return out;
}

RealField apply_to_real(const RealField& f, const Multiplier& m) {
    return inverse_transform(apply_symmetrized(forward_transform(f), m));
}

void require_zero_mean(const RealField& f, const char* what, double tol_ratio) {
    SumAccumulator s, s2;
    for (double x : f.v) {
        s.add(x);
        s2.add(x * x);
    }
    double mean = s.value() / static_cast<double>(f.v.size());
    double rms = std::sqrt(s2.value() / static_cast<double>(f.v.size()));
    if (rms == 0.0) return;
    if (std::abs(mean) > tol_ratio * rms) throw std::invalid_argument(std::string(what));
}

static Multiplier riesz_multiplier(int l) {
    Multiplier m;
    m.zero_mode = {0.0, 0.0};
    m.symbol = [l](const std::array<double, 3>& xi) {
        double r = norm3(xi);
        return std::complex<double>(0.0, -xi[l - 1] / r);
    };
    return m;
}

RealField riesz(const RealField& f, int l) {
    check_axis(l, f.grid);
    return apply_to_real(f, riesz_multiplier(l));
}

SpectralField riesz_spectral(const SpectralField& F, int l) {
    check_axis(l, F.grid);
    return apply_multiplier(F, riesz_multiplier(l));
}

RealField fractional(const RealField& f, double s) {
    if (s < 0.0) require_zero_mean(f, "negative-order operator on non-zero-mean field");
    Multiplier m;
    m.zero_mode = {0.0, 0.0};
    m.symbol = [s](const std::array<double, 3>& xi) {
        return std::complex<double>(std::pow(norm3(xi), s), 0.0);
    };
    return apply_to_real(f, m);
}

RealField bessel(const RealField& f, double s) {
    Multiplier m;
    m.zero_mode = {1.0, 0.0};
    m.symbol = [s](const std::array<double, 3>& xi) {
        double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        return std::complex<double>(std::pow(1.0 + r2, 0.5 * s), 0.0);
    };
    return apply_to_real(f, m);
}

Multiplier semigroup_multiplier(double t) {
    Multiplier m;
    m.zero_mode = {1.0, 0.0};
    m.symbol = [t](const std::array<double, 3>& xi) {
        double phase = t * xi[0] * norm3(xi);
        return std::complex<double>(std::cos(phase), std::sin(phase));
    };
    return m;
}

RealField semigroup(const RealField& f, double t) {
    return apply_to_real(f, semigroup_multiplier(t));
}

std::complex<double> d_riesz_beta_symbol(int l, const MultiIndex& beta,
                                         const std::array<double, 3>& xi) {
    // m_beta = i^{-|beta|} d^beta_xi(-i xi_l/|xi|) = i^{-|beta|} (-i) d^beta g,
    // with g = xi_l/|xi|. The i-powers below are the resulting real/imag factors.
    const int b = order(beta);
    const double r = norm3(xi);
    const double xl = xi[l - 1];
    auto kron = [&](int a) { return (a == l - 1) ? 1.0 : 0.0; };

    if (b == 1) {
        int a = beta[0] ? 0 : (beta[1] ? 1 : 2);
        double g1 = kron(a) / r - xl * xi[a] / (r * r * r);
        return {-g1, 0.0};  // i^{-1}(-i) = -1
    }
    if (b == 2) {
        // beta = e_a + e_b (a == b allowed)
        int a = -1, bb = -1;
        for (int ax = 0; ax < 3; ++ax) {
            for (int rep = 0; rep < beta[ax]; ++rep) {
                if (a < 0)
                    a = ax;
                else
                    bb = ax;
            }
        }
        double r3 = r * r * r, r5 = r3 * r * r;
        double g2 = -(kron(a) * xi[bb] + kron(bb) * xi[a] + (a == bb ? xl : 0.0)) / r3 +
                    3.0 * xl * xi[a] * xi[bb] / r5;
        return {0.0, g2};  // i^{-2}(-i) = i
    }
    if (b == 3) {
        int a = beta[0] == 3 ? 0 : (beta[1] == 3 ? 1 : (beta[2] == 3 ? 2 : -1));
        if (a < 0) throw std::invalid_argument("d_riesz_beta: |beta| = 3 supports pure-axis indices only");
        double r3 = r * r * r, r5 = r3 * r * r, r7 = r5 * r * r;
        double xa = xi[a];
        double g3 = -3.0 * kron(a) / r3 + 9.0 * kron(a) * xa * xa / r5 + 9.0 * xl * xa / r5 -
                    15.0 * xl * xa * xa * xa / r7;
        return {g3, 0.0};  // i^{-3}(-i) = 1
    }
    throw std::invalid_argument("d_riesz_beta: |beta| must be 1..3");
}

RealField d_riesz_beta(const RealField& f, int l, const MultiIndex& beta) {
    check_axis(l, f.grid);
    validate_multi_index(beta, f.grid, 3);
    int b = order(beta);
    if (b < 1) throw std::invalid_argument("d_riesz_beta: |beta| must be >= 1");
    if (b == 3) {
        bool pure = beta[0] == 3 || beta[1] == 3 || beta[2] == 3;
        if (!pure)
            throw std::invalid_argument("d_riesz_beta: |beta| = 3 supports pure-axis indices only");
    }
    require_zero_mean(f, "negative-order operator on non-zero-mean field");
    Multiplier m;
    m.zero_mode = {0.0, 0.0};
    m.symbol = [l, beta](const std::array<double, 3>& xi) {
        return d_riesz_beta_symbol(l, beta, xi);
    };
    return apply_to_real(f, m);
}

static Multiplier derivative_multiplier(const MultiIndex& alpha) {
    Multiplier m;
    m.zero_mode = {order(alpha) == 0 ? 1.0 : 0.0, 0.0};
    m.symbol = [alpha](const std::array<double, 3>& xi) {
        std::complex<double> v(1.0, 0.0);
        const std::complex<double> I(0.0, 1.0);
        for (int a = 0; a < 3; ++a)
            for (int rep = 0; rep < alpha[a]; ++rep) v *= I * xi[a];
        return v;
    };
    return m;
}

RealField derivative(const RealField& f, const MultiIndex& alpha) {
    validate_multi_index(alpha, f.grid, 8);
    return apply_to_real(f, derivative_multiplier(alpha));
}

SpectralField derivative_spectral(const SpectralField& F, const MultiIndex& alpha) {
    validate_multi_index(alpha, F.grid, 8);
    return apply_multiplier(F, derivative_multiplier(alpha));
}

}  // namespace hbo
