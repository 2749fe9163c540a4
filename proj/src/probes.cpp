#include "hbo/probes.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

#include "hbo/diagnostics.hpp"
#include "hbo/fields.hpp"
#include "hbo/laws.hpp"
#include "hbo/multipliers.hpp"
#include "hbo/transform.hpp"

namespace hbo {

namespace {

using CD = std::complex<double>;

// All multi-indices of total order m supported by a d-dimensional grid.
std::vector<MultiIndex> indices_of_order(int d, int m) {
    std::vector<MultiIndex> out;
    for (int b1 = m; b1 >= 0; --b1)
        for (int b2 = m - b1; b2 >= 0; --b2) {
            MultiIndex b{b1, b2, m - b1 - b2};
            bool fits = true;
            for (int a = d; a < 3; ++a) fits = fits && b[a] == 0;
            if (fits) out.push_back(b);
        }
    return out;
}

double multi_factorial(const MultiIndex& b) {
    static const double fact[5] = {1.0, 1.0, 2.0, 6.0, 24.0};
    return fact[b[0]] * fact[b[1]] * fact[b[2]];
}

MultiIndex axis_multi(int k) {
    MultiIndex e{0, 0, 0};
    e[k - 1] = 1;
    return e;
}

RealField pointwise_product(const RealField& a, const RealField& b) {
    RealField out = a;
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] *= b.v[i];
    return out;
}

RealField coordinate_product(const RealField& u, int axis) {
    RealField out = u;
    const Grid& g = u.grid;
    for (std::size_t i = 0; i < g.size; ++i)
        out.v[i] *= point(g, unravel(g, i))[axis];
    return out;
}

// The floor keeps a degenerate identity (both sides at roundoff, as every
// D-operator is in one dimension) from reading as a full-scale residual.
double rel_l2_residual(const RealField& a, const RealField& b, double floor_norm = 0.0) {
    RealField diff = a;
    for (std::size_t i = 0; i < diff.v.size(); ++i) diff.v[i] -= b.v[i];
    double den = std::max({l2_norm(a), l2_norm(b), floor_norm, 1e-300});
    return l2_norm(diff) / den;
}

}  // namespace

double symbol_derivative(int j, int k, const std::array<double, 3>& xi) {
    if (j < 1 || j > 4) throw std::invalid_argument("symbol derivative order must be 1..4");
    if (k < 1 || k > 3) throw std::invalid_argument("symbol derivative axis must be 1..3");
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    if (r2 == 0.0) throw std::invalid_argument("symbol derivative undefined at xi = 0");
    const double r = std::sqrt(r2);
    const double x1 = xi[0], xk = xi[k - 1];
    const double dk = (k == 1) ? 1.0 : 0.0;
    const double r3 = r * r2, r5 = r3 * r2, r7 = r5 * r2;
    switch (j) {
        case 1:
            return dk * r + x1 * xk / r;
        case 2:
            return 2.0 * dk * xk / r + x1 / r - x1 * xk * xk / r3;
        case 3:
            return 3.0 * dk / r - 3.0 * dk * xk * xk / r3 - 3.0 * x1 * xk / r3 +
                   3.0 * x1 * xk * xk * xk / r5;
        default:
            return -12.0 * dk * xk / r3 + 12.0 * dk * xk * xk * xk / r5 - 3.0 * x1 / r3 +
                   18.0 * x1 * xk * xk / r5 - 15.0 * x1 * xk * xk * xk * xk / r7;
    }
}

namespace {

struct PhaseTables {
    std::vector<CD> phase;                  // e^{i t xi_1 |xi|}
    std::array<std::vector<CD>, 5> symd;    // i t d^m (xi_1 |xi|), m = 1..4
};

PhaseTables make_phase_tables(const Grid& g, double t, int k, int jmax) {
    PhaseTables tb;
    tb.phase.resize(g.size);
    for (int m = 1; m <= jmax; ++m) tb.symd[m].assign(g.size, CD{0.0, 0.0});
    for (std::size_t i = 0; i < g.size; ++i) {
        auto xi = frequency(g, unravel(g, i));
        double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        tb.phase[i] = std::exp(CD{0.0, t * xi[0] * r});
        if (r > 0.0)
            for (int m = 1; m <= jmax; ++m)
                tb.symd[m][i] = CD{0.0, t * symbol_derivative(m, k, xi)};
    }
    return tb;
}

// chain[m] points at d^m_{xi_k} f-hat; assembles d^j of phase * chain[0].
std::vector<CD> f_assemble(int j, const std::vector<const std::vector<CD>*>& chain,
                           const PhaseTables& tb) {
    const std::size_t N = tb.phase.size();
    std::vector<CD> out(N);
    if (j == 0) {
        for (std::size_t i = 0; i < N; ++i) out[i] = tb.phase[i] * (*chain[0])[i];
        return out;
    }
    std::vector<const std::vector<CD>*> shifted(chain.begin() + 1, chain.end());
    std::vector<CD> prev_shift = f_assemble(j - 1, shifted, tb);
    // Leibniz coefficients: the top phase derivative plus binomially weighted
    // lower assemblies, each against one more derivative of the chain head.
    const double binom[5][5] = {{0, 0, 0, 0, 0},
                                {1, 0, 0, 0, 0},
                                {1, 1, 0, 0, 0},
                                {1, 2, 1, 0, 0},
                                {1, 3, 3, 1, 0}};
    for (std::size_t i = 0; i < N; ++i)
        out[i] = tb.symd[j][i] * tb.phase[i] * (*chain[0])[i] + prev_shift[i];
    for (int m = 1; m < j; ++m) {
        std::vector<CD> Fm = f_assemble(m, chain, tb);
        for (std::size_t i = 0; i < N; ++i)
            out[i] += binom[j][m] * tb.symd[j - m][i] * Fm[i];
    }
    return out;
}

}  // namespace

SpectralField f_operator(int j, int k, double t,
                         const std::vector<SpectralField>& fk_derivs) {
    if (j < 1 || j > 4) throw std::invalid_argument("frequency-derivative order must be 1..4");
    if (fk_derivs.empty())
        throw std::invalid_argument("frequency-derivative chain is empty");
    const Grid& g = fk_derivs.front().grid;
    if (k < 1 || k > g.d) throw std::invalid_argument("frequency-derivative axis out of range");
    if (fk_derivs.size() < static_cast<std::size_t>(j) + 1)
        throw std::invalid_argument("frequency-derivative chain is missing entries: need orders 0..j");
    for (const auto& F : fk_derivs)
        if (!(F.grid == g)) throw std::invalid_argument("frequency-derivative chain grids differ");

    PhaseTables tb = make_phase_tables(g, t, k, j);
    std::vector<const std::vector<CD>*> chain;
    for (const auto& F : fk_derivs) chain.push_back(&F.c);
    SpectralField out = make_spectral_field(g);
    out.c = f_assemble(j, chain, tb);
    return out;
}

SpectralField freq_derivative(const RealField& u, const MultiIndex& beta) {
    const Grid& g = u.grid;
    validate_multi_index(beta, g, 4);
    RealField xb = u;
    for (int a = 0; a < g.d; ++a)
        for (int rep = 0; rep < beta[a]; ++rep) xb = coordinate_product(xb, a);
    if (order(beta) > 0) {
        double peak = max_abs(xb);
        if (peak > 0.0 && boundary_max(xb) > 1e-8 * peak)
            std::fprintf(stderr,
                         "boundary decay guard: frequency derivative sees %.3g of its peak at the box seam\n",
                         boundary_max(xb) / peak);
    }
    SpectralField F = forward_transform(xb);
    static const CD minus_i_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    const CD scale = minus_i_pow[order(beta) % 4];
    for (auto& c : F.c) c *= scale;
    return F;
}

ConeProbeReport cone_probe(const RealField& ut, double t, const ConeParams& params) {
    const Grid& g = ut.grid;
    if (g.d < 2)
        throw std::invalid_argument("insufficient cone samples: the cone is empty in one dimension");
    if (!(params.ratio > 0.0))
        throw std::invalid_argument("cone opening ratio must be positive");
    const double cap =
        params.radius_cap > 0.0 ? params.radius_cap : g.k0 * (g.n / 2) / 16.0;

    SpectralField G = freq_derivative(ut, {3, 0, 0});
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < g.size; ++i) {
        auto xi = frequency(g, unravel(g, i));
        double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if (r2 == 0.0) continue;
        double r = std::sqrt(r2);
        if (r > cap) continue;
        double perp = std::sqrt(std::max(0.0, r2 - xi[0] * xi[0]));
        if (r > params.ratio * perp) continue;
        double mag = std::abs(G.c[i]);
        if (!(mag > 0.0)) continue;
        xs.push_back(std::log(r));
        ys.push_back(std::log(mag));
    }
    if (xs.size() < 10)
        throw std::invalid_argument("insufficient cone samples: need at least 10 lattice points");

    LinearFit fit = linear_fit(xs, ys);
    ConeProbeReport rep;
    rep.t = t;
    rep.fitted_exponent = fit.slope;
    rep.fit_residual = fit.residual;
    rep.sample_count = xs.size();
    rep.ratio = params.ratio;
    rep.radius_cap = cap;
    return rep;
}

CommutatorReport commutator_probe(const RealField& a, const RealField& f,
                                  const MultiIndex& alpha) {
    const Grid& g = f.grid;
    if (!(a.grid == g))
        throw std::invalid_argument("commutator probe fields live on different grids");
    validate_multi_index(alpha, g, 3);
    const int m = order(alpha);
    if (m < 1) throw std::invalid_argument("commutator probe needs 1 <= |alpha| <= 3");
    if (m == 3) {
        int active = (alpha[0] ? 1 : 0) + (alpha[1] ? 1 : 0) + (alpha[2] ? 1 : 0);
        if (active != 1)
            throw std::invalid_argument("commutator probe at |alpha| = 3 supports pure-axis alpha only");
    }
    require_zero_mean(f, "commutator probe datum");

    RealField daf = derivative(f, alpha);
    RealField lhs = riesz(pointwise_product(a, daf), 1);
    RealField r1daf = riesz(daf, 1);
    for (std::size_t i = 0; i < g.size; ++i) lhs.v[i] -= a.v[i] * r1daf.v[i];
    for (int bo = 1; bo < m; ++bo)
        for (const MultiIndex& beta : indices_of_order(g.d, bo)) {
            RealField da = derivative(a, beta);
            RealField corr = d_riesz_beta(daf, 1, beta);
            const double inv_fact = 1.0 / multi_factorial(beta);
            for (std::size_t i = 0; i < g.size; ++i)
                lhs.v[i] -= inv_fact * da.v[i] * corr.v[i];
        }

    CommutatorReport rep;
    rep.alpha = alpha;
    rep.grid = g;
    rep.lhs_norm = l2_norm(lhs);
    const double fnorm = l2_norm(f);
    double factor = 0.0;
    for (const MultiIndex& beta : indices_of_order(g.d, m))
        factor += max_abs(derivative(a, beta));
    rep.rhs_factor = factor * fnorm;
    if (rep.rhs_factor <= 1e-10 * max_abs(a) * fnorm) {
        rep.degenerate = true;
        rep.ratio = 0.0;
    } else {
        rep.ratio = rep.lhs_norm / rep.rhs_factor;
    }
    return rep;
}

RealField stein_derivative(const RealField& f, double b) {
    const Grid& g = f.grid;
    if (!(b > 0.0 && b < 1.0))
        throw std::invalid_argument("square-function order must lie in (0,1)");
    if (g.d > 2 || g.size > 16384)
        throw std::invalid_argument("grid too large for the quadratic-cost square function");

    double grad_max = 0.0;
    {
        std::vector<RealField> grads;
        for (int a = 0; a < g.d; ++a) grads.push_back(derivative(f, axis_multi(a + 1)));
        for (std::size_t i = 0; i < g.size; ++i) {
            double s = 0.0;
            for (int a = 0; a < g.d; ++a) s += grads[a].v[i] * grads[a].v[i];
            grad_max = std::max(grad_max, std::sqrt(s));
        }
    }

    const double half_exp = 0.5 * (g.d + 2.0 * b);
    const double dV = cell_volume(g);
    // Self-cell: |f(x)-f(y)| <= |grad f|_inf |x-y| over the inscribed ball.
    const double surface = (g.d == 1) ? 2.0 : 2.0 * M_PI;
    const double diag = grad_max * grad_max * surface *
                        std::pow(0.5 * g.dx, 2.0 - 2.0 * b) / (2.0 - 2.0 * b);

    RealField out = make_real_field(g);
    const int n = g.n;
    if (g.d == 1) {
        std::vector<double> kern(n, 0.0);
        for (int o = 1; o < n; ++o)
            kern[o] = std::pow(static_cast<double>(o) * g.dx * static_cast<double>(o) * g.dx,
                               -half_exp);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int jx = 0; jx < n; ++jx) {
                int o = std::abs(i - jx);
                if (o == 0) continue;
                double dfv = f.v[i] - f.v[jx];
                acc += dfv * dfv * kern[o];
            }
            out.v[i] = std::sqrt(acc * dV + diag);
        }
        return out;
    }

    std::vector<double> kern(static_cast<std::size_t>(n) * n, 0.0);
    for (int o1 = 0; o1 < n; ++o1)
        for (int o2 = 0; o2 < n; ++o2) {
            if (o1 == 0 && o2 == 0) continue;
            double r2 = (o1 * g.dx) * (o1 * g.dx) + (o2 * g.dx) * (o2 * g.dx);
            kern[static_cast<std::size_t>(o1) * n + o2] = std::pow(r2, -half_exp);
        }
    for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2) {
            const double fi = f.v[static_cast<std::size_t>(i1) * n + i2];
            double acc = 0.0;
            for (int j1 = 0; j1 < n; ++j1) {
                const std::size_t krow = static_cast<std::size_t>(std::abs(i1 - j1)) * n;
                const std::size_t frow = static_cast<std::size_t>(j1) * n;
                for (int j2 = 0; j2 < n; ++j2) {
                    if (i1 == j1 && i2 == j2) continue;
                    double dfv = fi - f.v[frow + j2];
                    acc += dfv * dfv * kern[krow + std::abs(i2 - j2)];
                }
            }
            out.v[static_cast<std::size_t>(i1) * n + i2] = std::sqrt(acc * dV + diag);
        }
    return out;
}

IdentitySuiteReport identity_suite(const Grid& g) {
    // Datum: Gaussian envelope carrying the factor (xi_1 w)^Q, assembled
    // directly in frequency space so no transform roundoff is amplified by
    // the weight. Q dead moments make the Riesz kernel tails decay as
    // |x|^{-(d+Q)}, but the tail constant grows factorially in Q, so the
    // best Q scales with the separation L/w; both are chosen from the
    // resolution budget xi_max * L. Nyquist columns are cleared so every
    // multiplier route agrees on the datum exactly.
    const double ximax = g.k0 * (g.n / 2);
    int Q = 2;
    double y_pick = std::sqrt(2.0);
    {
        double best = -1e300;
        for (int q = 2; q <= 40; q += 2) {
            // smallest y with (y^q e^{-y^2/2}) / (q^{q/2} e^{-q/2}) <= 1e-16
            double lo = std::sqrt(double(q)), hi = 40.0;
            double drop = 0.5 * q * (std::log(double(q)) - 1.0) - 16.0 * std::log(10.0);
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                (q * std::log(mid) - 0.5 * mid * mid > drop ? lo : hi) = mid;
            }
            double sep = ximax * g.L / hi;
            if (sep <= q) continue;
            double score = q * (std::log(sep) - std::log(double(q)) + 1.0);
            if (score > best) {
                best = score;
                Q = q;
                y_pick = hi;
            }
        }
    }
    const double w = y_pick / ximax;
    RealField f;
    {
        SpectralField fh = make_spectral_field(g);
        const double amp = std::pow(2.0 * M_PI, 0.5 * g.d) * std::pow(w, g.d);
        for (std::size_t i = 0; i < g.size; ++i) {
            auto iv = unravel(g, i);
            bool nyquist = false;
            for (int a = 0; a < g.d; ++a) nyquist = nyquist || iv[a] == g.n / 2;
            if (nyquist) continue;
            auto xi = frequency(g, iv);
            double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
            fh.c[i] = amp * std::pow(xi[0] * w, Q) * std::exp(-0.5 * r2 * w * w);
        }
        f = inverse_transform(fh);
    }
    const double fnorm = l2_norm(f);

    IdentitySuiteReport rep;
    auto record = [&](std::string name, double residual, double tol) {
        rep.checks.push_back({std::move(name), residual, tol, residual <= tol});
    };
    // Coordinate products pick up a lattice mean at the seam-junk level; the
    // D operators kill the zero mode anyway, so projecting it out changes
    // nothing but keeps their zero-mean guard quiet on coarse grids.
    auto demean = [](RealField u) {
        double mu = 0.0;
        for (double v : u.v) mu += v;
        mu /= double(u.v.size());
        for (double& v : u.v) v -= mu;
        return u;
    };

    RealField inv_grad = fractional(f, -1.0);
    for (int k = 1; k <= g.d; ++k) {
        RealField lhs = d_riesz_beta(f, 1, axis_multi(k));
        RealField rhs = riesz(riesz(inv_grad, k), 1);
        for (std::size_t i = 0; i < g.size; ++i) {
            rhs.v[i] = -rhs.v[i];
            if (k == 1) rhs.v[i] -= inv_grad.v[i];
        }
        record("riesz decomposition, axis " + std::to_string(k),
               rel_l2_residual(lhs, rhs, fnorm), 1e-12);
    }

    for (int k = 1; k <= g.d; ++k)
        for (int j = 1; j <= g.d; ++j) {
            RealField rj = riesz(f, j);
            RealField rhs = riesz(riesz(rj, k), 1);
            if (k == 1)
                for (std::size_t i = 0; i < g.size; ++i) rhs.v[i] += rj.v[i];

            RealField lhs = d_riesz_beta(derivative(f, axis_multi(j)), 1, axis_multi(k));
            record("derivative form, k=" + std::to_string(k) + " j=" + std::to_string(j),
                   rel_l2_residual(lhs, rhs, fnorm), 1e-12);

            RealField djf = derivative(f, axis_multi(j));
            RealField comm = riesz(coordinate_product(djf, k - 1), 1);
            RealField rdjf = riesz(djf, 1);
            for (std::size_t i = 0; i < g.size; ++i)
                comm.v[i] -= point(g, unravel(g, i))[k - 1] * rdjf.v[i];
            record("coordinate commutator, k=" + std::to_string(k) + " j=" + std::to_string(j),
                   rel_l2_residual(comm, rhs, fnorm), 1e-8);
        }

    RealField r1f = riesz(f, 1);
    for (int k = 1; k <= g.d; ++k) {
        RealField xkf = coordinate_product(f, k - 1);
        RealField lhs = riesz(xkf, 1);
        for (std::size_t i = 0; i < g.size; ++i)
            lhs.v[i] -= point(g, unravel(g, i))[k - 1] * r1f.v[i];
        RealField rhs = d_riesz_beta(f, 1, axis_multi(k));
        record("moment commutator, first order, axis " + std::to_string(k),
               rel_l2_residual(lhs, rhs, fnorm), 1e-8);

        RealField x2f = coordinate_product(xkf, k - 1);
        RealField lhs2 = riesz(x2f, 1);
        for (std::size_t i = 0; i < g.size; ++i) {
            double xk = point(g, unravel(g, i))[k - 1];
            lhs2.v[i] -= xk * xk * r1f.v[i];
        }
        MultiIndex two{0, 0, 0};
        two[k - 1] = 2;
        RealField term1 = d_riesz_beta(demean(xkf), 1, axis_multi(k));
        RealField term2 = d_riesz_beta(f, 1, two);
        RealField rhs2 = make_real_field(g);
        for (std::size_t i = 0; i < g.size; ++i)
            rhs2.v[i] = 2.0 * term1.v[i] - term2.v[i];
        record("moment commutator, second order, axis " + std::to_string(k),
               rel_l2_residual(lhs2, rhs2, fnorm), 1e-6);
    }

    rep.all_pass = true;
    for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
    return rep;
}

}  // namespace hbo
