#include "hbo/solver.hpp"

#include "hbo/multipliers.hpp"
#include "hbo/transform.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace hbo {

namespace {

struct StepTables {
    std::vector<std::complex<double>> E;    // semigroup over dt
    std::vector<std::complex<double>> E2;   // semigroup over dt/2
    std::vector<std::complex<double>> nl;   // -(i/2) xi_1 restricted to the dealias band
};

std::vector<std::complex<double>> nl_table(const Grid& g, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("solver: dealias fraction must lie in (0, 1]");
    std::vector<std::complex<double>> nl(g.size, {0.0, 0.0});
    const double cut = fraction * (g.n / 2);
    for (std::size_t i = 1; i < g.size; ++i) {
        auto iv = unravel(g, i);
        bool keep = true;
        for (int a = 0; a < g.d; ++a)
            if (std::abs(signed_mode(iv[a], g.n)) > cut) keep = false;
        if (!keep || self_paired(g, iv)) continue;
        nl[i] = std::complex<double>(0.0, -0.5 * frequency(g, iv)[0]);
    }
    return nl;
}

StepTables make_tables(const Grid& g, double dt, double fraction) {
    StepTables tb;
    tb.E = multiplier_table(g, semigroup_multiplier(dt));
    tb.E2 = multiplier_table(g, semigroup_multiplier(0.5 * dt));
    tb.nl = nl_table(g, fraction);
    return tb;
}

// k = table.nl applied to the transform of u^2 (u from u_hat).
std::vector<std::complex<double>> nonlinear_rhs(const Grid& g,
                                                const std::vector<std::complex<double>>& u_hat,
                                                const StepTables& tb) {
    SpectralField uh = make_spectral_field(g);
    uh.c = u_hat;
    RealField u = inverse_transform(uh);
    for (std::size_t i = 0; i < g.size; ++i) u.v[i] *= u.v[i];
    SpectralField wh = forward_transform(u);
    for (std::size_t i = 0; i < g.size; ++i) wh.c[i] *= tb.nl[i];
    return std::move(wh.c);
}

void step_spectral(const Grid& g, std::vector<std::complex<double>>& u_hat, double dt,
                   const StepTables& tb, bool disable_nonlinearity) {
    const std::size_t n = g.size;
    if (disable_nonlinearity) {
        for (std::size_t i = 0; i < n; ++i) u_hat[i] *= tb.E[i];
        return;
    }
    std::vector<std::complex<double>> k1 = nonlinear_rhs(g, u_hat, tb);
    std::vector<std::complex<double>> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = tb.E2[i] * (u_hat[i] + 0.5 * dt * k1[i]);
    std::vector<std::complex<double>> k2 = nonlinear_rhs(g, w, tb);
    for (std::size_t i = 0; i < n; ++i) w[i] = tb.E2[i] * u_hat[i] + 0.5 * dt * k2[i];
    std::vector<std::complex<double>> k3 = nonlinear_rhs(g, w, tb);
    for (std::size_t i = 0; i < n; ++i) w[i] = tb.E[i] * u_hat[i] + dt * tb.E2[i] * k3[i];
    std::vector<std::complex<double>> k4 = nonlinear_rhs(g, w, tb);
    for (std::size_t i = 0; i < n; ++i)
        u_hat[i] = tb.E[i] * u_hat[i] +
                   (dt / 6.0) * (tb.E[i] * k1[i] + 2.0 * tb.E2[i] * (k2[i] + k3[i]) + k4[i]);
}

bool all_finite(const std::vector<std::complex<double>>& v) {
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

void check_config(const SolverConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
    if (!(cfg.T >= 0.0)) throw std::invalid_argument("solver: T must be nonnegative");
    if (!(cfg.dealias_fraction > 0.0) || cfg.dealias_fraction > 1.0)
        throw std::invalid_argument("solver: dealias fraction must lie in (0, 1]");
}

}  // namespace

RealField nonlinearity(const RealField& u, double dealias_fraction) {
    const Grid& g = u.grid;
    StepTables tb;
    tb.nl = nl_table(g, dealias_fraction);
    SpectralField uh = forward_transform(u);
    std::vector<std::complex<double>> k = nonlinear_rhs(g, uh.c, tb);
    SpectralField kh = make_spectral_field(g);
    kh.c = std::move(k);
    return inverse_transform(kh);
}

RealField step_ifrk4(const RealField& u, double dt, const SolverConfig& cfg) {
    if (!(dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
    const Grid& g = u.grid;
    StepTables tb = make_tables(g, dt, cfg.dealias_fraction);
    SpectralField uh = forward_transform(u);
    step_spectral(g, uh.c, dt, tb, cfg.disable_nonlinearity);
    if (!all_finite(uh.c))
        throw std::runtime_error("numerical blow-up at t = " + std::to_string(dt));
    return inverse_transform(uh);
}

Trajectory evolve(const RealField& u0, const SolverConfig& cfg) {
    check_config(cfg);
    const Grid& g = u0.grid;

    const double peak = max_abs(u0);
    if (peak > 0.0 && boundary_max(u0) > 1e-8 * peak)
        std::fprintf(stderr,
                     "boundary decay guard: initial datum carries %.3g of its peak at the box seam\n",
                     boundary_max(u0) / peak);

    long steps = static_cast<long>(std::floor(cfg.T / cfg.dt + 1e-9));
    double rem = cfg.T - static_cast<double>(steps) * cfg.dt;
    if (rem <= 1e-12 * std::max(1.0, cfg.T)) rem = 0.0;
    const long total = steps + (rem > 0.0 ? 1 : 0);
    const long snap = cfg.snapshot_every > 0
                          ? cfg.snapshot_every
                          : std::max<long>(1, static_cast<long>(std::ceil(total / 200.0)));

    StepTables tb = make_tables(g, cfg.dt, cfg.dealias_fraction);

    Trajectory traj;
    auto push = [&](double t, const RealField& u) {
        traj.times.push_back(t);
        traj.states.push_back(u);
        traj.records.push_back(diagnose(u, t, cfg.weight_exponents));
    };
    push(0.0, u0);

    SpectralField uh = forward_transform(u0);
    for (long s = 1; s <= steps; ++s) {
        step_spectral(g, uh.c, cfg.dt, tb, cfg.disable_nonlinearity);
        const double t = static_cast<double>(s) * cfg.dt;
        if (!all_finite(uh.c)) {
            char msg[64];
            std::snprintf(msg, sizeof msg, "numerical blow-up at t = %.6g", t);
            throw std::runtime_error(msg);
        }
        if (s % snap == 0 || (s == steps && rem == 0.0)) push(t, inverse_transform(uh));
    }
    if (rem > 0.0) {
        StepTables last = make_tables(g, rem, cfg.dealias_fraction);
        step_spectral(g, uh.c, rem, last, cfg.disable_nonlinearity);
        if (!all_finite(uh.c)) {
            char msg[64];
            std::snprintf(msg, sizeof msg, "numerical blow-up at t = %.6g", cfg.T);
            throw std::runtime_error(msg);
        }
        push(cfg.T, inverse_transform(uh));
    }
    return traj;
}

RealField bo1d_soliton(double c, double x0, const Grid& g) {
    if (g.d != 1) throw std::invalid_argument("soliton datum requires d = 1");
    if (!(c > 0.0)) throw std::invalid_argument("soliton datum requires c > 0");
    const double kappa = M_PI / g.L;
    const double a = kappa / c;
    const double sh = std::sinh(a), ch = std::cosh(a);
    RealField u = make_real_field(g);
    for (std::size_t i = 0; i < g.size; ++i) {
        double x = point(g, unravel(g, i))[0];
        u.v[i] = 2.0 * kappa * sh / (ch - std::cos(kappa * (x - x0)));
    }
    const double peak = max_abs(u);
    if (boundary_max(u) > 1e-8 * peak)
        std::fprintf(stderr,
                     "boundary decay guard: soliton tail is %.3g of its peak at the box seam "
                     "(c = %g, L = %g)\n",
                     boundary_max(u) / peak, c, g.L);
    return u;
}

double bo1d_periodic_speed(double c, double L) {
    const double kappa = M_PI / L;
    return kappa / std::tanh(kappa / c);
}

ShapeMatch recenter_match(const RealField& u, const RealField& reference) {
    const Grid& g = u.grid;
    if (g.d != 1) throw std::invalid_argument("recentering is implemented for d = 1");
    if (!(g == reference.grid))
        throw std::invalid_argument("recentering: fields live on different grids");

    SpectralField uh = forward_transform(u);
    SpectralField rh = forward_transform(reference);
    const int n = g.n;
    const double k0 = g.k0;

    // Correlation C(delta) = sum_k Re(u_hat conj(r_hat) e^{i xi_k delta});
    // maximizing it minimizes ||u - reference(. - delta)||_2.
    auto corr = [&](double delta) {
        SumAccumulator acc;
        for (int i = 0; i < n; ++i) {
            double xi = k0 * signed_mode(i, n);
            std::complex<double> rot(std::cos(xi * delta), std::sin(xi * delta));
            acc.add((uh.c[i] * std::conj(rh.c[i]) * rot).real());
        }
        return acc.value();
    };

    double best = corr(0.0);
    double arg = 0.0;
    for (int j = 1; j < n; ++j) {
        double v = corr(j * g.dx);
        if (v > best) {
            best = v;
            arg = j * g.dx;
        }
    }
    double lo = arg - g.dx, hi = arg + g.dx;
    for (int it = 0; it < 90; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (corr(m1) < corr(m2))
            lo = m1;
        else
            hi = m2;
    }
    double delta = 0.5 * (lo + hi);

    SumAccumulator err2, ref2;
    for (int i = 0; i < n; ++i) {
        double xi = k0 * signed_mode(i, n);
        std::complex<double> rot(std::cos(-xi * delta), std::sin(-xi * delta));
        err2.add(std::norm(uh.c[i] - rh.c[i] * rot));
        ref2.add(std::norm(rh.c[i]));
    }
    ShapeMatch out;
    out.shift = delta;
    out.rel_error = std::sqrt(err2.value() / ref2.value());
    return out;
}

}  // namespace hbo
