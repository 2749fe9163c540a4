#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "hbo/fields.hpp"
#include "hbo/multipliers.hpp"
#include "hbo/solver.hpp"
#include "hbo/transform.hpp"
#include "oracles.hpp"

using namespace hbo;

namespace {

RealField reflected(const RealField& u) {
    const Grid& g = u.grid;
    RealField r = make_real_field(g);
    for (std::size_t i = 0; i < g.size; ++i) {
        MultiIndex idx = unravel(g, i);
        MultiIndex m = idx;
        for (int a = 0; a < g.d; ++a) m[a] = (g.n - idx[a]) % g.n;
        r.v[ravel(g, m)] = u.v[i];
    }
    return r;
}

double rel_l2_diff(const RealField& a, const RealField& b) {
    SumAccumulator num, den;
    for (std::size_t i = 0; i < a.grid.size; ++i) {
        double d = a.v[i] - b.v[i];
        num.add(d * d);
        den.add(b.v[i] * b.v[i]);
    }
    return std::sqrt(num.value() / den.value());
}

}  // namespace

TEST_CASE("nonlinearity: zero and constant fields are fixed points of N = 0") {
    Grid g = make_grid(2, 16, 3.0);
    RealField z = make_real_field(g);
    RealField nz = nonlinearity(z, 2.0 / 3.0);
    for (double v : nz.v) CHECK(v == 0.0);
    RealField c = make_real_field(g);
    for (auto& v : c.v) v = 2.5;
    RealField nc = nonlinearity(c, 2.0 / 3.0);
    for (double v : nc.v) CHECK(std::abs(v) <= 1e-14);
}

TEST_CASE("nonlinearity: single sine against the closed form") {
    // u = sin(k x), N(u) = -1/2 d_x sin^2 = -(k/2) sin(2 k x).
    Grid g = make_grid(1, 32, 5.0);
    const double k = M_PI / g.L;
    RealField u = make_real_field(g);
    for (std::size_t i = 0; i < g.size; ++i) u.v[i] = std::sin(k * point(g, unravel(g, i))[0]);
    RealField nu = nonlinearity(u, 2.0 / 3.0);
    for (std::size_t i = 0; i < g.size; ++i) {
        double want = -(k / 2.0) * std::sin(2.0 * k * point(g, unravel(g, i))[0]);
        CHECK(std::abs(nu.v[i] - want) <= 1e-12);
    }
}

TEST_CASE("nonlinearity: dual route against the pointwise product form") {
    // For band-limited u with 3 kmax < n the dealiased -1/2 d_x1(u^2) equals
    // -u d_x1 u sampled exactly; both are continuum values of trig polynomials.
    Grid g = make_grid(2, 64, 4.0);
    RealField u = random_band_limited(g, 7, 0xabcdef12u, false);
    RealField route_a = nonlinearity(u, 2.0 / 3.0);
    RealField du = derivative(u, {1, 0, 0});
    double scale = max_abs(route_a);
    for (std::size_t i = 0; i < g.size; ++i)
        CHECK(std::abs(route_a.v[i] + u.v[i] * du.v[i]) <= 1e-11 * std::max(1.0, scale));
}

TEST_CASE("nonlinearity: square modes beyond the dealias cutoff are removed") {
    Grid g = make_grid(1, 32, M_PI);
    auto cosine = [&](int k) {
        RealField u = make_real_field(g);
        for (std::size_t i = 0; i < g.size; ++i) u.v[i] = std::cos(k * point(g, unravel(g, i))[0]);
        return u;
    };
    // n = 32: cutoff index 2/3 * 16 = 10.67. k = 6 doubles to 12: fully masked.
    RealField masked = nonlinearity(cosine(6), 2.0 / 3.0);
    CHECK(max_abs(masked) <= 1e-13);
    // k = 4 doubles to 8: survives, N(u) = -1/2 d_x (1 + cos(8x))/2 = 2 sin(8x).
    RealField kept = nonlinearity(cosine(4), 2.0 / 3.0);
    for (std::size_t i = 0; i < g.size; ++i) {
        double want = 2.0 * std::sin(8.0 * point(g, unravel(g, i))[0]);
        CHECK(std::abs(kept.v[i] - want) <= 1e-12);
    }
}

TEST_CASE("step: pure dispersion equals the exact semigroup") {
    Grid g = make_grid(2, 32, 6.0);
    RealField u = random_band_limited(g, 10, 0x77777777u, false);
    SolverConfig cfg;
    cfg.dt = 0.37;
    cfg.disable_nonlinearity = true;
    RealField stepped = step_ifrk4(u, cfg.dt, cfg);
    RealField want = semigroup(u, cfg.dt);
    for (std::size_t i = 0; i < g.size; ++i)
        CHECK(std::abs(stepped.v[i] - want.v[i]) <= 1e-14 * std::max(1.0, max_abs(want)));
}

TEST_CASE("step: the mean survives one step to machine precision") {
    Grid g = make_grid(2, 32, 5.0);
    RealField u = gaussian(g, {0.3, -0.2, 0.0}, 0.8, 1.3);
    SolverConfig cfg;
    cfg.dt = 2e-2;
    double before = integrate(u);
    RealField stepped = step_ifrk4(u, cfg.dt, cfg);
    CHECK(std::abs(integrate(stepped) - before) <= 1e-14 * std::max(1.0, std::abs(before)));
}

TEST_CASE("step: fourth-order self-convergence on a smooth 1D state") {
    Grid g = make_grid(1, 128, M_PI);
    RealField u0 = make_real_field(g);
    for (std::size_t i = 0; i < g.size; ++i) {
        double x = point(g, unravel(g, i))[0];
        u0.v[i] = std::sin(x) + 0.3 * std::cos(2.0 * x);
    }
    const double T = 0.5;
    auto run = [&](double dt) {
        SolverConfig cfg;
        cfg.dt = dt;
        cfg.T = T;
        cfg.snapshot_every = 1 << 30;
        return evolve(u0, cfg).states.back();
    };
    std::vector<double> dts = {T / 100.0, T / 200.0, T / 400.0};
    std::vector<double> logdt, logerr;
    for (double dt : dts) {
        RealField coarse = run(dt);
        RealField fine = run(dt / 16.0);
        SumAccumulator acc;
        for (std::size_t i = 0; i < g.size; ++i) {
            double d = coarse.v[i] - fine.v[i];
            acc.add(d * d);
        }
        double err = std::sqrt(acc.value() * cell_volume(g));
        CHECK(err > 1e-15);
        logdt.push_back(std::log(dt));
        logerr.push_back(std::log(err));
    }
    double slope = (logerr.back() - logerr.front()) / (logdt.back() - logdt.front());
    CAPTURE(slope);
    CHECK(slope == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("soliton datum: peak height, mass, and spectral decay") {
    Grid g = make_grid(1, 2048, 64.0 * M_PI);
    const double c = 1.0;
    RealField phi = bo1d_soliton(c, 0.0, g);
    // Periodization lifts the peak by about a^2/12 relative to 4c.
    double peak = max_abs(phi);
    const double kap = M_PI / g.L, a = kap / c;
    double peak_exact = 2.0 * kap / std::tanh(a / 2.0);
    CHECK(peak == doctest::Approx(peak_exact).epsilon(1e-10));
    CHECK(std::abs(peak - 4.0 * c) <= 1e-3);
    // Mass of the image sum is exactly 4 pi independent of c.
    SumAccumulator acc;
    for (double v : phi.v) acc.add(v);
    CHECK(acc.value() * cell_volume(g) == doctest::Approx(4.0 * M_PI).epsilon(1e-12));
    // Fourier coefficients 2 kappa e^{-a|m|}: spot-check a few modes.
    SpectralField ph = forward_transform(phi);
    for (int m : {1, 5, 50}) {
        double want = 2.0 * kap * std::exp(-a * m) * 2.0 * g.L;  // hat f = coeff * 2L
        CHECK(std::abs(ph.c[ravel(g, {m, 0, 0})] - want) <= 1e-9 * want);
    }
}

TEST_CASE("soliton datum: residual of the traveling-wave equation") {
    // phi(x - s t) solves the flow iff -s phi' - R1 Lap phi + phi phi' = 0
    // with s the box speed. Assembled without any dealiasing, so the grid
    // must hold the square's spectrum: tail ratio e^{-a n/2} with a = kappa/c.
    Grid g = make_grid(1, 2048, 32.0 * M_PI);
    const double c = 1.0;
    RealField phi = bo1d_soliton(c, 0.0, g);
    const double s = bo1d_periodic_speed(c, g.L);
    CHECK(s == doctest::Approx((M_PI / g.L) / std::tanh(M_PI / (c * g.L))).epsilon(1e-15));
    CHECK(s > c);

    RealField dphi = derivative(phi, {1, 0, 0});
    RealField lin = riesz(derivative(phi, {2, 0, 0}), 1);
    SumAccumulator acc;
    for (std::size_t i = 0; i < g.size; ++i) {
        double r = -s * dphi.v[i] - lin.v[i] + phi.v[i] * dphi.v[i];
        acc.add(r * r);
    }
    double residual = std::sqrt(acc.value() * cell_volume(g));
    CAPTURE(residual);
    CHECK(residual <= 1e-6);
}

TEST_CASE("soliton: shape and phase after one box-time of evolution") {
    Grid g = make_grid(1, 2048, 64.0 * M_PI);
    const double c = 1.0;
    RealField phi = bo1d_soliton(c, 0.0, g);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.T = 1.0;
    cfg.snapshot_every = 1 << 30;
    Trajectory traj = evolve(phi, cfg);
    ShapeMatch match = recenter_match(traj.states.back(), phi);
    CAPTURE(match.shift);
    CAPTURE(match.rel_error);
    // The dealias mask clips the profile's own tail at e^{-a 2n/6} ~ 2e-5.
    CHECK(match.rel_error <= 1e-4);
    double s = bo1d_periodic_speed(c, g.L);
    CHECK(std::abs(match.shift - s * cfg.T) <= 1e-4);
}

TEST_CASE("evolve: invariants of the trajectory bookkeeping") {
    Grid g = make_grid(1, 64, 8.0);
    RealField u0 = gaussian(g, {0.0, 0.0, 0.0}, 1.0, 0.5);
    SolverConfig cfg;
    cfg.dt = 1e-2;
    cfg.T = 0.25;
    cfg.snapshot_every = 5;
    cfg.weight_exponents = {1.0};
    Trajectory traj = evolve(u0, cfg);
    REQUIRE(traj.times.size() == traj.states.size());
    REQUIRE(traj.times.size() == traj.records.size());
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(cfg.T).epsilon(1e-12));
    for (std::size_t j = 1; j < traj.times.size(); ++j) CHECK(traj.times[j] > traj.times[j - 1]);
    CHECK(traj.times.size() == 6);  // t = 0 plus steps 5, 10, 15, 20, 25
    for (const auto& r : traj.records) CHECK(r.weighted_norms.count(1.0) == 1);

    // The mean is exactly frozen along the whole run.
    double I0 = traj.records.front().I;
    for (const auto& r : traj.records) CHECK(std::abs(r.I - I0) <= 1e-12 * std::max(1.0, std::abs(I0)));
}

TEST_CASE("evolve: quadratic and cubic invariants drift at tolerance level") {
    Grid g = make_grid(1, 256, 16.0 * M_PI);
    RealField u0 = gaussian(g, {0.0, 0.0, 0.0}, 1.5, 1.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.T = 0.5;
    Trajectory traj = evolve(u0, cfg);
    const auto& first = traj.records.front();
    double worstM = 0.0, worstH = 0.0;
    for (const auto& r : traj.records) {
        worstM = std::max(worstM, std::abs(r.M - first.M));
        worstH = std::max(worstH, std::abs(r.H - first.H));
    }
    CHECK(worstM <= 1e-6 * std::abs(first.M));
    CHECK(worstH <= 1e-5 * std::max(1.0, std::abs(first.H)));
}

TEST_CASE("evolve: time reversal through reflection") {
    // If u solves the flow then v(x, t) = u(-x, -t) does too: running the
    // reflected final state forward for T must reproduce the reflected datum.
    Grid g = make_grid(1, 128, 4.0 * M_PI);
    RealField u0 = gaussian(g, {0.7, 0.0, 0.0}, 1.0, 1.0);
    SolverConfig cfg;
    cfg.dt = 5e-3;
    cfg.T = 0.4;
    cfg.snapshot_every = 1 << 30;
    RealField uT = evolve(u0, cfg).states.back();
    RealField back = evolve(reflected(uT), cfg).states.back();
    double err = rel_l2_diff(back, reflected(u0));
    CAPTURE(err);
    CHECK(err <= 1e-8);  // O(dt^4) round trip
}

TEST_CASE("evolve: non-finite states abort with a blow-up error") {
    Grid g = make_grid(1, 64, 2.0);
    RealField u0 = make_real_field(g);
    for (std::size_t i = 0; i < g.size; ++i) u0.v[i] = 1e180 * std::sin(M_PI * point(g, unravel(g, i))[0] / g.L);
    SolverConfig cfg;
    cfg.dt = 1e-2;
    cfg.T = 1.0;
    bool threw = false;
    try {
        evolve(u0, cfg);
    } catch (const std::runtime_error& e) {
        threw = true;
        CHECK(std::string(e.what()).find("numerical blow-up") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("solver config validation") {
    Grid g = make_grid(1, 16, 1.0);
    RealField u = make_real_field(g);
    SolverConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(step_ifrk4(u, cfg.dt, cfg), std::invalid_argument);
    cfg.dt = 1e-2;
    cfg.T = -1.0;
    CHECK_THROWS_AS(evolve(u, cfg), std::invalid_argument);
    cfg.T = 1.0;
    cfg.dealias_fraction = 1.5;
    CHECK_THROWS_AS(evolve(u, cfg), std::invalid_argument);
    CHECK_THROWS_AS(nonlinearity(u, 0.0), std::invalid_argument);
}
