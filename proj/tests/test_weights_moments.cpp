#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hbo/diagnostics.hpp"
#include "hbo/fields.hpp"
#include "hbo/laws.hpp"
#include "hbo/multipliers.hpp"
#include "hbo/solver.hpp"
#include "hbo/weights.hpp"
#include "oracles.hpp"

using namespace hbo;

namespace {

double bracket(double x) { return std::sqrt(1.0 + x * x); }

}  // namespace

TEST_CASE("truncated weight: inner region equals <x>, plateau equals 2N") {
    for (double N : {4.0, 8.0, 16.0}) {
        CHECK(truncated_weight_radial(N, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
        for (int i = 0; i <= 50; ++i) {
            double rho = N * i / 50.0;
            CHECK(std::abs(truncated_weight_radial(N, rho) - bracket(rho)) <= 1e-12);
        }
        CHECK(truncated_weight_radial(N, 3.0 * N) == doctest::Approx(2.0 * N).epsilon(1e-15));
        for (double rho : {3.0 * N, 3.5 * N, 10.0 * N})
            CHECK(truncated_weight_radial(N, rho) == 2.0 * N);
    }
    CHECK_THROWS_AS(truncated_weight_radial(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(truncated_weight_radial(-2.0, 1.0), std::invalid_argument);
}

TEST_CASE("truncated weight: blend is monotone with slope <= 1, dense sampling") {
    for (double N : {4.0, 8.0, 16.0}) {
        double prev = bracket(N);
        for (int i = 1; i <= 10000; ++i) {
            double rho = N + 2.0 * N * i / 10000.0;
            double v = truncated_weight_radial(N, rho);
            double s = truncated_weight_radial_slope(N, rho);
            CHECK(v >= prev - 1e-12);
            CHECK(s <= 1.0 + 1e-12);
            CHECK(s >= -1e-12);
            prev = v;
        }
        // Slope agrees with a centered difference of the value.
        for (double rho : {1.2 * N, 1.9 * N, 2.6 * N}) {
            double h = 1e-6 * N;
            double fd = (truncated_weight_radial(N, rho + h) - truncated_weight_radial(N, rho - h)) / (2.0 * h);
            CHECK(std::abs(fd - truncated_weight_radial_slope(N, rho)) <= 1e-6);
        }
        // C2 joins: value, slope, curvature continuous at both knots.
        double h = 1e-5;
        auto w = [&](double r) { return truncated_weight_radial(N, r); };
        for (double knot : {N, 3.0 * N}) {
            CHECK(std::abs(w(knot + h) - w(knot - h)) <= 3.0 * h);
            double curv_in = (w(knot - h) - 2.0 * w(knot - 2 * h) + w(knot - 3 * h)) / (h * h);
            double curv_out = (w(knot + 3 * h) - 2.0 * w(knot + 2 * h) + w(knot + h)) / (h * h);
            CHECK(std::abs(curv_in - curv_out) <= 1e-3);
        }
    }
}

TEST_CASE("truncated weight: pointwise product bound with one recorded constant") {
    // |d^alpha w_N^theta * x^beta| <= C w_N^(theta+|beta|-|alpha|), C frozen below.
    const double C_frozen = 6.0;
    const double h = 1e-4;
    double measured = 0.0;
    std::vector<MultiIndex> alphas = {{1, 0, 0}, {0, 1, 0}, {2, 0, 0}, {1, 1, 0}, {0, 2, 0}};
    std::vector<MultiIndex> betas = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    for (double N : {4.0, 8.0, 16.0}) {
        for (double theta : {0.5, 1.0, 2.0}) {
            auto wp = [&](double x, double y) {
                return std::pow(truncated_weight_radial(N, std::hypot(x, y)), theta);
            };
            for (int ir = 1; ir <= 40; ++ir) {
                double rho = 4.0 * N * ir / 40.0;
                for (int ia = 0; ia < 8; ++ia) {
                    double phi = 2.0 * M_PI * (ia + 0.31) / 8.0;
                    double x = rho * std::cos(phi), y = rho * std::sin(phi);
                    for (const auto& alpha : alphas) {
                        double der;
                        if (alpha == MultiIndex{1, 0, 0})
                            der = (wp(x + h, y) - wp(x - h, y)) / (2 * h);
                        else if (alpha == MultiIndex{0, 1, 0})
                            der = (wp(x, y + h) - wp(x, y - h)) / (2 * h);
                        else if (alpha == MultiIndex{2, 0, 0})
                            der = (wp(x + h, y) - 2 * wp(x, y) + wp(x - h, y)) / (h * h);
                        else if (alpha == MultiIndex{0, 2, 0})
                            der = (wp(x, y + h) - 2 * wp(x, y) + wp(x, y - h)) / (h * h);
                        else
                            der = (wp(x + h, y + h) - wp(x + h, y - h) - wp(x - h, y + h) +
                                   wp(x - h, y - h)) /
                                  (4 * h * h);
                        for (const auto& beta : betas) {
                            double xb = 1.0;
                            for (int m = 0; m < beta[0]; ++m) xb *= x;
                            for (int m = 0; m < beta[1]; ++m) xb *= y;
                            double rhs = std::pow(truncated_weight_radial(N, rho),
                                                  theta + order(beta) - order(alpha));
                            measured = std::max(measured, std::abs(der * xb) / rhs);
                        }
                    }
                }
            }
        }
    }
    CAPTURE(measured);
    CHECK(measured <= C_frozen);
    CHECK(measured > 0.1);  // the sweep is not vacuous
}

TEST_CASE("truncated weight on a grid: sampled values and box warning path") {
    Grid g = make_grid(2, 32, 30.0);
    TruncatedWeight w = truncated_weight(g, 4.0);
    CHECK(w.N == 4.0);
    // Origin value 1; far corner deep in the plateau is exactly 2N.
    CHECK(w.values.v[ravel(g, {g.n / 2, g.n / 2, 0})] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w.values.v[0] == 8.0);  // corner (-30, -30), radius 42 > 12
    CHECK_THROWS_AS(truncated_weight(g, -1.0), std::invalid_argument);
}

TEST_CASE("weighted norm: trivial cases and the bracket-weight quadrature oracle") {
    Grid g = make_grid(1, 256, 12.0);
    RealField z = make_real_field(g);
    RealField ones = make_real_field(g);
    for (auto& v : ones.v) v = 1.0;
    CHECK(weighted_l2(z, ones, 1.0) == 0.0);

    const double w = 1.2, A = 0.7;
    RealField f = gaussian(g, {0.0, 0.0, 0.0}, w, A);
    CHECK(weighted_l2(f, ones, 3.0) == doctest::Approx(l2_norm(f)).epsilon(1e-14));

    RealField br = bracket_weight(g);
    double got = weighted_l2(f, br, 2.0);
    auto integrand = [&](double x) {
        double b2 = 1.0 + x * x;
        double u = A * std::exp(-x * x / (2.0 * w * w));
        return b2 * b2 * u * u;
    };
    double want = std::sqrt(oracle::simpson(integrand, -12.0, 12.0, 4000));
    CHECK(std::abs(got - want) <= 1e-6 * want);
}

TEST_CASE("conserved: zero field, single cosine, dual-route Hamiltonian") {
    Grid g = make_grid(1, 128, 7.0);
    Conserved z = conserved(make_real_field(g));
    CHECK(z.I == 0.0);
    CHECK(z.M == 0.0);
    CHECK(z.H == 0.0);

    RealField u = make_real_field(g);
    const double k = M_PI / g.L;
    for (std::size_t i = 0; i < g.size; ++i) u.v[i] = std::cos(k * point(g, unravel(g, i))[0]);
    Conserved c = conserved(u);
    CHECK(std::abs(c.I) <= 1e-12);
    CHECK(c.M == doctest::Approx(g.L).epsilon(1e-13));
    CHECK(c.H == doctest::Approx(M_PI).epsilon(1e-12));  // |xi| M = (pi/L) L

    Grid g2 = make_grid(2, 32, 9.0);
    RealField r = random_band_limited(g2, 9, 0x5eed1234u, false);
    Conserved spectral = conserved(r);
    RealField half = fractional(r, 0.5);
    SumAccumulator disp, cubic;
    for (std::size_t i = 0; i < g2.size; ++i) {
        disp.add(half.v[i] * half.v[i]);
        cubic.add(r.v[i] * r.v[i] * r.v[i]);
    }
    double physical = (disp.value() - cubic.value() / 3.0) * cell_volume(g2);
    CHECK(std::abs(spectral.H - physical) <= 1e-10 * std::max(1.0, std::abs(physical)));
}

TEST_CASE("moment: order zero is I, odd symmetry, Gaussian closed forms") {
    Grid g = make_grid(2, 128, 16.0 * M_PI);
    const double w = 2.0, A = 0.9, a1 = 0.4, a2 = -0.3;
    RealField u = gaussian(g, {a1, a2, 0.0}, w, A);

    double I = moment(u, {0, 0, 0});
    CHECK(I == doctest::Approx(conserved(u).I).epsilon(1e-14));
    const double I_exact = A * 2.0 * M_PI * w * w;
    CHECK(I == doctest::Approx(I_exact).epsilon(1e-10));

    RealField centered = gaussian(g, {0.0, 0.0, 0.0}, w, A);
    CHECK(std::abs(moment(centered, {1, 0, 0})) <= 1e-12 * I_exact);

    // One-dimensional marginals of the Gaussian: E[x]=a, E[x^2]=a^2+w^2,
    // E[x^3]=a^3+3aw^2, components independent.
    CHECK(moment(u, {1, 0, 0}) == doctest::Approx(I_exact * a1).epsilon(1e-8));
    CHECK(moment(u, {0, 1, 0}) == doctest::Approx(I_exact * a2).epsilon(1e-8));
    CHECK(moment(u, {2, 0, 0}) == doctest::Approx(I_exact * (a1 * a1 + w * w)).epsilon(1e-8));
    CHECK(moment(u, {1, 1, 0}) == doctest::Approx(I_exact * a1 * a2).epsilon(1e-8));
    CHECK(moment(u, {3, 0, 0}) ==
          doctest::Approx(I_exact * (a1 * a1 * a1 + 3.0 * a1 * w * w)).epsilon(1e-8));
    CHECK_THROWS_AS(moment(u, {4, 0, 0}), std::invalid_argument);
}

TEST_CASE("diagnostics records and CSV shape") {
    Grid g = make_grid(2, 32, 10.0);
    RealField u = gaussian(g, {0.5, 0.0, 0.0}, 1.0, 1.0);
    DiagnosticsRecord rec = diagnose(u, 0.25, {0.5, 1.0});
    CHECK(rec.t == 0.25);
    CHECK(rec.M > 0.0);
    CHECK(rec.moments.size() == 9);  // |beta| in 1..3, d = 2
    CHECK(rec.weighted_norms.size() == 2);
    // Weighted norms nondecreasing in r for r >= 0.
    CHECK(rec.weighted_norms.at(1.0) >= rec.weighted_norms.at(0.5));
    CHECK(!rec.guard_warning);  // Gaussian of width 1 in a box of half-width 10

    std::string header = diagnostics_csv_header(rec, g.d);
    std::string row = diagnostics_csv_row(rec, g.d);
    auto commas = [](const std::string& s) {
        return std::count(s.begin(), s.end(), ',');
    };
    CHECK(commas(header) == commas(row));
    CHECK(header.substr(0, 8) == "t,I,M,H,");
    CHECK(header.find("m_10") != std::string::npos);
    CHECK(header.find("wnorm_0.5") != std::string::npos);
    CHECK(header.find("boundary_max,guard") != std::string::npos);
    CHECK(diagnostics_csv_row(rec, g.d) == row);  // deterministic
}

TEST_CASE("boundary max sees only the seam planes") {
    Grid g = make_grid(1, 16, 2.0);
    RealField u = make_real_field(g);
    u.v[3] = 5.0;
    CHECK(boundary_max(u) == 0.0);
    u.v[0] = -2.0;
    CHECK(boundary_max(u) == 2.0);
    u.v[g.size - 1] = 7.0;
    CHECK(boundary_max(u) == 7.0);
}

TEST_CASE("weighted norm with truncated weights rises to the bracket norm") {
    Grid g = make_grid(1, 512, 64.0);
    RealField u = compact_bump(g, {0.0, 0.0, 0.0}, 6.0, 1.0);
    RealField br = bracket_weight(g);
    double full = weighted_l2(u, br, 1.0);
    double prev = 0.0;
    for (double N : {1.0, 2.0, 4.0, 6.0, 8.0}) {
        double wn = weighted_l2(u, truncated_weight(g, N).values, 1.0);
        CHECK(wn <= full * (1.0 + 1e-14));
        CHECK(wn >= prev - 1e-14 * full);
        prev = wn;
    }
    // Equality exactly when the inner <x> region covers the support.
    double at_support = weighted_l2(u, truncated_weight(g, 6.0).values, 1.0);
    CHECK(at_support == doctest::Approx(full).epsilon(1e-14));
    double below = weighted_l2(u, truncated_weight(g, 3.0).values, 1.0);
    CHECK(below < full * (1.0 - 1e-6));
}

TEST_CASE("linear fit recovers an exact affine law") {
    std::vector<double> x = {0.0, 0.5, 1.0, 1.5, 2.0};
    std::vector<double> y;
    for (double v : x) y.push_back(3.25 * v - 0.75);
    LinearFit fit = linear_fit(x, y);
    CHECK(fit.slope == doctest::Approx(3.25).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(-0.75).epsilon(1e-13));
    CHECK(fit.residual <= 1e-13);
    CHECK_THROWS_AS(linear_fit({1.0}, {2.0}), std::invalid_argument);
}

TEST_CASE("critical time: Gaussian closed form and degenerate inputs") {
    Grid g = make_grid(2, 128, 16.0 * M_PI);
    const double A = 1.0, w = 1.4, a1 = -0.1;
    RealField u = gaussian(g, {a1, 0.3, 0.0}, w, A);
    // t* = -4 (I a1) / M = -8 a1 / A for this family.
    CHECK(t_star(u) == doctest::Approx(-8.0 * a1 / A).epsilon(1e-9));
    RealField centered = gaussian(g, {0.0, 0.0, 0.0}, w, A);
    CHECK(std::abs(t_star(centered)) <= 1e-12);
    CHECK_THROWS_AS(t_star(make_real_field(g)), std::invalid_argument);
}

TEST_CASE("moment law, two-route time integral, and the zero crossing") {
    // Zero-mean datum: the time-integral routes differentiate the transform
    // at xi = 0, and a nonzero mean picks up an O(1/L) box artifact there.
    Grid g = make_grid(1, 2048, 32.0 * M_PI);
    const double A = 2.0, w = 0.5;
    RealField u0 = dx1_gaussian(g, {0.3, 0.0, 0.0}, w, A);

    Conserved c0 = conserved(u0);
    CHECK(std::abs(c0.I) <= 1e-12);
    const double ts = t_star(u0);
    CHECK(ts == doctest::Approx(8.0 * std::sqrt(2.0) * w * w / A).epsilon(1e-9));

    SolverConfig cfg;
    cfg.dt = 2e-3;
    cfg.T = 1.15 * ts;
    cfg.snapshot_every = 1;
    Trajectory traj = evolve(u0, cfg);
    REQUIRE(traj.times.size() >= 100);

    const double M0 = traj.records.front().M;
    const double m1_0 = traj.records.front().moments.at({1, 0, 0});
    REQUIRE(m1_0 < 0.0);

    // m_1 affine with slope M0/2.
    double res1 = moment_identity_residual(traj, 1);
    CHECK(res1 <= 5e-4 * std::abs(m1_0));

    std::vector<double> m1;
    for (const auto& r : traj.records) m1.push_back(r.moments.at({1, 0, 0}));
    LinearFit fit = linear_fit(traj.times, m1);
    CHECK(std::abs(fit.slope - 0.5 * M0) <= 1e-3 * 0.5 * M0);

    // Two quadrature routes agree, and both match the closed form
    // t m1(0) + t^2 M0 / 4 that the affine law implies.
    CFunctionalReport rep = c_functional(traj, 1);
    CHECK(rep.discrepancy <= 1e-4);
    double worst_closed = 0.0, scale_closed = 1e-300;
    for (std::size_t j = 0; j < rep.times.size(); ++j) {
        double t = rep.times[j];
        double closed = t * m1_0 + 0.25 * t * t * M0;
        worst_closed = std::max(worst_closed, std::abs(rep.byparts[j] - closed));
        scale_closed = std::max(scale_closed, std::abs(closed));
    }
    CHECK(worst_closed / scale_closed <= 5e-4);

    // Zero crossing of the integrated moment vs the critical time.
    double crossing = time_integral_zero_crossing(traj);
    CHECK(std::abs(crossing - ts) <= 0.01 * ts);
}

TEST_CASE("transverse moments stay frozen on a 2D run") {
    Grid g = make_grid(2, 128, 16.0 * M_PI);
    RealField u0 = gaussian(g, {-0.1, 0.3, 0.0}, 1.4, 1.0);

    SolverConfig cfg;
    cfg.dt = 5e-3;
    cfg.T = 0.5;
    cfg.snapshot_every = 1;
    Trajectory traj = evolve(u0, cfg);

    const double m2_0 = traj.records.front().moments.at({0, 1, 0});
    double res2 = moment_identity_residual(traj, 2);
    CHECK(res2 <= 1e-6 * std::max(1.0, std::abs(m2_0)));

    // For l != 1 both routes reduce to t * m_l(0) exactly.
    CFunctionalReport rep2 = c_functional(traj, 2);
    CHECK(rep2.discrepancy <= 1e-12);
}
