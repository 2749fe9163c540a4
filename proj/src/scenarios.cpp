#include "hbo/scenarios.hpp"

#include "hbo/diagnostics.hpp"
#include "hbo/fields.hpp"
#include "hbo/laws.hpp"
#include "hbo/multipliers.hpp"
#include "hbo/probes.hpp"
#include "hbo/weights.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace hbo {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Metric {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string comparison;  // "<=" or ">="
    bool pass = false;
};

Metric leq(const std::string& name, double value, double threshold) {
    return {name, value, threshold, "<=", value <= threshold};
}

Metric geq(const std::string& name, double value, double threshold) {
    return {name, value, threshold, ">=", value >= threshold};
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, int d) {
    std::string csv = diagnostics_csv_header(traj.records.front(), d) + "\n";
    for (const auto& rec : traj.records) csv += diagnostics_csv_row(rec, d) + "\n";
    write_text(path, csv);
}

std::vector<double> moment_series(const Trajectory& traj, const MultiIndex& beta) {
    std::vector<double> out(traj.records.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = traj.records[i].moments.at(beta);
    return out;
}

std::vector<std::pair<double, double>> zip_series(const std::vector<double>& x,
                                                  const std::vector<double>& y) {
    std::vector<std::pair<double, double>> s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) s[i] = {x[i], y[i]};
    return s;
}

// Final-state truncated-weight norms ||w_N u(T)||_2, recorded as details.
void add_weight_norms(ordered_json& details, const ExperimentConfig& cfg, const Grid& g,
                      const RealField& uT) {
    if (cfg.weight_N_list.empty()) return;
    ordered_json norms;
    for (double N : cfg.weight_N_list) {
        TruncatedWeight w = truncated_weight(g, N);
        norms["N=" + fmt(N)] = weighted_l2(uT, w.values, 1.0);
    }
    details["truncated_weight_norms_final"] = norms;
}

// Cone lattice samples of |d^3_{xi1} u-hat|, matching the probe's selection.
std::vector<std::pair<double, double>> cone_samples(const RealField& ut, double ratio,
                                                    double cap) {
    SpectralField G = freq_derivative(ut, {3, 0, 0});
    const Grid& g = ut.grid;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < g.size; ++i) {
        auto xi = frequency(g, unravel(g, i));
        double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if (r2 == 0.0) continue;
        double r = std::sqrt(r2);
        if (r > cap) continue;
        double perp = std::sqrt(std::max(0.0, r2 - xi[0] * xi[0]));
        if (r > ratio * perp) continue;
        double mag = std::abs(G.c[i]);
        if (!(mag > 0.0)) continue;
        pts.push_back({std::log(r), std::log(mag)});
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

void run_soliton_1d(const ExperimentConfig& cfg, const Grid& g,
                    const std::filesystem::path& out, std::vector<Metric>& metrics,
                    ordered_json& details) {
    RealField u0 = build_initial_data(cfg, g);
    Trajectory traj = evolve(u0, cfg.solver);
    write_trajectory_csv(out / "diagnostics.csv", traj, g.d);

    const RealField& uT = traj.states.back();
    ShapeMatch match = recenter_match(uT, u0);
    double speed = bo1d_periodic_speed(cfg.initial_data.c, g.L);
    double expected_shift = speed * cfg.solver.T;
    metrics.push_back(leq("shape_error_rel", match.rel_error, 1e-4));
    metrics.push_back(leq("shift_error_abs", std::fabs(match.shift - expected_shift), 1e-3));

    details["box_speed"] = speed;
    details["measured_shift"] = match.shift;
    details["expected_shift"] = expected_shift;
    add_weight_norms(details, cfg, g, uT);

    std::vector<std::pair<double, double>> p0(g.size), pT(g.size);
    for (std::size_t i = 0; i < g.size; ++i) {
        double x = point(g, unravel(g, i))[0];
        p0[i] = {x, u0.v[i]};
        pT[i] = {x, uT.v[i]};
    }
    emit_plot_data(out / "profile_initial.dat", "x u", p0);
    emit_plot_data(out / "profile_final.dat", "x u", pT);
}

void run_conservation_2d(const ExperimentConfig& cfg, const Grid& g,
                         const std::filesystem::path& out, std::vector<Metric>& metrics,
                         ordered_json& details) {
    RealField u0 = build_initial_data(cfg, g);
    Trajectory traj = evolve(u0, cfg.solver);
    write_trajectory_csv(out / "diagnostics.csv", traj, g.d);

    const auto& r0 = traj.records.front();
    double di = 0.0, dm = 0.0, dh = 0.0;
    std::vector<std::pair<double, double>> mdrift, hdrift;
    for (const auto& rec : traj.records) {
        di = std::max(di, std::fabs(rec.I - r0.I));
        double m = std::fabs(rec.M - r0.M) / std::fabs(r0.M);
        double h = std::fabs(rec.H - r0.H) / std::fabs(r0.H);
        dm = std::max(dm, m);
        dh = std::max(dh, h);
        mdrift.push_back({rec.t, m});
        hdrift.push_back({rec.t, h});
    }
    metrics.push_back(leq("integral_drift_abs", di, 1e-12));
    metrics.push_back(leq("momentum_drift_rel", dm, 1e-6));
    metrics.push_back(leq("energy_drift_rel", dh, 1e-5));

    details["I0"] = r0.I;
    details["M0"] = r0.M;
    details["H0"] = r0.H;
    add_weight_norms(details, cfg, g, traj.states.back());
    emit_plot_data(out / "momentum_drift.dat", "t rel_drift", mdrift);
    emit_plot_data(out / "energy_drift.dat", "t rel_drift", hdrift);
}

void run_moment_law(const ExperimentConfig& cfg, const Grid& g,
                    const std::filesystem::path& out, std::vector<Metric>& metrics,
                    ordered_json& details) {
    RealField u0 = build_initial_data(cfg, g);
    double M0 = conserved(u0).M;
    Trajectory traj = evolve(u0, cfg.solver);
    write_trajectory_csv(out / "diagnostics.csv", traj, g.d);

    std::vector<double> m1 = moment_series(traj, {1, 0, 0});
    LinearFit fit = linear_fit(traj.times, m1);
    double slope_rel = std::fabs(fit.slope - M0 / 2.0) / (M0 / 2.0);
    double scale = 1.0;
    for (double v : m1) scale = std::max(scale, std::fabs(v));
    metrics.push_back(leq("m1_slope_rel_error", slope_rel, 1e-3));
    emit_plot_data(out / "m1.dat", "t m1", zip_series(traj.times, m1));

    if (g.d >= 2) {
        double trans = moment_identity_residual(traj, 2);
        metrics.push_back(leq("transverse_drift_abs", trans, 1e-6 * scale));
        emit_plot_data(out / "transverse_moment.dat", "t m_transverse",
                       zip_series(traj.times, moment_series(traj, {0, 1, 0})));
    }

    details["M0"] = M0;
    details["fitted_slope"] = fit.slope;
    details["expected_slope"] = M0 / 2.0;
    details["moment_scale"] = scale;
    details["m1_identity_residual"] = moment_identity_residual(traj, 1);
    add_weight_norms(details, cfg, g, traj.states.back());
}

void run_t_star_demo(const ExperimentConfig& cfg, const Grid& g,
                     const std::filesystem::path& out, std::vector<Metric>& metrics,
                     ordered_json& details) {
    RealField u0 = build_initial_data(cfg, g);
    double m0 = moment(u0, {1, 0, 0});
    if (!(m0 < 0.0))
        throw ConfigError("t_star_demo requires a datum with negative first moment");
    double ts = t_star(u0);
    Trajectory traj = evolve(u0, cfg.solver);
    write_trajectory_csv(out / "diagnostics.csv", traj, g.d);

    double crossing = std::numeric_limits<double>::quiet_NaN();
    double cross_rel = std::numeric_limits<double>::infinity();
    try {
        crossing = time_integral_zero_crossing(traj);
        cross_rel = std::fabs(crossing - ts) / ts;
    } catch (const std::runtime_error&) {
        // no sign change inside the run: the metric below fails with inf
    }
    CFunctionalReport rep = c_functional(traj, 1);
    metrics.push_back(leq("crossing_rel_error", cross_rel, 1e-2));
    metrics.push_back(leq("c1_route_discrepancy_rel", rep.discrepancy, 1e-4));

    details["predicted_t_star"] = ts;
    details["measured_crossing"] = crossing;
    details["m1_initial"] = m0;
    details["M0"] = conserved(u0).M;
    add_weight_norms(details, cfg, g, traj.states.back());

    std::vector<double> m1 = moment_series(traj, {1, 0, 0});
    emit_plot_data(out / "m1.dat", "t m1", zip_series(traj.times, m1));
    emit_plot_data(out / "c1_byparts.dat", "t C1", zip_series(rep.times, rep.byparts));
    emit_plot_data(out / "c1_duhamel.dat", "t C1", zip_series(rep.times, rep.duhamel));
}

void run_decay_dichotomy(const ExperimentConfig& cfg, const Grid& g,
                         const std::filesystem::path& out, std::vector<Metric>& metrics,
                         ordered_json& details) {
    if (g.d < 2) throw ConfigError("decay_dichotomy requires d >= 2");
    ConeParams cp;
    if (g.d == 3) {
        // Coarse 3D lattices need a tighter cone to keep the angular spread
        // of |xi| small relative to the fitted power law.
        cp.ratio = 1.05;
        cp.radius_cap = 0.375;
    }
    const auto& id = cfg.initial_data;
    const double t = cfg.solver.T;

    // The dichotomy is a statement about the free group, so the probe time
    // is reached by the semigroup alone.
    RealField g0 = gaussian(g, id.center, id.width, id.amplitude);
    RealField gT = semigroup(g0, t);
    ConeProbeReport rg = cone_probe(gT, t, cp);
    emit_plot_data(out / "cone_gaussian.dat", "log_xi log_mag",
                   cone_samples(gT, rg.ratio, rg.radius_cap));

    RealField d0 = dx1_gaussian(g, id.center, id.width, id.amplitude);
    RealField dT = semigroup(d0, t);
    ConeProbeReport rd = cone_probe(dT, t, cp);
    emit_plot_data(out / "cone_dx1.dat", "log_xi log_mag",
                   cone_samples(dT, rd.ratio, rd.radius_cap));

    std::string csv = diagnostics_csv_header(diagnose(g0, 0.0, {}), g.d) + "\n";
    csv += diagnostics_csv_row(diagnose(g0, 0.0, {}), g.d) + "\n";
    csv += diagnostics_csv_row(diagnose(gT, t, {}), g.d) + "\n";
    csv += diagnostics_csv_row(diagnose(d0, 0.0, {}), g.d) + "\n";
    csv += diagnostics_csv_row(diagnose(dT, t, {}), g.d) + "\n";
    write_text(out / "diagnostics.csv", csv);

    metrics.push_back(leq("gaussian_exponent_error", std::fabs(rg.fitted_exponent + 1.0), 0.15));
    metrics.push_back(geq("dx1_exponent", rd.fitted_exponent, -0.3));

    details["gaussian_exponent"] = rg.fitted_exponent;
    details["gaussian_fit_residual"] = rg.fit_residual;
    details["gaussian_samples"] = rg.sample_count;
    details["dx1_exponent"] = rd.fitted_exponent;
    details["dx1_fit_residual"] = rd.fit_residual;
    details["dx1_samples"] = rd.sample_count;
    details["cone_ratio"] = rg.ratio;
    details["cone_radius_cap"] = rg.radius_cap;
}

void run_commutator_sweep(const ExperimentConfig& cfg, const Grid& g,
                          const std::filesystem::path& out, std::vector<Metric>& metrics,
                          ordered_json& details) {
    if (g.d < 2) throw ConfigError("commutator_sweep requires d >= 2");
    Grid g2 = make_grid(g.d, 2 * g.n, g.L);
    const std::array<MultiIndex, 3> alphas{{{1, 0, 0}, {1, 1, 0}, {2, 0, 0}}};
    const int pairs = 20;

    std::string csv = "pair,alpha,kmax,ratio,ratio_doubled\n";
    std::vector<std::pair<double, double>> base_pts, dbl_pts;
    double max_base = 0.0, max_dbl = 0.0;
    for (int i = 0; i < pairs; ++i) {
        std::array<double, 3> c{-6.0 + 0.6 * i, 5.0 - 0.5 * i, 0.0};
        int kmax = 4 + i % 7;
        const MultiIndex& alpha = alphas[i % 3];
        RealField a1 = gaussian(g, c, 2.0, 1.0);
        RealField f1 = random_band_limited(g, kmax, cfg.seed + i, true);
        RealField a2 = gaussian(g2, c, 2.0, 1.0);
        RealField f2 = random_band_limited(g2, kmax, cfg.seed + i, true);
        double r1 = commutator_probe(a1, f1, alpha).ratio;
        double r2 = commutator_probe(a2, f2, alpha).ratio;
        max_base = std::max(max_base, r1);
        max_dbl = std::max(max_dbl, r2);
        base_pts.push_back({double(i), r1});
        dbl_pts.push_back({double(i), r2});
        csv += std::to_string(i) + "," + moment_code(alpha, g.d) + "," + std::to_string(kmax) +
               "," + fmt(r1) + "," + fmt(r2) + "\n";
    }
    write_text(out / "ratios.csv", csv);
    emit_plot_data(out / "ratios.dat", "pair ratio", base_pts);
    emit_plot_data(out / "ratios_doubled.dat", "pair ratio", dbl_pts);

    // Scale invariance: identical samples on a lambda-rescaled box.
    const double lam = 3.7;
    Grid gs = make_grid(g.d, g.n, g.L / lam);
    std::array<double, 3> c0{-6.0 / lam, 5.0 / lam, 0.0};
    RealField as = gaussian(gs, c0, 2.0 / lam, 1.0);
    RealField fs = random_band_limited(gs, 4, cfg.seed, true);
    RealField ab = gaussian(g, {-6.0, 5.0, 0.0}, 2.0, 1.0);
    RealField fb = random_band_limited(g, 4, cfg.seed, true);
    double rb = commutator_probe(ab, fb, alphas[0]).ratio;
    double rs = commutator_probe(as, fs, alphas[0]).ratio;
    double scale_drift = std::fabs(rs - rb) / rb;

    metrics.push_back(geq("pair_count", double(pairs), 20.0));
    metrics.push_back(
        leq("max_ratio_doubling_drift_rel", std::fabs(max_dbl - max_base) / max_base, 0.10));
    metrics.push_back(leq("scale_invariance_drift_rel", scale_drift, 1e-12));

    details["max_ratio"] = max_base;
    details["max_ratio_doubled"] = max_dbl;
    details["grid_n"] = g.n;
    details["grid_n_doubled"] = g2.n;
}

void run_identity_suite(const ExperimentConfig& cfg, const Grid& g,
                        const std::filesystem::path& out, std::vector<Metric>& metrics,
                        ordered_json& details) {
    (void)cfg;
    auto t0 = std::chrono::steady_clock::now();
    IdentitySuiteReport rep = identity_suite(g);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::string csv = "check,residual,tolerance,pass\n";
    std::vector<std::pair<double, double>> pts;
    int idx = 0;
    for (const auto& c : rep.checks) {
        metrics.push_back(leq(c.name, c.residual, c.tolerance));
        csv += c.name + "," + fmt(c.residual) + "," + fmt(c.tolerance) + "," +
               (c.pass ? "1" : "0") + "\n";
        pts.push_back({double(idx++), c.residual});
    }
    write_text(out / "identity_checks.csv", csv);
    emit_plot_data(out / "residuals.dat", "check_index residual", pts);

    // Wall time is environment-dependent; the summary is byte-stable apart
    // from this one metric.
    metrics.push_back(leq("runtime_seconds", secs, 10.0));
    details["check_count"] = rep.checks.size();
}

}  // namespace

std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg) {
    std::filesystem::path dir =
        cfg.output_dir.empty() ? std::filesystem::path("hbo_out") / cfg.scenario
                               : std::filesystem::path(cfg.output_dir);
    const char* root = std::getenv("HBO_OUTPUT_ROOT");
    if (root && *root) return std::filesystem::path(root) / dir;
    return dir;
}

void emit_plot_data(const std::filesystem::path& path, const std::string& header,
                    const std::vector<std::pair<double, double>>& series) {
    if (series.empty()) throw std::invalid_argument("empty plot series for " + path.string());
    std::string out = "# " + header + "\n";
    for (const auto& [x, y] : series) out += fmt(x) + " " + fmt(y) + "\n";
    write_text(path, out);
}

int run_scenario(const ExperimentConfig& cfg, std::ostream& log) {
    const std::filesystem::path out = resolve_output_dir(cfg);
    std::filesystem::create_directories(out);
    write_text(out / "resolved_config.ini", serialize_config(cfg));
    Grid g = make_grid(cfg.d, cfg.n, cfg.L);

    std::vector<Metric> metrics;
    ordered_json details = ordered_json::object();
    try {
        if (cfg.scenario == "soliton_1d")
            run_soliton_1d(cfg, g, out, metrics, details);
        else if (cfg.scenario == "conservation_2d")
            run_conservation_2d(cfg, g, out, metrics, details);
        else if (cfg.scenario == "moment_law")
            run_moment_law(cfg, g, out, metrics, details);
        else if (cfg.scenario == "t_star_demo")
            run_t_star_demo(cfg, g, out, metrics, details);
        else if (cfg.scenario == "decay_dichotomy")
            run_decay_dichotomy(cfg, g, out, metrics, details);
        else if (cfg.scenario == "commutator_sweep")
            run_commutator_sweep(cfg, g, out, metrics, details);
        else if (cfg.scenario == "identity_suite")
            run_identity_suite(cfg, g, out, metrics, details);
        else
            throw ConfigError("unknown scenario '" + cfg.scenario + "'");
    } catch (const std::runtime_error& e) {
        if (std::string(e.what()).find("numerical blow-up") == std::string::npos) throw;
        ordered_json summary;
        summary["scenario"] = cfg.scenario;
        summary["pass"] = false;
        summary["blow_up"] = true;
        summary["error"] = e.what();
        write_text(out / "summary.json", summary.dump(2) + "\n");
        log << cfg.scenario << ": blow-up (" << e.what() << ")\n";
        return 3;
    }

    bool pass = true;
    ordered_json mj = ordered_json::array();
    for (const auto& m : metrics) {
        pass = pass && m.pass;
        ordered_json e;
        e["name"] = m.name;
        e["value"] = m.value;
        e["threshold"] = m.threshold;
        e["comparison"] = m.comparison;
        e["pass"] = m.pass;
        mj.push_back(e);
        log << cfg.scenario << ": " << m.name << " = " << fmt(m.value) << " (" << m.comparison
            << " " << fmt(m.threshold) << ") " << (m.pass ? "PASS" : "FAIL") << "\n";
    }
    ordered_json summary;
    summary["scenario"] = cfg.scenario;
    summary["pass"] = pass;
    summary["metrics"] = mj;
    summary["details"] = details;
    write_text(out / "summary.json", summary.dump(2) + "\n");
    log << cfg.scenario << ": " << (pass ? "PASS" : "FAIL") << " (artifacts in " << out.string()
        << ")\n";
    return pass ? 0 : 1;
}

}  // namespace hbo
