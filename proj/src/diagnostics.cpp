#include "hbo/diagnostics.hpp"

#include "hbo/transform.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hbo {

Conserved conserved(const RealField& u) {
    const Grid& g = u.grid;
    Conserved out;
    SumAccumulator mass, momentum, cubic;
    for (std::size_t i = 0; i < g.size; ++i) {
        const double v = u.v[i];
        mass.add(v);
        momentum.add(v * v);
        cubic.add(v * v * v);
    }
    const double vol = cell_volume(g);
    out.I = mass.value() * vol;
    out.M = momentum.value() * vol;

    // Parseval: int ||D|^(1/2) u|^2 dx = (2L)^(-d) sum |xi| |u_hat|^2.
    SpectralField uh = forward_transform(u);
    SumAccumulator quad;
    for (std::size_t i = 0; i < g.size; ++i) {
        auto xi = frequency(g, unravel(g, i));
        double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        quad.add(r * std::norm(uh.c[i]));
    }
    double box = 1.0;
    for (int a = 0; a < g.d; ++a) box *= 2.0 * g.L;
    out.H = quad.value() / box - cubic.value() * vol / 3.0;
    return out;
}

double moment(const RealField& u, const MultiIndex& beta) {
    const Grid& g = u.grid;
    validate_multi_index(beta, g, 3);
    SumAccumulator acc;
    for (std::size_t i = 0; i < g.size; ++i) {
        auto x = point(g, unravel(g, i));
        double p = 1.0;
        for (int a = 0; a < g.d; ++a)
            for (int m = 0; m < beta[a]; ++m) p *= x[a];
        acc.add(p * u.v[i]);
    }
    return acc.value() * cell_volume(g);
}

double boundary_max(const RealField& u) {
    const Grid& g = u.grid;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size; ++i) {
        auto idx = unravel(g, i);
        bool seam = false;
        for (int a = 0; a < g.d; ++a)
            if (idx[a] == 0 || idx[a] == g.n - 1) seam = true;
        if (seam) worst = std::max(worst, std::abs(u.v[i]));
    }
    return worst;
}

std::vector<MultiIndex> moment_index_list(int d) {
    std::vector<MultiIndex> out;
    for (int order = 1; order <= 3; ++order) {
        // Lexicographically descending within each total order.
        for (int b1 = order; b1 >= 0; --b1)
            for (int b2 = order - b1; b2 >= 0; --b2) {
                int b3 = order - b1 - b2;
                MultiIndex beta{b1, b2, b3};
                bool fits = true;
                for (int a = d; a < 3; ++a)
                    if (beta[a] != 0) fits = false;
                if (fits) out.push_back(beta);
            }
    }
    return out;
}

DiagnosticsRecord diagnose(const RealField& u, double t,
                           const std::vector<double>& weight_exponents) {
    const Grid& g = u.grid;
    DiagnosticsRecord rec;
    rec.t = t;
    Conserved c = conserved(u);
    rec.I = c.I;
    rec.M = c.M;
    rec.H = c.H;
    for (const auto& beta : moment_index_list(g.d)) rec.moments[beta] = moment(u, beta);
    for (double r : weight_exponents) {
        SumAccumulator acc;
        for (std::size_t i = 0; i < g.size; ++i) {
            auto x = point(g, unravel(g, i));
            double b2 = 1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            acc.add(std::pow(b2, r) * u.v[i] * u.v[i]);
        }
        rec.weighted_norms[r] = std::sqrt(acc.value() * cell_volume(g));
    }
    rec.boundary_max = boundary_max(u);
    rec.guard_warning = rec.boundary_max > 1e-8 * max_abs(u);
    return rec;
}

std::string moment_code(const MultiIndex& beta, int d) {
    std::string code;
    for (int a = 0; a < d; ++a) code += static_cast<char>('0' + beta[a]);
    return code;
}

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

std::string diagnostics_csv_header(const DiagnosticsRecord& sample, int d) {
    std::string h = "t,I,M,H";
    for (const auto& beta : moment_index_list(d)) h += ",m_" + moment_code(beta, d);
    for (const auto& [r, v] : sample.weighted_norms) {
        (void)v;
        char buf[40];
        std::snprintf(buf, sizeof buf, ",wnorm_%g", r);
        h += buf;
    }
    h += ",boundary_max,guard";
    return h;
}

std::string diagnostics_csv_row(const DiagnosticsRecord& rec, int d) {
    std::string row = fmt(rec.t) + "," + fmt(rec.I) + "," + fmt(rec.M) + "," + fmt(rec.H);
    for (const auto& beta : moment_index_list(d)) {
        auto it = rec.moments.find(beta);
        row += "," + fmt(it == rec.moments.end() ? 0.0 : it->second);
    }
    for (const auto& [r, v] : rec.weighted_norms) {
        (void)r;
        row += "," + fmt(v);
    }
    row += "," + fmt(rec.boundary_max) + "," + (rec.guard_warning ? std::string("1") : std::string("0"));
    return row;
}

}  // namespace hbo
