#include "hbo/laws.hpp"

#include "hbo/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace hbo {

namespace {

MultiIndex axis_index(int l) {
    if (l < 1 || l > 3) throw std::invalid_argument("axis index out of range for grid dimension");
    MultiIndex e{0, 0, 0};
    e[l - 1] = 1;
    return e;
}

double record_moment(const DiagnosticsRecord& rec, const MultiIndex& beta) {
    auto it = rec.moments.find(beta);
    if (it == rec.moments.end()) throw std::logic_error("trajectory record is missing a moment entry");
    return it->second;
}

}  // namespace

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear fit needs at least two matched samples");
    const double n = static_cast<double>(x.size());
    SumAccumulator sx, sy, sxx, sxy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx.add(x[i]);
        sy.add(y[i]);
        sxx.add(x[i] * x[i]);
        sxy.add(x[i] * y[i]);
    }
    const double det = n * sxx.value() - sx.value() * sx.value();
    if (det == 0.0) throw std::invalid_argument("linear fit is degenerate: all abscissae equal");
    LinearFit fit;
    fit.slope = (n * sxy.value() - sx.value() * sy.value()) / det;
    fit.intercept = (sy.value() - fit.slope * sx.value()) / n;
    SumAccumulator r2;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - fit.slope * x[i] - fit.intercept;
        r2.add(r * r);
    }
    fit.residual = std::sqrt(r2.value() / n);
    return fit;
}

double moment_identity_residual(const Trajectory& traj, int l) {
    if (traj.records.size() < 3)
        throw std::invalid_argument("moment law check needs at least three snapshots");
    const MultiIndex e = axis_index(l);
    const double m0 = record_moment(traj.records.front(), e);
    const double M0 = traj.records.front().M;
    const double slope = (l == 1) ? 0.5 * M0 : 0.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < traj.records.size(); ++j) {
        double predicted = m0 + slope * traj.times[j];
        worst = std::max(worst, std::abs(record_moment(traj.records[j], e) - predicted));
    }
    return worst;
}

CFunctionalReport c_functional(const Trajectory& traj, int l) {
    if (traj.records.size() < 2)
        throw std::invalid_argument("time-integrated moment needs at least two snapshots");
    const MultiIndex e = axis_index(l);
    const std::size_t S = traj.records.size();
    const double kron = (l == 1) ? 1.0 : 0.0;
    const double m0 = record_moment(traj.records.front(), e);

    CFunctionalReport rep;
    rep.axis = l;
    rep.times = traj.times;
    rep.duhamel.resize(S);
    rep.byparts.resize(S);

    // byparts: cumulative trapezoid of m_l(tau).
    std::vector<double> cum(S, 0.0);
    for (std::size_t j = 1; j < S; ++j) {
        double h = traj.times[j] - traj.times[j - 1];
        cum[j] = cum[j - 1] + 0.5 * h * (record_moment(traj.records[j], e) +
                                         record_moment(traj.records[j - 1], e));
    }
    for (std::size_t j = 0; j < S; ++j) {
        double t = traj.times[j];
        rep.byparts[j] = t * (1.0 - kron) * m0 + kron * cum[j];
        // duhamel: trapezoid of (t - tau) M(tau) on [0, t].
        SumAccumulator acc;
        for (std::size_t i = 1; i <= j; ++i) {
            double h = traj.times[i] - traj.times[i - 1];
            double fa = (t - traj.times[i - 1]) * traj.records[i - 1].M;
            double fb = (t - traj.times[i]) * traj.records[i].M;
            acc.add(0.5 * h * (fa + fb));
        }
        rep.duhamel[j] = t * m0 + kron * 0.5 * acc.value();
    }

    double scale = 1e-300, gap = 0.0;
    for (std::size_t j = 0; j < S; ++j) {
        scale = std::max({scale, std::abs(rep.duhamel[j]), std::abs(rep.byparts[j])});
        gap = std::max(gap, std::abs(rep.duhamel[j] - rep.byparts[j]));
    }
    rep.discrepancy = gap / scale;
    return rep;
}

double t_star(const RealField& u0) {
    Conserved c = conserved(u0);
    if (c.M <= 0.0) throw std::invalid_argument("critical time is undefined for the zero datum");
    return -4.0 * moment(u0, MultiIndex{1, 0, 0}) / c.M;
}

double time_integral_zero_crossing(const Trajectory& traj) {
    if (traj.records.size() < 2)
        throw std::invalid_argument("zero crossing needs at least two snapshots");
    const MultiIndex e{1, 0, 0};
    double prev_cum = 0.0;
    for (std::size_t j = 1; j < traj.records.size(); ++j) {
        double h = traj.times[j] - traj.times[j - 1];
        double cum = prev_cum + 0.5 * h * (record_moment(traj.records[j], e) +
                                           record_moment(traj.records[j - 1], e));
        if (prev_cum < 0.0 && cum >= 0.0) {
            double frac = prev_cum / (prev_cum - cum);  // linear interpolation
            return traj.times[j - 1] + frac * h;
        }
        if (prev_cum > 0.0 && cum <= 0.0) {
            double frac = prev_cum / (prev_cum - cum);
            return traj.times[j - 1] + frac * h;
        }
        prev_cum = cum;
    }
    throw std::runtime_error("integrated moment does not return to zero within the run");
}

}  // namespace hbo
