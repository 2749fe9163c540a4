#pragma once
// Time integration of du/dt = L u - 1/2 d_x1(u^2), where L is the Fourier
// multiplier i xi_1 |xi|. Integrating-factor RK4: the linear flow is applied
// exactly through the unimodular semigroup; the quadratic term is dealiased
// by zeroing modes above a fixed fraction of the Nyquist index. The zero
// mode is untouched by the nonlinearity, so the mean is preserved exactly.
#include "hbo/diagnostics.hpp"
#include "hbo/grid.hpp"

#include <vector>

namespace hbo {

struct SolverConfig {
    double dt = 1e-3;
    double T = 1.0;
    double dealias_fraction = 2.0 / 3.0;
    int snapshot_every = 0;                // 0: aim for about 200 snapshots
    bool disable_nonlinearity = false;     // test hook: pure dispersion
    std::vector<double> weight_exponents;  // r values recorded per snapshot
};

struct Trajectory {
    std::vector<double> times;
    std::vector<RealField> states;
    std::vector<DiagnosticsRecord> records;
};

// N(u) = -1/2 d_x1(u^2), product dealiased in frequency.
RealField nonlinearity(const RealField& u, double dealias_fraction);

// One integrating-factor RK4 step. Throws "numerical blow-up ..." when the
// state turns non-finite.
RealField step_ifrk4(const RealField& u, double dt, const SolverConfig& cfg);

// Full run: snapshots at t = 0, every snapshot_every steps, and t = T, each
// carrying a DiagnosticsRecord. The boundary decay guard warns, never stops.
Trajectory evolve(const RealField& u0, const SolverConfig& cfg);

// Traveling-wave datum for d = 1: the algebraic profile 4c/(1+c^2 y^2)
// summed over box images, in closed form. On the box it translates at
// bo1d_periodic_speed(c, L) = (pi/L)/tanh(pi/(cL)), which tends to c as the
// box grows; its mass is exactly 4 pi for every c.
RealField bo1d_soliton(double c, double x0, const Grid& g);
double bo1d_periodic_speed(double c, double L);

// Translation of `reference` along x1 best matching u (spectral shift,
// correlation maximum), plus the relative L2 mismatch after that shift. d = 1.
struct ShapeMatch {
    double shift = 0.0;
    double rel_error = 0.0;
};
ShapeMatch recenter_match(const RealField& u, const RealField& reference);

}  // namespace hbo
