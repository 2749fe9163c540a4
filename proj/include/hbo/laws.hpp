#pragma once
// Integral laws of the flow: the linear-in-time drift of the first x1 moment
// with slope M(u0)/2, the time-integrated moment functional evaluated by two
// independent routes, and the critical time where the integrated moment
// returns to zero.
#include "hbo/grid.hpp"
#include "hbo/solver.hpp"

#include <vector>

namespace hbo {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms of fit residuals
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// max over snapshots of |m_l(t) - m_l(0) - delta_{1,l} (t/2) M(u0)|.
double moment_identity_residual(const Trajectory& traj, int l);

// C_l(t) divided by -i, evaluated two ways over the snapshot grid
// (trapezoid in time):
//   duhamel:  t m_l(0) + delta_{1,l} 1/2 int_0^t (t - tau) M(tau) dtau
//   byparts:  t (1 - delta_{1,l}) m_l(0) + delta_{1,l} int_0^t m_l(tau) dtau
struct CFunctionalReport {
    int axis = 1;
    std::vector<double> times;
    std::vector<double> duhamel;
    std::vector<double> byparts;
    double discrepancy = 0.0;  // max |duhamel - byparts| / max(1e-300, scale)
};
CFunctionalReport c_functional(const Trajectory& traj, int l = 1);

// -4 m_1(u0) / M(u0); throws on zero datum.
double t_star(const RealField& u0);

// First positive zero of t -> int_0^t m_1(tau) dtau along the trajectory
// (cumulative trapezoid, linear interpolation at the sign change).
double time_integral_zero_crossing(const Trajectory& traj);

}  // namespace hbo
