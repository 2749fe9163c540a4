#pragma once

// Probes for the operator machinery behind the decay theory: closed-form
// derivatives of the dispersive symbol xi_1|xi|, the frequency-derivative
// recursion for the free group, a power-law fit of d^3_xi1 u-hat on the
// singular cone, the Riesz commutator estimate, the pointwise square-function
// derivative, and a battery of exact operator identities.

#include <string>
#include <vector>

#include "hbo/grid.hpp"

namespace hbo {

// d^j_{xi_k} (xi_1 |xi|), j in 1..4, k 1-based. Homogeneous of degree 2 - j.
// Throws at xi = 0 and for unsupported j, k.
double symbol_derivative(int j, int k, const std::array<double, 3>& xi);

// F_j = d^j_{xi_k} ( e^{i t xi_1 |xi|} f-hat ), assembled by recursion in the
// phase derivatives. fk_derivs[m] must hold d^m_{xi_k} f-hat for m = 0..j,
// each computed as the transform of (-i x_k)^m f. Zero mode: phase factor 1,
// phase-derivative factors 0.
SpectralField f_operator(int j, int k, double t,
                         const std::vector<SpectralField>& fk_derivs);

// d^beta_xi u-hat = transform of (-i x)^beta u, |beta| <= 4.
// Warns on stderr when x^beta u carries weight at the box seam.
SpectralField freq_derivative(const RealField& u, const MultiIndex& beta);

// Frequency cone |xi| <= ratio * |xi_perp|, |xi| <= radius_cap, where
// xi_perp is the component transverse to axis 1.
struct ConeParams {
    double ratio = 1.1892071150027210667;  // 2^{1/4}
    double radius_cap = 0.0;               // 0: one sixteenth of xi_max
};

struct ConeProbeReport {
    double t = 0.0;
    double fitted_exponent = 0.0;  // slope of log|d^3 u-hat| vs log|xi|
    double fit_residual = 0.0;
    std::size_t sample_count = 0;
    double ratio = 0.0;
    double radius_cap = 0.0;
};

// Fits a power law to |d^3_{xi_1} u-hat| on the cone lattice points.
// Requires d >= 2 and at least 10 points inside the cone.
ConeProbeReport cone_probe(const RealField& ut, double t,
                           const ConeParams& params = {});

struct CommutatorReport {
    MultiIndex alpha{0, 0, 0};
    int p = 2;
    double lhs_norm = 0.0;    // remainder of the commutator expansion in L^2
    double rhs_factor = 0.0;  // sum_{|beta|=|alpha|} ||d^beta a||_inf ||f||_2
    double ratio = 0.0;
    bool degenerate = false;  // rhs_factor vanished (constant a); ratio set 0
    Grid grid;
};

// Measures || R_1(a d^alpha f) - a R_1 d^alpha f
//            - sum_{1<=|beta|<|alpha|} (1/beta!) d^beta a D_{R_1}^beta d^alpha f ||_2
// against the |beta| = |alpha| factor. 1 <= |alpha| <= 3, |alpha| = 3
// pure-axis only; f zero-mean; p = 2.
CommutatorReport commutator_probe(const RealField& a, const RealField& f,
                                  const MultiIndex& alpha);

// Pointwise square-function derivative of order b in (0,1):
// ( integral of |f(x)-f(y)|^2 / |x-y|^{d+2b} dy )^{1/2}, direct quadrature
// with the self-cell replaced by the local gradient bound. Quadratic cost:
// d <= 2 and n^d <= 16384 only.
RealField stein_derivative(const RealField& f, double b);

struct IdentityCheck {
    std::string name;
    double residual = 0.0;  // relative L^2 residual
    double tolerance = 0.0;
    bool pass = false;
};

struct IdentitySuiteReport {
    std::vector<IdentityCheck> checks;
    bool all_pass = false;
};

// Exact operator identities evaluated on a concentrated moment-free field:
// the Riesz decomposition of D_{R_1}^{e_k}, its derivative form, and the
// commutators [R_1, x^gamma] expanded through D_{R_1}^beta for |gamma| <= 2.
// Spectral-only identities are held to 1e-12; each coordinate multiplication
// relaxes the tolerance (1e-8, then 1e-6) for periodization error.
IdentitySuiteReport identity_suite(const Grid& g);

}  // namespace hbo
