#pragma once

// Fourier multiplier calculus on the periodic lattice.
//
// A Multiplier is a symbol xi -> m(xi) evaluated at the signed frequency
// lattice, plus an explicit zero-mode value (homogeneous symbols have no
// limit at xi = 0, so the zero mode is always a stated policy, never an
// evaluation). Named operators keep real fields real: on self-paired modes
// (every component 0 or -n/2, which have no distinct conjugate partner) the
// symbol is replaced by its real part.

#include <functional>

#include "hbo/grid.hpp"

namespace hbo {

struct Multiplier {
    std::function<std::complex<double>(const std::array<double, 3>&)> symbol;
    std::complex<double> zero_mode{0.0, 0.0};
};

// Multiplies coefficient-wise; the zero mode uses zero_mode, not the symbol.
// Throws on a non-finite symbol value at any lattice point.
SpectralField apply_multiplier(const SpectralField& F, const Multiplier& m);

// forward -> apply (with the self-paired realness fix) -> inverse.
RealField apply_to_real(const RealField& f, const Multiplier& m);

// Riesz transform R_l, symbol -i xi_l / |xi|, zero mode 0. l is 1-based.
RealField riesz(const RealField& f, int l);
SpectralField riesz_spectral(const SpectralField& F, int l);

// |xi|^s. Zero mode 0. For s < 0 the input must be zero-mean
// (|mean| <= 1e-10 * rms), else throws
// "negative-order operator on non-zero-mean field".
RealField fractional(const RealField& f, double s);

// <xi>^s = (1 + |xi|^2)^{s/2}. Zero mode 1.
RealField bessel(const RealField& f, double s);

// Free evolution e^{i t xi_1 |xi|}, zero mode 1 (unimodular, group property).
RealField semigroup(const RealField& f, double t);
Multiplier semigroup_multiplier(double t);

// D_{R_l}^beta: symbol i^{-|beta|} d^beta_xi ( -i xi_l / |xi| ).
// Closed forms: any beta with |beta| <= 2, pure-axis beta with |beta| = 3.
// Homogeneous of degree -|beta|: input must be zero-mean.
RealField d_riesz_beta(const RealField& f, int l, const MultiIndex& beta);
// Symbol value at a nonzero frequency (exposed for oracle tests).
std::complex<double> d_riesz_beta_symbol(int l, const MultiIndex& beta,
                                         const std::array<double, 3>& xi);

// Spatial derivative d^alpha (spectral, symbol (i xi)^alpha).
RealField derivative(const RealField& f, const MultiIndex& alpha);
SpectralField derivative_spectral(const SpectralField& F, const MultiIndex& alpha);

// Throws unless |mean| <= tol_ratio * rms of samples.
void require_zero_mean(const RealField& f, const char* what, double tol_ratio = 1e-10);

// Symbol evaluated over the whole lattice with the self-paired realness fix;
// entry 0 is the zero mode. For precomputing stepping tables.
std::vector<std::complex<double>> multiplier_table(const Grid& g, const Multiplier& m);

}  // namespace hbo
