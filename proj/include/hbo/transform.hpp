#pragma once

// FFT layer with continuum normalization: forward coefficients approximate
//   F(xi_k) = \int_box e^{-i x.xi_k} f(x) dx  =  dx^d (-1)^{k1+..+kd} DFT(f)_k,
// so a well-resolved, well-localized f reproduces its line/plane Fourier
// transform on the lattice. Inverse applies the conjugate phase and 1/(2L)^d.

#include "hbo/grid.hpp"

namespace hbo {

SpectralField forward_transform(const RealField& f);

// Inverse transform; the imaginary part is dropped. Named operators keep
// coefficients Hermitian-symmetric, so the dropped part is roundoff noise.
RealField inverse_transform(const SpectralField& F);

// Full complex inverse, for realness checks and complex-valued diagnostics.
std::vector<std::complex<double>> inverse_transform_complex(const SpectralField& F);

// Max |imaginary part| of the complex inverse, relative to max |field value|.
double inverse_imag_ratio(const SpectralField& F);

}  // namespace hbo
