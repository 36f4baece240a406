#pragma once

#include "fracsys/grid.hpp"

namespace fracsys {

// Fourier-multiplier operators on the periodic box.  All are pure: inputs are
// untouched, outputs freshly allocated; safe to call concurrently.

// (-Delta)^s u: multiplier |xi|^{2s}; the xi = 0 mode maps to 0 and the
// Nyquist mode carries |xi_Nyq|^{2s} like any other (keeps the operator
// self-adjoint on the grid).
Field frac_laplacian(const Field& u, double s);

// ((-Delta)^s + 1) u.
Field apply_L(const Field& u, double s);

// ((-Delta)^s + 1)^{-1} u: exact inverse of apply_L on the discrete space.
Field apply_L_inverse(const Field& u, double s);

// ((-Delta)^s + 1)^{±1/2} u.
Field apply_L_sqrt(const Field& u, double s);
Field apply_L_inv_sqrt(const Field& u, double s);

// Spectral partial derivative along axis (0-based); Nyquist mode of the odd
// multiplier is zeroed.
Field spectral_derivative(const Field& u, int axis);

// u(. + shift) along axis via phase rotation; the Nyquist mode is rotated by
// cos(xi a) to stay real.
Field spectral_shift(const Field& u, int axis, double shift);

// Translate the field so its peak sits at the origin node (argmax plus a
// clamped 3-point parabolic sub-grid correction, applied as a phase shift).
Field recenter_peak(const Field& u);

// H^s-type quadratic form int (1 + |xi|^{2s}) |u^|^2 via Parseval.
double hs_energy(const Field& u, double s);

// Sobolev quotient  int (1+|xi|^{2s})|u^|^2  /  (int |u|^{2p})^{1/p}.
double sobolev_quotient(const Field& u, double s, double p);

}  // namespace fracsys
