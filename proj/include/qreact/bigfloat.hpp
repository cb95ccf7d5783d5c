// Quad-precision scalar used for monomial interpolation coefficients.
// Monomial terms of the exact phase decomposition reach ~1e14 at N=32 with
// massive cancellation, so double (and 80-bit long double) storage breaks the
// 1e-8 residual contract; __float128 arithmetic keeps residuals near 1e-19.
#pragma once

namespace qreact {

using Coeff = __float128;

inline double to_double(Coeff x) { return static_cast<double>(x); }
inline Coeff qabs(Coeff x) { return x < 0 ? -x : x; }

}  // namespace qreact
