#pragma once

namespace arraycap::special {

/// Unnormalized cardinal sine sin(x)/x, with sinc(0) = 1.
double sinc(double x);

/// Bessel function of the first kind, order zero.
///
/// Power series below |x| = 12, Hankel asymptotic expansion above. Absolute
/// error is below 1e-10 over the whole real line.
double bessel_j0(double x);

}  // namespace arraycap::special
