#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rydsim {

using cplx = std::complex<double>;

/// Gauss–Legendre nodes and weights on [lo, hi].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureRule gauss_legendre(std::size_t order, double lo, double hi);

/// |f|² sampled pointwise.
std::vector<double> squared_magnitude(std::span<const cplx> f);

/// Trapezoidal ∫ f dz on a uniform grid.
double trapezoid(std::span<const double> f, double dz);

/// Index of the maximum, refined to sub-grid position by a parabola
/// through the three neighbouring samples. Returned in index units.
double parabolic_peak(std::span<const double> f);

/// Mask of samples where f >= max(f)/2. All false when f is identically zero.
std::vector<bool> half_max_mask(std::span<const double> f);

}  // namespace rydsim
