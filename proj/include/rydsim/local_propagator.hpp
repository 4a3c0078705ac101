#pragma once

#include <array>
#include <complex>

#include "rydsim/core_model.hpp"

namespace rydsim {

using cplx = std::complex<double>;

/// φ_0..φ_3 at z, with φ_0 = e^z and φ_{k+1}(z) = (φ_k(z) − 1/k!)/z.
/// Series evaluation near the origin keeps small |z| free of cancellation.
std::array<cplx, 4> phi_functions(cplx z);

/// Per-cell propagator for the matter pair (P, S) over one step h, with
/// generator
///
///     M = [ −(γ + iΔp)   iΩ_c ]
///         [   iΩ_c      −iW   ],   W = V + Δp + Δc,
///
/// and a field drive b(t) = (i g√N E(t), 0) that varies linearly over the
/// step. Stores φ0(hM), and the first columns of φ1(hM), φ2(hM).
struct LocalPropagator {
    // φ0(hM) = e^{hM}, row-major
    cplx f00, f01, f10, f11;
    // φ1(hM) e_P
    cplx g1p, g1s;
    // φ2(hM) e_P
    cplx g2p, g2s;

    static LocalPropagator make(double h, double omega_c, double w, const PhysicalParams& params);
};

}  // namespace rydsim
