#include "rydsim/local_propagator.hpp"

#include <cmath>

namespace rydsim {

namespace {

constexpr double kInvFactorial[] = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};

// f[λ1, λ2] for f = φ_k; a 4-point Gauss rule over ∫_0^1 f'(λ2 + s(λ1 − λ2)) ds
// when the eigenvalues nearly coincide.
cplx divided_difference(int k, cplx l1, cplx l2, const std::array<cplx, 4>& phi1,
                        const std::array<cplx, 4>& phi2)
{
    const cplx diff = l1 - l2;
    if (std::abs(diff) > 0.1) {
        return (phi1[k] - phi2[k]) / diff;
    }
    static constexpr double kNodes[] = {0.0694318442029737, 0.3300094782075719,
                                        0.6699905217924281, 0.9305681557970263};
    static constexpr double kWeights[] = {0.1739274225687269, 0.3260725774312731,
                                          0.3260725774312731, 0.1739274225687269};
    cplx sum = 0.0;
    for (int q = 0; q < 4; ++q) {
        const auto phi = phi_functions(l2 + kNodes[q] * diff);
        // φ_k' = φ_k − k φ_{k+1}
        sum += kWeights[q] * (phi[k] - static_cast<double>(k) * phi[k + 1]);
    }
    return sum;
}

}  // namespace

std::array<cplx, 4> phi_functions(cplx z)
{
    std::array<cplx, 4> phi{};
    if (std::abs(z) < 0.5) {
        // φ_k(z) = Σ_m z^m / (m + k)!
        for (int k = 0; k < 4; ++k) {
            cplx term = kInvFactorial[k];
            cplx sum = term;
            for (int m = 1; m < 24; ++m) {
                term *= z / static_cast<double>(m + k);
                sum += term;
            }
            phi[k] = sum;
        }
        return phi;
    }
    phi[0] = std::exp(z);
    for (int k = 0; k < 3; ++k) {
        phi[k + 1] = (phi[k] - kInvFactorial[k]) / z;
    }
    return phi;
}

LocalPropagator LocalPropagator::make(double h, double omega_c, double w,
                                      const PhysicalParams& params)
{
    const cplx i(0.0, 1.0);
    const cplx a = -h * cplx(params.gamma, params.delta_p);
    const cplx b = i * (h * omega_c);
    const cplx c = b;
    const cplx d = -i * (h * w);

    // Eigenvalues; the smaller one via det/λ1 to avoid cancellation.
    const cplx tr = a + d;
    const cplx det = a * d - b * c;
    const cplx disc = std::sqrt((a - d) * (a - d) + 4.0 * b * c);
    const cplx plus = 0.5 * (tr + disc);
    const cplx minus = 0.5 * (tr - disc);
    const cplx l1 = std::abs(plus) >= std::abs(minus) ? plus : minus;
    const cplx l2 = l1 == 0.0 ? cplx(0.0) : det / l1;

    const auto phi1 = phi_functions(l1);
    const auto phi2 = phi_functions(l2);

    // f(A) = f(λ2) I + f[λ1, λ2] (A − λ2 I)
    LocalPropagator out{};
    const cplx d0 = divided_difference(0, l1, l2, phi1, phi2);
    out.f00 = phi2[0] + d0 * (a - l2);
    out.f01 = d0 * b;
    out.f10 = d0 * c;
    out.f11 = phi2[0] + d0 * (d - l2);

    const cplx d1 = divided_difference(1, l1, l2, phi1, phi2);
    out.g1p = phi2[1] + d1 * (a - l2);
    out.g1s = d1 * c;

    const cplx d2 = divided_difference(2, l1, l2, phi1, phi2);
    out.g2p = phi2[2] + d2 * (a - l2);
    out.g2s = d2 * c;
    return out;
}

}  // namespace rydsim
