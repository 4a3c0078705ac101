#include "rydsim/linear_response.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "rydsim/errors.hpp"

namespace rydsim {

namespace {

void require_gamma(const PhysicalParams& params)
{
    if (!(params.gamma > 0.0)) {
        throw DomainError("susceptibility needs gamma > 0");
    }
}

// Im χ − 1/2 expressed through the effective detuning X, so that no
// division by the Rydberg denominator is needed near its pole.
double half_crossing(double delta, const PhysicalParams& params, double omega_c)
{
    const double w = params.two_photon_detuning() - delta;
    const double x = (params.delta_p - delta) * w - omega_c * omega_c;
    return params.gamma * params.gamma * w * w - x * x;
}

}  // namespace

std::complex<double> susceptibility(double delta, double v, const PhysicalParams& params,
                                    double omega_c)
{
    require_gamma(params);
    const double w = v + params.two_photon_detuning() - delta;
    const double g = params.gamma;
    const double omega2 = omega_c * omega_c;
    if (omega2 == 0.0) {
        return std::complex<double>(0.0, g) / std::complex<double>(g, params.delta_p - delta);
    }
    if (w == 0.0) {
        return 0.0;
    }
    // multiply through by w to keep the expression finite near the pole
    const std::complex<double> denom(g * w, (params.delta_p - delta) * w - omega2);
    return std::complex<double>(0.0, g * w) / denom;
}

std::vector<double> peak_positions(double v, const PhysicalParams& params, double omega_c)
{
    const double a = params.delta_p;
    const double b = v + params.two_photon_detuning();
    // δ² − (a + b)δ + ab − Ω² = 0
    const double sum = a + b;
    const double disc = std::sqrt((a - b) * (a - b) + 4.0 * omega_c * omega_c);
    if (disc == 0.0) {
        return {0.5 * sum};
    }
    const double q = 0.5 * (sum + std::copysign(disc, sum == 0.0 ? 1.0 : sum));
    double r1 = q;
    double r2 = q != 0.0 ? (a * b - omega_c * omega_c) / q : 0.5 * (sum - disc);
    if (r1 > r2) {
        std::swap(r1, r2);
    }
    return {r1, r2};
}

EitWindow eit_window_and_vg(const PhysicalParams& params, double omega_c)
{
    require_gamma(params);
    if (!(omega_c > 0.0)) {
        throw DomainError("EIT window needs a control field Omega_c > 0");
    }
    EitWindow out;
    out.group_velocity = group_velocity(omega_c, params.g_sqrt_n);

    const double g = params.gamma;
    if (params.delta_p == 0.0 && params.two_photon_detuning() == 0.0) {
        out.half_width = 0.5 * (std::sqrt(g * g + 4.0 * omega_c * omega_c) - g);
        return out;
    }
    // f > 0 where Im χ > 1/2; find the first sign change above δ = 0.
    const double reach = std::abs(params.delta_p) + std::abs(params.two_photon_detuning()) +
                         10.0 * (g + omega_c);
    const double step = std::min(g, omega_c) / 256.0;
    double lo = 0.0;
    double f_lo = half_crossing(lo, params, omega_c);
    for (double hi = step; hi <= reach; hi += step) {
        const double f_hi = half_crossing(hi, params, omega_c);
        if ((f_lo > 0.0) != (f_hi > 0.0)) {
            for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double f_mid = half_crossing(mid, params, omega_c);
                if ((f_mid > 0.0) == (f_lo > 0.0)) {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
            }
            out.half_width = 0.5 * (lo + hi);
            return out;
        }
        lo = hi;
        f_lo = f_hi;
    }
    out.half_width = 0.0;
    return out;
}

SusceptibilityCurve susceptibility_curve(const PhysicalParams& params, double omega_c, double v,
                                         double lo, double hi, std::size_t points)
{
    SusceptibilityCurve curve{params, omega_c, v, {}, {}};
    curve.delta.reserve(points);
    curve.chi.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double frac = points > 1 ? static_cast<double>(i) / static_cast<double>(points - 1)
                                       : 0.0;
        const double delta = lo + (hi - lo) * frac;
        curve.delta.push_back(delta);
        curve.chi.push_back(susceptibility(delta, v, params, omega_c));
    }
    return curve;
}

void write_curve_csv(const SusceptibilityCurve& curve, std::ostream& out)
{
    char line[160];
    std::snprintf(line, sizeof line,
                  "# gamma=%.17g delta_p=%.17g delta_c=%.17g omega_c=%.17g v=%.17g\n",
                  curve.params.gamma, curve.params.delta_p, curve.params.delta_c, curve.omega_c,
                  curve.v);
    out << line << "delta,re_chi,im_chi\n";
    for (std::size_t i = 0; i < curve.delta.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", curve.delta[i],
                      curve.chi[i].real(), curve.chi[i].imag());
        out << line;
    }
}

}  // namespace rydsim
