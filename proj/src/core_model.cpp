#include "rydsim/core_model.hpp"

#include <algorithm>
#include <cmath>

#include "rydsim/errors.hpp"

namespace rydsim {

double PhysicalParams::coupling_g() const { return g_sqrt_n / std::sqrt(density_n); }

std::size_t GridSpec::cells(double length) const
{
    // Guard against ceil(300/0.2) landing on 1501 from rounding.
    const double ratio = length / dz;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) < 1e-9 * std::max(1.0, nearest)) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::ceil(ratio));
}

double GridSpec::spacing(double length) const
{
    return length / static_cast<double>(cells(length));
}

std::size_t GridSpec::steps() const
{
    const double ratio = t_end / dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) < 1e-9 * std::max(1.0, nearest)) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::ceil(ratio));
}

double control_field(double t, const ControlSchedule& sched)
{
    if (t < sched.t_c) {
        return sched.omega_in * std::tanh((sched.t_c - t) / sched.tau_c);
    }
    if (t <= sched.hold_until) {
        return 0.0;
    }
    return sched.omega_out * std::tanh((t - sched.hold_until) / sched.tau_out);
}

RabiRate control_field_rate(double t, const ControlSchedule& sched)
{
    auto sech2 = [](double x) {
        const double c = std::cosh(x);
        return 1.0 / (c * c);
    };
    if (t < sched.t_c) {
        return {-sched.omega_in / sched.tau_c * sech2((sched.t_c - t) / sched.tau_c), false};
    }
    if (t == sched.t_c) {
        return {-sched.omega_in / sched.tau_c, sched.omega_in != 0.0};
    }
    if (t < sched.hold_until) {
        return {0.0, false};
    }
    if (t == sched.hold_until) {
        return {0.0, sched.omega_out != 0.0};
    }
    return {sched.omega_out / sched.tau_out * sech2((t - sched.hold_until) / sched.tau_out),
            false};
}

double input_pulse(double t, double rho, const PulseSpec& spec, const Geometry& geom)
{
    const double radius = 0.5 * geom.diameter;
    if (!(rho >= 0.0) || rho > radius * (1.0 + 1e-12)) {
        throw DomainError("input_pulse: rho = " + std::to_string(rho) +
                          " outside [0, d/2 = " + std::to_string(radius) + "]");
    }
    const double x = (t - spec.t_p) / spec.tau_p;
    const double transverse =
        rho == 0.0 ? 1.0 : std::cyl_bessel_j(0.0, 2.0 * PulseSpec::nu_01 * rho / geom.diameter);
    return spec.omega_p * std::exp(-x * x) * transverse;
}

double required_coupling(const Geometry& geom, const ControlSchedule& sched,
                         const PulseSpec& spec)
{
    const double omega = sched.max_rabi();
    // v_g τ_p = c Ω² τ_p / (g²N) = L/2
    return std::sqrt(PhysicalParams::light_speed * omega * omega * spec.tau_p /
                     (0.5 * geom.length));
}

double default_coupling(const PhysicalParams& /*params*/, const Geometry& geom,
                        const ControlSchedule& sched, const PulseSpec& spec)
{
    if (sched.max_rabi() == 0.0) {
        return kDefaultCoupling;
    }
    return std::max(kDefaultCoupling, required_coupling(geom, sched, spec));
}

double stopping_coupling(const ControlSchedule& sched, const PulseSpec& spec,
                         double stop_depth)
{
    if (!(stop_depth > 0.0)) {
        throw DomainError("stopping_coupling: stop depth must be positive");
    }
    // ∫_{t_p}^{t_c} Ω_in² tanh²((t_c − t)/τ_c) dt = Ω_in² (T − τ_c tanh(T/τ_c)), T = t_c − t_p
    const double span = sched.t_c - spec.t_p;
    if (!(span > 0.0)) {
        throw DomainError("stopping_coupling: pulse peak arrives after switch-off");
    }
    const double area = sched.omega_in * sched.omega_in *
                        (span - sched.tau_c * std::tanh(span / sched.tau_c));
    return std::sqrt(PhysicalParams::light_speed * area / stop_depth);
}

double group_velocity(double omega_c, double g_sqrt_n)
{
    return PhysicalParams::light_speed * omega_c * omega_c / (g_sqrt_n * g_sqrt_n);
}

}  // namespace rydsim
