#include "doctest.h"

#include <cmath>
#include <numbers>

#include "rydsim/core_model.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/units.hpp"

using namespace rydsim;

namespace {

ControlSchedule schedule()
{
    return {units::mhz(2.0), 40.0, 10.0, 70.0, units::mhz(3.0), 0.5};
}

// Smallest g√N with c Ω² τ_p / (g√N)² ≤ L/2, found by bisection on the
// compressed length itself rather than the closed form.
double coupling_by_bisection(double length, double tau_p, double omega)
{
    auto fits = [&](double g) {
        return PhysicalParams::light_speed * omega * omega / (g * g) * tau_p <= 0.5 * length;
    };
    double lo = 1.0;
    double hi = 1e9;
    for (int i = 0; i < 200; ++i) {
        const double mid = std::sqrt(lo * hi);
        (fits(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

TEST_CASE("unit conventions")
{
    CHECK(units::mhz(1.0) == doctest::Approx(2.0 * std::numbers::pi));
    CHECK(units::factor_to_canonical("MHz", units::Dimension::frequency) ==
          units::factor_to_canonical("MHz_x2pi", units::Dimension::frequency));
    CHECK(units::factor_to_canonical("GHz*um^6", units::Dimension::c6) ==
          doctest::Approx(2.0 * std::numbers::pi * 1e3));
    CHECK(units::factor_to_canonical("cm^-3", units::Dimension::density) == doctest::Approx(1e-12));
    CHECK(units::factor_to_canonical("ns", units::Dimension::time) == doctest::Approx(1e-3));
    CHECK_THROWS_AS(units::factor_to_canonical("MHz", units::Dimension::length), DomainError);
    CHECK_THROWS_AS(units::factor_to_canonical("furlong", units::Dimension::length), DomainError);
}

TEST_CASE("control field switch-off values")
{
    const ControlSchedule s = schedule();
    CHECK(control_field(s.t_c - 10.0 * s.tau_c, s) ==
          doctest::Approx(s.omega_in).epsilon(1e-8));
    CHECK(control_field(s.t_c, s) == 0.0);
    // tanh(1) evaluated independently of the implementation
    const double tanh1 = (std::exp(2.0) - 1.0) / (std::exp(2.0) + 1.0);
    CHECK(control_field(s.t_c - s.tau_c, s) == doctest::Approx(tanh1 * s.omega_in).epsilon(1e-12));
    CHECK(tanh1 == doctest::Approx(0.76159).epsilon(1e-5));
}

TEST_CASE("control field is zero on the hold and continuous everywhere")
{
    const ControlSchedule s = schedule();
    for (double t = s.t_c; t <= s.hold_until; t += 0.25) {
        CHECK(control_field(t, s) == 0.0);
    }
    const double dt = 1e-3;
    double worst = 0.0;
    for (double t = 0.0; t < 100.0; t += dt) {
        const double a = control_field(t, s);
        const double b = control_field(t + dt, s);
        CHECK(a >= 0.0);
        worst = std::max(worst, std::abs(b - a));
    }
    // steepest slope is Ω_out/τ_out at the retrieval kink
    CHECK(worst <= 1.01 * s.omega_out / s.tau_out * dt);
    CHECK(control_field(s.hold_until + 3.0, s) ==
          doctest::Approx(s.omega_out * std::tanh(3.0 / s.tau_out)));
}

TEST_CASE("control field rate flags the clamp kinks")
{
    const ControlSchedule s = schedule();
    CHECK(control_field_rate(s.t_c, s).one_sided);
    CHECK(control_field_rate(s.hold_until, s).one_sided);
    CHECK_FALSE(control_field_rate(s.t_c - 1.0, s).one_sided);
    CHECK(control_field_rate(50.0, s).value == 0.0);
    const double t = s.t_c - 3.0;
    const double h = 1e-5;
    const double fd = (control_field(t + h, s) - control_field(t - h, s)) / (2.0 * h);
    CHECK(control_field_rate(t, s).value == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("input pulse boundary profile")
{
    const PulseSpec p{units::mhz(0.01), 12.0, 7.0};
    const Geometry g{300.0, 6.0, 2.0, Propagation::counter};
    CHECK(input_pulse(p.t_p, 0.0, p, g) == p.omega_p);
    CHECK(input_pulse(p.t_p + p.tau_p, 0.0, p, g) == doctest::Approx(p.omega_p / std::exp(1.0)));
    CHECK(input_pulse(p.t_p - p.tau_p, 0.0, p, g) == doctest::Approx(p.omega_p / std::exp(1.0)));
    CHECK(std::abs(input_pulse(p.t_p, 1.0, p, g)) < 1e-15);
    CHECK_THROWS_AS(input_pulse(p.t_p, 1.5, p, g), DomainError);
    CHECK_THROWS_AS(input_pulse(p.t_p, -0.1, p, g), DomainError);

    // Simpson over ±10 τ_p against Ω τ_p √π
    const int n = 20000;
    const double a = p.t_p - 10.0 * p.tau_p;
    const double b = p.t_p + 10.0 * p.tau_p;
    const double h = (b - a) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += w * input_pulse(a + i * h, 0.0, p, g);
    }
    sum *= h / 3.0;
    CHECK(sum == doctest::Approx(p.omega_p * p.tau_p * std::sqrt(std::numbers::pi)).epsilon(1e-6));
}

TEST_CASE("default coupling")
{
    const Geometry g{100.0, 6.0, 2.0, Propagation::counter};
    const PulseSpec p{units::mhz(0.01), 10.0, 5.0};
    ControlSchedule s{units::mhz(1.5), 100.0, 1.0, 100.0, 0.0, 1.0};
    PhysicalParams ph;

    const double oracle = coupling_by_bisection(g.length, p.tau_p, s.omega_in);
    CHECK(required_coupling(g, s, p) == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(oracle == doctest::Approx(5.16e4).epsilon(2e-3));
    CHECK(default_coupling(ph, g, s, p) >= 5.8e4);

    ControlSchedule doubled = s;
    doubled.omega_in *= 2.0;
    CHECK(required_coupling(g, doubled, p) ==
          doctest::Approx(2.0 * required_coupling(g, s, p)).epsilon(1e-12));

    s.omega_in = 0.0;
    CHECK(default_coupling(ph, g, s, p) == doctest::Approx(units::mhz(1e4)));
}

TEST_CASE("stopping coupling brings the peak to the requested depth")
{
    const ControlSchedule s{units::mhz(2.0), 45.0, 10.0, 80.0, 0.0, 1.0};
    const PulseSpec p{units::mhz(0.01), 12.0, 7.0};
    const double g = stopping_coupling(s, p, 150.0);
    // integrate v_g(t) = c Ω(t)² / g² with the midpoint rule
    const int n = 200000;
    const double h = (s.t_c - p.t_p) / n;
    double depth = 0.0;
    for (int i = 0; i < n; ++i) {
        depth += group_velocity(control_field(p.t_p + (i + 0.5) * h, s), g) * h;
    }
    CHECK(depth == doctest::Approx(150.0).epsilon(1e-6));
    CHECK_THROWS_AS(stopping_coupling(s, p, 0.0), DomainError);
}

TEST_CASE("grid cell count")
{
    GridSpec g{0.2, 0.02, 60.0};
    CHECK(g.cells(300.0) == 1500);
    CHECK(g.cells(100.0) == 500);
    CHECK(g.cells(335.1) == 1676);
    CHECK(g.spacing(335.1) == doctest::Approx(335.1 / 1676));
    CHECK(g.steps() == 3000);
}
