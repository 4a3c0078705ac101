#include "doctest.h"

#include <cmath>

#include "rydsim/errors.hpp"
#include "rydsim/propagation.hpp"
#include "rydsim/units.hpp"
#include "scenarios.hpp"

using namespace rydsim;

namespace {

PhysicalParams matter_params()
{
    PhysicalParams p;
    p.gamma = units::mhz(5.75);
    p.delta_p = 3.0;
    p.delta_c = -1.0;
    p.g_sqrt_n = 5e4;
    p.density_n = 20.0;
    return p;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

double max_abs(const std::vector<cplx>& a)
{
    double m = 0.0;
    for (const auto& x : a) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

}  // namespace

TEST_CASE("matter step: bare polarization decay")
{
    const PhysicalParams p = matter_params();
    EnsembleFields f(3);
    f.p = {1.0, cplx(0.0, 2.0), 0.5};
    const double dt = 0.37;
    matter_step(f, dt, 0.0, p);
    const cplx decay = std::exp(-cplx(p.gamma, p.delta_p) * dt);
    CHECK(std::abs(f.p[0] - decay) < 1e-14);
    CHECK(std::abs(f.p[1] - cplx(0.0, 2.0) * decay) < 1e-14);
    CHECK(std::abs(f.s[2]) == 0.0);
}

TEST_CASE("matter step: dark spinwave only rotates")
{
    const PhysicalParams p = matter_params();
    EnsembleFields f(2);
    f.s = {cplx(0.3, 0.4), cplx(-1.0, 0.0)};
    f.v = {-2.5, 0.0};
    double t = 0.0;
    for (int n = 0; n < 1000; ++n) {
        matter_step(f, 0.05, 0.0, p);
        t += 0.05;
    }
    CHECK(std::abs(f.s[0]) == doctest::Approx(0.5).epsilon(1e-12));
    const cplx expect0 = cplx(0.3, 0.4) * std::exp(cplx(0.0, -(-2.5 + 2.0) * t));
    const cplx expect1 = cplx(-1.0, 0.0) * std::exp(cplx(0.0, -2.0 * t));
    CHECK(std::abs(f.s[0] - expect0) < 1e-10);
    CHECK(std::abs(f.s[1] - expect1) < 1e-10);
}

TEST_CASE("matter step: undamped Rabi cycling conserves population")
{
    PhysicalParams p = matter_params();
    p.gamma = 0.0;
    p.delta_p = 0.0;
    p.delta_c = 0.0;
    EnsembleFields f(1);
    f.p[0] = 1.0;
    const double omega = units::mhz(2.0);
    double worst = 0.0;
    for (int n = 0; n < 20000; ++n) {
        matter_step(f, 0.02, omega, p);
        worst = std::max(worst, std::abs(std::norm(f.p[0]) + std::norm(f.s[0]) - 1.0));
    }
    CHECK(worst < 1e-4);
    // after time T the population has cycled as cos²(ΩT)
    const double T = 20000 * 0.02;
    CHECK(std::norm(f.p[0]) == doctest::Approx(std::pow(std::cos(omega * T), 2)).epsilon(1e-6));
}

TEST_CASE("field solve integrates a uniform polarization exactly")
{
    const PhysicalParams p = matter_params();
    const double dz = 0.5;
    const cplx p0(0.2, -0.1);
    const double e_in = 0.03;
    for (Direction dir : {Direction::forward, Direction::backward}) {
        EnsembleFields f(41);
        std::fill(f.p.begin(), f.p.end(), p0);
        field_solve(f, e_in, dz, p, dir);
        for (std::size_t j = 0; j < f.nodes(); ++j) {
            const double depth = dir == Direction::forward ? j * dz : (40 - j) * dz;
            const cplx expect = e_in + cplx(0.0, p.g_sqrt_n / PhysicalParams::light_speed) * p0 * depth;
            CHECK(std::abs(f.e[j] - expect) < 1e-15);
        }
    }
}

TEST_CASE("directions")
{
    CHECK(direction_of(0, Propagation::counter) == Direction::forward);
    CHECK(direction_of(1, Propagation::counter) == Direction::backward);
    CHECK(direction_of(1, Propagation::co) == Direction::forward);
}

TEST_CASE("grid checks")
{
    ScenarioConfig c = testcase::short_storage(Propagation::counter, 6.0, false);
    c.grid.dt = 0.5;
    CHECK_THROWS_AS(Engine{c}, GridError);
    c = testcase::short_storage(Propagation::counter, 6.0, false);
    c.grid.dz = 20.0;
    CHECK_THROWS_AS(Engine{c}, GridError);
    c.grid.dz = -1.0;
    CHECK_THROWS_AS(Engine{c}, ConfigError);
}

TEST_CASE("lagged coupling blows up on a dense medium and is reported")
{
    ScenarioConfig c = testcase::short_storage(Propagation::co, 6.0, false);
    c.physical.g_sqrt_n = 3e5;
    c.solver.coupling = Coupling::lagged;
    c.grid.dz = 1.0;
    c.grid.t_end = 30.0;
    CHECK_THROWS_AS(run_scenario(c), BlowUpError);
}

TEST_CASE("co-propagating ensembles evolve identically")
{
    const ScenarioConfig c = testcase::short_storage(Propagation::co, 6.0, true);
    const SnapshotSeries s = run_scenario(c);
    const auto& a = s.final_state.ensemble[0];
    const auto& b = s.final_state.ensemble[1];
    REQUIRE(max_abs(a.s) > 0.0);
    CHECK(max_abs_diff(a.s, b.s) <= 1e-12 * max_abs(a.s));
    CHECK(max_abs_diff(a.e, b.e) <= 1e-12 * max_abs(a.e) + 1e-300);
}

TEST_CASE("counter-propagating ensembles are mirror images")
{
    const ScenarioConfig c = testcase::short_storage(Propagation::counter, 6.0, true);
    const SnapshotSeries s = run_scenario(c);
    const auto& a = s.final_state.ensemble[0].s;
    const auto& b = s.final_state.ensemble[1].s;
    std::vector<cplx> mirrored(b.rbegin(), b.rend());
    CHECK(max_abs_diff(a, mirrored) <= 1e-10 * max_abs(a));
}

TEST_CASE("slow light: spinwave follows the photon field")
{
    ScenarioConfig c = testcase::short_storage(Propagation::co, 6.0, false);
    c.control.t_c = 100.0;
    c.control.hold_until = 100.0;
    c.grid.t_end = 14.0;
    const SnapshotSeries s = run_scenario(c);
    const auto& f = s.final_state.ensemble[0];
    std::size_t peak = 0;
    for (std::size_t j = 0; j < f.nodes(); ++j) {
        if (std::abs(f.s[j]) > std::abs(f.s[peak])) {
            peak = j;
        }
    }
    REQUIRE(peak > 10);
    REQUIRE(peak + 10 < f.nodes());
    const double omega = control_field(s.final_state.t, c.control);
    const double ratio = std::abs(f.s[peak]) * omega / (c.physical.g_sqrt_n * std::abs(f.e[peak]));
    CHECK(ratio == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("stored spinwave is frozen without interaction")
{
    ScenarioConfig c = testcase::short_storage(Propagation::co, 6.0, false);
    c.output.snapshot_times = {30.0, 34.0};
    const SnapshotSeries s = run_scenario(c);
    REQUIRE(s.dumps.size() == 2);
    const auto& a = s.dumps[0].ensemble[0].s;
    const auto& b = s.dumps[1].ensemble[0].s;
    REQUIRE(max_abs(a) > 0.0);
    CHECK(max_abs_diff(a, b) <= 1e-9 * max_abs(a));
}

TEST_CASE("potential stride changes the result only slightly")
{
    ScenarioConfig c = testcase::short_storage(Propagation::counter, 6.0, true);
    const SnapshotSeries one = run_scenario(c);
    c.solver.potential_stride = 4;
    const SnapshotSeries four = run_scenario(c);
    const double a = one.final_state.ensemble[0].s.empty() ? 0.0 : one.steps.back().ensemble[0].s_norm;
    const double b = four.steps.back().ensemble[0].s_norm;
    REQUIRE(a > 0.0);
    CHECK(b == doctest::Approx(a).epsilon(5e-3));
}

TEST_CASE("lagged and implicit coupling agree on a thin medium")
{
    ScenarioConfig c = testcase::short_storage(Propagation::co, 6.0, false);
    c.physical.g_sqrt_n = 2e4;
    c.control.t_c = 100.0;
    c.control.hold_until = 100.0;
    c.grid = {0.25, 0.002, 16.0};
    const SnapshotSeries implicit = run_scenario(c);
    c.solver.coupling = Coupling::lagged;
    const SnapshotSeries lagged = run_scenario(c);
    double peak = 0.0;
    double worst = 0.0;
    for (std::size_t n = 0; n < implicit.steps.size(); n += 50) {
        const cplx a = implicit.steps[n].ensemble[0].e_exit;
        const cplx b = lagged.steps[n].ensemble[0].e_exit;
        peak = std::max(peak, std::abs(a));
        worst = std::max(worst, std::abs(a - b));
    }
    REQUIRE(peak > 0.0);
    CHECK(worst <= 0.02 * peak);
}

TEST_CASE("interaction onset holds the potential at zero")
{
    ScenarioConfig c = testcase::short_storage(Propagation::co, 6.0, true);
    c.interaction.onset = 30.0;
    const SnapshotSeries s = run_scenario(c);
    for (const auto& r : s.steps) {
        if (r.t < 30.0 - 1e-9) {
            CHECK(r.ensemble[0].v_max_abs == 0.0);
        }
    }
    CHECK(s.steps.back().ensemble[0].v_max_abs > 0.0);
}
