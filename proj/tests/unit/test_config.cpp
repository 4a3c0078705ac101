#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "rydsim/config.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/presets.hpp"
#include "rydsim/units.hpp"

using namespace rydsim;
using nlohmann::json;

namespace {

bool has_path(const std::vector<Diagnostic>& diags, const std::string& path)
{
    return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.path == path; });
}

std::vector<Diagnostic> parse_errors(const json& doc)
{
    try {
        config_from_json(doc);
    } catch (const ConfigError& e) {
        return e.diagnostics();
    }
    return {};
}

}  // namespace

TEST_CASE("every preset is valid and round-trips bit-exactly")
{
    REQUIRE(preset_ids().size() == 14);
    for (const auto& id : preset_ids()) {
        CAPTURE(id);
        const Preset p = make_preset(id);
        CHECK(p.config.preset == id);
        CHECK(validate(p.config).empty());
        const ScenarioConfig back = config_from_json(json::parse(canonical_config_text(p.config)));
        CHECK(back == p.config);
        CHECK(canonical_config_text(back) == canonical_config_text(p.config));
    }
    CHECK_THROWS_AS(make_preset("fig9z"), ConfigError);
}

TEST_CASE("preset audit tables reproduce the preset values")
{
    const auto keys = override_keys();
    for (const auto& id : preset_ids()) {
        CAPTURE(id);
        const Preset p = make_preset(id);
        CHECK_FALSE(p.audit.empty());
        for (const auto& entry : p.audit) {
            CAPTURE(entry.path);
            CHECK_FALSE(entry.origin.empty());
            if (std::find(keys.begin(), keys.end(), entry.path) == keys.end()) {
                continue;
            }
            ScenarioConfig c = p.config;
            apply_override(c, entry.path, entry.value);
            CHECK(c == p.config);
        }
    }
}

TEST_CASE("preset values taken from the figure captions")
{
    const ScenarioConfig a = make_preset("fig3a1").config;
    CHECK(a.physical.gamma == doctest::Approx(units::mhz(5.75)));
    CHECK(a.physical.c6 == doctest::Approx(units::ghz(-2.3e5)));
    CHECK(a.physical.density_n == doctest::Approx(20.0));
    CHECK(a.geometry.length == 300.0);
    CHECK(a.geometry.diameter == 2.0);
    CHECK(a.control.t_c == 45.0);
    CHECK(a.control.tau_c == 10.0);
    CHECK(a.pulse.tau_p == 7.0);
    CHECK(a.pulse.t_p == 12.0);
    CHECK(a.pulse.omega_p == doctest::Approx(units::mhz(0.01)));
    CHECK(a.geometry.mode == Propagation::counter);

    const ScenarioConfig b = make_preset("fig3b2").config;
    CHECK(b.geometry.mode == Propagation::co);
    CHECK(b.control.t_c == 30.0);

    CHECK(make_preset("fig2a").config.physical.delta_p == doctest::Approx(5.0 * units::mhz(5.75)));
    CHECK(make_preset("fig2c").config.physical.delta_p == doctest::Approx(-5.0 * units::mhz(5.75)));
    CHECK(make_preset("s5a").config.physical.c6 == 0.0);
    CHECK(make_preset("s2").config.interaction.law == InteractionLaw::dipole);
}

TEST_CASE("fine grid switch")
{
    ScenarioConfig c = make_preset("fig4a").config;
    apply_paper_grid(c);
    CHECK(c.grid.dz == kPaperDz);
    CHECK(c.grid.dt == kPaperDt);
}

TEST_CASE("quantities need units")
{
    CHECK(has_path(parse_errors({{"physical", {{"gamma", 5.75}}}}), "physical.gamma"));
    CHECK(has_path(parse_errors({{"physical", {{"gamma", "5.75 um"}}}}), "physical.gamma"));
    CHECK(has_path(parse_errors({{"physical", {{"gamma", {{"value", 1.0}}}}}}), "physical.gamma"));
    CHECK(has_path(parse_errors({{"physical", {{"colour", "5 MHz"}}}}), "physical.colour"));
    CHECK(has_path(parse_errors({{"geometry", {{"mode", "sideways"}}}}), "geometry.mode"));

    json doc = config_to_json(make_preset("fig3a1").config);
    doc["physical"]["gamma"] = "5.75 MHz";
    doc["geometry"]["length"] = {{"value", 0.3}, {"unit", "mm"}};
    const ScenarioConfig c = config_from_json(doc);
    CHECK(c.physical.gamma == doctest::Approx(units::mhz(5.75)).epsilon(1e-15));
    CHECK(c.geometry.length == doctest::Approx(300.0));
    CHECK(doc["interaction"]["kernel_tolerance"].is_number());
}

TEST_CASE("validation reports every violated field")
{
    ScenarioConfig c = make_preset("fig3a1").config;
    c.geometry.separation = 1.0;
    c.grid.dt = -1.0;
    c.physical.gamma = 0.0;
    const auto diags = validate(c);
    CHECK(has_path(diags, "geometry.separation"));
    CHECK(has_path(diags, "grid.dt"));
    CHECK(has_path(diags, "physical.gamma"));

    ScenarioConfig slow = make_preset("fig3a1").config;
    slow.physical.g_sqrt_n = 5.0 * slow.control.omega_in;
    CHECK_FALSE(validate(slow).empty());

    ScenarioConfig nan = make_preset("fig3a1").config;
    nan.pulse.t_p = std::nan("");
    CHECK(has_path(validate(nan), "pulse.t_p"));

    // no interaction: overlapping cylinders are harmless
    ScenarioConfig free = make_preset("s5a").config;
    free.geometry.separation = 0.0;
    CHECK(validate(free).empty());

    const json j = diagnostics_to_json(diags);
    REQUIRE(j.is_array());
    CHECK(j[0].contains("path"));
    CHECK(j[0].contains("reason"));
}

TEST_CASE("overrides")
{
    ScenarioConfig c = make_preset("fig3a1").config;
    apply_assignment(c, "control.tau_c=0.5 ms");
    CHECK(c.control.tau_c == doctest::Approx(500.0));
    apply_override(c, "physical.c6", "-2.3e5 GHz*um^6");
    CHECK(c.physical.c6 == doctest::Approx(units::ghz(-2.3e5)));
    apply_override(c, "physical.delta_p", "3");
    CHECK(c.physical.delta_p == 3.0);
    apply_override(c, "geometry.mode", "co");
    CHECK(c.geometry.mode == Propagation::co);
    apply_override(c, "solver.potential_stride", "3");
    CHECK(c.solver.potential_stride == 3);

    const double g = c.physical.g_sqrt_n;
    apply_override(c, "physical.density_n", "8e13 cm^-3");
    CHECK(c.physical.density_n == doctest::Approx(80.0));
    CHECK(c.physical.g_sqrt_n == doctest::Approx(2.0 * g));
    CHECK(c.physical.coupling_g() == doctest::Approx(g / std::sqrt(20.0)));

    CHECK_THROWS_AS(apply_override(c, "physical.nope", "1"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "grid.dz", "1 MHz"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "grid.dz", "abc"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "output.dump_stride", "2.5"), ConfigError);
    CHECK_THROWS_AS(apply_assignment(c, "grid.dz"), ConfigError);
}

TEST_CASE("config hash")
{
    const ScenarioConfig c = make_preset("fig4b").config;
    const std::string h = config_hash(c);
    CHECK(h.size() == 16);
    CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(config_hash(make_preset("fig4b").config) == h);
    ScenarioConfig d = c;
    d.grid.dt *= 0.5;
    CHECK(config_hash(d) != h);
    // FNV-1a 64 reference values
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("inset curves")
{
    const auto curves = inset_curves();
    REQUIRE(curves.size() == 4);
    const double gamma = units::mhz(5.75);
    int shifted = 0;
    for (const auto& c : curves) {
        CHECK(std::abs(std::abs(c.params.delta_p) - 5.0 * gamma) < 1e-9);
        if (c.v != 0.0) {
            ++shifted;
            CHECK(c.v == doctest::Approx(-c.omega_c * c.omega_c / (5.0 * gamma)));
        }
    }
    CHECK(shifted == 2);
}
