#include "rydsim/presets.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>

#include "rydsim/errors.hpp"

namespace rydsim {

namespace {

using units::ghz;
using units::mhz;

constexpr double kGammaMhz = 5.75;

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Builder {
    Preset preset;

    Builder(std::string id, std::string description)
    {
        preset.id = std::move(id);
        preset.description = std::move(description);
        ScenarioConfig& c = preset.config;
        c.preset = preset.id;
        c.physical.gamma = mhz(kGammaMhz);
        c.physical.density_n = units::per_cm3(2e13);
        c.physical.c6 = ghz(-2.3e5);
        c.geometry.diameter = 2.0;
        c.pulse.omega_p = mhz(0.01);
        c.grid.dz = kDeskDz;
        c.grid.dt = kDeskDt;
        c.output.dump_stride = 50;
        note("physical.gamma", "5.75 MHz", "fig2 caption");
        note("physical.c6", "-2.3e5 GHz*um^6", "fig2 caption");
        note("physical.density_n", "2e13 cm^-3", "fig2 caption");
        note("geometry.diameter", "2 um", "fig2 caption");
        note("pulse.omega_p", "0.01 MHz", "fig2 caption");
    }

    Builder& note(std::string path, std::string value, std::string origin)
    {
        auto& audit = preset.audit;
        auto it = std::find_if(audit.begin(), audit.end(),
                               [&](const AuditEntry& e) { return e.path == path; });
        if (it != audit.end()) {
            *it = {std::move(path), std::move(value), std::move(origin)};
        } else {
            audit.push_back({std::move(path), std::move(value), std::move(origin)});
        }
        return *this;
    }

    ScenarioConfig& cfg() { return preset.config; }
};

// Pulses stopped at the middle of the ensembles; g√N chosen so the
// switch-off brings the pulse peak to rest at L/2.
void stop_at_middle(Builder& b)
{
    ScenarioConfig& c = b.cfg();
    c.physical.g_sqrt_n = stopping_coupling(c.control, c.pulse, 0.5 * c.geometry.length);
    b.note("physical.g_sqrt_n", num(c.physical.g_sqrt_n) + " rad/us",
           "derived: stop depth L/2");
}

// Storage only: hold to the end, one snapshot at t_s and a sparse dump
// window over the rest of the hold.
void storage_window(Builder& b, double t_end)
{
    ScenarioConfig& c = b.cfg();
    const double t_s = c.control.t_c + 2.0 * c.control.tau_c;
    c.control.hold_until = t_end;
    c.grid.t_end = t_end;
    c.output.snapshot_times = {t_s};
    c.output.dump_start = t_s;
    c.output.dump_end = t_end;
    b.note("control.hold_until", num(t_end) + " us", "chosen");
    b.note("grid.t_end", num(t_end) + " us", "chosen");
}

void storage_schedule(Builder& b, double length, double separation, Propagation mode,
                      double t_c, double tau_c, const char* origin)
{
    ScenarioConfig& c = b.cfg();
    c.geometry.length = length;
    c.geometry.separation = separation;
    c.geometry.mode = mode;
    c.control.omega_in = mhz(2.0);
    c.control.t_c = t_c;
    c.control.tau_c = tau_c;
    c.control.omega_out = 0.0;
    c.pulse.t_p = 12.0;
    c.pulse.tau_p = 7.0;
    b.note("geometry.length", num(length) + " um", origin)
        .note("geometry.separation", num(separation) + " um", origin)
        .note("geometry.mode", mode == Propagation::co ? "co" : "counter", origin)
        .note("control.omega_in", "2 MHz", origin)
        .note("control.t_c", num(t_c) + " us", origin)
        .note("control.tau_c", num(tau_c) + " us", origin)
        .note("pulse.t_p", "12 us", origin)
        .note("pulse.tau_p", "7 us", origin);
}

Preset fig2(bool above)
{
    Builder b(above ? "fig2a" : "fig2c",
              above ? "counter-propagating pulses, probe detuned +5 gamma"
                    : "counter-propagating pulses, probe detuned -5 gamma");
    ScenarioConfig& c = b.cfg();
    const double sign = above ? 1.0 : -1.0;
    c.physical.delta_p = sign * mhz(5.0 * kGammaMhz);
    c.physical.delta_c = -c.physical.delta_p;
    c.geometry = {100.0, 6.0, 2.0, Propagation::counter};
    c.control = {mhz(1.5), 100.0, 1.0, 100.0, 0.0, 1.0};
    c.pulse.t_p = 10.0;
    c.pulse.tau_p = 5.0;
    c.grid.t_end = 60.0;
    c.output.snapshot_times = {20.0, 30.0, 40.0};
    c.physical.g_sqrt_n = default_coupling(c.physical, c.geometry, c.control, c.pulse);
    const std::string dp = above ? "28.75 MHz" : "-28.75 MHz";
    const std::string dc = above ? "-28.75 MHz" : "28.75 MHz";
    b.note("physical.delta_p", dp, "fig2 caption (5 gamma)")
        .note("physical.delta_c", dc, "fig2 caption (-delta_p)")
        .note("geometry.length", "100 um", "fig2 caption")
        .note("geometry.separation", "6 um", "fig2 caption")
        .note("geometry.mode", "counter", "fig2 caption")
        .note("control.omega_in", "1.5 MHz", "fig2 caption")
        .note("control.t_c", "100 us", "fig2 caption")
        .note("control.tau_c", "1 us", "fig2 caption")
        .note("pulse.t_p", "10 us", "fig2 caption")
        .note("pulse.tau_p", "5 us", "fig2 caption")
        .note("grid.t_end", "60 us", "chosen")
        .note("physical.g_sqrt_n", num(c.physical.g_sqrt_n) + " rad/us",
              "derived: default coupling");
    return b.preset;
}

Preset fig3a1()
{
    Builder b("fig3a1", "counter-propagating storage at a = 6 um");
    storage_schedule(b, 300.0, 6.0, Propagation::counter, 45.0, 10.0, "fig3 caption");
    stop_at_middle(b);
    storage_window(b, 75.0);
    return b.preset;
}

Preset fig3b2()
{
    Builder b("fig3b2", "co-propagating storage at the largest separation, a = 20 um");
    storage_schedule(b, 300.0, 20.0, Propagation::co, 30.0, 10.0, "fig3 caption");
    b.note("geometry.separation", "20 um", "chosen: largest separation of the sweep");
    stop_at_middle(b);
    storage_window(b, 60.0);
    return b.preset;
}

Preset fig4(const char* id, double omega_out, double tau_out, double t_end, const char* what)
{
    Builder b(id, what);
    storage_schedule(b, 300.0, 10.0, Propagation::counter, 40.0, 10.0, "fig4 caption");
    b.note("geometry.length", "300 um", "fig3 caption");
    stop_at_middle(b);
    ScenarioConfig& c = b.cfg();
    c.control.hold_until = 70.0;
    c.control.omega_out = mhz(omega_out);
    c.control.tau_out = tau_out;
    c.grid.t_end = t_end;
    c.output.snapshot_times = {60.0};
    c.output.dump_start = 60.0;
    c.output.dump_end = 70.0;
    b.note("control.hold_until", "70 us", "chosen")
        .note("control.omega_out", num(omega_out) + " MHz", "fig4 caption")
        .note("control.tau_out", num(tau_out) + " us",
              tau_out == 0.1 ? "fig4 caption" : "chosen: one of the switching speeds")
        .note("grid.t_end", num(t_end) + " us", "chosen");
    return b.preset;
}

Preset supplementary(int which)
{
    switch (which) {
    case 1: {
        Builder b("s1", "counter-propagating storage, 0.335 mm ensembles");
        storage_schedule(b, 335.0, 10.0, Propagation::counter, 40.0, 8.0, "figS1 caption");
        b.note("geometry.separation", "10 um", "chosen: one of the separations");
        stop_at_middle(b);
        storage_window(b, 66.0);
        return b.preset;
    }
    case 2: {
        Builder b("s2", "dipole-dipole coupling switched on after storage");
        storage_schedule(b, 300.0, 20.0, Propagation::counter, 40.0, 8.0, "figS1 caption");
        ScenarioConfig& c = b.cfg();
        c.interaction.law = InteractionLaw::dipole;
        c.physical.c3 = mhz(6.65e5);
        c.interaction.onset = c.control.t_c;
        b.note("geometry.length", "300 um", "figS2 caption")
            .note("geometry.separation", "20 um", "chosen: large separation")
            .note("interaction.law", "dipole", "figS2 caption")
            .note("physical.c3", "6.65e5 MHz*um^3", "figS2 caption (magnitude; sign chosen)")
            .note("interaction.onset", "40 us", "figS2 caption (field applied after stopping)");
        stop_at_middle(b);
        storage_window(b, 66.0);
        return b.preset;
    }
    case 3: {
        Builder b("s3", "close counter-propagating ensembles, a = 6 um");
        storage_schedule(b, 300.0, 6.0, Propagation::counter, 40.0, 10.0, "figS3 caption");
        b.note("control.t_c", "40 us", "figS1 caption");
        stop_at_middle(b);
        storage_window(b, 70.0);
        return b.preset;
    }
    case 4: {
        Builder b("s4", "co-propagating storage of long pulses");
        storage_schedule(b, 335.0, 10.0, Propagation::co, 80.0, 10.0, "figS4 caption");
        ScenarioConfig& c = b.cfg();
        c.pulse.t_p = 30.0;
        c.pulse.tau_p = 18.0;
        b.note("geometry.length", "335 um", "figS1 caption")
            .note("pulse.t_p", "30 us", "figS4 caption")
            .note("pulse.tau_p", "18 us", "figS4 caption");
        stop_at_middle(b);
        storage_window(b, 110.0);
        return b.preset;
    }
    default:
        break;
    }
    throw ConfigError("preset", "unknown supplementary preset");
}

Preset efficiency(bool interacting)
{
    Builder b(interacting ? "s5b" : "s5a",
              interacting ? "storage efficiency, co-propagating pulses at a = 13 um"
                          : "storage efficiency without interaction");
    storage_schedule(b, 6000.0, 13.0, Propagation::co, 40.0, 1.0, "figS5 caption");
    ScenarioConfig& c = b.cfg();
    c.pulse.t_p = 20.0;
    c.pulse.tau_p = 10.0;
    // the 6 mm ensembles carry pulses hundreds of µm long; 1 µm cells resolve them
    c.grid.dz = 1.0;
    b.note("pulse.t_p", "20 us", "figS5 caption")
        .note("pulse.tau_p", "10 us", "figS5 caption")
        .note("control.tau_c", "1 us", "chosen: middle of the switching sweep")
        .note("grid.dz", "1 um", "chosen");
    if (!interacting) {
        c.physical.c6 = 0.0;
        b.note("physical.c6", "0 GHz*um^6", "figS5 caption (no interaction)");
        b.note("geometry.separation", "13 um", "chosen: unused without interaction");
    }
    stop_at_middle(b);
    storage_window(b, 65.0);
    return b.preset;
}

const std::map<std::string, std::function<Preset()>, std::less<>>& factories()
{
    static const std::map<std::string, std::function<Preset()>, std::less<>> table = {
        {"fig2a", [] { return fig2(true); }},
        {"fig2c", [] { return fig2(false); }},
        {"fig3a1", [] { return fig3a1(); }},
        {"fig3b2", [] { return fig3b2(); }},
        {"fig4a", [] { return fig4("fig4a", 1.0, 0.1, 180.0, "retrieval at 1 MHz"); }},
        {"fig4b", [] { return fig4("fig4b", 3.0, 0.1, 120.0, "retrieval at 3 MHz"); }},
        {"fig4c", [] { return fig4("fig4c", 5.0, 0.1, 110.0, "retrieval at 5 MHz"); }},
        {"fig4d", [] { return fig4("fig4d", 2.0, 1.0, 130.0, "retrieval at 2 MHz, slower switch-on"); }},
        {"s1", [] { return supplementary(1); }},
        {"s2", [] { return supplementary(2); }},
        {"s3", [] { return supplementary(3); }},
        {"s4", [] { return supplementary(4); }},
        {"s5a", [] { return efficiency(false); }},
        {"s5b", [] { return efficiency(true); }},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& preset_ids()
{
    static const std::vector<std::string> ids = {"fig2a", "fig2c", "fig3a1", "fig3b2", "fig4a",
                                                 "fig4b", "fig4c", "fig4d", "s1",     "s2",
                                                 "s3",    "s4",    "s5a",   "s5b"};
    return ids;
}

Preset make_preset(std::string_view id)
{
    const auto& table = factories();
    auto it = table.find(id);
    if (it == table.end()) {
        std::string known;
        for (const auto& name : preset_ids()) {
            known += (known.empty() ? "" : ", ") + name;
        }
        throw ConfigError("preset", "unknown preset '" + std::string(id) + "' (known: " + known +
                                        ", " + std::string(kInsetPresetId) + ")");
    }
    return it->second();
}

void apply_paper_grid(ScenarioConfig& config)
{
    config.grid.dz = kPaperDz;
    config.grid.dt = kPaperDt;
}

std::vector<InsetCurve> inset_curves()
{
    const Preset a = make_preset("fig2a");
    const Preset c = make_preset("fig2c");
    const double omega = a.config.control.omega_in;
    const double gamma = a.config.physical.gamma;
    // |V| = Ω²/(5γ) puts the Rydberg-branch peak at δ = 0 for Δp = −5γ
    const double v_peak = -omega * omega / (5.0 * gamma);
    return {
        {"plus5gamma_v0", a.config.physical, omega, 0.0},
        {"plus5gamma_vpeak", a.config.physical, omega, v_peak},
        {"minus5gamma_v0", c.config.physical, omega, 0.0},
        {"minus5gamma_vpeak", c.config.physical, omega, v_peak},
    };
}

}  // namespace rydsim
