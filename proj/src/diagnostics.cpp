#include "rydsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "rydsim/errors.hpp"
#include "rydsim/profile_tools.hpp"

namespace rydsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_steps(const SnapshotSeries& series)
{
    if (series.steps.empty()) {
        throw UndefinedObservable("empty snapshot series");
    }
}

std::size_t nearest_step(const SnapshotSeries& series, double t)
{
    const auto& steps = series.steps;
    auto it = std::lower_bound(steps.begin(), steps.end(), t,
                               [](const StepRecord& r, double x) { return r.t < x; });
    if (it == steps.end()) {
        return steps.size() - 1;
    }
    std::size_t i = static_cast<std::size_t>(it - steps.begin());
    if (i > 0 && std::abs(steps[i - 1].t - t) <= std::abs(steps[i].t - t)) {
        --i;
    }
    return i;
}

std::vector<const FieldState*> dumps_in(const SnapshotSeries& series, double t0, double t1)
{
    const double eps = 1e-6 * series.config.grid.dt;
    std::vector<const FieldState*> out;
    for (const auto& d : series.dumps) {
        if (d.t >= t0 - eps && d.t <= t1 + eps) {
            out.push_back(&d);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const FieldState* a, const FieldState* b) { return a->t < b->t; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const FieldState* a, const FieldState* b) { return a->t == b->t; }),
              out.end());
    return out;
}

double hold_end(const SnapshotSeries& series)
{
    const ControlSchedule& ctl = series.config.control;
    const double end = series.steps.empty() ? series.final_state.t : series.steps.back().t;
    return ctl.omega_out > 0.0 ? std::min(ctl.hold_until, end) : end;
}

// Stored profile nearest to t_s: a dump, or the final state while still holding.
const FieldState* stored_state(const SnapshotSeries& series, double t_s)
{
    const double tol = 0.51 * series.config.grid.dt;
    const FieldState* best = nullptr;
    for (const auto& d : series.dumps) {
        if (std::abs(d.t - t_s) <= tol && (!best || std::abs(d.t - t_s) < std::abs(best->t - t_s))) {
            best = &d;
        }
    }
    if (best) {
        return best;
    }
    const double t_f = series.final_state.t;
    if (t_f >= series.config.control.t_c && t_f <= hold_end(series) + tol &&
        std::abs(t_f - t_s) <= tol) {
        return &series.final_state;
    }
    return nullptr;
}

double relative_shift(double coarse, double fine, double floor)
{
    return std::abs(fine - coarse) / std::max(std::abs(coarse), floor);
}

std::string format_value(double x)
{
    if (!std::isfinite(x)) {
        return "nan";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

}  // namespace

double mixing_angle(double omega_c, double g_sqrt_n)
{
    if (omega_c == 0.0) {
        return 0.5 * std::numbers::pi;
    }
    return std::atan2(g_sqrt_n, omega_c);
}

std::vector<cplx> polariton_profile(const EnsembleFields& fields, double theta)
{
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    std::vector<cplx> psi(fields.nodes());
    for (std::size_t j = 0; j < psi.size(); ++j) {
        psi[j] = c * fields.e[j] - s * fields.s[j];
    }
    return psi;
}

PolaritonView polariton_history(const SnapshotSeries& series)
{
    PolaritonView view;
    const double g = series.config.physical.g_sqrt_n;
    for (const auto& r : series.steps) {
        const double theta = mixing_angle(r.omega_c, g);
        view.times.push_back(r.t);
        view.theta.push_back(theta);
        view.cos_theta.push_back(std::cos(theta));
    }
    return view;
}

AdiabaticRate adiabaticity_rate(double t, const ControlSchedule& sched, double g_sqrt_n)
{
    const RabiRate rate = control_field_rate(t, sched);
    const double omega = control_field(t, sched);
    return {-g_sqrt_n * rate.value / (g_sqrt_n * g_sqrt_n + omega * omega), rate.one_sided};
}

StorageInstants storage_instants(const SnapshotSeries& series, int ensemble)
{
    require_steps(series);
    const ControlSchedule& ctl = series.config.control;
    StorageInstants out;
    double best = -1.0;
    for (std::size_t i = 0; i < series.steps.size() && series.steps[i].t < ctl.t_c; ++i) {
        const double s = series.steps[i].ensemble[ensemble].s_max;
        if (s > best) {
            best = s;
            out.in = i;
        }
    }
    const double t_s = std::min(ctl.t_c + 2.0 * ctl.tau_c, hold_end(series));
    out.stored = nearest_step(series, t_s);
    return out;
}

double storage_efficiency(const SnapshotSeries& series, int ensemble)
{
    const StorageInstants at = storage_instants(series, ensemble);
    const double s_in = series.steps[at.in].ensemble[ensemble].s_max;
    if (!(s_in > 0.0)) {
        throw UndefinedObservable("storage efficiency: no spinwave formed before switch-off");
    }
    return series.steps[at.stored].ensemble[ensemble].s_max / s_in;
}

double transmission_fraction(const SnapshotSeries& series, int ensemble)
{
    require_steps(series);
    double in = 0.0;
    double out = 0.0;
    for (std::size_t i = 1; i < series.steps.size(); ++i) {
        const auto& a = series.steps[i - 1];
        const auto& b = series.steps[i];
        const double h = 0.5 * (b.t - a.t);
        in += h * (std::norm(a.ensemble[ensemble].e_entry) + std::norm(b.ensemble[ensemble].e_entry));
        out += h * (std::norm(a.ensemble[ensemble].e_exit) + std::norm(b.ensemble[ensemble].e_exit));
    }
    if (!(in > 0.0)) {
        throw UndefinedObservable("transmission fraction: no input flux");
    }
    return out / in;
}

PhaseReport accumulated_phase(const SnapshotSeries& series, double t0, double t1, int ensemble)
{
    const ControlSchedule& ctl = series.config.control;
    const double eps = 1e-9 * std::max(1.0, std::abs(t1));
    if (!(t1 > t0) || t0 < ctl.t_c - eps || t1 > ctl.hold_until + eps) {
        throw DomainError("accumulated phase: window [" + std::to_string(t0) + ", " +
                          std::to_string(t1) + "] is not inside the hold phase [" +
                          std::to_string(ctl.t_c) + ", " + std::to_string(ctl.hold_until) + "]");
    }
    const auto dumps = dumps_in(series, t0, t1);
    if (dumps.size() < 2) {
        throw UndefinedObservable("accumulated phase: fewer than two dumps inside the window");
    }
    PhaseReport report;
    report.phi.assign(series.nodes, 0.0);
    for (std::size_t k = 1; k < dumps.size(); ++k) {
        const auto& va = dumps[k - 1]->ensemble[ensemble].v;
        const auto& vb = dumps[k]->ensemble[ensemble].v;
        const double h = 0.5 * (dumps[k]->t - dumps[k - 1]->t);
        for (std::size_t j = 0; j < series.nodes; ++j) {
            report.phi[j] += h * (va[j] + vb[j]);
        }
    }
    const auto mask = half_max_mask(squared_magnitude(dumps.front()->ensemble[ensemble].s));
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t j = 0; j < mask.size(); ++j) {
        if (mask[j]) {
            lo = std::min(lo, report.phi[j]);
            hi = std::max(hi, report.phi[j]);
        }
    }
    report.spread = hi >= lo ? hi - lo : 0.0;
    return report;
}

std::vector<double> spinwave_phase_drift(const SnapshotSeries& series, double t0, double t1,
                                         int ensemble)
{
    const auto dumps = dumps_in(series, t0, t1);
    if (dumps.size() < 2) {
        throw UndefinedObservable("phase drift: fewer than two dumps inside the window");
    }
    std::vector<double> drift(series.nodes, 0.0);
    for (std::size_t k = 1; k < dumps.size(); ++k) {
        const auto& sa = dumps[k - 1]->ensemble[ensemble].s;
        const auto& sb = dumps[k]->ensemble[ensemble].s;
        for (std::size_t j = 0; j < series.nodes; ++j) {
            drift[j] += std::arg(sb[j] * std::conj(sa[j]));
        }
    }
    return drift;
}

double asymmetry_metric(std::span<const cplx> s, Direction dir)
{
    const auto s2 = squared_magnitude(s);
    const double peak = parabolic_peak(s2);
    if (!std::isfinite(peak)) {
        throw UndefinedObservable("asymmetry: empty spinwave");
    }
    // split the peak cell's mass linearly between the two sides
    double below = 0.0;
    double above = 0.0;
    for (std::size_t j = 0; j < s2.size(); ++j) {
        const double x = static_cast<double>(j);
        const double w = std::clamp(x - peak + 0.5, 0.0, 1.0);
        above += w * s2[j];
        below += (1.0 - w) * s2[j];
    }
    const double front = dir == Direction::forward ? above : below;
    const double back = dir == Direction::forward ? below : above;
    if (!(back > 0.0)) {
        throw UndefinedObservable("asymmetry: no mass behind the peak");
    }
    return front / back;
}

double retrieval_gain(const SnapshotSeries& series, int ensemble)
{
    require_steps(series);
    const double t_r = series.config.control.hold_until;
    const double g = series.config.physical.coupling_g();
    double best = -1.0;
    for (const auto& r : series.steps) {
        if (r.t > t_r) {
            best = std::max(best, g * std::abs(r.ensemble[ensemble].e_exit));
        }
    }
    if (best < 0.0) {
        throw UndefinedObservable("retrieval gain: run ends before read-out");
    }
    return best;
}

EnergyBudget energy_budget(const SnapshotSeries& series, int ensemble)
{
    require_steps(series);
    const double t_r = series.config.control.hold_until;
    EnergyBudget b;
    b.stored = series.steps[nearest_step(series, t_r)].ensemble[ensemble].s_norm;
    for (std::size_t i = 1; i < series.steps.size(); ++i) {
        const auto& a = series.steps[i - 1];
        const auto& c = series.steps[i];
        if (a.t < t_r) {
            continue;
        }
        b.retrieved += 0.5 * (c.t - a.t) *
                       (std::norm(a.ensemble[ensemble].e_exit) + std::norm(c.ensemble[ensemble].e_exit));
    }
    b.retrieved *= PhysicalParams::light_speed;
    return b;
}

double peak_velocity(const SnapshotSeries& series, double t0, double t1, int ensemble,
                     bool use_field)
{
    double n = 0.0, st = 0.0, sz = 0.0, stt = 0.0, stz = 0.0;
    for (const auto& r : series.steps) {
        if (r.t < t0 || r.t > t1) {
            continue;
        }
        const double z = use_field ? r.ensemble[ensemble].e_peak_z : r.ensemble[ensemble].s_peak_z;
        n += 1.0;
        st += r.t;
        sz += z;
        stt += r.t * r.t;
        stz += r.t * z;
    }
    const double det = n * stt - st * st;
    if (n < 2.0 || det <= 0.0) {
        throw UndefinedObservable("peak velocity: fewer than two samples in the window");
    }
    return (n * stz - st * sz) / det;
}

Summary summarize(const SnapshotSeries& series)
{
    Summary s{kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, {}};
    auto attempt = [&](const char* name, auto&& fn) {
        try {
            fn();
        } catch (const Error&) {
            s.undefined.emplace_back(name);
        }
    };
    attempt("efficiency", [&] { s.efficiency = storage_efficiency(series); });
    attempt("transmission", [&] { s.transmission = transmission_fraction(series); });
    StorageInstants at{};
    attempt("stored_excitation", [&] {
        at = storage_instants(series, 0);
        s.stored_excitation = series.steps[at.stored].ensemble[0].s_norm;
        s.max_potential = series.steps[at.stored].ensemble[0].v_max_abs;
    });
    const double t_s = series.steps.empty() ? 0.0 : series.steps[at.stored].t;
    const FieldState* stored = series.steps.empty() ? nullptr : stored_state(series, t_s);
    attempt("homogeneity", [&] {
        if (!stored) throw UndefinedObservable("no stored profile");
        s.homogeneity = homogeneity_metric(stored->ensemble[0].v, stored->ensemble[0].s);
    });
    attempt("asymmetry", [&] {
        if (!stored) throw UndefinedObservable("no stored profile");
        s.asymmetry = asymmetry_metric(stored->ensemble[0].s,
                                       direction_of(0, series.config.geometry.mode));
    });
    attempt("phase_spread", [&] {
        s.phase_spread = accumulated_phase(series, t_s, hold_end(series)).spread;
    });
    attempt("retrieval_peak", [&] { s.retrieval_peak = retrieval_gain(series); });
    return s;
}

nlohmann::json summary_to_json(const Summary& summary)
{
    auto value = [](double x) -> nlohmann::json {
        return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
    };
    return {{"efficiency", value(summary.efficiency)},
            {"transmission", value(summary.transmission)},
            {"stored_excitation", value(summary.stored_excitation)},
            {"max_potential", value(summary.max_potential)},
            {"homogeneity", value(summary.homogeneity)},
            {"phase_spread", value(summary.phase_spread)},
            {"asymmetry", value(summary.asymmetry)},
            {"retrieval_peak", value(summary.retrieval_peak)},
            {"undefined", summary.undefined}};
}

std::string summary_csv_header()
{
    return "efficiency,transmission,stored_excitation,max_potential,homogeneity,phase_spread,"
           "asymmetry,retrieval_peak";
}

std::string summary_csv_row(const Summary& s)
{
    return format_value(s.efficiency) + "," + format_value(s.transmission) + "," +
           format_value(s.stored_excitation) + "," + format_value(s.max_potential) + "," +
           format_value(s.homogeneity) + "," + format_value(s.phase_spread) + "," +
           format_value(s.asymmetry) + "," + format_value(s.retrieval_peak);
}

ConvergenceReport compare_convergence(const SnapshotSeries& coarse, const SnapshotSeries& fine,
                                      double tolerance)
{
    ConvergenceReport rep;
    for (int l = 0; l < 2; ++l) {
        const double tc = transmission_fraction(coarse, l);
        const double tf = transmission_fraction(fine, l);
        const double t_shift = relative_shift(tc, tf, 1e-3);

        double peak = 0.0;
        for (const auto& r : coarse.steps) {
            peak = std::max(peak, r.ensemble[l].s_norm);
        }
        const double sc = coarse.steps[storage_instants(coarse, l).stored].ensemble[l].s_norm;
        const double sf = fine.steps[storage_instants(fine, l).stored].ensemble[l].s_norm;
        const double s_shift = relative_shift(sc, sf, 1e-3 * peak);

        if (l == 0 || t_shift > rep.transmission_shift) {
            rep.transmission_coarse = tc;
            rep.transmission_fine = tf;
            rep.transmission_shift = t_shift;
        }
        if (l == 0 || s_shift > rep.stored_shift) {
            rep.stored_coarse = sc;
            rep.stored_fine = sf;
            rep.stored_shift = s_shift;
        }
    }
    rep.passed = rep.transmission_shift < tolerance && rep.stored_shift < tolerance;
    return rep;
}

ConvergenceReport convergence_guard(const ScenarioConfig& config, double tolerance)
{
    ScenarioConfig lean = config;
    lean.output = OutputSpec{};
    lean.output.heatmap_rows = 1;
    lean.output.heatmap_cols = 1;
    ScenarioConfig halved = lean;
    halved.grid.dz *= 0.5;
    halved.grid.dt *= 0.5;
    const SnapshotSeries coarse = run_scenario(lean);
    const SnapshotSeries fine = run_scenario(halved);
    return compare_convergence(coarse, fine, tolerance);
}

}  // namespace rydsim
