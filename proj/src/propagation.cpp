#include "rydsim/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "rydsim/config.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/profile_tools.hpp"

namespace rydsim {

namespace {

constexpr cplx kI(0.0, 1.0);

struct NodeOrder {
    std::size_t n;
    bool forward;
    std::size_t operator()(std::size_t k) const { return forward ? k : n - 1 - k; }
};

bool needs_interaction(const ScenarioConfig& config)
{
    const double coefficient = law_power(config.interaction.law) == 6 ? config.physical.c6
                                                                      : config.physical.c3;
    return coefficient != 0.0;
}

EnsembleRecord summarize(const EnsembleFields& f, double dz, Direction dir, cplx e_entry)
{
    EnsembleRecord r;
    r.e_entry = e_entry;
    r.e_exit = dir == Direction::forward ? f.e.back() : f.e.front();
    const auto s2 = squared_magnitude(f.s);
    const auto p2 = squared_magnitude(f.p);
    const auto e2 = squared_magnitude(f.e);
    r.s_max = std::sqrt(*std::max_element(s2.begin(), s2.end()));
    r.s_peak_z = parabolic_peak(s2) * dz;
    r.e_peak_z = parabolic_peak(e2) * dz;
    r.s_norm = trapezoid(s2, dz);
    r.p_norm = trapezoid(p2, dz);
    double vmax = 0.0;
    for (double x : f.v) {
        vmax = std::max(vmax, std::abs(x));
    }
    r.v_max_abs = vmax;
    return r;
}

}  // namespace

Direction direction_of(int ensemble, Propagation mode)
{
    return (ensemble == 1 && mode == Propagation::counter) ? Direction::backward
                                                           : Direction::forward;
}

void matter_step(EnsembleFields& fields, double dt, double omega_c, const PhysicalParams& params)
{
    const double delta2 = params.two_photon_detuning();
    const cplx drive = kI * params.g_sqrt_n * dt;
    LocalPropagator prop{};
    double last_w = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = 0; j < fields.nodes(); ++j) {
        const double w = fields.v[j] + delta2;
        if (w != last_w) {
            prop = LocalPropagator::make(dt, omega_c, w, params);
            last_w = w;
        }
        const cplx p = fields.p[j];
        const cplx s = fields.s[j];
        const cplx b = drive * fields.e[j];
        fields.p[j] = prop.f00 * p + prop.f01 * s + prop.g1p * b;
        fields.s[j] = prop.f10 * p + prop.f11 * s + prop.g1s * b;
    }
}

void field_solve(EnsembleFields& fields, double e_entry, double dz, const PhysicalParams& params,
                 Direction dir)
{
    const std::size_t n = fields.nodes();
    if (n == 0) {
        return;
    }
    const NodeOrder order{n, dir == Direction::forward};
    const cplx kappa = kI * params.g_sqrt_n * dz / (2.0 * PhysicalParams::light_speed);
    std::size_t prev = order(0);
    fields.e[prev] = e_entry;
    for (std::size_t k = 1; k < n; ++k) {
        const std::size_t j = order(k);
        fields.e[j] = fields.e[prev] + kappa * (fields.p[prev] + fields.p[j]);
        prev = j;
    }
}

void check_runnable(const ScenarioConfig& config)
{
    const auto diagnostics = validate(config);
    if (!diagnostics.empty()) {
        throw ConfigError(diagnostics);
    }
    const std::size_t cells = config.grid.cells(config.geometry.length);
    if (cells < 8) {
        throw GridError("grid has " + std::to_string(cells) + " cells; at least 8 are required");
    }
    if (config.pulse.tau_p < 10.0 * config.grid.dt) {
        throw GridError("time step too coarse: tau_p = " + std::to_string(config.pulse.tau_p) +
                        " us < 10 dt = " + std::to_string(10.0 * config.grid.dt) + " us");
    }
}

Engine::Engine(const ScenarioConfig& config)
    : config_((check_runnable(config), config)),
      dz_(config.grid.spacing(config.geometry.length)),
      dt_(config.grid.dt),
      nodes_(config.grid.cells(config.geometry.length) + 1),
      state_(nodes_)
{
    if (needs_interaction(config_)) {
        kernel_ = shared_kernel(config_.interaction.law, config_.geometry, config_.physical,
                                config_.grid.dz, config_.interaction.kernel_tolerance);
        convolver_ = std::make_unique<PotentialConvolver>(*kernel_);
    }
    const double e0 = entry_field(0.0);
    for (int l = 0; l < 2; ++l) {
        field_solve(state_.ensemble[l], e0, dz_, config_.physical,
                    direction_of(l, config_.geometry.mode));
    }
}

double Engine::entry_field(double t) const
{
    return input_pulse(t, 0.0, config_.pulse, config_.geometry) / config_.physical.coupling_g();
}

void Engine::refresh_potential()
{
    if (!convolver_) {
        return;
    }
    if (state_.t < config_.interaction.onset) {
        return;
    }
    convolver_->apply(state_.ensemble[1].s, state_.ensemble[0].v);
    convolver_->apply(state_.ensemble[0].s, state_.ensemble[1].v);
}

void Engine::advance_lagged(int ensemble, double t_mid, double t_new)
{
    EnsembleFields& f = state_.ensemble[ensemble];
    matter_step(f, dt_, control_field(t_mid, config_.control), config_.physical);
    field_solve(f, entry_field(t_new), dz_, config_.physical,
                direction_of(ensemble, config_.geometry.mode));
}

void Engine::advance_implicit(int ensemble, double t_mid, double t_new)
{
    EnsembleFields& f = state_.ensemble[ensemble];
    const PhysicalParams& params = config_.physical;
    const double omega = control_field(t_mid, config_.control);
    const double delta2 = params.two_photon_detuning();
    const cplx ig = kI * params.g_sqrt_n;
    const cplx kappa = ig * dz_ / (2.0 * PhysicalParams::light_speed);
    const NodeOrder order{nodes_, direction_of(ensemble, config_.geometry.mode) ==
                                      Direction::forward};

    LocalPropagator prop{};
    double last_w = std::numeric_limits<double>::quiet_NaN();
    cplx alpha_p;
    cplx alpha_s;
    cplx beta_p;
    cplx beta_s;
    cplx denom;
    cplx e_prev;
    cplx p_prev;
    for (std::size_t k = 0; k < nodes_; ++k) {
        const std::size_t j = order(k);
        const double w = f.v[j] + delta2;
        if (w != last_w) {
            prop = LocalPropagator::make(dt_, omega, w, params);
            last_w = w;
            // weights of E(t_n) and E(t_{n+1}) in the linear-in-time drive
            beta_p = dt_ * (prop.g1p - prop.g2p) * ig;
            beta_s = dt_ * (prop.g1s - prop.g2s) * ig;
            alpha_p = dt_ * prop.g2p * ig;
            alpha_s = dt_ * prop.g2s * ig;
            denom = 1.0 - alpha_p * kappa;
        }
        const cplx p = f.p[j];
        const cplx s = f.s[j];
        const cplx e_old = f.e[j];
        const cplx rhs_p = prop.f00 * p + prop.f01 * s + beta_p * e_old;
        const cplx rhs_s = prop.f10 * p + prop.f11 * s + beta_s * e_old;
        cplx e_new;
        cplx p_new;
        if (k == 0) {
            e_new = entry_field(t_new);
            p_new = rhs_p + alpha_p * e_new;
        } else {
            const cplx q = e_prev + kappa * p_prev;
            p_new = (rhs_p + alpha_p * q) / denom;
            e_new = q + kappa * p_new;
        }
        f.p[j] = p_new;
        f.e[j] = e_new;
        f.s[j] = rhs_s + alpha_s * e_new;
        e_prev = e_new;
        p_prev = p_new;
    }
}

void Engine::step()
{
    if (step_ % config_.solver.potential_stride == 0) {
        refresh_potential();
    }
    const double t0 = state_.t;
    const double t_new = t0 + dt_;
    const double t_mid = t0 + 0.5 * dt_;
    for (int l = 0; l < 2; ++l) {
        if (config_.solver.coupling == Coupling::implicit) {
            advance_implicit(l, t_mid, t_new);
        } else {
            advance_lagged(l, t_mid, t_new);
        }
    }
    ++step_;
    // t from the step count so long runs do not accumulate rounding
    state_.t = static_cast<double>(step_) * dt_;

    double guard = 0.0;
    for (const auto& f : state_.ensemble) {
        guard += std::abs(f.s.back()) + std::abs(f.s.front()) + std::abs(f.e.back()) +
                 std::abs(f.e.front()) + std::abs(f.s[f.nodes() / 2]);
    }
    if (!std::isfinite(guard)) {
        throw BlowUpError(step_, state_.t);
    }
}

StepRecord Engine::record() const
{
    StepRecord r;
    r.t = state_.t;
    r.omega_c = control_field(state_.t, config_.control);
    const cplx e_in = entry_field(state_.t);
    for (int l = 0; l < 2; ++l) {
        r.ensemble[l] = summarize(state_.ensemble[l], dz_,
                                  direction_of(l, config_.geometry.mode), e_in);
    }
    return r;
}

namespace {

bool all_finite(const FieldState& s)
{
    for (const auto& f : s.ensemble) {
        for (std::size_t j = 0; j < f.nodes(); ++j) {
            if (!std::isfinite(f.e[j].real()) || !std::isfinite(f.e[j].imag()) ||
                !std::isfinite(f.p[j].real()) || !std::isfinite(f.p[j].imag()) ||
                !std::isfinite(f.s[j].real()) || !std::isfinite(f.s[j].imag())) {
                return false;
            }
        }
    }
    return true;
}

class HeatmapRecorder {
public:
    HeatmapRecorder(const OutputSpec& out, std::size_t steps, std::size_t nodes, double dz)
        : row_stride_(std::max<std::size_t>(1, (steps + out.heatmap_rows) / std::max<std::size_t>(out.heatmap_rows, 1))),
          col_stride_(std::max<std::size_t>(1, (nodes + out.heatmap_cols - 1) / std::max<std::size_t>(out.heatmap_cols, 1))),
          nodes_(nodes)
    {
        cols_ = (nodes_ + col_stride_ - 1) / col_stride_;
        for (auto& h : maps_) {
            h.cols = cols_;
            h.dz = dz * static_cast<double>(col_stride_);
        }
    }

    void maybe_record(std::size_t step, const FieldState& state)
    {
        if (step % row_stride_ != 0) {
            return;
        }
        const std::vector<cplx>* sources[4] = {&state.ensemble[0].e, &state.ensemble[0].s,
                                               &state.ensemble[1].e, &state.ensemble[1].s};
        for (std::size_t m = 0; m < 4; ++m) {
            Heatmap& h = maps_[m];
            for (std::size_t c = 0; c < cols_; ++c) {
                h.data.push_back(static_cast<float>(std::abs((*sources[m])[c * col_stride_])));
            }
            h.times.push_back(state.t);
            ++h.rows;
        }
    }

    std::array<Heatmap, 4> take() { return std::move(maps_); }

private:
    std::size_t row_stride_;
    std::size_t col_stride_;
    std::size_t nodes_;
    std::size_t cols_ = 0;
    std::array<Heatmap, 4> maps_;
};

}  // namespace

SnapshotSeries run_scenario(const ScenarioConfig& config)
{
    Engine engine(config);
    SnapshotSeries series;
    series.config = config;
    series.dz = engine.dz();
    series.nodes = engine.state().nodes();

    const std::size_t steps = config.grid.steps();
    series.steps.reserve(steps + 1);
    HeatmapRecorder heatmaps(config.output, steps, series.nodes, series.dz);

    std::vector<double> pending = config.output.snapshot_times;
    std::sort(pending.begin(), pending.end());
    std::size_t next_snapshot = 0;
    const double dt = config.grid.dt;
    const OutputSpec& out = config.output;
    const bool has_window = out.dump_end > out.dump_start;
    std::optional<std::size_t> window_first;

    auto observe = [&](std::size_t step) {
        const FieldState& st = engine.state();
        series.steps.push_back(engine.record());
        heatmaps.maybe_record(step, st);
        bool dumped = false;
        while (next_snapshot < pending.size() && st.t >= pending[next_snapshot] - 0.5 * dt) {
            if (!dumped) {
                series.dumps.push_back(st);
                dumped = true;
            }
            ++next_snapshot;
        }
        if (has_window && !dumped && st.t >= out.dump_start - 0.5 * dt &&
            st.t <= out.dump_end + 0.5 * dt) {
            if (!window_first) {
                window_first = step;
            }
            if ((step - *window_first) % std::max<std::size_t>(out.dump_stride, 1) == 0) {
                series.dumps.push_back(st);
            }
        }
    };

    observe(0);
    for (std::size_t n = 0; n < steps; ++n) {
        engine.step();
        observe(n + 1);
    }
    if (!all_finite(engine.state())) {
        throw BlowUpError(steps, engine.state().t);
    }
    series.final_state = engine.state();
    series.heatmaps = heatmaps.take();
    return series;
}

}  // namespace rydsim
