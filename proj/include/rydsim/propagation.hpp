#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rydsim/core_model.hpp"
#include "rydsim/kernels.hpp"
#include "rydsim/local_propagator.hpp"
#include "rydsim/scenario.hpp"

namespace rydsim {

/// On-axis profiles of one ensemble.
struct EnsembleFields {
    std::vector<cplx> e;    ///< photon field E (µm^{-3/2})
    std::vector<cplx> p;    ///< polarization P (µm^{-3/2})
    std::vector<cplx> s;    ///< spinwave S (µm^{-3/2})
    std::vector<double> v;  ///< interaction potential V (rad/µs)

    explicit EnsembleFields(std::size_t nodes = 0)
        : e(nodes), p(nodes), s(nodes), v(nodes, 0.0)
    {
    }
    std::size_t nodes() const noexcept { return e.size(); }
};

struct FieldState {
    double t = 0.0;
    std::array<EnsembleFields, 2> ensemble;

    explicit FieldState(std::size_t nodes = 0) : ensemble{EnsembleFields(nodes), EnsembleFields(nodes)} {}
    std::size_t nodes() const noexcept { return ensemble[0].nodes(); }
};

enum class Direction { forward, backward };

/// Ensemble 1 always runs +z; ensemble 2 runs −z in counter mode.
Direction direction_of(int ensemble, Propagation mode);

/// Advances (P, S) by one step with E and V frozen: the exact solution of
/// the local linear system, i.e. a second-order exponential integrator
/// when Ω_c is sampled at the step midpoint.
void matter_step(EnsembleFields& fields, double dt, double omega_c, const PhysicalParams& params);

/// Solves c ∂z E = i g√N P along `dir` with E = e_entry on the entry face,
/// trapezoidal in z.
void field_solve(EnsembleFields& fields, double e_entry, double dz, const PhysicalParams& params,
                 Direction dir);

/// Scalar summary of one ensemble at one instant.
struct EnsembleRecord {
    cplx e_entry;
    cplx e_exit;
    double s_max = 0.0;
    double s_peak_z = 0.0;  ///< sub-grid argmax of |S| (µm)
    double e_peak_z = 0.0;  ///< sub-grid argmax of |E| (µm)
    double s_norm = 0.0;    ///< ∫|S|² dz
    double p_norm = 0.0;    ///< ∫|P|² dz
    double v_max_abs = 0.0;
};

struct StepRecord {
    double t = 0.0;
    double omega_c = 0.0;
    std::array<EnsembleRecord, 2> ensemble;
};

enum class FieldSelector { e1, s1, e2, s2 };

/// |field| sampled on a (t, z) lattice, row-major with one row per time.
struct Heatmap {
    std::size_t rows = 0;
    std::size_t cols = 0;
    double dz = 0.0;  ///< spacing between columns (µm)
    std::vector<double> times;
    std::vector<float> data;
};

struct SnapshotSeries {
    ScenarioConfig config;
    double dz = 0.0;
    std::size_t nodes = 0;
    std::vector<StepRecord> steps;
    std::vector<FieldState> dumps;
    FieldState final_state;
    std::array<Heatmap, 4> heatmaps;  ///< indexed by FieldSelector

    const Heatmap& heatmap(FieldSelector f) const { return heatmaps[static_cast<std::size_t>(f)]; }
};

/// Stepping loop for one scenario.
class Engine {
public:
    explicit Engine(const ScenarioConfig& config);

    const FieldState& state() const noexcept { return state_; }
    double dz() const noexcept { return dz_; }
    std::size_t step_index() const noexcept { return step_; }
    /// Entry-face photon amplitude E = Ω_p(t, 0)/g.
    double entry_field(double t) const;

    /// One full step: refresh V (per stride), advance matter and field.
    void step();
    StepRecord record() const;

private:
    void refresh_potential();
    void advance_implicit(int ensemble, double t_mid, double t_new);
    void advance_lagged(int ensemble, double t_mid, double t_new);

    ScenarioConfig config_;
    double dz_;
    double dt_;
    std::size_t nodes_;
    std::size_t step_ = 0;
    FieldState state_;
    std::shared_ptr<const KernelTable> kernel_;
    std::unique_ptr<PotentialConvolver> convolver_;
};

/// Rejects configurations the engine cannot integrate (GridError / ConfigError).
void check_runnable(const ScenarioConfig& config);

/// Runs write-in, hold and read-out to grid.t_end and collects the series.
SnapshotSeries run_scenario(const ScenarioConfig& config);

}  // namespace rydsim
