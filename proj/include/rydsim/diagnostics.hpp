#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rydsim/propagation.hpp"

namespace rydsim {

/// θ = arctan(g√N / Ω_c); exactly π/2 when Ω_c = 0.
double mixing_angle(double omega_c, double g_sqrt_n);

/// Ψ = cosθ·E − sinθ·S on every node.
std::vector<cplx> polariton_profile(const EnsembleFields& fields, double theta);

struct PolaritonView {
    std::vector<double> times;
    std::vector<double> theta;
    std::vector<double> cos_theta;
};

PolaritonView polariton_history(const SnapshotSeries& series);

struct AdiabaticRate {
    double value = 0.0;
    bool one_sided = false;
};

/// dθ/dt = −g√N Ω̇_c / (g²N + Ω_c²) with the analytic schedule derivative.
AdiabaticRate adiabaticity_rate(double t, const ControlSchedule& sched, double g_sqrt_n);

/// Instants used by storage_efficiency.
struct StorageInstants {
    std::size_t in = 0;      ///< step index of t_in
    std::size_t stored = 0;  ///< step index of t_s
};

/// t_in: largest max_z|S| before Ω_c first reaches 0; t_s: that time plus
/// 2τ_c, capped at the retrieval start and at the end of the run.
StorageInstants storage_instants(const SnapshotSeries& series, int ensemble);

/// η = max_z|S|(t_s) / max_z|S|(t_in). Throws UndefinedObservable when no
/// spinwave formed.
double storage_efficiency(const SnapshotSeries& series, int ensemble = 0);

/// ∫|E_exit|² dt / ∫|E_entry|² dt over the run. Throws UndefinedObservable
/// for a dark input.
double transmission_fraction(const SnapshotSeries& series, int ensemble = 0);

struct PhaseReport {
    std::vector<double> phi;  ///< per node (rad)
    double spread = 0.0;      ///< max φ − min φ over the |S|² half-max support
};

/// φ(z) = ∫ V dt over [t0, t1] using the dumps inside the window (trapezoid).
/// Throws DomainError if the window leaves the hold phase and
/// UndefinedObservable when fewer than two dumps fall inside it.
PhaseReport accumulated_phase(const SnapshotSeries& series, double t0, double t1,
                              int ensemble = 0);

/// Σ arg(S_{k+1} conj S_k) over consecutive dumps in [t0, t1], per node.
std::vector<double> spinwave_phase_drift(const SnapshotSeries& series, double t0, double t1,
                                         int ensemble = 0);

/// Mass of |S|² ahead of the peak divided by the mass behind it, where
/// "ahead" follows the ensemble's propagation direction.
double asymmetry_metric(std::span<const cplx> s, Direction dir);

/// max over t > hold_until of |g·E| at the exit face (rad/µs). Throws
/// UndefinedObservable for an empty series.
double retrieval_gain(const SnapshotSeries& series, int ensemble = 0);

/// ∫|S|² dz at the start of retrieval and c·∫|E_exit|² dt after it.
struct EnergyBudget {
    double stored = 0.0;
    double retrieved = 0.0;
};
EnergyBudget energy_budget(const SnapshotSeries& series, int ensemble = 0);

/// Least-squares slope of the |S| peak position over steps in [t0, t1] (µm/µs).
double peak_velocity(const SnapshotSeries& series, double t0, double t1, int ensemble = 0,
                     bool use_field = false);

/// Scalar observables of one run.
struct Summary {
    double efficiency = 0.0;
    double transmission = 0.0;
    double stored_excitation = 0.0;
    double max_potential = 0.0;
    double homogeneity = 0.0;
    double phase_spread = 0.0;
    double asymmetry = 0.0;
    double retrieval_peak = 0.0;
    std::vector<std::string> undefined;  ///< names of observables that could not be formed
};

Summary summarize(const SnapshotSeries& series);
nlohmann::json summary_to_json(const Summary& summary);
std::string summary_csv_header();
std::string summary_csv_row(const Summary& summary);

/// Result of halving dz and dt.
struct ConvergenceReport {
    double transmission_coarse = 0.0;
    double transmission_fine = 0.0;
    double stored_coarse = 0.0;
    double stored_fine = 0.0;
    double transmission_shift = 0.0;
    double stored_shift = 0.0;
    bool passed = false;
};

/// Relative shifts are measured against max(|value|, floor) where the floor
/// is 1e-3 of the input energy (transmission) or of the coarse peak stored
/// excitation, so vanishing observables do not divide by zero.
ConvergenceReport convergence_guard(const ScenarioConfig& config, double tolerance = 0.02);
ConvergenceReport compare_convergence(const SnapshotSeries& coarse, const SnapshotSeries& fine,
                                      double tolerance = 0.02);

}  // namespace rydsim
