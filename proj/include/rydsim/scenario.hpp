#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rydsim/core_model.hpp"
#include "rydsim/kernels.hpp"

namespace rydsim {

/// How the photon field is coupled into the matter step.
enum class Coupling {
    /// E at the new time solved together with (P, S) by a z-march.
    implicit,
    /// E frozen at the preceding step during the matter update, then re-solved.
    lagged,
};

struct InteractionSpec {
    InteractionLaw law = InteractionLaw::vdw;
    double kernel_tolerance = kDefaultKernelTolerance;
    /// V is held at zero before this time, e.g. a static field that turns
    /// on the dipole coupling only once the pulses are stored (µs).
    double onset = 0.0;

    bool operator==(const InteractionSpec&) const = default;
};

struct SolverSpec {
    Coupling coupling = Coupling::implicit;
    /// Refresh V every this many steps.
    std::size_t potential_stride = 1;

    bool operator==(const SolverSpec&) const = default;
};

struct OutputSpec {
    /// Full-resolution snapshot times (µs).
    std::vector<double> snapshot_times;
    /// Additionally dump every `dump_stride` steps inside [dump_start, dump_end]
    /// when dump_end > dump_start.
    double dump_start = 0.0;
    double dump_end = 0.0;
    std::size_t dump_stride = 1;
    /// Upper bounds on space–time heatmap resolution.
    std::size_t heatmap_rows = 400;
    std::size_t heatmap_cols = 1500;

    bool operator==(const OutputSpec&) const = default;
};

struct ScenarioConfig {
    std::string preset;
    PhysicalParams physical;
    Geometry geometry;
    ControlSchedule control;
    PulseSpec pulse;
    GridSpec grid;
    InteractionSpec interaction;
    SolverSpec solver;
    OutputSpec output;

    bool operator==(const ScenarioConfig&) const = default;
};

}  // namespace rydsim
