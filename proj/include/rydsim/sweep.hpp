#pragma once

#include <string>
#include <vector>

#include "rydsim/diagnostics.hpp"
#include "rydsim/scenario.hpp"

namespace rydsim {

struct SweepRow {
    std::string value;
    bool ok = false;
    std::string error;  ///< failure message when !ok
    Summary summary;
};

struct SweepResult {
    std::string axis;
    std::vector<SweepRow> rows;  ///< in the order of the requested values
};

/// One independent run per value of `axis` (a dotted override path), at most
/// `jobs` at a time. A failing child is recorded in its row; the rest go on.
SweepResult run_sweep(const ScenarioConfig& base, const std::string& axis,
                      const std::vector<std::string>& values, std::size_t jobs = 0);

/// Header "axis,value,status,error,<summary columns>" and one line per row.
std::string sweep_csv(const SweepResult& result);

}  // namespace rydsim
