#pragma once

#include <string>

#include "foswe/config.hpp"
#include "foswe/diagnostics.hpp"

namespace foswe {

struct RunResult {
    int exit_code = 0;
    std::string message;
    long steps = 0;
    double t_final = 0.0;
    std::string output_dir;
};

/// Execute the coupled run to T_end (or a fatal condition), writing the
/// diagnostics CSV, optional snapshots, the final checkpoint, and a manifest.
RunResult run_simulation(const RunConfig& cfg, const std::string& output_override = "");

/// Continue a checkpointed run with the same config.
RunResult resume_simulation(const RunConfig& cfg, const std::string& checkpoint_path,
                            const std::string& output_override = "");

} // namespace foswe
