#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "mflat/deform.hpp"

namespace mflat {

/// Everything that determined a reduce run plus its headline results, written
/// as key=value lines. The run-affecting keys use the CLI flag names, so a
/// manifest can be passed back through `reduce --config` to replay the run.
struct RunManifest {
    std::string tool_version;
    std::string input;

    // resolved configuration (no auto sentinels left)
    int k = 0;
    double alpha1_amplitude = 0.0;
    int period = 0;
    double alpha2 = 0.0;
    bool clamp_alpha1 = false;
    double epsilon = 0.0;
    int max_steps = 0;
    int trace_pca_every = 0;
    double ratio_threshold = 0.0;
    bool svg = false;

    // results
    std::string stop_reason;
    int final_steps = 0;
    int estimated_dimension = 0;
    Eigen::Index point_count = 0;
    Eigen::Index ambient_dimension = 0;

    std::string embedding_path;
    std::string edges_path;
    std::string trace_path;
    std::optional<std::string> svg_path;
};

void write_manifest(std::ostream& out, const RunManifest& manifest);

}  // namespace mflat
