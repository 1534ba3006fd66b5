#pragma once

#include <vector>

#include "mflat/deform.hpp"
#include "mflat/spectral.hpp"

namespace mflat {

struct ReduceResult {
    EmbeddingResult embedding;
    PointCloud flattened;                        // deformed cloud the PCA ran on
    std::vector<SoftNeighborhood> neighborhoods; // originals, frozen
    DeformTrace trace;
    StopReason stop_reason;
    int steps;
};

/// The whole reduction: original distances, soft neighborhoods, deformation
/// loop, then PCA readout (dimension estimate + projection).
ReduceResult reduce(const PointCloud& cloud, const DeformConfig& config,
                    double ratio_threshold = 0.05);

}  // namespace mflat
