#include "mflat/pipeline.hpp"

#include <algorithm>

#include "mflat/errors.hpp"

namespace mflat {

ReduceResult reduce(const PointCloud& cloud, const DeformConfig& config,
                    double ratio_threshold) {
    config.validate();
    cloud.validate();
    if (!(ratio_threshold > 0.0 && ratio_threshold < 1.0)) {
        throw config_error("ratio threshold must lie strictly inside (0, 1)");
    }

    const DistanceMatrix d0 = pairwise_distances(cloud);
    const int k = std::max(1, config.resolve_k(cloud.count()));
    auto neighborhoods = build_soft_neighborhoods(d0, k);

    RunOutcome outcome = run_deformation(cloud, neighborhoods, config);

    EmbeddingResult embedding;
    if (outcome.cloud.count() >= 2) {
        const PcaResult spectrum = pca(outcome.cloud);
        embedding.intrinsic_dimension = estimate_dimension(spectrum, ratio_threshold);
        embedding.coordinates = project(outcome.cloud, spectrum, embedding.intrinsic_dimension);
        embedding.ratios.assign(spectrum.ratios.begin(), spectrum.ratios.end());
    } else {
        // A single point has no spread; report the minimal embedding.
        embedding.intrinsic_dimension = 1;
        embedding.coordinates = Eigen::MatrixXd::Zero(1, 1);
        embedding.ratios.clear();
    }
    for (const auto& nbhd : neighborhoods) {
        for (const auto& entry : nbhd.entries) {
            embedding.edges.push_back(EmbeddingEdge{nbhd.owner, entry.index,
                                                    entry.original_distance});
        }
    }

    return ReduceResult{std::move(embedding), std::move(outcome.cloud),
                        std::move(neighborhoods), std::move(outcome.trace),
                        outcome.stop_reason, outcome.steps};
}

}  // namespace mflat
