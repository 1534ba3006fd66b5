#include "mflat/geometry.hpp"

#include <cmath>
#include <string>

#include "mflat/diagnostics.hpp"
#include "mflat/errors.hpp"

namespace mflat {

void PointCloud::validate() const {
    if (coords.rows() < 1) {
        throw config_error("point cloud must contain at least one point");
    }
    if (coords.cols() < 1) {
        throw config_error("point cloud must have ambient dimension >= 1");
    }
    if (!coords.allFinite()) {
        throw config_error("point cloud contains non-finite coordinates");
    }
}

DistanceMatrix pairwise_distances(const PointCloud& cloud) {
    cloud.validate();
    const Eigen::Index n = cloud.count();
    const Eigen::Index dim = cloud.dimension();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);

    long coincident = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            // plain ordered accumulation, so distances are reproducible
            // against scalar re-derivations
            double sum = 0.0;
            for (Eigen::Index c = 0; c < dim; ++c) {
                const double diff = cloud.coords(i, c) - cloud.coords(j, c);
                sum += diff * diff;
            }
            const double dist = std::sqrt(sum);
            d(i, j) = dist;
            d(j, i) = dist;
            if (dist == 0.0) ++coincident;
        }
    }
    if (coincident > 0) {
        diag::warn(std::to_string(coincident) + " coincident point pair(s) in input cloud");
    }
    return DistanceMatrix{std::move(d)};
}

}  // namespace mflat
