#pragma once

#include <Eigen/Core>

namespace mflat {

/// N sample points in R^n, one row per point. Row index i names the same
/// sample for the lifetime of a run; algorithms must not reorder rows.
struct PointCloud {
    Eigen::MatrixXd coords;

    Eigen::Index count() const noexcept { return coords.rows(); }
    Eigen::Index dimension() const noexcept { return coords.cols(); }

    /// Throws config_error unless N >= 1, n >= 1 and all entries are finite.
    void validate() const;
};

/// Full symmetric matrix of pairwise Euclidean distances, zero diagonal.
struct DistanceMatrix {
    Eigen::MatrixXd values;

    Eigen::Index size() const noexcept { return values.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return values(i, j); }
};

/// Dense Euclidean distance matrix of a cloud. Coincident pairs (distance 0
/// between distinct indices) are permitted but reported through diag::warn.
DistanceMatrix pairwise_distances(const PointCloud& cloud);

}  // namespace mflat
