#pragma once

#include <iosfwd>
#include <vector>

#include "mflat/deform.hpp"
#include "mflat/geometry.hpp"

namespace mflat {

struct PcaResult {
    Eigen::MatrixXd component_vectors;  // n x n, orthonormal columns, descending variance
    Eigen::VectorXd variances;          // population variances (divisor N), descending
    Eigen::VectorXd ratios;             // variances normalized to sum 1 (all 0 if degenerate)
    Eigen::RowVectorXd mean;            // centroid the cloud was centered at
};

/// PCA of a cloud via the covariance spectrum (N >= 2). Component signs are
/// fixed deterministically: the largest-magnitude entry of each vector is made
/// positive, first such entry on ties. An all-coincident cloud has zero total
/// variance; its ratios are all zero and a diagnostic is emitted.
PcaResult pca(const PointCloud& cloud);

/// Number of components with ratio >= ratio_threshold, at least 1.
/// The threshold must lie strictly inside (0, 1).
int estimate_dimension(const PcaResult& result, double ratio_threshold = 0.05);

/// Coordinates of the centered points on the first `dim` component vectors.
Eigen::MatrixXd project(const PointCloud& cloud, const PcaResult& result, int dim);

struct RatioTraceRow {
    int step;
    std::vector<double> ratios;  // exactly top_m values, zero-padded
};

/// Per-step series of the leading component ratios, taken from the trace
/// records that carry PCA data. Rows are padded with zeros when the cloud has
/// fewer than top_m components.
std::vector<RatioTraceRow> component_ratio_trace(const DeformTrace& trace, int top_m);

struct EmbeddingEdge {
    Eigen::Index i;
    Eigen::Index j;
    double original_distance;
};

struct EmbeddingResult {
    int intrinsic_dimension;
    Eigen::MatrixXd coordinates;        // N x intrinsic_dimension
    std::vector<EmbeddingEdge> edges;   // from the original soft neighborhoods
    std::vector<double> ratios;         // full PCA ratio list
};

/// Embedding export, one line `index,x1,...,xd` per point.
void write_embedding(std::ostream& out, const Eigen::MatrixXd& coordinates);

}  // namespace mflat
