#include "mflat/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "mflat/diagnostics.hpp"
#include "mflat/errors.hpp"
#include "num_format.hpp"

namespace mflat {

namespace {

/// Make the largest-magnitude entry of each column positive (first such entry
/// on ties) so eigenvector signs are reproducible.
void fix_component_signs(Eigen::MatrixXd& components) {
    for (Eigen::Index c = 0; c < components.cols(); ++c) {
        Eigen::Index arg_max = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < components.rows(); ++r) {
            const double magnitude = std::abs(components(r, c));
            if (magnitude > best) {
                best = magnitude;
                arg_max = r;
            }
        }
        if (components(arg_max, c) < 0.0) components.col(c) = -components.col(c);
    }
}

}  // namespace

PcaResult pca(const PointCloud& cloud) {
    cloud.validate();
    const Eigen::Index n_points = cloud.count();
    if (n_points < 2) {
        throw config_error("PCA needs at least 2 points");
    }
    const Eigen::Index dim = cloud.dimension();

    PcaResult result;
    result.mean = cloud.coords.colwise().mean();
    const Eigen::MatrixXd centered = cloud.coords.rowwise() - result.mean;
    const Eigen::MatrixXd covariance =
        (centered.transpose() * centered) / static_cast<double>(n_points);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
    if (solver.info() != Eigen::Success) {
        throw config_error("eigendecomposition of the covariance matrix failed");
    }

    // Solver order is ascending; flip to descending variance.
    result.component_vectors = solver.eigenvectors().rowwise().reverse();
    result.variances = solver.eigenvalues().reverse();
    for (Eigen::Index c = 0; c < dim; ++c) {
        result.variances(c) = std::max(result.variances(c), 0.0);
    }
    fix_component_signs(result.component_vectors);

    const double total = result.variances.sum();
    if (total > 0.0) {
        result.ratios = result.variances / total;
    } else {
        diag::warn("zero total variance (all points coincident); PCA ratios set to 0");
        result.ratios = Eigen::VectorXd::Zero(dim);
    }
    return result;
}

int estimate_dimension(const PcaResult& result, double ratio_threshold) {
    if (!(ratio_threshold > 0.0 && ratio_threshold < 1.0)) {
        throw config_error("ratio threshold must lie strictly inside (0, 1)");
    }
    int count = 0;
    for (Eigen::Index c = 0; c < result.ratios.size(); ++c) {
        if (result.ratios(c) >= ratio_threshold) ++count;
    }
    return std::max(count, 1);
}

Eigen::MatrixXd project(const PointCloud& cloud, const PcaResult& result, int dim) {
    if (dim < 1 || dim > result.component_vectors.cols()) {
        throw config_error("projection dimension out of range");
    }
    return (cloud.coords.rowwise() - result.mean) * result.component_vectors.leftCols(dim);
}

std::vector<RatioTraceRow> component_ratio_trace(const DeformTrace& trace, int top_m) {
    if (top_m < 0) throw config_error("top_m must be >= 0");
    std::vector<RatioTraceRow> rows;
    for (const auto& record : trace.records) {
        if (record.pca_ratios.empty()) continue;
        RatioTraceRow row{record.step, {}};
        row.ratios.reserve(static_cast<std::size_t>(top_m));
        for (int m = 0; m < top_m; ++m) {
            row.ratios.push_back(m < static_cast<int>(record.pca_ratios.size())
                                     ? record.pca_ratios[static_cast<std::size_t>(m)]
                                     : 0.0);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_embedding(std::ostream& out, const Eigen::MatrixXd& coordinates) {
    for (Eigen::Index i = 0; i < coordinates.rows(); ++i) {
        out << i;
        for (Eigen::Index c = 0; c < coordinates.cols(); ++c) {
            out << ',' << detail::format_double(coordinates(i, c));
        }
        out << '\n';
    }
}

}  // namespace mflat
