#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "mflat/geometry.hpp"

namespace mflat {

struct NeighborEntry {
    Eigen::Index index;         // neighbor point j
    double original_distance;   // d0_ij, frozen at construction
    double degree;              // ND_ij in (0, 1]
};

/// Directed soft neighborhood of one point: its k nearest points with graded
/// neighbor degrees. j being listed here does not imply i appears in j's set.
struct SoftNeighborhood {
    Eigen::Index owner;
    std::vector<NeighborEntry> entries;  // sorted by ascending original distance
};

/// The k nearest indices for every point, smallest distance first, ties
/// broken toward the lower index. Rejects k < 1 or k >= N.
std::vector<std::vector<Eigen::Index>> knn_sets(const DistanceMatrix& d0, int k);

/// Neighbor degrees d_min / d for one point's neighbor distances.
///
/// Every output lies in (0, 1] and the minimum-distance entry maps to exactly
/// 1.0. Zero distances (coincident points) get degree 1.0, with d_min taken as
/// the smallest strictly positive distance for the remaining ratios; the case
/// is reported through diag::warn. `owner` only labels that warning.
std::vector<double> neighbor_degrees(std::span<const double> neighbor_distances,
                                     Eigen::Index owner = -1);

/// knn_sets + neighbor_degrees for every point. Degrees and distances are
/// computed once from d0 and never updated afterwards. A 1-point cloud yields
/// a single empty neighborhood (there is nothing to select).
std::vector<SoftNeighborhood> build_soft_neighborhoods(const DistanceMatrix& d0, int k);

/// Edge-list export, one line `i,j,ND_ij,d0_ij` per entry (0-based indices,
/// full-precision values).
void write_edges(std::ostream& out, const std::vector<SoftNeighborhood>& neighborhoods);

/// O(1) membership/degree lookup used by the field evaluation.
class NeighborTable {
public:
    NeighborTable(const std::vector<SoftNeighborhood>& neighborhoods, Eigen::Index point_count);

    Eigen::Index point_count() const noexcept { return n_; }

    bool contains(Eigen::Index i, Eigen::Index j) const { return degree_[i * n_ + j] >= 0.0; }
    double degree(Eigen::Index i, Eigen::Index j) const { return degree_[i * n_ + j]; }
    double original_distance(Eigen::Index i, Eigen::Index j) const { return d0_[i * n_ + j]; }

private:
    Eigen::Index n_;
    std::vector<double> degree_;  // -1 marks "not a neighbor"
    std::vector<double> d0_;
};

}  // namespace mflat
