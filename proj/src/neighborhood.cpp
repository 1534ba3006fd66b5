#include "mflat/neighborhood.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "mflat/diagnostics.hpp"
#include "mflat/errors.hpp"
#include "num_format.hpp"

namespace mflat {

std::vector<std::vector<Eigen::Index>> knn_sets(const DistanceMatrix& d0, int k) {
    const Eigen::Index n = d0.size();
    if (k < 1) {
        throw config_error("neighborhood size k must be >= 1 (got " + std::to_string(k) + ")");
    }
    if (k >= n) {
        throw config_error("neighborhood size k must be < N (got k=" + std::to_string(k) +
                           ", N=" + std::to_string(n) + ")");
    }

    std::vector<std::vector<Eigen::Index>> result(static_cast<std::size_t>(n));
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n) - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index next = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) order[static_cast<std::size_t>(next++)] = j;
        }
        // ascending distance, ties toward the lower index
        std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            const double da = d0(i, a);
            const double db = d0(i, b);
            return da != db ? da < db : a < b;
        });
        result[static_cast<std::size_t>(i)].assign(order.begin(), order.begin() + k);
    }
    return result;
}

std::vector<double> neighbor_degrees(std::span<const double> neighbor_distances,
                                     Eigen::Index owner) {
    if (neighbor_distances.empty()) {
        throw config_error("neighbor degree computation needs a nonempty distance list");
    }

    double d_min = std::numeric_limits<double>::infinity();
    double d_min_positive = std::numeric_limits<double>::infinity();
    for (double d : neighbor_distances) {
        d_min = std::min(d_min, d);
        if (d > 0.0) d_min_positive = std::min(d_min_positive, d);
    }

    std::vector<double> degrees;
    degrees.reserve(neighbor_distances.size());

    if (d_min > 0.0) {
        for (double d : neighbor_distances) degrees.push_back(d_min / d);
        return degrees;
    }

    // Coincident neighbors: the ratio is undefined at distance zero, so those
    // entries count as fully true neighbors and the remaining ratios use the
    // smallest strictly positive distance.
    diag::warn("zero-distance neighbor(s) for point " +
               (owner >= 0 ? std::to_string(owner) : std::string("<unknown>")) +
               "; assigning degree 1 to coincident entries");
    const bool all_zero = !std::isfinite(d_min_positive);
    for (double d : neighbor_distances) {
        degrees.push_back(d == 0.0 || all_zero ? 1.0 : d_min_positive / d);
    }
    return degrees;
}

std::vector<SoftNeighborhood> build_soft_neighborhoods(const DistanceMatrix& d0, int k) {
    const Eigen::Index n = d0.size();
    if (n == 1) {
        // Nothing to select from; a single empty neighborhood keeps the
        // one-point deformation run well-defined.
        return {SoftNeighborhood{0, {}}};
    }

    const auto index_sets = knn_sets(d0, k);
    std::vector<SoftNeighborhood> result;
    result.reserve(index_sets.size());

    std::vector<double> distances;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& indices = index_sets[static_cast<std::size_t>(i)];
        distances.clear();
        for (Eigen::Index j : indices) distances.push_back(d0(i, j));

        const auto degrees = neighbor_degrees(distances, i);

        SoftNeighborhood nbhd{i, {}};
        nbhd.entries.reserve(indices.size());
        for (std::size_t e = 0; e < indices.size(); ++e) {
            nbhd.entries.push_back(NeighborEntry{indices[e], distances[e], degrees[e]});
        }
        result.push_back(std::move(nbhd));
    }
    return result;
}

void write_edges(std::ostream& out, const std::vector<SoftNeighborhood>& neighborhoods) {
    for (const auto& nbhd : neighborhoods) {
        for (const auto& entry : nbhd.entries) {
            out << nbhd.owner << ',' << entry.index << ','
                << detail::format_double(entry.degree) << ','
                << detail::format_double(entry.original_distance) << '\n';
        }
    }
}

NeighborTable::NeighborTable(const std::vector<SoftNeighborhood>& neighborhoods,
                             Eigen::Index point_count)
    : n_(point_count),
      degree_(static_cast<std::size_t>(point_count * point_count), -1.0),
      d0_(static_cast<std::size_t>(point_count * point_count), 0.0) {
    for (const auto& nbhd : neighborhoods) {
        for (const auto& entry : nbhd.entries) {
            const std::size_t slot = static_cast<std::size_t>(nbhd.owner * n_ + entry.index);
            degree_[slot] = entry.degree;
            d0_[slot] = entry.original_distance;
        }
    }
}

}  // namespace mflat
