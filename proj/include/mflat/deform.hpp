#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mflat/geometry.hpp"
#include "mflat/neighborhood.hpp"

namespace mflat {

struct DeformConfig {
    int k = 0;                        // 0 = auto: min(10, N-1)
    double alpha1_amplitude = 1e-4;   // peak repelling weight
    int period = 60;                  // T, steps per alpha1 oscillation
    double alpha2 = 0.1;              // constant elastic weight
    bool clamp_alpha1 = true;         // alpha1 <- max(alpha1, 0); see README
    std::optional<double> epsilon;    // stop threshold; default 1e-6 * N
    int max_steps = 600;
    int trace_pca_every = 0;          // record PCA ratios every this many steps; 0 = off

    /// Throws config_error on invalid values (period < 1, max_steps < 1,
    /// negative epsilon/alpha2, explicit k out of range for resolve_k callers).
    void validate() const;

    int resolve_k(Eigen::Index point_count) const;
    double resolve_epsilon(Eigen::Index point_count) const;
};

enum class StopReason { epsilon, max_steps };

const char* to_string(StopReason reason);

struct StepRecord {
    int step;                          // C after the step was applied
    double alpha1;                     // alpha1 used for this step
    double total_displacement;         // sum over points of |V_i|
    std::vector<double> pca_ratios;    // nonempty only on trace cadence steps
};

struct DeformTrace {
    std::vector<StepRecord> records;
};

struct DeformState {
    PointCloud cloud;                  // current positions, mutated per step
    int step_count = 0;                // C
    double last_total_displacement = 0.0;
};

/// Repelling vector acting on p_i from p_j (directed p_j -> p_i): neighbors
/// contribute (1 - ND) * (p_i - p_j) / d, everything else a unit vector
/// (p_i - p_j) / d. Pass the degree only when j is in i's soft neighborhood.
/// Coincident pairs (d == 0) contribute nothing.
Eigen::RowVectorXd repel_vector(const Eigen::RowVectorXd& pi, const Eigen::RowVectorXd& pj,
                                double current_distance,
                                std::optional<double> degree = std::nullopt);

/// Elastic vector restoring a neighbor pair toward its original distance:
/// ND * (d0 - d) * (p_i - p_j) / d for neighbors, zero otherwise. Compressed
/// pairs push apart, stretched pairs pull together.
Eigen::RowVectorXd elastic_vector(const Eigen::RowVectorXd& pi, const Eigen::RowVectorXd& pj,
                                  double current_distance, double original_distance,
                                  std::optional<double> degree = std::nullopt);

/// Coefficient schedule: alpha1 = amplitude * cos(2*pi*(C mod T)/T), clamped
/// at zero when the config asks for it; alpha2 is constant.
std::pair<double, double> schedule_alphas(int step_count, const DeformConfig& config);

/// Per-point displacement field V_i = alpha1 * sum_j repel + alpha2 * sum_j
/// elastic, evaluated on the snapshot with a fixed ascending-j summation
/// order. Returns one row per point.
///
/// Rows are independent; evaluation may be split across threads (see
/// MFLAT_SINGLE_THREAD in the README) without changing any bit of the result.
Eigen::MatrixXd total_field(const PointCloud& snapshot, const NeighborTable& neighbors,
                            double alpha1, double alpha2);

namespace detail {
/// Same as total_field with an explicit thread count (tests pin it).
Eigen::MatrixXd total_field_threads(const Eigen::MatrixXd& snapshot, const NeighborTable& neighbors,
                                    double alpha1, double alpha2, int threads);
}  // namespace detail

/// One synchronous step: alphas from the pre-step count, field from the
/// pre-step snapshot, all positions updated together, C incremented. Throws
/// divergence_error if any coordinate turns non-finite.
StepRecord deform_step(DeformState& state, const NeighborTable& neighbors,
                       const DeformConfig& config);

struct RunOutcome {
    PointCloud cloud;        // final positions
    DeformTrace trace;
    StopReason stop_reason;
    int steps;               // final C
};

/// Full deformation loop against prebuilt neighborhoods: steps until the
/// summed displacement drops below epsilon or C reaches max_steps. PCA ratios
/// of the current cloud are recorded whenever C is a multiple of
/// trace_pca_every (> 0).
RunOutcome run_deformation(const PointCloud& cloud,
                           const std::vector<SoftNeighborhood>& neighborhoods,
                           const DeformConfig& config);

/// Convenience overload: computes original distances and soft neighborhoods
/// from the cloud, then runs the loop.
RunOutcome run_deformation(const PointCloud& cloud, const DeformConfig& config);

/// Trace export, one line `C,alpha1,total_displacement[,ratio1..ratio6]` per
/// step; the six ratio columns appear only on PCA-recorded steps.
void write_trace(std::ostream& out, const DeformTrace& trace);

/// Parse a trace file written by write_trace. Throws ingestion_error with a
/// line number on malformed rows.
DeformTrace read_trace(std::istream& in);

}  // namespace mflat
