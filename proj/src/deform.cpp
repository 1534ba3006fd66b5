#include "mflat/deform.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>

#include "mflat/errors.hpp"
#include "mflat/spectral.hpp"
#include "num_format.hpp"

namespace mflat {

void DeformConfig::validate() const {
    if (k < 0) throw config_error("k must be >= 1 (or 0 for the automatic default)");
    if (period < 1) throw config_error("period must be >= 1");
    if (max_steps < 1) throw config_error("max_steps must be >= 1");
    if (alpha2 < 0.0) throw config_error("alpha2 must be >= 0");
    if (epsilon.has_value() && (!(*epsilon >= 0.0))) throw config_error("epsilon must be >= 0");
    if (trace_pca_every < 0) throw config_error("trace_pca_every must be >= 0");
}

int DeformConfig::resolve_k(Eigen::Index point_count) const {
    if (k != 0) return k;
    return static_cast<int>(std::min<Eigen::Index>(10, point_count - 1));
}

double DeformConfig::resolve_epsilon(Eigen::Index point_count) const {
    return epsilon.value_or(1e-6 * static_cast<double>(point_count));
}

const char* to_string(StopReason reason) {
    return reason == StopReason::epsilon ? "epsilon" : "max_steps";
}

Eigen::RowVectorXd repel_vector(const Eigen::RowVectorXd& pi, const Eigen::RowVectorXd& pj,
                                double current_distance, std::optional<double> degree) {
    if (current_distance == 0.0) {
        return Eigen::RowVectorXd::Zero(pi.size());  // coincident: direction undefined
    }
    if (degree.has_value()) {
        return (1.0 - *degree) * (pi - pj) / current_distance;
    }
    return (pi - pj) / current_distance;
}

Eigen::RowVectorXd elastic_vector(const Eigen::RowVectorXd& pi, const Eigen::RowVectorXd& pj,
                                  double current_distance, double original_distance,
                                  std::optional<double> degree) {
    if (!degree.has_value() || current_distance == 0.0) {
        return Eigen::RowVectorXd::Zero(pi.size());
    }
    return *degree * (original_distance - current_distance) * (pi - pj) / current_distance;
}

std::pair<double, double> schedule_alphas(int step_count, const DeformConfig& config) {
    const double fraction = static_cast<double>(step_count % config.period) /
                            static_cast<double>(config.period);
    double alpha1 = config.alpha1_amplitude * std::cos(2.0 * std::numbers::pi * fraction);
    if (config.clamp_alpha1) alpha1 = std::max(alpha1, 0.0);
    return {alpha1, config.alpha2};
}

namespace {

/// Field rows [first, last): both sums run over ascending j so results do not
/// depend on how rows are split across threads.
void field_rows(const Eigen::MatrixXd& snapshot, const NeighborTable& neighbors,
                double alpha1, double alpha2, Eigen::Index first, Eigen::Index last,
                Eigen::MatrixXd& out) {
    const Eigen::Index n_points = snapshot.rows();
    const Eigen::Index dim = snapshot.cols();
    Eigen::RowVectorXd diff(dim);
    Eigen::RowVectorXd repel(dim);
    Eigen::RowVectorXd elastic(dim);

    for (Eigen::Index i = first; i < last; ++i) {
        repel.setZero();
        elastic.setZero();
        for (Eigen::Index j = 0; j < n_points; ++j) {
            if (j == i) continue;
            diff = snapshot.row(i) - snapshot.row(j);
            double sum = 0.0;  // ordered accumulation, matching pairwise_distances
            for (Eigen::Index c = 0; c < dim; ++c) sum += diff(c) * diff(c);
            const double dist = std::sqrt(sum);
            if (dist == 0.0) continue;  // coincident this step: no contribution
            if (neighbors.contains(i, j)) {
                const double nd = neighbors.degree(i, j);
                repel.noalias() += (1.0 - nd) * diff / dist;
                elastic.noalias() += nd * (neighbors.original_distance(i, j) - dist) * diff / dist;
            } else {
                repel.noalias() += diff / dist;
            }
        }
        out.row(i) = alpha1 * repel + alpha2 * elastic;
    }
}

bool single_thread_forced() {
    const char* value = std::getenv("MFLAT_SINGLE_THREAD");
    return value != nullptr && value[0] != '\0' && !(value[0] == '0' && value[1] == '\0');
}

// Below this many points the per-step work is too small for threads to pay off.
constexpr Eigen::Index kThreadedFieldThreshold = 2048;

}  // namespace

namespace detail {

Eigen::MatrixXd total_field_threads(const Eigen::MatrixXd& snapshot, const NeighborTable& neighbors,
                                    double alpha1, double alpha2, int threads) {
    const Eigen::Index n_points = snapshot.rows();
    Eigen::MatrixXd field(n_points, snapshot.cols());

    threads = std::max(1, std::min<int>(threads, static_cast<int>(n_points)));
    if (threads == 1) {
        field_rows(snapshot, neighbors, alpha1, alpha2, 0, n_points, field);
        return field;
    }

    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(threads));
    const Eigen::Index chunk = (n_points + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const Eigen::Index first = t * chunk;
        const Eigen::Index last = std::min(n_points, first + chunk);
        if (first >= last) break;
        workers.emplace_back([&, first, last] {
            field_rows(snapshot, neighbors, alpha1, alpha2, first, last, field);
        });
    }
    for (auto& worker : workers) worker.join();
    return field;
}

}  // namespace detail

Eigen::MatrixXd total_field(const PointCloud& snapshot, const NeighborTable& neighbors,
                            double alpha1, double alpha2) {
    int threads = 1;
    if (snapshot.count() >= kThreadedFieldThreshold && !single_thread_forced()) {
        threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    return detail::total_field_threads(snapshot.coords, neighbors, alpha1, alpha2, threads);
}

StepRecord deform_step(DeformState& state, const NeighborTable& neighbors,
                       const DeformConfig& config) {
    const auto [alpha1, alpha2] = schedule_alphas(state.step_count, config);
    const Eigen::MatrixXd field = total_field(state.cloud, neighbors, alpha1, alpha2);

    state.cloud.coords += field;
    state.step_count += 1;
    if (!state.cloud.coords.allFinite()) {
        throw divergence_error(
            "deformation diverged (non-finite coordinates) at step " +
                std::to_string(state.step_count),
            state.step_count);
    }

    double total = 0.0;
    for (Eigen::Index i = 0; i < field.rows(); ++i) total += field.row(i).norm();
    state.last_total_displacement = total;

    return StepRecord{state.step_count, alpha1, total, {}};
}

RunOutcome run_deformation(const PointCloud& cloud,
                           const std::vector<SoftNeighborhood>& neighborhoods,
                           const DeformConfig& config) {
    config.validate();
    cloud.validate();

    const double epsilon = config.resolve_epsilon(cloud.count());
    const NeighborTable table(neighborhoods, cloud.count());

    DeformState state{cloud, 0, 0.0};
    DeformTrace trace;
    for (;;) {
        StepRecord record = deform_step(state, table, config);
        if (config.trace_pca_every > 0 && state.step_count % config.trace_pca_every == 0 &&
            state.cloud.count() >= 2) {
            const PcaResult spectrum = pca(state.cloud);
            record.pca_ratios.assign(spectrum.ratios.begin(), spectrum.ratios.end());
        }
        trace.records.push_back(std::move(record));

        if (state.last_total_displacement < epsilon) {
            return RunOutcome{std::move(state.cloud), std::move(trace), StopReason::epsilon,
                              state.step_count};
        }
        if (state.step_count >= config.max_steps) {
            return RunOutcome{std::move(state.cloud), std::move(trace), StopReason::max_steps,
                              state.step_count};
        }
    }
}

RunOutcome run_deformation(const PointCloud& cloud, const DeformConfig& config) {
    config.validate();
    cloud.validate();
    const DistanceMatrix d0 = pairwise_distances(cloud);
    const auto neighborhoods =
        build_soft_neighborhoods(d0, std::max(1, config.resolve_k(cloud.count())));
    return run_deformation(cloud, neighborhoods, config);
}

void write_trace(std::ostream& out, const DeformTrace& trace) {
    for (const auto& record : trace.records) {
        out << record.step << ',' << detail::format_double(record.alpha1) << ','
            << detail::format_double(record.total_displacement);
        if (!record.pca_ratios.empty()) {
            for (std::size_t m = 0; m < 6; ++m) {
                out << ','
                    << detail::format_double(m < record.pca_ratios.size() ? record.pca_ratios[m]
                                                                          : 0.0);
            }
        }
        out << '\n';
    }
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_trace_double(const std::string& field, long line_number) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [end, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || end != last) {
        throw ingestion_error("trace line " + std::to_string(line_number) +
                              ": not a number: '" + field + "'");
    }
    return value;
}

int parse_trace_int(const std::string& field, long line_number) {
    int value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [end, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || end != last) {
        throw ingestion_error("trace line " + std::to_string(line_number) +
                              ": not a step count: '" + field + "'");
    }
    return value;
}

}  // namespace

DeformTrace read_trace(std::istream& in) {
    DeformTrace trace;
    std::string line;
    long line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        const auto fields = split_fields(line);
        if (fields.size() != 3 && fields.size() != 9) {
            throw ingestion_error("trace line " + std::to_string(line_number) + ": expected 3 or 9 fields, got " +
                                  std::to_string(fields.size()));
        }

        StepRecord record;
        record.step = parse_trace_int(fields[0], line_number);
        record.alpha1 = parse_trace_double(fields[1], line_number);
        record.total_displacement = parse_trace_double(fields[2], line_number);
        for (std::size_t m = 3; m < fields.size(); ++m) {
            record.pca_ratios.push_back(parse_trace_double(fields[m], line_number));
        }
        trace.records.push_back(std::move(record));
    }
    return trace;
}

}  // namespace mflat
