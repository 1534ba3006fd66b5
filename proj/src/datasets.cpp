#include "mflat/datasets.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "mflat/errors.hpp"
#include "num_format.hpp"

namespace mflat {

namespace {

/// splitmix64 stream mapped to [-1, 1). Hand-rolled so generated datasets are
/// identical across standard libraries.
class JitterStream {
public:
    explicit JitterStream(std::uint64_t seed) : state_(seed) {}

    double next_symmetric() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z ^= z >> 31;
        const double unit = static_cast<double>(z >> 11) * 0x1.0p-53;  // [0, 1)
        return 2.0 * unit - 1.0;
    }

private:
    std::uint64_t state_;
};

double grid_value(double lo, double hi, int samples, int index) {
    if (samples == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(index) / static_cast<double>(samples - 1);
}

double grid_spacing(double lo, double hi, int samples) {
    return samples > 1 ? (hi - lo) / static_cast<double>(samples - 1) : 0.0;
}

}  // namespace

void SurfaceSpec::validate() const {
    if (grid_u < 1 || grid_v < 1) throw config_error("grid dimensions must be >= 1");
    if (jitter < 0.0) throw config_error("jitter must be >= 0");
    if (kind == SurfaceKind::half_cylinder) {
        if (radius <= 0.0 || height <= 0.0) {
            throw config_error("cylinder radius and height must be > 0");
        }
    } else {
        if (amplitude <= 0.0 || half_width <= 0.0 || variance <= 0.0) {
            throw config_error("gaussian amplitude, half-width and variance must be > 0");
        }
    }
}

PointCloud generate_half_cylinder(const SurfaceSpec& spec) {
    spec.validate();
    const int gu = spec.grid_u;
    const int gv = spec.grid_v;
    JitterStream jitter(spec.seed);
    const double dtheta = grid_spacing(0.0, std::numbers::pi, gu);
    const double dh = grid_spacing(0.0, spec.height, gv);

    Eigen::MatrixXd coords(static_cast<Eigen::Index>(gu) * gv, 3);
    Eigen::Index row = 0;
    for (int b = 0; b < gv; ++b) {
        for (int a = 0; a < gu; ++a) {
            double theta = grid_value(0.0, std::numbers::pi, gu, a);
            double h = grid_value(0.0, spec.height, gv, b);
            if (spec.jitter > 0.0) {
                theta += spec.jitter * dtheta * jitter.next_symmetric();
                h += spec.jitter * dh * jitter.next_symmetric();
            }
            coords(row, 0) = spec.radius * std::cos(theta);
            coords(row, 1) = spec.radius * std::sin(theta);
            coords(row, 2) = h;
            ++row;
        }
    }
    return PointCloud{std::move(coords)};
}

PointCloud generate_gaussian_surface(const SurfaceSpec& spec) {
    spec.validate();
    const int gu = spec.grid_u;
    const int gv = spec.grid_v;
    JitterStream jitter(spec.seed);
    const double dx = grid_spacing(-spec.half_width, spec.half_width, gu);
    const double dy = grid_spacing(-spec.half_width, spec.half_width, gv);

    Eigen::MatrixXd coords(static_cast<Eigen::Index>(gu) * gv, 3);
    Eigen::Index row = 0;
    for (int b = 0; b < gv; ++b) {
        for (int a = 0; a < gu; ++a) {
            double x = grid_value(-spec.half_width, spec.half_width, gu, a);
            double y = grid_value(-spec.half_width, spec.half_width, gv, b);
            if (spec.jitter > 0.0) {
                x += spec.jitter * dx * jitter.next_symmetric();
                y += spec.jitter * dy * jitter.next_symmetric();
            }
            coords(row, 0) = x;
            coords(row, 1) = y;
            coords(row, 2) = spec.amplitude * std::exp(-(x * x + y * y) / (2.0 * spec.variance));
            ++row;
        }
    }
    return PointCloud{std::move(coords)};
}

PointCloud generate_surface(const SurfaceSpec& spec) {
    return spec.kind == SurfaceKind::half_cylinder ? generate_half_cylinder(spec)
                                                   : generate_gaussian_surface(spec);
}

namespace {

bool parse_cell(const std::string& cell, double& value) {
    std::size_t begin = cell.find_first_not_of(" \t");
    if (begin == std::string::npos) return false;
    std::size_t end = cell.find_last_not_of(" \t") + 1;
    const char* first = cell.data() + begin;
    const char* last = cell.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc{} && ptr == last;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

PointCloud load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ingestion_error("cannot open '" + path.string() + "' for reading");
    }

    std::vector<std::vector<double>> rows;
    std::size_t columns = 0;
    std::string line;
    long line_number = 0;
    bool first_content_row = true;

    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        const auto cells = split_cells(line);
        std::vector<double> row;
        row.reserve(cells.size());
        bool numeric = true;
        for (const auto& cell : cells) {
            double value = 0.0;
            if (!parse_cell(cell, value)) {
                numeric = false;
                break;
            }
            row.push_back(value);
        }

        if (!numeric) {
            if (first_content_row) {
                first_content_row = false;  // header row
                continue;
            }
            throw ingestion_error(path.string() + " line " + std::to_string(line_number) +
                                  ": non-numeric cell");
        }
        for (double value : row) {
            if (!std::isfinite(value)) {
                throw ingestion_error(path.string() + " line " + std::to_string(line_number) +
                                      ": non-finite value");
            }
        }
        if (first_content_row) {
            columns = row.size();
            first_content_row = false;
        } else if (rows.empty()) {
            columns = row.size();  // first data row after a header
        }
        if (!rows.empty() && row.size() != columns) {
            throw ingestion_error(path.string() + " line " + std::to_string(line_number) +
                                  ": expected " + std::to_string(columns) + " columns, got " +
                                  std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }

    if (rows.empty()) {
        throw ingestion_error(path.string() + ": no data rows");
    }

    Eigen::MatrixXd coords(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(columns));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < columns; ++c) {
            coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
        }
    }
    PointCloud cloud{std::move(coords)};
    cloud.validate();
    return cloud;
}

void save_csv(const std::filesystem::path& path, const PointCloud& cloud) {
    std::ofstream out(path);
    if (!out) {
        throw ingestion_error("cannot open '" + path.string() + "' for writing");
    }
    for (Eigen::Index i = 0; i < cloud.count(); ++i) {
        for (Eigen::Index c = 0; c < cloud.dimension(); ++c) {
            if (c > 0) out << ',';
            out << detail::format_double(cloud.coords(i, c));
        }
        out << '\n';
    }
    if (!out.flush()) {
        throw ingestion_error("failed writing '" + path.string() + "'");
    }
}

}  // namespace mflat
