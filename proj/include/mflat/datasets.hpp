#pragma once

#include <cstdint>
#include <filesystem>

#include "mflat/geometry.hpp"

namespace mflat {

enum class SurfaceKind { half_cylinder, gaussian_surface };

/// Test-surface description. grid_u samples the fast axis (angle for the
/// cylinder, x for the Gaussian), grid_v the slow one; the generated cloud has
/// grid_u * grid_v points ordered v-major. `jitter` perturbs each grid
/// parameter uniformly by that fraction of the grid spacing, drawn from a
/// seeded deterministic stream.
struct SurfaceSpec {
    SurfaceKind kind = SurfaceKind::half_cylinder;
    int grid_u = 12;
    int grid_v = 10;

    // half cylinder
    double radius = 1.0;
    double height = 2.5;

    // gaussian surface: z = amplitude * exp(-(x^2+y^2) / (2 * variance))
    double amplitude = 3.0;
    double half_width = 5.0;
    double variance = 6.0;

    double jitter = 0.0;
    std::uint64_t seed = 0;

    void validate() const;  // throws config_error
};

/// Half cylinder side face: angle in [0, pi] x height in [0, H], radius r.
PointCloud generate_half_cylinder(const SurfaceSpec& spec);

/// Gaussian bump sampled on a centered square grid.
PointCloud generate_gaussian_surface(const SurfaceSpec& spec);

PointCloud generate_surface(const SurfaceSpec& spec);

/// Load a numeric CSV (one point per row; a single non-numeric first row is
/// treated as a header and skipped). Throws ingestion_error naming the line
/// for ragged rows, non-numeric cells or an empty file.
PointCloud load_csv(const std::filesystem::path& path);

/// Write a cloud as CSV with full round-trip precision.
void save_csv(const std::filesystem::path& path, const PointCloud& cloud);

}  // namespace mflat
