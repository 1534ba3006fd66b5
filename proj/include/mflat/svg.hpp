#pragma once

#include <iosfwd>
#include <vector>

#include "mflat/spectral.hpp"

namespace mflat {

/// Static scatter plot of a 2-D embedding: one line per neighbor edge, one
/// circle + 0-based index label per point. A 1-D embedding is drawn on the
/// x-axis.
void render_embedding_svg(std::ostream& out, const Eigen::MatrixXd& coordinates,
                          const std::vector<EmbeddingEdge>& edges);

/// Component-ratio curves over deformation steps, one polyline per component
/// labeled 1..top_m (single-record series degenerate to markers).
void render_trace_svg(std::ostream& out, const std::vector<RatioTraceRow>& rows);

}  // namespace mflat
