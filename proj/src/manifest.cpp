#include "mflat/manifest.hpp"

#include <ostream>

#include "num_format.hpp"

namespace mflat {

void write_manifest(std::ostream& out, const RunManifest& manifest) {
    using detail::format_double;

    out << "# mflat run manifest; pass back via `mflat reduce --config <this file>`\n";
    out << "tool-version=" << manifest.tool_version << '\n';
    out << "input=" << manifest.input << '\n';
    out << "k=" << manifest.k << '\n';
    out << "alpha1-amplitude=" << format_double(manifest.alpha1_amplitude) << '\n';
    out << "period=" << manifest.period << '\n';
    out << "alpha2=" << format_double(manifest.alpha2) << '\n';
    out << "clamp-alpha1=" << (manifest.clamp_alpha1 ? "true" : "false") << '\n';
    out << "epsilon=" << format_double(manifest.epsilon) << '\n';
    out << "max-steps=" << manifest.max_steps << '\n';
    out << "trace-pca-every=" << manifest.trace_pca_every << '\n';
    out << "ratio-threshold=" << format_double(manifest.ratio_threshold) << '\n';
    out << "svg=" << (manifest.svg ? "true" : "false") << '\n';
    out << "point-count=" << manifest.point_count << '\n';
    out << "ambient-dimension=" << manifest.ambient_dimension << '\n';
    out << "stop-reason=" << manifest.stop_reason << '\n';
    out << "final-steps=" << manifest.final_steps << '\n';
    out << "estimated-dimension=" << manifest.estimated_dimension << '\n';
    out << "output-embedding=" << manifest.embedding_path << '\n';
    out << "output-edges=" << manifest.edges_path << '\n';
    out << "output-trace=" << manifest.trace_path << '\n';
    if (manifest.svg_path) {
        out << "output-svg=" << *manifest.svg_path << '\n';
    }
}

}  // namespace mflat
