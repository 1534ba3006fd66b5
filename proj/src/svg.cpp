#include "mflat/svg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "mflat/errors.hpp"
#include "num_format.hpp"

namespace mflat {

namespace {

constexpr double kCanvas = 640.0;
constexpr double kMargin = 40.0;

struct Frame {
    double x_min, x_max, y_min, y_max;

    double sx(double x) const {
        const double span = x_max - x_min;
        if (span == 0.0) return kCanvas / 2.0;
        return kMargin + (x - x_min) / span * (kCanvas - 2.0 * kMargin);
    }
    // SVG y grows downward; data y grows upward.
    double sy(double y) const {
        const double span = y_max - y_min;
        if (span == 0.0) return kCanvas / 2.0;
        return kCanvas - kMargin - (y - y_min) / span * (kCanvas - 2.0 * kMargin);
    }
};

std::string num(double v) { return detail::format_double(v); }

const char* kPalette[6] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

void render_embedding_svg(std::ostream& out, const Eigen::MatrixXd& coordinates,
                          const std::vector<EmbeddingEdge>& edges) {
    const Eigen::Index n = coordinates.rows();
    if (n < 1) throw config_error("embedding plot needs at least one point");

    auto px = [&](Eigen::Index i) { return coordinates(i, 0); };
    auto py = [&](Eigen::Index i) { return coordinates.cols() >= 2 ? coordinates(i, 1) : 0.0; };

    Frame frame{px(0), px(0), py(0), py(0)};
    for (Eigen::Index i = 0; i < n; ++i) {
        frame.x_min = std::min(frame.x_min, px(i));
        frame.x_max = std::max(frame.x_max, px(i));
        frame.y_min = std::min(frame.y_min, py(i));
        frame.y_max = std::max(frame.y_max, py(i));
    }

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kCanvas << ' '
        << kCanvas << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    out << "<g stroke=\"#9dbcd4\" stroke-width=\"1\">\n";
    for (const auto& edge : edges) {
        out << "<line x1=\"" << num(frame.sx(px(edge.i))) << "\" y1=\"" << num(frame.sy(py(edge.i)))
            << "\" x2=\"" << num(frame.sx(px(edge.j))) << "\" y2=\"" << num(frame.sy(py(edge.j)))
            << "\"/>\n";
    }
    out << "</g>\n";

    for (Eigen::Index i = 0; i < n; ++i) {
        const double cx = frame.sx(px(i));
        const double cy = frame.sy(py(i));
        out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy)
            << "\" r=\"3\" fill=\"#1f4e79\"/>\n";
        out << "<text x=\"" << num(cx + 4.0) << "\" y=\"" << num(cy - 4.0)
            << "\" font-size=\"9\" fill=\"#333\">" << i << "</text>\n";
    }
    out << "</svg>\n";
}

void render_trace_svg(std::ostream& out, const std::vector<RatioTraceRow>& rows) {
    if (rows.empty()) {
        throw ingestion_error("trace contains no PCA records; rerun with --trace-pca-every > 0");
    }
    const std::size_t series_count =
        rows.front().ratios.empty() ? 0 : rows.front().ratios.size();
    if (series_count == 0) {
        throw ingestion_error("trace records carry no component ratios");
    }

    Frame frame{static_cast<double>(rows.front().step), static_cast<double>(rows.back().step),
                0.0, 0.0};
    for (const auto& row : rows) {
        for (double r : row.ratios) frame.y_max = std::max(frame.y_max, r);
    }
    if (frame.y_max == 0.0) frame.y_max = 1.0;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kCanvas << ' '
        << kCanvas << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // axes
    out << "<g stroke=\"#444\" stroke-width=\"1\">\n";
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kCanvas - kMargin << "\" x2=\""
        << kCanvas - kMargin << "\" y2=\"" << kCanvas - kMargin << "\"/>\n";
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
        << "\" y2=\"" << kCanvas - kMargin << "\"/>\n";
    out << "</g>\n";
    out << "<text x=\"" << kCanvas / 2.0 << "\" y=\"" << kCanvas - 8.0
        << "\" font-size=\"12\" text-anchor=\"middle\">step</text>\n";
    out << "<text x=\"" << kMargin << "\" y=\"" << kCanvas - kMargin + 14.0
        << "\" font-size=\"10\">" << rows.front().step << "</text>\n";
    out << "<text x=\"" << kCanvas - kMargin << "\" y=\"" << kCanvas - kMargin + 14.0
        << "\" font-size=\"10\" text-anchor=\"end\">" << rows.back().step << "</text>\n";
    out << "<text x=\"" << kMargin - 4.0 << "\" y=\"" << kMargin
        << "\" font-size=\"10\" text-anchor=\"end\">" << num(frame.y_max) << "</text>\n";

    for (std::size_t s = 0; s < series_count; ++s) {
        const char* color = kPalette[s % 6];
        if (rows.size() == 1) {
            const auto& row = rows.front();
            out << "<circle cx=\"" << num(frame.sx(row.step)) << "\" cy=\""
                << num(frame.sy(row.ratios[s])) << "\" r=\"4\" fill=\"" << color << "\"/>\n";
        } else {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& row : rows) {
                out << num(frame.sx(row.step)) << ',' << num(frame.sy(row.ratios[s])) << ' ';
            }
            out << "\"/>\n";
        }
        const auto& last = rows.back();
        out << "<text x=\"" << num(frame.sx(last.step) + 6.0) << "\" y=\""
            << num(frame.sy(last.ratios[s])) << "\" font-size=\"11\" fill=\"" << color << "\">"
            << (s + 1) << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace mflat
