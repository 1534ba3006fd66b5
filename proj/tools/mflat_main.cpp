// mflat: flatten a sampled data manifold by iterated point interactions, then
// read the intrinsic dimension and low-D coordinates off a PCA of the result.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mflat/datasets.hpp"
#include "mflat/errors.hpp"
#include "mflat/manifest.hpp"
#include "mflat/pipeline.hpp"
#include "mflat/svg.hpp"
#include "mflat/version.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIngestion = 3;
constexpr int kExitDivergence = 4;

struct GenerateArgs {
    std::string kind;
    std::string out;
    mflat::SurfaceSpec spec;
};

struct ReduceArgs {
    std::string input;
    std::string out_prefix;
    std::string config_path;
    mflat::DeformConfig config;
    double ratio_threshold = 0.05;
    bool svg = false;
};

/// CLI11 option handles, used to give command-line flags precedence over
/// config-file values.
struct ReduceOptions {
    CLI::Option* input;
    CLI::Option* k;
    CLI::Option* alpha1_amplitude;
    CLI::Option* period;
    CLI::Option* alpha2;
    CLI::Option* clamp_alpha1;
    CLI::Option* epsilon;
    CLI::Option* max_steps;
    CLI::Option* trace_pca_every;
    CLI::Option* ratio_threshold;
    CLI::Option* svg;
};

struct TracePlotArgs {
    std::string trace_path;
    std::string out;
};

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw mflat::ingestion_error("cannot open '" + path + "' for writing");
    }
    return out;
}

// --- key=value config files ------------------------------------------------

int parse_config_int(const std::string& value, const std::string& where) {
    int parsed = 0;
    auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc{} || end != value.data() + value.size()) {
        throw mflat::config_error(where + ": expected an integer, got '" + value + "'");
    }
    return parsed;
}

double parse_config_double(const std::string& value, const std::string& where) {
    double parsed = 0.0;
    auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc{} || end != value.data() + value.size()) {
        throw mflat::config_error(where + ": expected a number, got '" + value + "'");
    }
    return parsed;
}

bool parse_config_bool(const std::string& value, const std::string& where) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw mflat::config_error(where + ": expected true/false, got '" + value + "'");
}

std::string trimmed(const std::string& text) {
    const std::size_t begin = text.find_first_not_of(" \t");
    if (begin == std::string::npos) return {};
    const std::size_t end = text.find_last_not_of(" \t") + 1;
    return text.substr(begin, end - begin);
}

/// Manifest keys that describe results rather than inputs; silently skipped
/// so a run manifest doubles as a config file.
bool is_result_key(const std::string& key) {
    static const char* keys[] = {"tool-version", "point-count", "ambient-dimension",
                                 "stop-reason", "final-steps", "estimated-dimension",
                                 "output-embedding", "output-edges", "output-trace",
                                 "output-svg"};
    for (const char* candidate : keys) {
        if (key == candidate) return true;
    }
    return false;
}

void apply_config_file(ReduceArgs& args, const ReduceOptions& options) {
    std::ifstream in(args.config_path);
    if (!in) {
        throw mflat::config_error("cannot open config file '" + args.config_path + "'");
    }

    std::string line;
    long line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string content = trimmed(line);
        if (content.empty() || content[0] == '#') continue;

        const std::string where = args.config_path + " line " + std::to_string(line_number);
        const std::size_t equals = content.find('=');
        if (equals == std::string::npos) {
            throw mflat::config_error(where + ": expected key=value");
        }
        const std::string key = trimmed(content.substr(0, equals));
        const std::string value = trimmed(content.substr(equals + 1));

        // command-line flags win over config values
        if (key == "input") {
            if (options.input->count() == 0) args.input = value;
        } else if (key == "k") {
            if (options.k->count() == 0) args.config.k = parse_config_int(value, where);
        } else if (key == "alpha1-amplitude") {
            if (options.alpha1_amplitude->count() == 0) {
                args.config.alpha1_amplitude = parse_config_double(value, where);
            }
        } else if (key == "period") {
            if (options.period->count() == 0) args.config.period = parse_config_int(value, where);
        } else if (key == "alpha2") {
            if (options.alpha2->count() == 0) {
                args.config.alpha2 = parse_config_double(value, where);
            }
        } else if (key == "clamp-alpha1") {
            if (options.clamp_alpha1->count() == 0) {
                args.config.clamp_alpha1 = parse_config_bool(value, where);
            }
        } else if (key == "epsilon") {
            if (options.epsilon->count() == 0) {
                args.config.epsilon = parse_config_double(value, where);
            }
        } else if (key == "max-steps") {
            if (options.max_steps->count() == 0) {
                args.config.max_steps = parse_config_int(value, where);
            }
        } else if (key == "trace-pca-every") {
            if (options.trace_pca_every->count() == 0) {
                args.config.trace_pca_every = parse_config_int(value, where);
            }
        } else if (key == "ratio-threshold") {
            if (options.ratio_threshold->count() == 0) {
                args.ratio_threshold = parse_config_double(value, where);
            }
        } else if (key == "svg") {
            if (options.svg->count() == 0) args.svg = parse_config_bool(value, where);
        } else if (!is_result_key(key)) {
            std::cerr << "warning: " << where << ": unknown key '" << key << "' ignored\n";
        }
    }
}

// --- subcommands -------------------------------------------------------------

int run_generate(const GenerateArgs& args) {
    mflat::SurfaceSpec spec = args.spec;
    spec.kind = args.kind == "half-cylinder" ? mflat::SurfaceKind::half_cylinder
                                             : mflat::SurfaceKind::gaussian_surface;
    const mflat::PointCloud cloud = mflat::generate_surface(spec);
    mflat::save_csv(args.out, cloud);
    std::cout << "wrote " << cloud.count() << " points of dimension " << cloud.dimension()
              << " to " << args.out << '\n';
    return 0;
}

int run_reduce(ReduceArgs& args, const ReduceOptions& options) {
    if (!args.config_path.empty()) {
        apply_config_file(args, options);
    }
    if (args.input.empty()) {
        throw mflat::config_error("no input given (positional argument or 'input=' config key)");
    }

    const mflat::PointCloud cloud = mflat::load_csv(args.input);
    const mflat::ReduceResult result = mflat::reduce(cloud, args.config, args.ratio_threshold);

    const std::string embedding_path = args.out_prefix + ".embedding.csv";
    const std::string edges_path = args.out_prefix + ".edges.csv";
    const std::string trace_path = args.out_prefix + ".trace.csv";
    const std::string manifest_path = args.out_prefix + ".manifest";

    {
        auto out = open_output(embedding_path);
        mflat::write_embedding(out, result.embedding.coordinates);
    }
    {
        auto out = open_output(edges_path);
        mflat::write_edges(out, result.neighborhoods);
    }
    {
        auto out = open_output(trace_path);
        mflat::write_trace(out, result.trace);
    }

    mflat::RunManifest manifest;
    manifest.tool_version = mflat::kVersion;
    manifest.input = args.input;
    manifest.k = args.config.resolve_k(cloud.count());
    manifest.alpha1_amplitude = args.config.alpha1_amplitude;
    manifest.period = args.config.period;
    manifest.alpha2 = args.config.alpha2;
    manifest.clamp_alpha1 = args.config.clamp_alpha1;
    manifest.epsilon = args.config.resolve_epsilon(cloud.count());
    manifest.max_steps = args.config.max_steps;
    manifest.trace_pca_every = args.config.trace_pca_every;
    manifest.ratio_threshold = args.ratio_threshold;
    manifest.svg = args.svg;
    manifest.stop_reason = mflat::to_string(result.stop_reason);
    manifest.final_steps = result.steps;
    manifest.estimated_dimension = result.embedding.intrinsic_dimension;
    manifest.point_count = cloud.count();
    manifest.ambient_dimension = cloud.dimension();
    manifest.embedding_path = embedding_path;
    manifest.edges_path = edges_path;
    manifest.trace_path = trace_path;

    if (args.svg) {
        const std::string svg_path = args.out_prefix + ".svg";
        auto out = open_output(svg_path);
        mflat::render_embedding_svg(out, result.embedding.coordinates, result.embedding.edges);
        manifest.svg_path = svg_path;
    }
    {
        auto out = open_output(manifest_path);
        mflat::write_manifest(out, manifest);
    }

    std::cout << "stop reason: " << manifest.stop_reason << " after " << result.steps
              << " steps\n";
    std::cout << "estimated intrinsic dimension: " << result.embedding.intrinsic_dimension
              << '\n';
    std::cout << "outputs: " << embedding_path << ' ' << edges_path << ' ' << trace_path << ' '
              << manifest_path;
    if (manifest.svg_path) std::cout << ' ' << *manifest.svg_path;
    std::cout << '\n';
    return 0;
}

int run_trace_plot(const TracePlotArgs& args) {
    std::ifstream in(args.trace_path);
    if (!in) {
        throw mflat::ingestion_error("cannot open '" + args.trace_path + "' for reading");
    }
    const mflat::DeformTrace trace = mflat::read_trace(in);
    const auto rows = mflat::component_ratio_trace(trace, 6);
    auto out = open_output(args.out);
    mflat::render_trace_svg(out, rows);
    std::cout << "wrote " << args.out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flatten data manifolds by a repelling/elastic interaction field, "
                 "then read intrinsic dimension and coordinates via PCA"};
    app.set_version_flag("--version", mflat::kVersion);
    app.require_subcommand(1);
    app.footer("Set MFLAT_SINGLE_THREAD=1 to force single-threaded field evaluation.");

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "write a synthetic test surface as CSV");
    generate->add_option("--kind", gen.kind, "surface kind")
        ->required()
        ->check(CLI::IsMember({"half-cylinder", "gaussian"}));
    generate->add_option("--grid-u", gen.spec.grid_u, "fast-axis sample count");
    generate->add_option("--grid-v", gen.spec.grid_v, "slow-axis sample count");
    generate->add_option("--radius", gen.spec.radius, "cylinder radius");
    generate->add_option("--height", gen.spec.height, "cylinder height");
    generate->add_option("--amplitude", gen.spec.amplitude, "gaussian peak height");
    generate->add_option("--half-width", gen.spec.half_width, "gaussian grid half-width");
    generate->add_option("--variance", gen.spec.variance, "gaussian variance");
    generate->add_option("--jitter", gen.spec.jitter,
                         "grid jitter as a fraction of the grid spacing");
    generate->add_option("--seed", gen.spec.seed, "jitter seed");
    generate->add_option("--out", gen.out, "output CSV path")->required();

    ReduceArgs red;
    ReduceOptions red_opts;
    auto* reduce = app.add_subcommand("reduce", "run the full dimension-reduction pipeline");
    red_opts.input =
        reduce->add_option("input,--input", red.input, "input CSV (one point per row)");
    reduce->add_option("--out", red.out_prefix, "output path prefix")->required();
    reduce->add_option("--config", red.config_path,
                       "key=value file with the options below (a run manifest works); "
                       "command-line flags win");
    red_opts.k = reduce->add_option("--k", red.config.k, "neighborhood size; 0 = min(10, N-1)");
    red_opts.alpha1_amplitude = reduce->add_option("--alpha1-amplitude",
                                                   red.config.alpha1_amplitude,
                                                   "peak repelling weight");
    red_opts.period =
        reduce->add_option("--period", red.config.period, "alpha1 oscillation period in steps");
    red_opts.alpha2 = reduce->add_option("--alpha2", red.config.alpha2, "elastic weight");
    red_opts.clamp_alpha1 =
        reduce->add_flag("--clamp-alpha1,!--no-clamp-alpha1", red.config.clamp_alpha1,
                         "clamp alpha1 at zero instead of letting the cosine go negative");
    red_opts.epsilon =
        reduce->add_option("--epsilon", red.config.epsilon,
                           "stop when summed displacement drops below this; default 1e-6*N");
    red_opts.max_steps = reduce->add_option("--max-steps", red.config.max_steps, "step cap");
    red_opts.trace_pca_every =
        reduce->add_option("--trace-pca-every", red.config.trace_pca_every,
                           "record PCA ratios every this many steps (0 = off)");
    red_opts.ratio_threshold =
        reduce->add_option("--ratio-threshold", red.ratio_threshold,
                           "PCA ratio cutoff for the dimension estimate");
    red_opts.svg = reduce->add_flag("--svg", red.svg, "also render the 2-D embedding as SVG");

    TracePlotArgs plot;
    auto* trace_plot = app.add_subcommand("trace-plot",
                                          "render component-ratio curves from a trace file");
    trace_plot->add_option("trace,--trace", plot.trace_path, "trace CSV from reduce")->required();
    trace_plot->add_option("--out", plot.out, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (generate->parsed()) return run_generate(gen);
        if (reduce->parsed()) return run_reduce(red, red_opts);
        if (trace_plot->parsed()) return run_trace_plot(plot);
    } catch (const mflat::divergence_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const mflat::ingestion_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIngestion;
    } catch (const mflat::config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
