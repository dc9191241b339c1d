#include <chrono>
#include <cstdint>
#include <exception>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "rkm/errors.hpp"
#include "rkm/io.hpp"
#include "rkm/matrix.hpp"
#include "rkm/solver.hpp"
#include "rkm/spectral.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitSolver = 4;

struct InputFlags {
    std::string matrix_path;
    std::string points_path;
    bool square_input = false;
    bool has_header = false;
    bool names_in_first_column = false;
    std::string delimiter;  // "", single char, "tab", or "comma"
};

void add_input_flags(CLI::App* cmd, InputFlags& flags) {
    auto* matrix = cmd->add_option("--matrix", flags.matrix_path, "Dense squared-dissimilarity matrix file");
    auto* points = cmd->add_option("--points", flags.points_path, "Dense points file (rows = points)");
    matrix->excludes(points);
    points->excludes(matrix);
    cmd->add_flag("--square-input", flags.square_input,
                  "Treat matrix entries as linear distances and square them on load");
    cmd->add_flag("--header", flags.has_header, "First line is a header");
    cmd->add_flag("--names", flags.names_in_first_column, "First column holds point names");
    cmd->add_option("--delimiter", flags.delimiter,
                    "Cell delimiter: a single character, 'tab', or 'comma' (default: by extension)");
}

char resolve_delimiter(const std::string& text) {
    if (text.empty()) return '\0';
    if (text == "tab") return '\t';
    if (text == "comma") return ',';
    if (text.size() == 1) return text[0];
    throw CLI::ValidationError("--delimiter", "expected a single character, 'tab', or 'comma'");
}

struct LoadedInput {
    rkm::SquaredDissimilarityMatrix matrix;
    std::vector<std::string> names;
    std::string path;
    std::string mode;
};

// Throws rkm errors; usage problems are reported via CLI::ValidationError
// before any file is touched.
LoadedInput load_input(const InputFlags& flags) {
    if (flags.matrix_path.empty() && flags.points_path.empty())
        throw CLI::ValidationError("input", "one of --matrix or --points is required");
    rkm::ReadOptions options;
    options.delimiter = resolve_delimiter(flags.delimiter);
    options.has_header = flags.has_header;
    options.names_in_first_column = flags.names_in_first_column;
    options.square_input = flags.square_input;
    if (!flags.matrix_path.empty()) {
        auto input = rkm::read_matrix(flags.matrix_path, options);
        return {std::move(input.matrix), std::move(input.names), flags.matrix_path, "matrix"};
    }
    if (flags.square_input)
        throw CLI::ValidationError("--square-input", "only applies to --matrix input");
    auto input = rkm::read_points(flags.points_path, options);
    return {rkm::SquaredDissimilarityMatrix::from_points(input.points), std::move(input.names),
            flags.points_path, "points"};
}

int fail(int code, const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return code;
}

struct ClusterArgs {
    InputFlags input;
    rkm::SolverConfig config;
    std::string labels_out;
    std::string report_out;
    bool quiet = false;
};

int run_cluster(const ClusterArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    std::optional<LoadedInput> loaded;
    try {
        loaded.emplace(load_input(args.input));
    } catch (const rkm::Error& e) {
        return fail(kExitInput, e.what());
    }

    rkm::RunReport report;
    try {
        report = rkm::solve(loaded->matrix, args.config);
    } catch (const rkm::Error& e) {
        return fail(kExitSolver, e.what());
    }

    try {
        if (!args.labels_out.empty()) rkm::write_labels(args.labels_out, loaded->names, report.labels);
        if (!args.report_out.empty()) {
            rkm::ReportContext context;
            context.n = loaded->matrix.size();
            context.config = args.config;
            context.input_path = loaded->path;
            context.input_mode = loaded->mode;
            context.square_input = args.input.square_input;
            if (!args.labels_out.empty()) context.labels_file = args.labels_out;
            context.wall_time_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            rkm::write_report(args.report_out, report, context);
        }
    } catch (const rkm::Error& e) {
        return fail(kExitInput, e.what());
    }

    if (!args.quiet) {
        std::cout << "n=" << loaded->matrix.size() << " N=" << args.config.num_clusters
                  << " objective=" << rkm::format_double(report.final_objective)
                  << " beta=" << rkm::format_double(report.beta_final) << " iters=" << report.iterations
                  << " converged=" << (report.converged ? "true" : "false") << "\n";
    }
    return kExitOk;
}

int run_check(const InputFlags& flags) {
    std::optional<LoadedInput> loaded;
    try {
        loaded.emplace(load_input(flags));
    } catch (const rkm::Error& e) {
        return fail(kExitInput, e.what());
    }
    try {
        const auto& a = loaded->matrix;
        const rkm::CenteredGram b = rkm::gower_center(a);
        const double min_eigenvalue = rkm::min_restricted_eigenvalue(b);
        const bool euclidean = min_eigenvalue >= -1e-9 * a.scale();
        const double beta = euclidean ? 0.0 : rkm::beta_star(a);
        std::cout << "min_restricted_eigenvalue=" << rkm::format_double(min_eigenvalue) << "\n";
        std::cout << "euclidean=" << (euclidean ? "true" : "false")
                  << " beta_star=" << rkm::format_double(beta) << "\n";
        return euclidean ? 0 : 1;
    } catch (const rkm::Error& e) {
        return fail(kExitSolver, e.what());
    }
}

struct SpreadArgs {
    InputFlags input;
    std::string out_path;
    std::optional<double> beta;
};

int run_spread(const SpreadArgs& args) {
    std::optional<LoadedInput> loaded;
    try {
        loaded.emplace(load_input(args.input));
    } catch (const rkm::Error& e) {
        return fail(kExitInput, e.what());
    }
    try {
        const double beta = args.beta ? *args.beta : rkm::beta_star(loaded->matrix);
        const auto spread = rkm::apply_beta_spread(loaded->matrix, beta);
        rkm::write_matrix(args.out_path, spread);
        std::cout << "beta=" << rkm::format_double(beta) << "\n";
        return kExitOk;
    } catch (const rkm::IoError& e) {
        return fail(kExitInput, e.what());
    } catch (const rkm::Error& e) {
        return fail(kExitSolver, e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relational k-means clustering on squared dissimilarity matrices"};
    app.require_subcommand(1);

    ClusterArgs cluster_args;
    auto* cluster = app.add_subcommand("cluster", "Cluster the input and write labels/report");
    add_input_flags(cluster, cluster_args.input);
    cluster->add_option("--clusters", cluster_args.config.num_clusters, "Number of clusters")
        ->required()
        ->check(CLI::Range(1, std::numeric_limits<int>::max()));
    cluster
        ->add_option("--init", cluster_args.config.init, "Initialization method")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, rkm::InitMethod>{{"random", rkm::InitMethod::random_partition},
                                                   {"plusplus", rkm::InitMethod::plusplus}},
            CLI::ignore_case));
    cluster->add_option("--beta-mode", cluster_args.config.beta_mode, "Correction mode")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, rkm::BetaMode>{{"off", rkm::BetaMode::off},
                                                 {"eager", rkm::BetaMode::eager},
                                                 {"lazy", rkm::BetaMode::lazy}},
            CLI::ignore_case));
    cluster->add_option("--max-iter", cluster_args.config.max_iterations, "Iteration cap")
        ->check(CLI::Range(1, std::numeric_limits<int>::max()));
    cluster->add_option("--tol", cluster_args.config.objective_tolerance, "Relative objective stall tolerance")
        ->check(CLI::NonNegativeNumber);
    cluster->add_option("--seed", cluster_args.config.seed, "RNG seed");
    cluster->add_option("--restarts", cluster_args.config.restarts, "Independent restarts")
        ->check(CLI::Range(1, std::numeric_limits<int>::max()));
    cluster->add_option("--labels-out", cluster_args.labels_out, "Write point,cluster CSV here");
    cluster->add_option("--report-out", cluster_args.report_out, "Write JSON run report here");
    cluster->add_flag("--quiet", cluster_args.quiet, "Suppress the summary line");

    InputFlags check_flags;
    auto* check = app.add_subcommand("check", "Report Euclidean embeddability of the input");
    add_input_flags(check, check_flags);

    SpreadArgs spread_args;
    auto* spread = app.add_subcommand("spread", "Write the beta-spread corrected matrix");
    add_input_flags(spread, spread_args.input);
    spread->add_option("--out", spread_args.out_path, "Output matrix path")->required();
    double spread_beta = 0.0;
    auto* beta_option =
        spread->add_option("--beta", spread_beta, "Spread amount (default: beta_star of the input)")
            ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (cluster->parsed()) return run_cluster(cluster_args);
        if (check->parsed()) return run_check(check_flags);
        if (beta_option->count() > 0) spread_args.beta = spread_beta;
        return run_spread(spread_args);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}
