#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rkm/matrix.hpp"
#include "rkm/solver.hpp"

namespace rkm {

struct ReadOptions {
    char delimiter = '\0';  // '\0' infers from extension: .tsv -> tab, else comma
    bool has_header = false;
    bool names_in_first_column = false;
    bool square_input = false;  // matrix mode: square each entry on load
    std::optional<double> symmetry_tolerance;
};

struct MatrixInput {
    SquaredDissimilarityMatrix matrix;
    std::vector<std::string> names;  // empty when unnamed
};

struct PointsInput {
    std::vector<std::vector<double>> points;
    std::vector<std::string> names;
};

char infer_delimiter(const std::string& path);

/// Shortest exact decimal form (17 significant digits): reading the string
/// back yields the identical double.
std::string format_double(double value);

/// Dense delimited grid -> validated matrix. Names come from the header row,
/// or from the first column when flagged. Throws IoError on unreadable
/// files, ParseError (with line/column) on malformed cells, ragged rows, or
/// duplicate names, and passes matrix validation errors through.
MatrixInput read_matrix(const std::string& path, const ReadOptions& options = {});

/// Dense delimited grid -> points (rows) with coordinates (columns).
PointsInput read_points(const std::string& path, const ReadOptions& options = {});

/// CSV "point,cluster" with one row per point in input order; point column
/// holds names when provided, zero-based indices otherwise.
void write_labels(const std::string& path, const std::vector<std::string>& names,
                  std::span<const int> labels);

/// Dense grid of entries at 17 significant digits; delimiter '\0' infers
/// from the extension.
void write_matrix(const std::string& path, const SquaredDissimilarityMatrix& a,
                  char delimiter = '\0');

struct ReportContext {
    int n = 0;
    SolverConfig config;
    std::string input_path;
    std::string input_mode;  // "matrix" or "points"
    bool square_input = false;
    std::optional<std::string> labels_file;
    double wall_time_seconds = 0.0;
};

const char* to_string(InitMethod method);
const char* to_string(BetaMode mode);
const char* to_string(EmptyClusterPolicy policy);

/// JSON run report. Top-level keys `objective`, `beta`, `iterations`,
/// `converged`, `labels_file` are a stable contract; the rest (config echo,
/// trajectory, beta increments, timing) is informational.
void write_report(const std::string& path, const RunReport& report, const ReportContext& context);

}  // namespace rkm
