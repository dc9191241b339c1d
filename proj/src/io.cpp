#include "rkm/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <system_error>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rkm/errors.hpp"

namespace rkm {

namespace {

struct Cell {
    std::string text;
    int line = 0;    // 1-based
    int column = 0;  // 1-based cell index within the line
};

std::string trimmed(const std::string& s, char delimiter) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    const auto is_pad = [&](char c) {
        return c == ' ' || c == '\r' || (c == '\t' && delimiter != '\t');
    };
    while (begin < end && is_pad(s[begin])) ++begin;
    while (end > begin && is_pad(s[end - 1])) --end;
    return s.substr(begin, end - begin);
}

std::vector<std::vector<Cell>> read_grid(const std::string& path, char delimiter) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file", path);
    std::vector<std::vector<Cell>> grid;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trimmed(line, delimiter).empty()) continue;
        std::vector<Cell> row;
        std::size_t start = 0;
        int column = 0;
        while (true) {
            const std::size_t pos = line.find(delimiter, start);
            const std::string token =
                pos == std::string::npos ? line.substr(start) : line.substr(start, pos - start);
            row.push_back({trimmed(token, delimiter), line_number, ++column});
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        grid.push_back(std::move(row));
    }
    if (in.bad()) throw IoError("read failure", path);
    if (grid.empty()) throw ParseError("file contains no data rows", path, 1, 1);
    return grid;
}

double parse_cell(const Cell& cell, const std::string& path) {
    const std::string& s = cell.text;
    if (s.empty()) throw ParseError("empty cell", path, cell.line, cell.column);
    const char* begin = s.data();
    const char* end = begin + s.size();
    if (*begin == '+') ++begin;  // from_chars rejects an explicit plus sign
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec == std::errc::result_out_of_range)
        throw ParseError("value out of range: '" + s + "'", path, cell.line, cell.column);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("malformed number: '" + s + "'", path, cell.line, cell.column);
    return value;
}

void check_unique_names(const std::vector<std::string>& names, const std::vector<Cell>& cells,
                        const std::string& path) {
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!seen.insert(names[i]).second)
            throw ParseError("duplicate point name: '" + names[i] + "'", path, cells[i].line,
                             cells[i].column);
    }
}

struct Grid {
    std::vector<std::vector<double>> rows;
    std::vector<std::string> names;
    std::vector<Cell> name_cells;
};

// Shared shape handling for matrix and points files: optional header line,
// optional name column, ragged-row detection, numeric parsing.
Grid parse_table(const std::string& path, const ReadOptions& options, char delimiter) {
    const auto grid = read_grid(path, delimiter);

    std::size_t first_data = 0;
    if (options.has_header) {
        first_data = 1;
        if (grid.size() < 2)
            throw ParseError("no data rows after header", path, grid[0][0].line, 1);
    }
    const std::size_t total_cols = grid[first_data].size();
    const std::size_t name_cols = options.names_in_first_column ? 1 : 0;
    if (total_cols <= name_cols)
        throw ParseError("row has no data cells", path, grid[first_data][0].line, 1);
    const std::size_t data_cols = total_cols - name_cols;

    if (options.has_header) {
        const std::size_t header_cols = grid[0].size();
        // With a name column the header may or may not carry a corner cell.
        const bool ok = options.names_in_first_column
                            ? header_cols == data_cols || header_cols == data_cols + 1
                            : header_cols == data_cols;
        if (!ok)
            throw ParseError("header has " + std::to_string(header_cols) + " cells, expected " +
                                 std::to_string(data_cols),
                             path, grid[0][0].line, 1);
    }

    Grid out;
    for (std::size_t r = first_data; r < grid.size(); ++r) {
        const auto& row = grid[r];
        if (row.size() != total_cols)
            throw ParseError("ragged row: expected " + std::to_string(total_cols) + " cells, got " +
                                 std::to_string(row.size()),
                             path, row[0].line, 1);
        if (options.names_in_first_column) {
            out.names.push_back(row[0].text);
            out.name_cells.push_back(row[0]);
        }
        std::vector<double> values;
        values.reserve(data_cols);
        for (std::size_t c = name_cols; c < total_cols; ++c) values.push_back(parse_cell(row[c], path));
        out.rows.push_back(std::move(values));
    }

    if (!options.names_in_first_column && options.has_header) {
        const auto& header = grid[0];
        for (const auto& cell : header) {
            out.names.push_back(cell.text);
            out.name_cells.push_back(cell);
        }
    }
    check_unique_names(out.names, out.name_cells, path);
    return out;
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing", path);
    out << body;
    out.flush();
    if (!out) throw IoError("write failure", path);
}

}  // namespace

char infer_delimiter(const std::string& path) {
    if (path.size() < 4) return ',';
    std::string ext = path.substr(path.size() - 4);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".tsv" ? '\t' : ',';
}

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

MatrixInput read_matrix(const std::string& path, const ReadOptions& options) {
    const char delimiter = options.delimiter ? options.delimiter : infer_delimiter(path);
    Grid grid = parse_table(path, options, delimiter);
    if (options.square_input) {
        for (auto& row : grid.rows)
            for (auto& v : row) v = v * v;
    }
    auto matrix = SquaredDissimilarityMatrix::validate(grid.rows, options.symmetry_tolerance);
    if (!grid.names.empty() && static_cast<int>(grid.names.size()) != matrix.size()) {
        throw ParseError("expected " + std::to_string(matrix.size()) + " names, got " +
                             std::to_string(grid.names.size()),
                         path, grid.name_cells[0].line, grid.name_cells[0].column);
    }
    return {std::move(matrix), std::move(grid.names)};
}

PointsInput read_points(const std::string& path, const ReadOptions& options) {
    const char delimiter = options.delimiter ? options.delimiter : infer_delimiter(path);
    Grid grid = parse_table(path, options, delimiter);
    // A header on a points file labels coordinates, not points.
    if (!options.names_in_first_column) grid.names.clear();
    return {std::move(grid.rows), std::move(grid.names)};
}

void write_labels(const std::string& path, const std::vector<std::string>& names,
                  std::span<const int> labels) {
    if (!names.empty() && names.size() != labels.size())
        throw LengthMismatchError("names and labels differ in length");
    std::string body = "point,cluster\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        body += names.empty() ? std::to_string(i) : names[i];
        body += ',';
        body += std::to_string(labels[i]);
        body += '\n';
    }
    write_text(path, body);
}

void write_matrix(const std::string& path, const SquaredDissimilarityMatrix& a, char delimiter) {
    const char delim = delimiter ? delimiter : infer_delimiter(path);
    std::string body;
    for (int i = 0; i < a.size(); ++i) {
        for (int j = 0; j < a.size(); ++j) {
            if (j > 0) body += delim;
            body += format_double(a(i, j));
        }
        body += '\n';
    }
    write_text(path, body);
}

const char* to_string(InitMethod method) {
    return method == InitMethod::random_partition ? "random" : "plusplus";
}

const char* to_string(BetaMode mode) {
    switch (mode) {
        case BetaMode::off: return "off";
        case BetaMode::eager: return "eager";
        default: return "lazy";
    }
}

const char* to_string(EmptyClusterPolicy policy) {
    return policy == EmptyClusterPolicy::repair_farthest ? "repair_farthest" : "error";
}

void write_report(const std::string& path, const RunReport& report, const ReportContext& context) {
    nlohmann::json j;
    j["objective"] = report.final_objective;
    j["beta"] = report.beta_final;
    j["iterations"] = report.iterations;
    j["converged"] = report.converged;
    if (context.labels_file)
        j["labels_file"] = *context.labels_file;
    else
        j["labels_file"] = nullptr;
    j["n"] = context.n;
    j["num_clusters"] = context.config.num_clusters;
    j["config"] = {{"init", to_string(context.config.init)},
                   {"beta_mode", to_string(context.config.beta_mode)},
                   {"max_iterations", context.config.max_iterations},
                   {"objective_tolerance", context.config.objective_tolerance},
                   {"seed", context.config.seed},
                   {"restarts", context.config.restarts},
                   {"empty_cluster_policy", to_string(context.config.empty_cluster_policy)}};
    j["input"] = {{"path", context.input_path},
                  {"mode", context.input_mode},
                  {"square_input", context.square_input}};
    j["objective_trajectory"] = report.objective_trajectory;
    auto increments = nlohmann::json::array();
    for (const auto& inc : report.beta_increments)
        increments.push_back({{"iteration", inc.iteration}, {"delta", inc.delta}});
    j["beta_increments"] = std::move(increments);
    j["restart_index_of_best"] = report.restart_index_of_best;
    j["wall_time_seconds"] = context.wall_time_seconds;
    write_text(path, j.dump(2) + "\n");
}

}  // namespace rkm
