#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rkm/errors.hpp"
#include "rkm/io.hpp"
#include "rkm/matrix.hpp"
#include "rkm/solver.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "rkm_io_tests";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& body) {
    const fs::path p = scratch_dir() / name;
    std::ofstream out(p, std::ios::binary);
    out << body;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("read_matrix parses a plain grid") {
    const auto path = write_file("plain.csv", "0,1\n1,0\n");
    const auto input = rkm::read_matrix(path.string());
    CHECK(input.matrix.size() == 2);
    CHECK(input.matrix(0, 1) == 1.0);
    CHECK(input.names.empty());
}

TEST_CASE("read_matrix handles headers, name columns, blank lines and CRLF") {
    const auto with_header = write_file("header.csv", "a,b\r\n0,1\r\n1,0\r\n");
    rkm::ReadOptions options;
    options.has_header = true;
    const auto named = rkm::read_matrix(with_header.string(), options);
    CHECK(named.names == std::vector<std::string>{"a", "b"});

    const auto with_names = write_file("names.csv", "\nx,0,1\n\ny,1,0\n");
    rkm::ReadOptions byrow;
    byrow.names_in_first_column = true;
    const auto named2 = rkm::read_matrix(with_names.string(), byrow);
    CHECK(named2.names == std::vector<std::string>{"x", "y"});
    CHECK(named2.matrix(0, 1) == 1.0);

    const auto corner = write_file("corner.csv", "id,a,b\np,0,1\nq,1,0\n");
    rkm::ReadOptions both;
    both.has_header = true;
    both.names_in_first_column = true;
    const auto named3 = rkm::read_matrix(corner.string(), both);
    CHECK(named3.names == std::vector<std::string>{"p", "q"});
}

TEST_CASE("read_matrix infers tab delimiter from the extension") {
    const auto path = write_file("grid.tsv", "0\t2\n2\t0\n");
    const auto input = rkm::read_matrix(path.string());
    CHECK(input.matrix(0, 1) == 2.0);

    const auto semicolon = write_file("grid.txt", "0;2\n2;0\n");
    rkm::ReadOptions options;
    options.delimiter = ';';
    CHECK(rkm::read_matrix(semicolon.string(), options).matrix(1, 0) == 2.0);
}

TEST_CASE("read_matrix squares entries on request") {
    const auto path = write_file("linear.csv", "0,2\n2,0\n");
    rkm::ReadOptions options;
    options.square_input = true;
    CHECK(rkm::read_matrix(path.string(), options).matrix(0, 1) == 4.0);
}

TEST_CASE("read_matrix reports parse failures with positions") {
    const auto ragged = write_file("ragged.csv", "0,1\n1\n");
    try {
        rkm::read_matrix(ragged.string());
        FAIL("expected ParseError");
    } catch (const rkm::ParseError& e) {
        CHECK(e.line == 2);
    }

    const auto junk = write_file("junk.csv", "0,1\n1,zebra\n");
    try {
        rkm::read_matrix(junk.string());
        FAIL("expected ParseError");
    } catch (const rkm::ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 2);
    }

    const auto dup = write_file("dup.csv", "x,0,1\nx,1,0\n");
    rkm::ReadOptions byrow;
    byrow.names_in_first_column = true;
    CHECK_THROWS_AS(rkm::read_matrix(dup.string(), byrow), rkm::ParseError);

    const auto empty = write_file("empty.csv", "\n\n");
    CHECK_THROWS_AS(rkm::read_matrix(empty.string()), rkm::ParseError);
    CHECK_THROWS_AS(rkm::read_matrix((scratch_dir() / "missing.csv").string()), rkm::IoError);
}

TEST_CASE("read_matrix passes validation failures through") {
    const auto asym = write_file("asym.csv", "0,1\n2,0\n");
    CHECK_THROWS_AS(rkm::read_matrix(asym.string()), rkm::AsymmetryError);
    const auto diag = write_file("diag.csv", "1,0\n0,1\n");
    CHECK_THROWS_AS(rkm::read_matrix(diag.string()), rkm::NonzeroDiagonalError);
    const auto rect = write_file("rect.csv", "0,1,2\n1,0,3\n");
    CHECK_THROWS_AS(rkm::read_matrix(rect.string()), rkm::NonSquareError);
}

TEST_CASE("read_points worked examples") {
    const auto one_d = write_file("points1.csv", "0\n3\n");
    const auto p1 = rkm::read_points(one_d.string());
    CHECK(p1.points == std::vector<std::vector<double>>{{0.0}, {3.0}});

    const auto two_d = write_file("points2.csv", "0,0\n3,4\n");
    const auto p2 = rkm::read_points(two_d.string());
    CHECK(p2.points == std::vector<std::vector<double>>{{0.0, 0.0}, {3.0, 4.0}});

    const auto mixed = write_file("points3.csv", "0,0\n3\n");
    CHECK_THROWS_AS(rkm::read_points(mixed.string()), rkm::ParseError);

    const auto named = write_file("points4.csv", "u,0,0\nv,3,4\n");
    rkm::ReadOptions options;
    options.names_in_first_column = true;
    CHECK(rkm::read_points(named.string(), options).names ==
          std::vector<std::string>{"u", "v"});
}

TEST_CASE("write_labels emits the exact contract bytes") {
    const auto path = scratch_dir() / "labels.csv";
    rkm::write_labels(path.string(), {}, std::vector<int>{0, 1});
    CHECK(slurp(path) == "point,cluster\n0,0\n1,1\n");

    rkm::write_labels(path.string(), {"left", "right"}, std::vector<int>{1, 0});
    CHECK(slurp(path) == "point,cluster\nleft,1\nright,0\n");

    CHECK_THROWS_AS(rkm::write_labels(path.string(), {"only"}, std::vector<int>{0, 1}),
                    rkm::LengthMismatchError);
}

TEST_CASE("matrix write then read is exact") {
    auto rng = support::make_rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = support::uniform_int(rng, 1, 12);
        auto grid = support::random_symmetric_grid(rng, n, 1.0, 0.4);
        // Sprinkle in awkward magnitudes.
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (support::uniform(rng, 0.0, 1.0) < 0.3) {
                    grid[i][j] *= std::pow(10.0, support::uniform_int(rng, -14, 14));
                    grid[j][i] = grid[i][j];
                }
        const auto a = rkm::SquaredDissimilarityMatrix::validate(grid);
        const auto path = scratch_dir() / ("roundtrip" + std::to_string(trial) + ".csv");
        rkm::write_matrix(path.string(), a);
        const auto back = rkm::read_matrix(path.string());
        REQUIRE(back.matrix.size() == n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) CHECK(back.matrix(i, j) == a(i, j));
    }
}

TEST_CASE("format_double round-trips tricky values") {
    const double values[] = {0.1,  1.0 / 3.0, 1.6666666666666667, 1e-300, 1e300, -0.0,
                             5e-324, 12345.678901234567, -2.2250738585072014e-308};
    for (double v : values) {
        const std::string s = rkm::format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("write_report carries the contract keys") {
    const auto a = rkm::SquaredDissimilarityMatrix::validate(
        {{0.0, 1.0, 9.0}, {1.0, 0.0, 1.0}, {9.0, 1.0, 0.0}});
    rkm::SolverConfig config;
    config.num_clusters = 2;
    config.beta_mode = rkm::BetaMode::eager;
    const auto report = rkm::solve(a, config);

    rkm::ReportContext context;
    context.n = a.size();
    context.config = config;
    context.input_path = "tri.csv";
    context.input_mode = "matrix";
    context.labels_file = "labels.csv";
    context.wall_time_seconds = 0.25;

    const auto path = scratch_dir() / "report.json";
    rkm::write_report(path.string(), report, context);
    const auto j = nlohmann::json::parse(slurp(path));

    CHECK(j["objective"].get<double>() == report.final_objective);
    CHECK(std::fabs(j["beta"].get<double>() - 5.0 / 3.0) <= 1e-6);
    CHECK(j["iterations"].get<int>() == report.iterations);
    CHECK(j["converged"].get<bool>() == report.converged);
    CHECK(j["labels_file"].get<std::string>() == "labels.csv");
    CHECK(j["n"].get<int>() == 3);
    CHECK(j["num_clusters"].get<int>() == 2);
    CHECK(j["config"]["beta_mode"].get<std::string>() == "eager");
    CHECK(j["config"]["seed"].get<std::uint64_t>() == 0);
    CHECK(j["objective_trajectory"].size() == static_cast<std::size_t>(report.iterations));
    CHECK(j["input"]["mode"].get<std::string>() == "matrix");
    CHECK(j["wall_time_seconds"].get<double>() == 0.25);

    rkm::ReportContext bare = context;
    bare.labels_file.reset();
    rkm::write_report(path.string(), report, bare);
    CHECK(nlohmann::json::parse(slurp(path))["labels_file"].is_null());
}

TEST_CASE("trivial single-point report") {
    const auto a = rkm::SquaredDissimilarityMatrix::validate({{0.0}});
    rkm::SolverConfig config;
    config.num_clusters = 1;
    const auto report = rkm::solve(a, config);
    rkm::ReportContext context;
    context.n = 1;
    context.config = config;
    context.input_path = "one.csv";
    context.input_mode = "matrix";
    const auto path = scratch_dir() / "one.json";
    rkm::write_report(path.string(), report, context);
    const auto j = nlohmann::json::parse(slurp(path));
    CHECK(j["objective"].get<double>() == 0.0);
    CHECK(j["beta"].get<double>() == 0.0);
    CHECK(j["converged"].get<bool>() == true);
}

TEST_CASE("parsers return structured errors on arbitrary bytes") {
    auto rng = support::make_rng(62);
    const std::string alphabet = "0123456789.,-+eE \t\nabcXYZ;|#\r";
    for (int trial = 0; trial < 200; ++trial) {
        const int len = support::uniform_int(rng, 0, 120);
        std::string body;
        for (int k = 0; k < len; ++k)
            body += alphabet[support::uniform_int(rng, 0, static_cast<int>(alphabet.size()) - 1)];
        const auto path = write_file("fuzz.csv", body);
        try {
            (void)rkm::read_matrix(path.string());
        } catch (const rkm::Error&) {
            // structured failure is the contract
        }
        try {
            (void)rkm::read_points(path.string());
        } catch (const rkm::Error&) {
        }
    }
}

TEST_CASE("delimiter inference") {
    CHECK(rkm::infer_delimiter("data.tsv") == '\t');
    CHECK(rkm::infer_delimiter("DATA.TSV") == '\t');
    CHECK(rkm::infer_delimiter("data.csv") == ',');
    CHECK(rkm::infer_delimiter("data") == ',');
}
