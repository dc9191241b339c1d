#pragma once

#include <stdexcept>
#include <string>

namespace rkm {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- matrix validation -----------------------------------------------------

struct NonSquareError final : Error {
    using Error::Error;
};

struct AsymmetryError final : Error {
    AsymmetryError(const std::string& msg, int i, int j) : Error(msg), row(i), col(j) {}
    int row;
    int col;
};

struct NonzeroDiagonalError final : Error {
    NonzeroDiagonalError(const std::string& msg, int i) : Error(msg), index(i) {}
    int index;
};

struct NonFiniteError final : Error {
    NonFiniteError(const std::string& msg, int i, int j) : Error(msg), row(i), col(j) {}
    int row;
    int col;
};

struct DimensionMismatchError final : Error {
    using Error::Error;
};

struct EmptyInputError final : Error {
    using Error::Error;
};

// --- relational distances --------------------------------------------------

struct LengthMismatchError final : Error {
    using Error::Error;
};

struct NonZeroSumError final : Error {
    using Error::Error;
};

struct EmptyClusterError final : Error {
    using Error::Error;
};

struct IndexOutOfRangeError final : Error {
    using Error::Error;
};

// --- spectral correction ---------------------------------------------------

struct NegativeBetaError final : Error {
    using Error::Error;
};

struct NonNegativeInputError final : Error {
    using Error::Error;
};

struct ZeroNormError final : Error {
    using Error::Error;
};

struct ConvergenceFailureError final : Error {
    using Error::Error;
};

// --- solver ------------------------------------------------------------------

struct TooManyClustersError final : Error {
    using Error::Error;
};

// --- file formats ------------------------------------------------------------

struct IoError final : Error {
    IoError(const std::string& msg, std::string p) : Error(msg), path(std::move(p)) {}
    std::string path;
};

struct ParseError final : Error {
    ParseError(const std::string& msg, std::string p, int ln, int col)
        : Error(msg), path(std::move(p)), line(ln), column(col) {}
    std::string path;
    int line;    // 1-based
    int column;  // 1-based
};

}  // namespace rkm
