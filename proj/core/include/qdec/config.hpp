// config.hpp - Run configuration parsing/serialization and the plain-text
// complex matrix file format.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdec/linalg.hpp"

namespace qdec::cli {

using linalg::Complex;
using linalg::ComplexMatrix;

// Thrown for malformed configs and data files; maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelSection {
    double alpha = 0.0;
    double beta = 0.0;
    double omega = 0.0;
};

struct SpinBathSection {
    std::vector<double> omegas;
    std::vector<double> couplings;
};

struct ExplicitEnvSection {
    std::string h_env_path;
    std::string coupling_path;
};

struct CorrelatedSection {
    std::string gamma_path;                       // complex coefficient grid
    std::vector<std::string> qubit_factor_paths;  // 2x2 matrices
    std::vector<std::string> env_factor_paths;    // d x d matrices
};

struct InitialSection {
    std::optional<std::array<double, 3>> qubit_bloch;
    std::optional<std::string> qubit_matrix_path;
    std::string env_kind;  // "maximallyMixed", "groundState", or "matrix"
    std::optional<std::string> env_matrix_path;
    std::optional<CorrelatedSection> correlated;
};

struct TimeGridSection {
    double start = 0.0;
    double stop = 0.0;
    int points = 1;
};

struct OutputSpec {
    std::string path;
    std::string format;  // "csv" | "jsonl"
};

struct RunConfig {
    ModelSection model;
    std::optional<SpinBathSection> spin_bath;
    std::optional<ExplicitEnvSection> explicit_env;
    InitialSection initial;
    TimeGridSection time_grid;
    std::string branch = "positive";  // "positive" | "negative"
    std::vector<OutputSpec> outputs;
    std::string base_dir;  // directory of the config file; resolves relative paths
};

// Parses and validates a config document; file paths inside are resolved
// relative to the config file's directory.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& base_dir);

// Canonical serialization; parse ∘ serialize is a fixed point.
std::string serialize_config(const RunConfig& config);

// FNV-1a hash of the canonical serialization, as fixed-width hex.
std::string config_hash_hex(const RunConfig& config);

// Complex scalars as "re+imj" with 17 significant digits, e.g. "1.5-2e-3j";
// parse(format(z)) round-trips bit-exactly.
std::string format_complex(Complex value);
Complex parse_complex(const std::string& token);

// Matrix files: one row per line, whitespace-separated "re+imj" entries,
// '#' lines are comments.
ComplexMatrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const ComplexMatrix& m);

std::string library_version();

}  // namespace qdec::cli
