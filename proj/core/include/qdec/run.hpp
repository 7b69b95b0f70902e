// run.hpp - Command drivers behind the CLI: simulate, verify, spectrum.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qdec/config.hpp"

namespace qdec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;   // config parse / file errors
inline constexpr int kExitModel = 2;    // model precondition failure
inline constexpr int kExitNumeric = 3;  // verification failure above tolerance

// Model precondition failures (non-commuting explicit pair, invalid states).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Internal cross-checks or verify-suite checks above tolerance.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    double tolerance_scale = 1.0;
    std::uint64_t seed = 20260810ull;
    std::optional<std::string> output_dir;  // overrides the directory of output paths
};

struct TimeSeriesRecord {
    double t = 0.0;
    double bloch_x = 0.0;
    double bloch_y = 0.0;
    double bloch_z = 0.0;
    double coherence_abs = 0.0;
    double purity = 0.0;
    double trace_error = 0.0;
};

enum class Suite { Riccati, Symmetry, Kraus, Frame, All };

std::optional<Suite> suite_from_name(const std::string& name);

// One verify check: pass ⇔ measured <= bound (upper) or measured >= bound (lower).
struct CheckRow {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool is_upper_bound = true;

    bool passed() const { return is_upper_bound ? measured <= bound : measured >= bound; }
};

// Drivers return one of the documented exit codes; diagnostics go to err,
// data/report to out or the configured output files.
int run_simulate(const RunConfig& config, const RunOptions& options, std::ostream& err);
int run_verify(const RunConfig& config, Suite suite, const RunOptions& options,
               std::ostream& out, std::ostream& err);
int run_spectrum(const RunConfig& config, const RunOptions& options, std::ostream& err);

}  // namespace qdec::cli
