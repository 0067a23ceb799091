#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "fraclab/power.hpp"

namespace fraclab::cli {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;      // I/O, parse or usage error
inline constexpr int kExitRegime = 3;     // precondition or regime violation
inline constexpr int kExitNumerical = 4;  // numerical failure or check above tolerance

/// `fraclab apply|verify-ibp|el-check|solve-bvp|convergence [flags]`.
/// Results go to `out` (or to --output files), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct ConvergenceRow {
    std::size_t n = 0;
    double sup_error = 0.0;
    double order = 0.0;  // log(e_n / e_next) / log(n_next / n); NaN on the last row
};

/// Sup-norm error of a grid operator ("ileft", "iright", "dleft", "dright")
/// applied to samples of `ref` ("one", "t", "t2", "cos", "sin", "exp"),
/// against the exact result from a Taylor expansion of the reference about
/// the anchor endpoint. Derivative errors are measured on nodes at least
/// kAnchorMargin (b - a) away from the anchor, where the grid derivative loses
/// accuracy to the kernel singularity.
inline constexpr double kAnchorMargin = 0.05;

std::vector<ConvergenceRow> convergence_study(const std::string& op, double alpha, const std::string& ref,
                                              const std::vector<std::size_t>& n_list, const Interval& interval);

/// The reference function and its expansion in powers of (t - a) or (b - t).
double reference_value(const std::string& ref, double t);
PowerSum reference_series(const std::string& ref, Side side, const Interval& interval);

}  // namespace fraclab::cli
