#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "natcurve/expr.hpp"
#include "natcurve/verify.hpp"

namespace natcurve::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsageError = 2, kNumericalFailure = 3 };

enum class SolveMethod { Auto, Helix, Frenet };
enum class OutputFormat { Csv, Json };

/// Fully parsed command line for one subcommand.
struct RunConfig {
    std::string subcommand;
    std::string kappa;
    std::string tau;
    ParamMap params;
    std::optional<double> s0;
    std::optional<double> s1;
    std::size_t n = 4097;
    SolveMethod method = SolveMethod::Auto;
    std::string example_kind;
    std::string input;
    std::string output;  // empty: standard output
    OutputFormat format = OutputFormat::Csv;
    double classify_tol = kDefaultClassifyTol;
    VerifyTolerances tolerances;
};

/// Value of a constant expression such as "pi/3" or "2*a"; `s` is rejected.
double parse_constant(std::string_view text, const ParamMap& params = {});

/// Runs the tool with `args` (program name excluded). Never throws; returns
/// the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace natcurve::cli
