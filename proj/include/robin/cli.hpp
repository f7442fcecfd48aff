#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace robin::cli {

/// Effective run configuration: defaults, then config file, then flags.
struct RunConfig {
    std::string command;
    std::string curve_json;   // raw JSON object text for the boundary curve
    std::vector<double> betas;
    double width = 0;         // strip half-width a; 0 = rule (3/beta) log(beta)
    int n_s = 256;
    int n_u = 64;
    double s_trunc = 16.0;
    int k = 1;
    std::string output;       // report path; empty = stdout
    std::string format = "csv";
    unsigned long seed = 0;
    double tol = 1e-8;
    double disc_radius = 1.0;
    int disc_m = 0;
    double duct_width = 1.0;  // waveguide width d
    std::string far = "dirichlet";
    double margin = -1.0;     // discreteness margin; -1 = default rule
    int criterion = 0;        // verify: 0 = every criterion

    std::string canonical() const;  // canonical JSON (sorted keys) for hashing
};

/// Strict JSON config parser; unknown keys are rejected.
RunConfig parse_config(const std::string& json_text);

/// Runs every command except `verify`. Returns the exit code:
/// 0 success, 2 validation failure, 3 numerical non-convergence.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

using VerifyFn = std::function<int(int criterion, std::ostream& out)>;

/// Command-line entry point; the acceptance suite is injected so the core
/// library does not depend on the test tree.
int main_entry(int argc, const char* const* argv, const VerifyFn& verify_fn,
               std::ostream& out, std::ostream& err);

} // namespace robin::cli
