#pragma once

#include "kgraph/config.hpp"
#include "kgraph/continuation.hpp"

#include <string>

namespace kgraph {

struct RunOptions {
    std::string out_dir;   // overrides the config's [output] directory
    int grid_override = 0; // overrides the row count
    bool require_hypotheses = false;
};

// Subcommand drivers.  Exit codes: 0 success, 1 hypothesis gate (solve with
// --require-hypotheses, or a check verdict of FAIL), 2 solver stall or
// non-convergence, 3 configuration errors (thrown as ConfigError).
int run_solve(const RunConfig& config, const RunOptions& options);
int run_check(const RunConfig& config, const RunOptions& options);
int run_rotational(const RunConfig& config, const RunOptions& options);
int run_mms(const RunConfig& config, const RunOptions& options);
int run_flux(const RunConfig& config, const RunOptions& options);

// Solution grid file: line 1 "KGRAPH 1", line 2 "kind n m_r m_theta r0"
// (unused trailing fields 0), then one node value per line in row-major
// order, every number with 17 significant digits.
std::string solution_file_text(const Problem& problem, const ScalarField& u);

} // namespace kgraph
