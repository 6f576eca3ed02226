#pragma once

#include "kgraph/mce.hpp"

namespace kgraph {

struct HomotopyOptions {
    double step0 = 0.1;
    double step_max = 0.25;
    double step_min = 1e-4;
    // Steps grow by 1.5x after a stage that converged within this many
    // Newton iterations.
    int quick_iterations = 4;
    double growth = 1.5;
    int max_stages = 500;
    SolverOptions newton;
};

struct HomotopyStage {
    double sigma = 0.0;
    double step = 0.0;
    int newton_iterations = 0;
    double residual_norm = 0.0;
    double max_abs_u = 0.0;
    double sup_slope = 0.0;
};

struct HomotopyResult {
    ScalarField u;
    bool reached = false;
    // Last sigma with a converged solution (1 when reached).
    double sigma = 0.0;
    std::vector<HomotopyStage> stages;
    SolveStatus last_status = SolveStatus::Converged;

    // Largest graph slope seen along the whole family.
    double family_sup_slope() const;
};

// Family continuation in sigma: solves the problem with curvature sigma H
// and boundary data sigma phi from sigma = 0 (where u = 0 is exact) to
// sigma = 1, reusing each stage's solution as the next initial guess.  The
// step adapts between step_min and step_max: halved when Newton fails,
// grown after quick successes.  A step underflow reports a stall with the
// last reached sigma.
HomotopyResult continuity_solve(const Problem& problem, const ScalarField& H,
                                const std::function<double(LeafPoint)>& phi,
                                const HomotopyOptions& options);

struct UniquenessProbe {
    int attempts = 0;
    int converged = 0;
    double max_pairwise = 0.0;
    std::vector<SolveStatus> statuses;
};

// Restarts Newton from several initial guesses and reports the largest
// pairwise sup-distance between the converged solutions.
UniquenessProbe uniqueness_probe(const Problem& problem, const ScalarField& H,
                                 const std::function<double(LeafPoint)>& phi,
                                 const std::vector<ScalarField>& guesses,
                                 const SolverOptions& options);

} // namespace kgraph
