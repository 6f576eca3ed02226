#include "kgraph/continuation.hpp"

#include "kgraph/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace kgraph {

double HomotopyResult::family_sup_slope() const {
    double m = 0.0;
    for (const HomotopyStage& st : stages) m = std::max(m, st.sup_slope);
    return m;
}

HomotopyResult continuity_solve(const Problem& problem, const ScalarField& H,
                                const std::function<double(LeafPoint)>& phi,
                                const HomotopyOptions& options) {
    const Grid& g = problem.grid();

    HomotopyResult res;
    res.u = ScalarField(g, FieldTag::Height);
    res.sigma = 0.0;
    res.reached = false;

    ScalarField Hs(g, FieldTag::Curvature);
    double step = options.step0;

    for (int stage = 0; stage < options.max_stages; ++stage) {
        if (res.sigma >= 1.0) break;
        const double sigma_try = std::min(1.0, res.sigma + step);
        for (std::size_t k = 0; k < Hs.size(); ++k) Hs[k] = sigma_try * H[k];
        auto phi_s = [&phi, sigma_try](LeafPoint p) {
            return sigma_try * phi(p);
        };

        NewtonResult nr =
            newton_solve(problem, Hs, phi_s, res.u, options.newton);
        res.last_status = nr.status;
        if (nr.converged()) {
            res.u = nr.u;
            res.sigma = sigma_try;
            HomotopyStage st;
            st.sigma = sigma_try;
            st.step = step;
            st.newton_iterations = nr.iterations;
            st.residual_norm = nr.residual_norm;
            st.max_abs_u = nr.u.max_abs();
            st.sup_slope =
                gradient_diagnostic(problem, nr.u, 0.0).sup_slope;
            res.stages.push_back(st);
            if (nr.iterations <= options.quick_iterations) {
                step = std::min(step * options.growth, options.step_max);
            }
        } else {
            step *= 0.5;
            if (step < options.step_min) break;
        }
    }

    res.reached = res.sigma >= 1.0;
    return res;
}

UniquenessProbe uniqueness_probe(const Problem& problem, const ScalarField& H,
                                 const std::function<double(LeafPoint)>& phi,
                                 const std::vector<ScalarField>& guesses,
                                 const SolverOptions& options) {
    UniquenessProbe probe;
    probe.attempts = static_cast<int>(guesses.size());
    std::vector<ScalarField> solutions;
    for (const ScalarField& u0 : guesses) {
        NewtonResult nr = newton_solve(problem, H, phi, u0, options);
        probe.statuses.push_back(nr.status);
        if (nr.converged()) {
            solutions.push_back(nr.u);
            ++probe.converged;
        }
    }
    const kernels::Ops& ops = kernels::active_ops();
    for (std::size_t a = 0; a < solutions.size(); ++a) {
        for (std::size_t b = a + 1; b < solutions.size(); ++b) {
            probe.max_pairwise = std::max(
                probe.max_pairwise,
                ops.max_abs_diff(solutions[a].data(), solutions[b].data(),
                                 solutions[a].size()));
        }
    }
    return probe;
}

} // namespace kgraph
