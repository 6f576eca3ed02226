#pragma once

#include "kgraph/grid.hpp"

#include <functional>
#include <vector>

namespace kgraph {

// Model + domain + grid with cached coefficient samples.  All solver
// operations run against a Problem; the cached arrays keep the hot loops
// free of transcendental evaluations.
class Problem {
public:
    Problem(AmbientModel model, Domain domain, Grid grid);

    const AmbientModel& model() const { return model_; }
    const Domain& domain() const { return domain_; }
    const Grid& grid() const { return grid_; }
    int n() const { return model_.n(); }

    // Per-node samples.
    const std::vector<double>& f_nodes() const { return f_node_; }
    const std::vector<double>& rho_nodes() const { return rho_node_; }
    // Per-node weight of the leaf volume measure over the closed domain
    // (includes the measure of the angular sphere on radial grids).
    const std::vector<double>& volume_weights() const { return vol_weight_; }

    // Per-row samples (radial coordinate on polar charts, x on Cartesian).
    const std::vector<double>& row_xi() const { return row_xi_; }
    const std::vector<double>& row_rho() const { return row_rho_; }
    const std::vector<double>& row_f() const { return row_f_; }
    // rho * xi^(n-1) at the face below each row (index 0 is the pole face
    // of disc grids and is identically zero there).
    const std::vector<double>& face_coeff() const { return face_coeff_; }
    const std::vector<double>& face_f() const { return face_f_; }
    const std::vector<double>& face_xi() const { return face_xi_; }
    // (rho / xi) at each row: coefficient of the angular face fluxes.
    const std::vector<double>& row_ang_coeff() const { return row_ang_coeff_; }
    // 1 / (rho * xi^(n-1)) at each row: inverse of the divergence weight.
    const std::vector<double>& row_inv_weight() const { return row_inv_w_; }

    const std::vector<int>& interior() const { return interior_; }
    const std::vector<int>& boundary() const { return boundary_; }
    // Ordinal of a node in the interior list, or -1 on the boundary.
    int interior_ordinal(int node) const { return interior_ord_[node]; }

private:
    AmbientModel model_;
    Domain domain_;
    Grid grid_;

    std::vector<double> f_node_, rho_node_, vol_weight_;
    std::vector<double> row_xi_, row_rho_, row_f_;
    std::vector<double> face_coeff_, face_f_, face_xi_;
    std::vector<double> row_ang_coeff_, row_inv_w_;
    std::vector<int> interior_, boundary_;
    std::vector<int> interior_ord_;
};

// Closed-form field on the leaf chart with analytic derivatives, used by the
// manufactured-solution machinery.
struct SmoothField {
    std::function<double(LeafPoint)> value;
    std::function<double(LeafPoint)> da, db;
    std::function<double(LeafPoint)> daa, dab, dbb;
};

// Samples a chart function into a nodal field.
ScalarField sample_field(const Problem& problem,
                         const std::function<double(LeafPoint)>& fn,
                         FieldTag tag = FieldTag::Generic);

// Slope function W = sqrt(f + |grad u|^2) at every node.  Gradients use
// centered differences inside the grid and second-order one-sided stencils
// on boundary rows/columns and at the staggered pole row.
ScalarField slope_function(const Problem& problem, const ScalarField& u);

// Coefficient bundle of the quasilinear operator at a nodal field u.
// The matrix a^{ij} is reported in the orthonormal frame; its eigenvalues
// are lambda = f / W^3 along the gradient and Lambda = 1 / W across it.
struct Coefficients {
    ScalarField W;
    ScalarField a_nn, a_nt, a_tt;
    ScalarField b;
    ScalarField lambda;
    ScalarField Lambda;
};
Coefficients coefficients(const Problem& problem, const ScalarField& u);

// Conservative-form residual Q[u] - nH at interior nodes (boundary entries
// are zero).  Face fluxes rho xi^(n-1) u_n / W are differenced against the
// divergence weight; the drift term is absorbed exactly by the rho factor
// inside the flux.
ScalarField residual(const Problem& problem, const ScalarField& u,
                     const ScalarField& H);
double residual_at(const Problem& problem, const ScalarField& u,
                   const ScalarField& H, int i, int j);

// Mean curvature field that makes the given closed-form u an exact solution.
ScalarField manufactured_H(const Problem& problem, const SmoothField& exact);
double manufactured_H_at(const AmbientModel& model, bool polar_chart,
                         LeafPoint p, const SmoothField& exact);

// Upward unit normal of the graph at a node, split into the coefficient of
// the Killing direction and leaf components in the coordinate basis.
struct UnitNormal {
    double vertical;
    LeafVector leaf;
    double w;
    double y_dot_n;
};
UnitNormal unit_normal(const Problem& problem, const ScalarField& u, int node);

// Interior maximum-principle diagnostic tau = exp(2 C u) |grad u|^2.
struct GradientDiagnostic {
    ScalarField tau;
    double max_tau = 0.0;
    int argmax = -1;
    double sup_slope = 0.0;
};
GradientDiagnostic gradient_diagnostic(const Problem& problem,
                                       const ScalarField& u, double C);

// One-sided boundary data of a solution: outward-normal and tangential
// derivatives, slope function, and the line measure weight of the node.
struct BoundaryGradient {
    int node = 0;
    BoundarySide side = BoundarySide::Outer;
    LeafPoint p;
    double u_eta = 0.0;
    double u_tan = 0.0;
    double w = 1.0;
    double line_weight = 0.0;
};
std::vector<BoundaryGradient> boundary_gradients(const Problem& problem,
                                                 const ScalarField& u);

// Measure of the unit (n-1)-sphere.
double sphere_measure(int n);

enum class SolveStatus {
    Converged,
    MaxIterations,
    LineSearchFailed,
    SingularJacobian,
    Diverged,
};

const char* solve_status_name(SolveStatus status);

struct SolverOptions {
    double tol = 1e-10;
    int max_iterations = 30;
    int max_halvings = 20;
    bool record_iterates = false;
};

struct NewtonResult {
    ScalarField u;
    SolveStatus status = SolveStatus::Converged;
    int iterations = 0;
    double residual_norm = 0.0;
    std::vector<double> norm_history;
    std::vector<ScalarField> iterates;

    bool converged() const { return status == SolveStatus::Converged; }
};

// Damped Newton iteration on the interior unknowns with Dirichlet data phi.
// The Jacobian is assembled column-wise from one-sided finite differences of
// the residual (step 1e-7 (1 + |u_j|)) and factored with a sparse direct
// solver; steps are halved until the sup-norm of the residual decreases.
NewtonResult newton_solve(const Problem& problem, const ScalarField& H,
                          const std::function<double(LeafPoint)>& phi,
                          const ScalarField& u0, const SolverOptions& options);

} // namespace kgraph
