#pragma once

#include "kgraph/mce.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace kgraph {

// Exponential height profile h(d) = (e^{CA}/C)(1 - e^{-Cd}) and the
// logarithmic boundary-strip profile psi(d) = mu ln(1 + Kd), bundled with
// the constants that make them super/subsolutions.
struct BarrierParams {
    double C = 1.0;
    double A = 1.0;
    double mu = 0.0;
    double K = 0.0;
    double eps = 0.0;

    double height(double d) const;
    double height_slope(double d) const; // e^{C(A-d)}
    double psi(double d) const;
    double psi_slope(double d) const;
};

// Upper height barrier sup_phi + h(d(p)); the lower barrier is
// inf_phi - h(d(p)) by symmetry.  Requires A beyond the domain diameter so
// h' = e^{C(A-d)} stays above 1 everywhere.
double height_barrier(const AmbientModel& model, const Domain& domain,
                      double sup_phi, const BarrierParams& params,
                      LeafPoint p);

// Doubling search C = 1, 2, 4, ... for the smallest exponent whose barrier
// pair passes the discrete one-sided residual tests at every interior node
// and keeps C + kappa_eps positive throughout the collar.  A is fixed at
// 1.1 times the diameter bound; failure past C = 2^20 is reported, not
// thrown, so a solve can proceed without certified bounds.
struct BarrierSearch {
    bool found = false;
    BarrierParams params;
    double sup_phi = 0.0;
    double inf_phi = 0.0;
    double max_upper_residual = 0.0;  // < 0 when accepted
    double min_lower_residual = 0.0;  // > 0 when accepted
    double min_curvature_shift = 0.0; // inf over the collar of C + kappa_eps
};
BarrierSearch choose_barrier_constants(const Problem& problem,
                                       const ScalarField& H);

// Two-sided containment of a nodal field between the height barriers.
struct HeightCheck {
    bool contained = false;
    double margin = 0.0;
    double sup_phi = 0.0;
    double inf_phi = 0.0;
};
HeightCheck verify_height(const Problem& problem, const ScalarField& u,
                          const BarrierParams& params);

// Largest admissible disc radius from the geodesic-sphere comparison with
// ambient Ricci bound -(n-1)k: infinity when sup_H <= sqrt(k) (the
// comparison sphere is always more curved), otherwise
// arcoth(sup_H / sqrt(k)) / sqrt(k).  Requires k > 0.
double sphere_barrier_radius(double k, double sup_H);

// Boundary-strip barrier psi(d) + phi, with phi extended constant along
// inward normals.  K doubles until the strip residual tests and the
// domination tests on the band just past depth eps all pass; the accepted
// barrier certifies |u_eta| <= psi'(0) on the boundary.
struct GradientBarrier {
    bool found = false;
    bool serrin_ok = false;
    double serrin_min = 0.0; // min over the boundary of H_cyl + H
    double eps = 0.0;
    double mu = 0.0;
    double K = 0.0;
    double psi_slope0 = 0.0;
    double sup_phi_tan = 0.0;
    double slope_bound = 0.0;        // psi_slope0 + sup_phi_tan
    double sup_boundary_slope = 0.0; // measured sup of |grad u| on the boundary
    double max_strip_residual = 0.0; // upper barrier, < 0 when accepted
    double min_strip_residual = 0.0; // lower barrier, > 0 when accepted
    double min_domination = 0.0;     // band slack, >= 0 when accepted
};
GradientBarrier boundary_gradient_barrier(const Problem& problem,
                                          const ScalarField& u,
                                          const ScalarField& H,
                                          const BarrierParams& height_params);

// Hypothesis checks of the three solvability theorems.  Theorem 1 is the
// cylinder-dominated curvature case, theorem 2 the Ricci/circumradius case,
// theorem 3 the rotationally symmetric momentum bound.
struct HypothesisCondition {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};
struct HypothesisReport {
    int theorem = 1;
    int n = 2;
    std::vector<HypothesisCondition> conditions;
    std::vector<std::pair<std::string, double>> metrics;
    bool verdict = false;
};
HypothesisReport check_theorem_hypotheses(
    const AmbientModel& model, const Domain& domain,
    const std::function<double(LeafPoint)>& H, int theorem);

// Deterministic key = value rendering with one line per condition and a
// final verdict token.
std::string render_report(const HypothesisReport& report);

} // namespace kgraph
