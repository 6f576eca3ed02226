#pragma once

#include "kgraph/mce.hpp"

#include <vector>

namespace kgraph {

// Rotationally symmetric ambient data (xi, rho, n) for the compact CMC
// sphere construction and the momentum-integral bounds.
class RotationalModel {
public:
    RotationalModel(ScalarFn xi, ScalarFn rho, int n);
    static RotationalModel from(const AmbientModel& model);

    int n() const { return n_; }
    double xi(double r) const { return xi_.value(r); }
    double dxi(double r) const { return xi_.d1(r); }
    double rho(double r) const;
    double drho(double r) const { return rho_.d1(r); }
    const ScalarFn& xi_fn() const { return xi_; }
    const ScalarFn& rho_fn() const { return rho_; }

    // Weight rho(r) xi(r)^(n-1) of the momentum density.
    double weight(double r) const;

    // I(r): integral of the momentum density over [0, r].
    double momentum_integral(double r) const;

    // F(r0) = rho(r0) xi(r0)^(n-1) / I(r0); n sup|H| <= F(r0) is the
    // solvability bound for constant curvature over the disc of radius r0.
    double serrin_bound(double r0) const;

private:
    ScalarFn xi_;
    ScalarFn rho_;
    int n_;
};

// Rotationally invariant CMC sphere profile, parameterized by arc length u
// of the generating curve in the (r, s) half-plane.  The curve starts on
// the axis, reaches its widest ring at the turning point, and closes by
// reflection.  ctilde is the flux constant of the first integral
// n H0 I(r) + sdot rho^2 xi^(n-1) = ctilde (zero for compact spheres);
// flux_residual records its drift at every sample.
struct ProfileCurve {
    std::vector<double> u, s, r, sdot, rdot;
    std::vector<double> flux_residual;
    double H0 = 0.0;
    double ctilde = 0.0;
    double r_turn = 0.0;
    double s_turn = 0.0;
    double u_turn = 0.0;
};

struct ProfileOptions {
    double tol = 1e-12;
    double max_du = 0.02;
    // Series-to-integrator switchover arc length near the axis.
    double start = 1e-3;
    // Existence scan limit for the turning radius.
    double r_limit = 50.0;
};

// Integrates the profile of the compact CMC sphere with curvature H0 with
// respect to the inward-pointing orientation (H0 < 0; positive inputs are
// reflected).  Profiles that never turn are a domain error.
ProfileCurve integrate_cmc_sphere(const RotationalModel& model, double H0,
                                  const ProfileOptions& options = {});

// Flux balance of a solved graph: lhs = n * integral of H rho over the
// domain, rhs = boundary integral of rho u_eta / W against the outward
// normal.  Exact for solutions of the divergence-form equation.
struct FluxCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double relative = 0.0;
};
FluxCheck graph_flux_check(const Problem& problem, const ScalarField& u,
                           const ScalarField& H);

} // namespace kgraph
