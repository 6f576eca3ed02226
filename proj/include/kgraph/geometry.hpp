#pragma once

#include "kgraph/common.hpp"
#include "kgraph/functions.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace kgraph {

enum class LeafKind { EuclideanPolar, RotSym, CartesianFlat };

// Riemannian metric of the leaf P.  Rotationally symmetric leaves use the
// polar chart (r, theta) with metric dr^2 + xi(r)^2 dtheta_{n-1}^2; the flat
// Cartesian leaf uses (x, y) with dx^2 + dy^2 and is two-dimensional.
class LeafMetric {
public:
    static LeafMetric euclidean_polar(int n);
    static LeafMetric rotsym(ScalarFn xi, int n);
    static LeafMetric cartesian_flat();

    LeafKind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool is_polar() const { return kind_ != LeafKind::CartesianFlat; }

    // Radius profile of the angular spheres; identity for the Euclidean
    // leaf.  Only meaningful on polar charts.
    const ScalarFn& xi() const;

private:
    LeafMetric(LeafKind kind, int dim, ScalarFn xi);

    LeafKind kind_;
    int dim_;
    ScalarFn xi_;
};

// Length of the ambient Killing field as a function of the chart coordinate
// the model depends on: r on rotationally symmetric leaves, x on the flat
// leaf.  f = rho^-2 is the conformal factor appearing in the slope function.
class WarpingFunction {
public:
    explicit WarpingFunction(ScalarFn rho);

    double rho(double c) const;
    double drho(double c) const;
    double d2rho(double c) const;
    double f(double c) const;

    const ScalarFn& fn() const { return rho_; }

private:
    ScalarFn rho_;
};

struct AmbientModel {
    LeafMetric leaf;
    WarpingFunction warp;

    int n() const { return leaf.dim(); }
    // Warping evaluated at a chart point (depends on p.a only).
    double rho_at(LeafPoint p) const { return warp.rho(p.a); }
    double f_at(LeafPoint p) const { return warp.f(p.a); }
};

enum class DomainKind { Disc, Annulus, Rectangle };

enum class BoundarySide { Outer, Inner, XLow, XHigh, YLow, YHigh };

const char* side_name(BoundarySide side);

// Bounded leaf domain with Dirichlet boundary data phi.  Discs and annuli
// live on polar charts; rectangles on the flat Cartesian chart.
class Domain {
public:
    static Domain disc(double r0);
    static Domain annulus(double r_in, double r_out);
    static Domain rectangle(double x0, double x1, double y0, double y1);

    Domain& with_boundary_data(std::function<double(LeafPoint)> phi);

    DomainKind kind() const { return kind_; }
    double r0() const { return r_outer_; }
    double r_inner() const { return r_inner_; }
    double r_outer() const { return r_outer_; }
    double x0() const { return x0_; }
    double x1() const { return x1_; }
    double y0() const { return y0_; }
    double y1() const { return y1_; }

    // Dirichlet datum at a boundary chart point.
    double boundary_value(LeafPoint p) const { return phi_(p); }
    const std::function<double(LeafPoint)>& boundary_data() const {
        return phi_;
    }

    // Distance to the boundary within the leaf; exact for all three shapes.
    // A point outside the closed domain is a domain error.
    double distance_to_boundary(LeafPoint p) const;

    double inradius() const;
    // Upper bound for the intrinsic diameter; exact for discs and
    // rectangles, a safe overestimate for annuli.
    double diameter_bound(const LeafMetric& leaf) const;

    std::vector<BoundarySide> sides() const;
    // Chart point of the boundary component at parameter t (an angle on
    // circles, the free coordinate on rectangle sides).
    LeafPoint boundary_point(BoundarySide side, double t) const;
    // Nearest boundary component and its chart point.
    std::pair<BoundarySide, LeafPoint> project_to_boundary(LeafPoint p) const;

private:
    Domain() = default;

    DomainKind kind_ = DomainKind::Disc;
    double r_inner_ = 0.0, r_outer_ = 0.0;
    double x0_ = 0.0, x1_ = 0.0, y0_ = 0.0, y1_ = 0.0;
    std::function<double(LeafPoint)> phi_ = [](LeafPoint) { return 0.0; };
};

// Tangential drift of the ambient flow lines, X = -grad log(rho), in the
// coordinate basis of the chart.
LeafVector drift_field(const AmbientModel& model, LeafPoint p);

// Normal curvature kappa_eps = <X, eta> of the Killing cylinder over the
// boundary offset curve at depth eps, with eta the inward continuation of
// the boundary normal.
double flow_line_curvature(const AmbientModel& model, const Domain& domain,
                           BoundarySide side, double t, double eps);

// Mean curvature h_eps of the offset curve within the leaf (inward normal).
double wall_mean_curvature(const AmbientModel& model, const Domain& domain,
                           BoundarySide side, double t, double eps);

// Mean curvature of the Killing cylinder over the offset curve:
// ((n-1) h_eps + kappa_eps) / n.
double cylinder_mean_curvature(const AmbientModel& model, const Domain& domain,
                               BoundarySide side, double t, double eps);
// Convenience for rotationally symmetric domains: outer component.
double cylinder_mean_curvature(const AmbientModel& model, const Domain& domain,
                               double eps);

// Infimum of the cylinder mean curvature over the whole boundary (eps = 0),
// computed by sampling each component.
double inf_cylinder_mean_curvature(const AmbientModel& model,
                                   const Domain& domain);

// Lower bound for the ambient Ricci curvature, minimised over a 64 x 64
// chart sample of the domain and all tangent directions (the quadratic form
// is diagonal in the radial/angular/vertical frame and linear along mixed
// directions, so the minimum is attained at a frame direction).
double ricci_lower_bound(const AmbientModel& model, const Domain& domain);

// Deterministic na x nb chart sample of the closed domain, used by the
// curvature bounds and the hypothesis checks.
std::vector<LeafPoint> sample_chart(const Domain& domain, int na, int nb);

} // namespace kgraph
