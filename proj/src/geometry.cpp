#include "kgraph/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kgraph {

LeafMetric::LeafMetric(LeafKind kind, int dim, ScalarFn xi)
    : kind_(kind), dim_(dim), xi_(std::move(xi)) {}

LeafMetric LeafMetric::euclidean_polar(int n) {
    if (n < 2) throw DomainError("leaf dimension must be at least 2");
    return LeafMetric(LeafKind::EuclideanPolar, n, ScalarFn::identity());
}

LeafMetric LeafMetric::rotsym(ScalarFn xi, int n) {
    if (n < 2) throw DomainError("leaf dimension must be at least 2");
    if (xi.value(0.0) != 0.0 || xi.d1(0.0) <= 0.0) {
        throw DomainError(
            "rotsym radius profile must vanish at 0 with positive slope");
    }
    return LeafMetric(LeafKind::RotSym, n, std::move(xi));
}

LeafMetric LeafMetric::cartesian_flat() {
    return LeafMetric(LeafKind::CartesianFlat, 2, ScalarFn::identity());
}

const ScalarFn& LeafMetric::xi() const {
    if (kind_ == LeafKind::CartesianFlat) {
        throw DomainError("flat Cartesian leaf has no radius profile");
    }
    return xi_;
}

WarpingFunction::WarpingFunction(ScalarFn rho) : rho_(std::move(rho)) {}

double WarpingFunction::rho(double c) const {
    const double v = rho_.value(c);
    if (!(v > 0.0)) {
        throw DomainError("warping function must be positive, got " +
                          fmt17(v) + " at " + fmt17(c));
    }
    return v;
}

double WarpingFunction::drho(double c) const { return rho_.d1(c); }
double WarpingFunction::d2rho(double c) const { return rho_.d2(c); }

double WarpingFunction::f(double c) const {
    const double v = rho(c);
    return 1.0 / (v * v);
}

const char* side_name(BoundarySide side) {
    switch (side) {
    case BoundarySide::Outer: return "outer";
    case BoundarySide::Inner: return "inner";
    case BoundarySide::XLow: return "x-low";
    case BoundarySide::XHigh: return "x-high";
    case BoundarySide::YLow: return "y-low";
    case BoundarySide::YHigh: return "y-high";
    }
    return "?";
}

Domain Domain::disc(double r0) {
    if (!(r0 > 0.0)) throw DomainError("disc radius must be positive");
    Domain d;
    d.kind_ = DomainKind::Disc;
    d.r_outer_ = r0;
    return d;
}

Domain Domain::annulus(double r_in, double r_out) {
    if (!(r_in > 0.0) || !(r_out > r_in)) {
        throw DomainError("annulus requires 0 < r_in < r_out");
    }
    Domain d;
    d.kind_ = DomainKind::Annulus;
    d.r_inner_ = r_in;
    d.r_outer_ = r_out;
    return d;
}

Domain Domain::rectangle(double x0, double x1, double y0, double y1) {
    if (!(x1 > x0) || !(y1 > y0)) {
        throw DomainError("rectangle requires x0 < x1 and y0 < y1");
    }
    Domain d;
    d.kind_ = DomainKind::Rectangle;
    d.x0_ = x0;
    d.x1_ = x1;
    d.y0_ = y0;
    d.y1_ = y1;
    return d;
}

Domain& Domain::with_boundary_data(std::function<double(LeafPoint)> phi) {
    phi_ = std::move(phi);
    return *this;
}

double Domain::distance_to_boundary(LeafPoint p) const {
    double d = 0.0;
    double scale = 1.0;
    switch (kind_) {
    case DomainKind::Disc:
        d = p.a < 0.0 ? p.a : r_outer_ - p.a;
        scale = r_outer_;
        break;
    case DomainKind::Annulus:
        d = std::min(p.a - r_inner_, r_outer_ - p.a);
        scale = r_outer_;
        break;
    case DomainKind::Rectangle:
        d = std::min(std::min(p.a - x0_, x1_ - p.a),
                     std::min(p.b - y0_, y1_ - p.b));
        scale = std::max(x1_ - x0_, y1_ - y0_);
        break;
    }
    const double tol = 1e-12 * scale;
    if (d < -tol) {
        throw DomainError("point (" + fmt17(p.a) + ", " + fmt17(p.b) +
                          ") lies outside the closed domain");
    }
    return std::max(d, 0.0);
}

double Domain::inradius() const {
    switch (kind_) {
    case DomainKind::Disc: return r_outer_;
    case DomainKind::Annulus: return 0.5 * (r_outer_ - r_inner_);
    case DomainKind::Rectangle:
        return 0.5 * std::min(x1_ - x0_, y1_ - y0_);
    }
    return 0.0;
}

double Domain::diameter_bound(const LeafMetric& leaf) const {
    switch (kind_) {
    case DomainKind::Disc:
        return 2.0 * r_outer_;
    case DomainKind::Annulus: {
        // Radial legs to the outer circle plus half of its circumference;
        // every pair of points admits such a path inside the closure.
        const double pi = 3.14159265358979323846;
        const double half_outer =
            leaf.is_polar() ? pi * leaf.xi().value(r_outer_) : pi * r_outer_;
        return 2.0 * (r_outer_ - r_inner_) + half_outer;
    }
    case DomainKind::Rectangle:
        return std::hypot(x1_ - x0_, y1_ - y0_);
    }
    return 0.0;
}

std::vector<BoundarySide> Domain::sides() const {
    switch (kind_) {
    case DomainKind::Disc: return {BoundarySide::Outer};
    case DomainKind::Annulus:
        return {BoundarySide::Inner, BoundarySide::Outer};
    case DomainKind::Rectangle:
        return {BoundarySide::XLow, BoundarySide::XHigh, BoundarySide::YLow,
                BoundarySide::YHigh};
    }
    return {};
}

LeafPoint Domain::boundary_point(BoundarySide side, double t) const {
    switch (side) {
    case BoundarySide::Outer: return {r_outer_, t};
    case BoundarySide::Inner: return {r_inner_, t};
    case BoundarySide::XLow: return {x0_, t};
    case BoundarySide::XHigh: return {x1_, t};
    case BoundarySide::YLow: return {t, y0_};
    case BoundarySide::YHigh: return {t, y1_};
    }
    return {};
}

std::pair<BoundarySide, LeafPoint> Domain::project_to_boundary(
    LeafPoint p) const {
    switch (kind_) {
    case DomainKind::Disc:
        return {BoundarySide::Outer, LeafPoint{r_outer_, p.b}};
    case DomainKind::Annulus: {
        if (p.a - r_inner_ <= r_outer_ - p.a) {
            return {BoundarySide::Inner, LeafPoint{r_inner_, p.b}};
        }
        return {BoundarySide::Outer, LeafPoint{r_outer_, p.b}};
    }
    case DomainKind::Rectangle: {
        const double dx0 = p.a - x0_, dx1 = x1_ - p.a;
        const double dy0 = p.b - y0_, dy1 = y1_ - p.b;
        const double m = std::min(std::min(dx0, dx1), std::min(dy0, dy1));
        if (m == dx0) return {BoundarySide::XLow, LeafPoint{x0_, p.b}};
        if (m == dx1) return {BoundarySide::XHigh, LeafPoint{x1_, p.b}};
        if (m == dy0) return {BoundarySide::YLow, LeafPoint{p.a, y0_}};
        return {BoundarySide::YHigh, LeafPoint{p.a, y1_}};
    }
    }
    return {BoundarySide::Outer, p};
}

LeafVector drift_field(const AmbientModel& model, LeafPoint p) {
    const double rho = model.warp.rho(p.a);
    return {-model.warp.drho(p.a) / rho, 0.0};
}

namespace {

// Chart coordinate and inward-normal sign of the offset point at depth eps
// behind the given boundary component.  The normal sign is the coordinate
// component of the inward unit normal along the model's radial/x axis.
struct OffsetPoint {
    double c;
    double normal_sign;
    bool along_axis;
};

OffsetPoint offset_point(const Domain& domain, BoundarySide side, double t,
                         double eps) {
    switch (side) {
    case BoundarySide::Outer: return {domain.r_outer() - eps, -1.0, true};
    case BoundarySide::Inner: return {domain.r_inner() + eps, +1.0, true};
    case BoundarySide::XLow: return {domain.x0() + eps, +1.0, true};
    case BoundarySide::XHigh: return {domain.x1() - eps, -1.0, true};
    case BoundarySide::YLow:
    case BoundarySide::YHigh: return {t, 0.0, false};
    }
    return {0.0, 0.0, false};
}

void check_offset(const Domain& domain, double eps) {
    if (eps < 0.0 || eps >= domain.inradius()) {
        throw DomainError("offset depth " + fmt17(eps) +
                          " exceeds the inradius " +
                          fmt17(domain.inradius()));
    }
}

} // namespace

double flow_line_curvature(const AmbientModel& model, const Domain& domain,
                           BoundarySide side, double t, double eps) {
    check_offset(domain, eps);
    const OffsetPoint q = offset_point(domain, side, t, eps);
    if (q.normal_sign == 0.0) return 0.0;
    // X = -(rho'/rho) along the axis; kappa = <X, eta>.
    return -q.normal_sign * model.warp.drho(q.c) / model.warp.rho(q.c);
}

double wall_mean_curvature(const AmbientModel& model, const Domain& domain,
                           BoundarySide side, double t, double eps) {
    check_offset(domain, eps);
    if (domain.kind() == DomainKind::Rectangle) return 0.0;
    (void)t;
    const OffsetPoint q = offset_point(domain, side, t, eps);
    const ScalarFn& xi = model.leaf.xi();
    const double ratio = xi.d1(q.c) / xi.value(q.c);
    // Offset circles curve toward the pole: positive as seen from the
    // outer component, negative around an inner hole.
    return side == BoundarySide::Outer ? ratio : -ratio;
}

double cylinder_mean_curvature(const AmbientModel& model, const Domain& domain,
                               BoundarySide side, double t, double eps) {
    const int n = model.n();
    const double h = wall_mean_curvature(model, domain, side, t, eps);
    const double kappa = flow_line_curvature(model, domain, side, t, eps);
    return (static_cast<double>(n - 1) * h + kappa) / static_cast<double>(n);
}

double cylinder_mean_curvature(const AmbientModel& model, const Domain& domain,
                               double eps) {
    return cylinder_mean_curvature(model, domain, BoundarySide::Outer, 0.0,
                                   eps);
}

double inf_cylinder_mean_curvature(const AmbientModel& model,
                                   const Domain& domain) {
    double inf = std::numeric_limits<double>::infinity();
    const int samples = 64;
    for (BoundarySide side : domain.sides()) {
        double t0 = 0.0, t1 = 0.0;
        switch (side) {
        case BoundarySide::Outer:
        case BoundarySide::Inner:
            t0 = 0.0;
            t1 = 2.0 * 3.14159265358979323846;
            break;
        case BoundarySide::XLow:
        case BoundarySide::XHigh:
            t0 = domain.y0();
            t1 = domain.y1();
            break;
        case BoundarySide::YLow:
        case BoundarySide::YHigh:
            t0 = domain.x0();
            t1 = domain.x1();
            break;
        }
        for (int k = 0; k < samples; ++k) {
            const double t =
                t0 + (t1 - t0) * static_cast<double>(k) / (samples - 1);
            inf = std::min(inf,
                           cylinder_mean_curvature(model, domain, side, t,
                                                   0.0));
        }
    }
    return inf;
}

namespace {

// Minimum over frame directions of the ambient Ricci form at one chart
// point.  Horizontal candidates carry Ric of the leaf minus Hess(rho)/rho;
// the vertical candidate is -(Lap rho)/rho.
double ricci_min_at(const AmbientModel& model, LeafPoint p) {
    const double rho = model.warp.rho(p.a);
    const double drho = model.warp.drho(p.a);
    const double d2rho = model.warp.d2rho(p.a);
    const int n = model.n();

    if (model.leaf.kind() == LeafKind::CartesianFlat) {
        const double cand_x = -d2rho / rho;
        const double cand_y = 0.0;
        const double cand_vert = -d2rho / rho;
        return std::min(std::min(cand_x, cand_y), cand_vert);
    }

    const ScalarFn& xi = model.leaf.xi();
    const double x = xi.value(p.a);
    const double dx = xi.d1(p.a);
    const double d2x = xi.d2(p.a);
    const double rr = dx / x;

    const double leaf_radial = -static_cast<double>(n - 1) * d2x / x;
    const double leaf_angular =
        -d2x / x + static_cast<double>(n - 2) * (1.0 - dx * dx) / (x * x);

    const double cand_radial = leaf_radial - d2rho / rho;
    const double cand_angular = leaf_angular - rr * drho / rho;
    const double lap_rho = d2rho + static_cast<double>(n - 1) * rr * drho;
    const double cand_vert = -lap_rho / rho;
    return std::min(std::min(cand_radial, cand_angular), cand_vert);
}

} // namespace

std::vector<LeafPoint> sample_chart(const Domain& domain, int na, int nb) {
    std::vector<LeafPoint> pts;
    pts.reserve(static_cast<std::size_t>(na) * nb);
    const double two_pi = 2.0 * 3.14159265358979323846;
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < nb; ++j) {
            LeafPoint p;
            switch (domain.kind()) {
            case DomainKind::Disc:
                // Offset radial samples avoid the coordinate pole.
                p.a = domain.r0() * (i + 0.5) / na;
                p.b = two_pi * j / nb;
                break;
            case DomainKind::Annulus:
                p.a = domain.r_inner() +
                      (domain.r_outer() - domain.r_inner()) * i / (na - 1);
                p.b = two_pi * j / nb;
                break;
            case DomainKind::Rectangle:
                p.a = domain.x0() + (domain.x1() - domain.x0()) * i / (na - 1);
                p.b = domain.y0() + (domain.y1() - domain.y0()) * j / (nb - 1);
                break;
            }
            pts.push_back(p);
        }
    }
    return pts;
}

double ricci_lower_bound(const AmbientModel& model, const Domain& domain) {
    double lb = std::numeric_limits<double>::infinity();
    for (const LeafPoint& p : sample_chart(domain, 64, 64)) {
        lb = std::min(lb, ricci_min_at(model, p));
    }
    return lb;
}

} // namespace kgraph
