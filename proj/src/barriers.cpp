#include "kgraph/barriers.hpp"

#include "kgraph/rotational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kgraph {

double BarrierParams::height(double d) const {
    return std::exp(C * A) / C * (1.0 - std::exp(-C * d));
}

double BarrierParams::height_slope(double d) const {
    return std::exp(C * (A - d));
}

double BarrierParams::psi(double d) const { return mu * std::log1p(K * d); }

double BarrierParams::psi_slope(double d) const {
    return mu * K / (1.0 + K * d);
}

double height_barrier(const AmbientModel& model, const Domain& domain,
                      double sup_phi, const BarrierParams& params,
                      LeafPoint p) {
    if (!(params.C > 0.0)) {
        throw DomainError("height barrier needs a positive exponent C");
    }
    if (!(params.A > domain.diameter_bound(model.leaf))) {
        throw DomainError("height barrier offset A must exceed the domain "
                          "diameter");
    }
    return sup_phi + params.height(domain.distance_to_boundary(p));
}

namespace {

double strip_width(const Domain& domain, const LeafMetric& leaf) {
    return std::min(domain.inradius() / 4.0,
                    0.1 * domain.diameter_bound(leaf));
}

// Boundary trace extrema of the Dirichlet datum over the grid's boundary
// nodes (the discrete trace the solver imposes).
std::pair<double, double> phi_extrema(const Problem& problem) {
    double sup = -std::numeric_limits<double>::infinity();
    double inf = std::numeric_limits<double>::infinity();
    for (int b : problem.boundary()) {
        const double v =
            problem.domain().boundary_value(problem.grid().point(b));
        sup = std::max(sup, v);
        inf = std::min(inf, v);
    }
    return {sup, inf};
}

std::vector<double> node_distances(const Problem& problem) {
    const Grid& g = problem.grid();
    std::vector<double> d(g.num_nodes());
    for (std::size_t idx = 0; idx < d.size(); ++idx) {
        d[idx] = problem.domain().distance_to_boundary(
            g.point(static_cast<int>(idx)));
    }
    return d;
}

// Parameter samples along one boundary component.
std::vector<double> side_params(const Domain& domain, BoundarySide side,
                                int count) {
    std::vector<double> ts;
    ts.reserve(static_cast<std::size_t>(count));
    const bool circle =
        side == BoundarySide::Outer || side == BoundarySide::Inner;
    for (int k = 0; k < count; ++k) {
        if (circle) {
            ts.push_back(2.0 * 3.14159265358979323846 * k / count);
        } else {
            double lo, hi;
            if (side == BoundarySide::XLow || side == BoundarySide::XHigh) {
                lo = domain.y0();
                hi = domain.y1();
            } else {
                lo = domain.x0();
                hi = domain.x1();
            }
            ts.push_back(lo + (hi - lo) * (k + 0.5) / count);
        }
    }
    return ts;
}

double min_curvature_shift(const AmbientModel& model, const Domain& domain,
                           double C) {
    const double depth = 0.999 * domain.inradius();
    double shift = std::numeric_limits<double>::infinity();
    for (BoundarySide side : domain.sides()) {
        for (double t : side_params(domain, side, 16)) {
            for (int k = 0; k <= 64; ++k) {
                const double eps = depth * k / 64;
                shift = std::min(
                    shift,
                    C + flow_line_curvature(model, domain, side, t, eps));
            }
        }
    }
    return shift;
}

double boundary_param(const BoundaryGradient& bg) {
    switch (bg.side) {
    case BoundarySide::Outer:
    case BoundarySide::Inner:
    case BoundarySide::XLow:
    case BoundarySide::XHigh:
        return bg.p.b;
    default:
        return bg.p.a;
    }
}

double max_cell_size(const Problem& problem) {
    const Grid& g = problem.grid();
    switch (g.kind()) {
    case GridKind::Radial:
        return g.dr();
    case GridKind::Polar: {
        const double xi_max =
            *std::max_element(problem.row_xi().begin(), problem.row_xi().end());
        return std::max(g.dr(), g.dt() * xi_max);
    }
    case GridKind::Cartesian:
        return std::max(g.dr(), g.dt());
    }
    return g.dr();
}

} // namespace

BarrierSearch choose_barrier_constants(const Problem& problem,
                                       const ScalarField& H) {
    BarrierSearch out;
    const Domain& domain = problem.domain();
    const AmbientModel& model = problem.model();
    const Grid& grid = problem.grid();

    const auto [sup_phi, inf_phi] = phi_extrema(problem);
    out.sup_phi = sup_phi;
    out.inf_phi = inf_phi;

    BarrierParams params;
    params.A = 1.1 * domain.diameter_bound(model.leaf);
    params.eps = strip_width(domain, model.leaf);

    const std::vector<double> dist = node_distances(problem);
    ScalarField upper(grid, FieldTag::Height);
    ScalarField lower(grid, FieldTag::Height);

    for (int doubling = 0; doubling <= 20; ++doubling) {
        params.C = std::ldexp(1.0, doubling);
        for (std::size_t idx = 0; idx < grid.num_nodes(); ++idx) {
            const double h = params.height(dist[idx]);
            upper[idx] = sup_phi + h;
            lower[idx] = inf_phi - h;
        }
        if (!upper.all_finite()) break;

        const ScalarField up_res = residual(problem, upper, H);
        const ScalarField lo_res = residual(problem, lower, H);
        double worst_up = -std::numeric_limits<double>::infinity();
        double worst_lo = std::numeric_limits<double>::infinity();
        for (int node : problem.interior()) {
            worst_up = std::max(worst_up, up_res[node]);
            worst_lo = std::min(worst_lo, lo_res[node]);
        }
        const double shift = min_curvature_shift(model, domain, params.C);

        out.params = params;
        out.max_upper_residual = worst_up;
        out.min_lower_residual = worst_lo;
        out.min_curvature_shift = shift;
        if (worst_up < 0.0 && worst_lo > 0.0 && shift > 0.0) {
            out.found = true;
            return out;
        }
    }
    out.found = false;
    return out;
}

HeightCheck verify_height(const Problem& problem, const ScalarField& u,
                          const BarrierParams& params) {
    HeightCheck out;
    const auto [sup_phi, inf_phi] = phi_extrema(problem);
    out.sup_phi = sup_phi;
    out.inf_phi = inf_phi;

    double margin = std::numeric_limits<double>::infinity();
    const Grid& grid = problem.grid();
    for (std::size_t idx = 0; idx < grid.num_nodes(); ++idx) {
        const double h = params.height(problem.domain().distance_to_boundary(
            grid.point(static_cast<int>(idx))));
        margin = std::min(margin, sup_phi + h - u[idx]);
        margin = std::min(margin, u[idx] - (inf_phi - h));
    }
    out.margin = margin;
    out.contained = margin >= -1e-8;
    return out;
}

double sphere_barrier_radius(double k, double sup_H) {
    if (!(k > 0.0)) {
        throw DomainError("sphere comparison radius needs k > 0, got " +
                          fmt17(k));
    }
    const double root = std::sqrt(k);
    if (sup_H <= root) return std::numeric_limits<double>::infinity();
    const double x = sup_H / root;
    return 0.5 * std::log((x + 1.0) / (x - 1.0)) / root;
}

GradientBarrier boundary_gradient_barrier(const Problem& problem,
                                          const ScalarField& u,
                                          const ScalarField& H,
                                          const BarrierParams& height_params) {
    GradientBarrier out;
    const Domain& domain = problem.domain();
    const AmbientModel& model = problem.model();
    const Grid& grid = problem.grid();

    out.eps = strip_width(domain, model.leaf);

    const std::vector<BoundaryGradient> bgs = boundary_gradients(problem, u);
    out.serrin_min = std::numeric_limits<double>::infinity();
    for (const BoundaryGradient& bg : bgs) {
        const double cyl = cylinder_mean_curvature(model, domain, bg.side,
                                                   boundary_param(bg), 0.0);
        out.serrin_min = std::min(out.serrin_min, cyl + H[bg.node]);
        out.sup_boundary_slope =
            std::max(out.sup_boundary_slope,
                     std::sqrt(bg.u_eta * bg.u_eta + bg.u_tan * bg.u_tan));
        out.sup_phi_tan = std::max(out.sup_phi_tan, std::fabs(bg.u_tan));
    }
    out.serrin_ok = out.serrin_min >= -1e-9;

    const std::vector<double> dist = node_distances(problem);
    std::vector<double> phi_ext(grid.num_nodes());
    for (std::size_t idx = 0; idx < grid.num_nodes(); ++idx) {
        const auto [side, q] =
            domain.project_to_boundary(grid.point(static_cast<int>(idx)));
        (void)side;
        phi_ext[idx] = domain.boundary_value(q);
    }

    std::vector<int> strip;
    for (int node : problem.interior()) {
        if (dist[static_cast<std::size_t>(node)] < out.eps) {
            strip.push_back(node);
        }
    }
    std::vector<int> band;
    double band_width = 2.0 * max_cell_size(problem);
    while (band.empty()) {
        for (std::size_t idx = 0; idx < grid.num_nodes(); ++idx) {
            if (dist[idx] >= out.eps && dist[idx] <= out.eps + band_width) {
                band.push_back(static_cast<int>(idx));
            }
        }
        if (band.empty()) band_width *= 2.0;
        if (band_width > 64.0 * max_cell_size(problem)) break;
    }
    if (strip.empty() || band.empty()) {
        out.found = false;
        return out;
    }

    BarrierParams params = height_params;
    params.eps = out.eps;
    ScalarField upper(grid, FieldTag::Height);
    ScalarField lower(grid, FieldTag::Height);
    for (int doubling = 0; doubling <= 30; ++doubling) {
        params.K = std::ldexp(1.0, doubling);
        params.mu = params.C / std::log1p(params.K);
        for (std::size_t idx = 0; idx < grid.num_nodes(); ++idx) {
            const double w = params.psi(dist[idx]);
            upper[idx] = phi_ext[idx] + w;
            lower[idx] = phi_ext[idx] - w;
        }
        const ScalarField up_res = residual(problem, upper, H);
        const ScalarField lo_res = residual(problem, lower, H);
        double worst_up = -std::numeric_limits<double>::infinity();
        double worst_lo = std::numeric_limits<double>::infinity();
        for (int node : strip) {
            worst_up = std::max(worst_up, up_res[node]);
            worst_lo = std::min(worst_lo, lo_res[node]);
        }
        double domination = std::numeric_limits<double>::infinity();
        for (int node : band) {
            domination = std::min(domination, upper[node] - u[node]);
            domination = std::min(domination, u[node] - lower[node]);
        }

        out.mu = params.mu;
        out.K = params.K;
        out.psi_slope0 = params.psi_slope(0.0);
        out.max_strip_residual = worst_up;
        out.min_strip_residual = worst_lo;
        out.min_domination = domination;
        if (worst_up < 0.0 && worst_lo > 0.0 && domination >= -1e-12) {
            out.found = true;
            out.slope_bound = out.psi_slope0 + out.sup_phi_tan;
            return out;
        }
    }
    out.found = false;
    out.slope_bound = out.psi_slope0 + out.sup_phi_tan;
    return out;
}

namespace {

double circumradius(const Domain& domain) {
    switch (domain.kind()) {
    case DomainKind::Disc:
    case DomainKind::Annulus:
        return domain.r_outer();
    case DomainKind::Rectangle:
        return 0.5 * std::hypot(domain.x1() - domain.x0(),
                                domain.y1() - domain.y0());
    }
    return 0.0;
}

double sup_abs_curvature(const Domain& domain,
                         const std::function<double(LeafPoint)>& H) {
    double sup = 0.0;
    for (LeafPoint p : sample_chart(domain, 64, 64)) {
        sup = std::max(sup, std::fabs(H(p)));
    }
    return sup;
}

} // namespace

HypothesisReport check_theorem_hypotheses(
    const AmbientModel& model, const Domain& domain,
    const std::function<double(LeafPoint)>& H, int theorem) {
    if (theorem < 1 || theorem > 3) {
        throw ConfigError("unknown theorem id " + std::to_string(theorem));
    }
    HypothesisReport report;
    report.theorem = theorem;
    report.n = model.n();

    const double tol = 1e-12;
    const double inf_cyl = inf_cylinder_mean_curvature(model, domain);
    const double sup_H = sup_abs_curvature(domain, H);
    report.metrics.emplace_back("inf_cylinder_curvature", inf_cyl);
    report.metrics.emplace_back("sup_abs_H", sup_H);
    report.conditions.push_back(
        {"mean-convex boundary", inf_cyl, 0.0, inf_cyl >= -tol});

    if (theorem == 1) {
        const double ric = ricci_lower_bound(model, domain);
        const double floor = -model.n() * inf_cyl * inf_cyl;
        report.metrics.emplace_back("ricci_lower_bound", ric);
        report.conditions.push_back(
            {"ricci above cylinder floor", ric, floor, ric >= floor - tol});
        report.conditions.push_back({"curvature dominated by cylinder", sup_H,
                                     inf_cyl, sup_H <= inf_cyl + tol});
    } else if (theorem == 2) {
        const double ric = ricci_lower_bound(model, domain);
        const double k = std::max(-ric, 0.0) / (model.n() - 1);
        double r_max;
        if (k > 0.0) {
            r_max = sphere_barrier_radius(k, sup_H);
        } else {
            r_max = sup_H > 0.0 ? 1.0 / sup_H
                                : std::numeric_limits<double>::infinity();
        }
        const double R = circumradius(domain);
        report.metrics.emplace_back("ricci_lower_bound", ric);
        report.metrics.emplace_back("k", k);
        report.metrics.emplace_back("circumradius", R);
        report.metrics.emplace_back("sphere_barrier_radius", r_max);
        report.conditions.push_back(
            {"circumradius within comparison radius", R, r_max,
             R <= r_max + tol});
    } else {
        if (!model.leaf.is_polar()) {
            throw DomainError(
                "the rotational solvability bound needs a rotationally "
                "symmetric leaf");
        }
        const RotationalModel rot = RotationalModel::from(model);
        const double r0 = domain.r_outer();
        const double F = rot.serrin_bound(r0);
        report.metrics.emplace_back("disc_radius", r0);
        report.metrics.emplace_back("serrin_bound_F", F);
        report.conditions.push_back({"rotational solvability bound",
                                     model.n() * sup_H, F,
                                     model.n() * sup_H <= F + tol});
    }

    report.verdict = true;
    for (const HypothesisCondition& c : report.conditions) {
        report.verdict = report.verdict && c.pass;
    }
    return report;
}

std::string render_report(const HypothesisReport& report) {
    std::ostringstream os;
    os << "theorem = " << report.theorem << "\n";
    os << "n = " << report.n << "\n";
    for (const auto& [key, value] : report.metrics) {
        os << key << " = " << fmt17(value) << "\n";
    }
    for (const HypothesisCondition& c : report.conditions) {
        os << "condition \"" << c.name << "\": lhs = " << fmt17(c.lhs)
           << ", rhs = " << fmt17(c.rhs) << " -> "
           << (c.pass ? "PASS" : "FAIL") << "\n";
    }
    os << "verdict = " << (report.verdict ? "PASS" : "FAIL") << "\n";
    return os.str();
}

} // namespace kgraph
