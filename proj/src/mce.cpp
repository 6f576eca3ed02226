#include "kgraph/mce.hpp"

#include "kgraph/kernels.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>

namespace kgraph {

namespace {

double pow_int(double base, int e) {
    double acc = 1.0;
    for (int k = 0; k < e; ++k) acc *= base;
    return acc;
}

// Length of the radial/x cell around row i (half cells at boundary rows;
// the staggered pole row of disc grids owns the full [0, dr] cell).
double row_cell_len(const Grid& g, int i) {
    if (g.has_pole()) {
        return i == g.mr() - 1 ? 0.5 * g.dr() : g.dr();
    }
    return (i == 0 || i == g.mr() - 1) ? 0.5 * g.dr() : g.dr();
}

double col_cell_len(const Grid& g, int j) {
    if (g.kind() != GridKind::Cartesian) return g.dt();
    return (j == 0 || j == g.mt() - 1) ? 0.5 * g.dt() : g.dt();
}

} // namespace

double sphere_measure(int n) {
    const double pi = 3.14159265358979323846;
    return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
}

Problem::Problem(AmbientModel model, Domain domain, Grid grid)
    : model_(std::move(model)), domain_(std::move(domain)),
      grid_(std::move(grid)) {
    const Grid& g = grid_;
    const int n = model_.n();

    switch (g.kind()) {
    case GridKind::Radial:
    case GridKind::Polar:
        if (!model_.leaf.is_polar()) {
            throw ConfigError("polar grids require a rotationally symmetric "
                              "leaf");
        }
        if (domain_.kind() == DomainKind::Rectangle) {
            throw ConfigError("polar grids require a disc or annulus domain");
        }
        if (g.kind() == GridKind::Polar && n != 2) {
            throw ConfigError(
                "angular grids are two-dimensional; use a radial grid for "
                "higher-dimensional rotationally symmetric problems");
        }
        break;
    case GridKind::Cartesian:
        if (model_.leaf.kind() != LeafKind::CartesianFlat) {
            throw ConfigError("cartesian grids require the flat leaf");
        }
        break;
    }

    const int mr = g.mr();
    const int mt = g.mt();
    const bool cart = g.kind() == GridKind::Cartesian;

    row_xi_.resize(mr);
    row_rho_.resize(mr);
    row_f_.resize(mr);
    row_ang_coeff_.resize(mr);
    row_inv_w_.resize(mr);
    face_coeff_.assign(mr, 0.0);
    face_f_.assign(mr, 0.0);
    face_xi_.assign(mr, 1.0);

    for (int i = 0; i < mr; ++i) {
        const double c = g.coord_a(i);
        const double xi = cart ? 1.0 : model_.leaf.xi().value(c);
        const double rho = model_.warp.rho(c);
        row_xi_[i] = xi;
        row_rho_[i] = rho;
        row_f_[i] = 1.0 / (rho * rho);
        const double w = rho * pow_int(xi, n - 1);
        row_ang_coeff_[i] = rho / xi;
        row_inv_w_[i] = 1.0 / w;
    }
    for (int i = 0; i < mr; ++i) {
        double cf = 0.0;
        if (g.has_pole()) {
            cf = i * g.dr();
        } else {
            if (i == 0) continue;
            cf = 0.5 * (g.coord_a(i - 1) + g.coord_a(i));
        }
        const double xi = cart ? 1.0 : model_.leaf.xi().value(cf);
        const double rho = model_.warp.rho(cf);
        face_coeff_[i] = rho * pow_int(xi, n - 1);
        face_f_[i] = 1.0 / (rho * rho);
        face_xi_[i] = xi;
    }
    if (g.has_pole()) {
        face_coeff_[0] = 0.0;
    }

    const std::size_t nn = g.num_nodes();
    f_node_.resize(nn);
    rho_node_.resize(nn);
    vol_weight_.resize(nn);
    for (int i = 0; i < mr; ++i) {
        const double len_a = row_cell_len(g, i);
        for (int j = 0; j < mt; ++j) {
            const std::size_t idx = static_cast<std::size_t>(g.index(i, j));
            f_node_[idx] = row_f_[i];
            rho_node_[idx] = row_rho_[i];
            double w = 0.0;
            switch (g.kind()) {
            case GridKind::Radial:
                w = sphere_measure(n) * pow_int(row_xi_[i], n - 1) * len_a;
                break;
            case GridKind::Polar:
                w = row_xi_[i] * len_a * g.dt();
                break;
            case GridKind::Cartesian:
                w = len_a * col_cell_len(g, j);
                break;
            }
            vol_weight_[idx] = w;
        }
    }

    interior_ = g.interior_nodes();
    boundary_ = g.boundary_nodes();
    interior_ord_.assign(nn, -1);
    for (std::size_t k = 0; k < interior_.size(); ++k) {
        interior_ord_[static_cast<std::size_t>(interior_[k])] =
            static_cast<int>(k);
    }
}

ScalarField sample_field(const Problem& problem,
                         const std::function<double(LeafPoint)>& fn,
                         FieldTag tag) {
    const Grid& g = problem.grid();
    ScalarField out(g, tag);
    for (std::size_t idx = 0; idx < g.num_nodes(); ++idx) {
        out[idx] = fn(g.point(static_cast<int>(idx)));
    }
    return out;
}

namespace {

inline double uat(const Grid& g, const ScalarField& u, int i, int j) {
    return u[static_cast<std::size_t>(g.index(i, g.wrap_j(j)))];
}

// Raw angular/y parameter derivative at a node by centered differences;
// valid wherever a face flux needs it (interior columns, or any column on
// periodic grids).
double dtan_raw(const Grid& g, const ScalarField& u, int i, int j) {
    return (uat(g, u, i, j + 1) - uat(g, u, i, j - 1)) / (2.0 * g.dt());
}

// Radial/x derivative at a node.  The staggered pole row of disc grids has
// no inner neighbor and uses a one-sided difference.
double drad_at(const Grid& g, const ScalarField& u, int i, int j) {
    if (i == 0) {
        return (uat(g, u, 1, j) - uat(g, u, 0, j)) / g.dr();
    }
    return (uat(g, u, i + 1, j) - uat(g, u, i - 1, j)) / (2.0 * g.dr());
}

// Flux through the radial/x face below row i at column j, with the metric
// weight rho xi^(n-1) baked into the face coefficient.  The pole face of
// disc grids carries no flux.
double radial_face_flux(const Problem& P, const ScalarField& u, int i,
                        int j) {
    const Grid& g = P.grid();
    if (i == 0) return 0.0;
    const double gn = (uat(g, u, i, j) - uat(g, u, i - 1, j)) / g.dr();
    double gt = 0.0;
    if (g.kind() != GridKind::Radial) {
        const double tl = dtan_raw(g, u, i - 1, j);
        const double th = dtan_raw(g, u, i, j);
        gt = 0.5 * (tl + th) / P.face_xi()[static_cast<std::size_t>(i)];
    }
    const double W =
        std::sqrt(P.face_f()[static_cast<std::size_t>(i)] + gn * gn + gt * gt);
    return P.face_coeff()[static_cast<std::size_t>(i)] * gn / W;
}

// Flux through the angular/y face between columns j and j+1 at row i.
double angular_face_flux(const Problem& P, const ScalarField& u, int i,
                         int j) {
    const Grid& g = P.grid();
    const double raw =
        (uat(g, u, i, j + 1) - uat(g, u, i, j)) / g.dt();
    const double xi = P.row_xi()[static_cast<std::size_t>(i)];
    const double gt = raw / xi;
    const double ga =
        0.5 * (drad_at(g, u, i, j) + drad_at(g, u, i, g.wrap_j(j + 1)));
    const double W =
        std::sqrt(P.row_f()[static_cast<std::size_t>(i)] + gt * gt + ga * ga);
    return P.row_ang_coeff()[static_cast<std::size_t>(i)] * raw / W;
}

} // namespace

double residual_at(const Problem& problem, const ScalarField& u,
                   const ScalarField& H, int i, int j) {
    const Grid& g = problem.grid();
    const double n = static_cast<double>(problem.n());
    double acc = (radial_face_flux(problem, u, i + 1, j) -
                  radial_face_flux(problem, u, i, j)) /
                 g.dr();
    if (g.kind() != GridKind::Radial) {
        acc += (angular_face_flux(problem, u, i, j) -
                angular_face_flux(problem, u, i, j - 1)) /
               g.dt();
    }
    const std::size_t idx = static_cast<std::size_t>(g.index(i, j));
    return problem.row_inv_weight()[static_cast<std::size_t>(i)] * acc -
           n * H[idx];
}

ScalarField residual(const Problem& problem, const ScalarField& u,
                     const ScalarField& H) {
    const Grid& g = problem.grid();
    ScalarField out(g, FieldTag::Residual);
    for (int node : problem.interior()) {
        out[static_cast<std::size_t>(node)] =
            residual_at(problem, u, H, node / g.mt(), node % g.mt());
    }
    return out;
}

namespace {

// Orthonormal gradient components at one node: centered differences in the
// interior, second-order one-sided stencils at boundary rows/columns and at
// the staggered pole row.
std::pair<double, double> node_gradient(const Problem& P, const ScalarField& u,
                                        int i, int j) {
    const Grid& g = P.grid();
    const int mr = g.mr(), mt = g.mt();
    const double dr = g.dr(), dt = g.dt();
    double da = 0.0;
    if (i == 0) {
        da = (-3.0 * uat(g, u, 0, j) + 4.0 * uat(g, u, 1, j) -
              uat(g, u, 2, j)) /
             (2.0 * dr);
    } else if (i == mr - 1) {
        da = (3.0 * uat(g, u, i, j) - 4.0 * uat(g, u, i - 1, j) +
              uat(g, u, i - 2, j)) /
             (2.0 * dr);
    } else {
        da = (uat(g, u, i + 1, j) - uat(g, u, i - 1, j)) / (2.0 * dr);
    }
    if (g.kind() == GridKind::Radial) return {da, 0.0};
    double db = 0.0;
    if (g.periodic()) {
        db = dtan_raw(g, u, i, j);
    } else if (j == 0) {
        db = (-3.0 * uat(g, u, i, 0) + 4.0 * uat(g, u, i, 1) -
              uat(g, u, i, 2)) /
             (2.0 * dt);
    } else if (j == mt - 1) {
        db = (3.0 * uat(g, u, i, j) - 4.0 * uat(g, u, i, j - 1) +
              uat(g, u, i, j - 2)) /
             (2.0 * dt);
    } else {
        db = (uat(g, u, i, j + 1) - uat(g, u, i, j - 1)) / (2.0 * dt);
    }
    return {da, db / P.row_xi()[static_cast<std::size_t>(i)]};
}

void nodal_gradients(const Problem& P, const ScalarField& u,
                     std::vector<double>& pa, std::vector<double>& pb) {
    const Grid& g = P.grid();
    pa.assign(g.num_nodes(), 0.0);
    pb.assign(g.num_nodes(), 0.0);
    for (int i = 0; i < g.mr(); ++i) {
        for (int j = 0; j < g.mt(); ++j) {
            const std::size_t idx = static_cast<std::size_t>(g.index(i, j));
            const auto [da, db] = node_gradient(P, u, i, j);
            pa[idx] = da;
            pb[idx] = db;
        }
    }
}

} // namespace

ScalarField slope_function(const Problem& problem, const ScalarField& u) {
    const Grid& g = problem.grid();
    std::vector<double> pa, pb;
    nodal_gradients(problem, u, pa, pb);
    const std::size_t nn = g.num_nodes();
    const kernels::Ops& ops = kernels::active_ops();
    std::vector<double> g2(nn), tmp(nn);
    ops.multiply(pa.data(), pa.data(), g2.data(), nn);
    ops.multiply(pb.data(), pb.data(), tmp.data(), nn);
    ops.add_scaled(g2.data(), tmp.data(), 1.0, nn);
    ScalarField W(g, FieldTag::Slope);
    ops.sqrt_add(problem.f_nodes().data(), g2.data(), W.data(), nn);
    return W;
}

Coefficients coefficients(const Problem& problem, const ScalarField& u) {
    const Grid& g = problem.grid();
    const std::size_t nn = g.num_nodes();
    const kernels::Ops& ops = kernels::active_ops();
    std::vector<double> pa, pb;
    nodal_gradients(problem, u, pa, pb);

    Coefficients co{
        ScalarField(g, FieldTag::Slope),    ScalarField(g),
        ScalarField(g),                     ScalarField(g),
        ScalarField(g),                     ScalarField(g),
        ScalarField(g),
    };

    std::vector<double> g2(nn), tmp(nn);
    ops.multiply(pa.data(), pa.data(), g2.data(), nn);
    ops.multiply(pb.data(), pb.data(), tmp.data(), nn);
    ops.add_scaled(g2.data(), tmp.data(), 1.0, nn);
    ops.sqrt_add(problem.f_nodes().data(), g2.data(), co.W.data(), nn);
    ops.div_cube(problem.f_nodes().data(), co.W.data(), co.lambda.data(), nn);
    ops.reciprocal(co.W.data(), co.Lambda.data(), nn);

    for (std::size_t idx = 0; idx < nn; ++idx) {
        const double W = co.W[idx];
        const double W2 = W * W;
        const double p1 = pa[idx], p2 = pb[idx];
        co.a_nn[idx] = (1.0 - p1 * p1 / W2) / W;
        co.a_nt[idx] = (-p1 * p2 / W2) / W;
        co.a_tt[idx] = (1.0 - p2 * p2 / W2) / W;
        const LeafPoint p = g.point(static_cast<int>(idx));
        const LeafVector X = drift_field(problem.model(), p);
        const double gx = p1 * X.a;
        const double f = problem.f_nodes()[idx];
        co.b[idx] = -((f + W2) / (W2 * W)) * gx;
    }
    return co;
}

ScalarField manufactured_H(const Problem& problem, const SmoothField& exact) {
    const Grid& g = problem.grid();
    const bool polar = g.kind() != GridKind::Cartesian;
    ScalarField out(g, FieldTag::Curvature);
    for (std::size_t idx = 0; idx < g.num_nodes(); ++idx) {
        out[idx] = manufactured_H_at(problem.model(), polar,
                                     g.point(static_cast<int>(idx)), exact);
    }
    return out;
}

double manufactured_H_at(const AmbientModel& model, bool polar_chart,
                         LeafPoint p, const SmoothField& exact) {
    const double n = static_cast<double>(model.n());
    const double f = model.warp.f(p.a);
    const double rho = model.warp.rho(p.a);
    const double Xa = -model.warp.drho(p.a) / rho;
    const double ua = exact.da(p), ub = exact.db(p);
    const double uaa = exact.daa(p), uab = exact.dab(p),
                 ubb = exact.dbb(p);

    double T = 0.0, G = 0.0, W2 = 0.0;
    if (polar_chart) {
        const ScalarFn& xifn = model.leaf.xi();
        const double x = xifn.value(p.a);
        const double dx = xifn.d1(p.a);
        const double xr = dx / x;
        const double p1 = ua, p2 = ub / x;
        W2 = f + p1 * p1 + p2 * p2;
        const double h_aa = uaa;
        const double h_ab = uab - xr * ub;
        const double h_bb = ubb + x * dx * ua;
        T = h_aa + h_bb / (x * x) + (n - 2.0) * xr * ua;
        G = p1 * p1 * h_aa + 2.0 * p1 * p2 * (h_ab / x) +
            p2 * p2 * (h_bb / (x * x));
    } else {
        W2 = f + ua * ua + ub * ub;
        T = uaa + ubb;
        G = ua * ua * uaa + 2.0 * ua * ub * uab + ub * ub * ubb;
    }
    const double W = std::sqrt(W2);
    const double a_term = (T - G / W2) / W;
    const double b_term = -((f + W2) / (W2 * W)) * (ua * Xa);
    return (a_term + b_term) / n;
}

UnitNormal unit_normal(const Problem& problem, const ScalarField& u,
                       int node) {
    const Grid& g = problem.grid();
    const int i = node / g.mt(), j = node % g.mt();
    const std::size_t idx = static_cast<std::size_t>(node);
    const auto [pa, pb] = node_gradient(problem, u, i, j);
    const double f = problem.f_nodes()[idx];
    const double rho = problem.rho_nodes()[idx];
    const double W = std::sqrt(f + pa * pa + pb * pb);
    UnitNormal nrm;
    nrm.w = W;
    nrm.vertical = f / W;
    const double xi = g.kind() == GridKind::Cartesian
                          ? 1.0
                          : problem.row_xi()[static_cast<std::size_t>(i)];
    nrm.leaf = {-pa / W, -pb / (W * xi)};
    nrm.y_dot_n = rho * rho * f / W;
    return nrm;
}

GradientDiagnostic gradient_diagnostic(const Problem& problem,
                                       const ScalarField& u, double C) {
    const Grid& g = problem.grid();
    std::vector<double> pa, pb;
    nodal_gradients(problem, u, pa, pb);
    GradientDiagnostic d{ScalarField(g), 0.0, -1, 0.0};
    for (std::size_t idx = 0; idx < g.num_nodes(); ++idx) {
        const double v = pa[idx] * pa[idx] + pb[idx] * pb[idx];
        const double tau = std::exp(2.0 * C * u[idx]) * v;
        d.tau[idx] = tau;
        if (d.argmax < 0 || tau > d.max_tau) {
            d.max_tau = tau;
            d.argmax = static_cast<int>(idx);
        }
        d.sup_slope = std::max(d.sup_slope, std::sqrt(v));
    }
    return d;
}

namespace {

double one_sided_out(const Grid& g, const ScalarField& u, int i, int j,
                     int di, int dj, double step) {
    // Derivative along the outward normal from a boundary node, using the
    // two nodes behind it: (3 u0 - 4 u1 + u2) / (2 step).
    return (3.0 * uat(g, u, i, j) - 4.0 * uat(g, u, i - di, j - dj) +
            uat(g, u, i - 2 * di, j - 2 * dj)) /
           (2.0 * step);
}

double edge_tangential(const Grid& g, const ScalarField& u, int i, int j,
                       bool along_rows) {
    // Tangential derivative along a rectangle edge with one-sided stencils
    // at the corners.
    if (along_rows) {
        if (i == 0) {
            return (-3.0 * uat(g, u, 0, j) + 4.0 * uat(g, u, 1, j) -
                    uat(g, u, 2, j)) /
                   (2.0 * g.dr());
        }
        if (i == g.mr() - 1) {
            return one_sided_out(g, u, i, j, 1, 0, g.dr());
        }
        return (uat(g, u, i + 1, j) - uat(g, u, i - 1, j)) / (2.0 * g.dr());
    }
    if (j == 0) {
        return (-3.0 * uat(g, u, i, 0) + 4.0 * uat(g, u, i, 1) -
                uat(g, u, i, 2)) /
               (2.0 * g.dt());
    }
    if (j == g.mt() - 1) {
        return one_sided_out(g, u, i, j, 0, 1, g.dt());
    }
    return (uat(g, u, i, j + 1) - uat(g, u, i, j - 1)) / (2.0 * g.dt());
}

} // namespace

std::vector<BoundaryGradient> boundary_gradients(const Problem& problem,
                                                 const ScalarField& u) {
    const Grid& g = problem.grid();
    const Domain& dom = problem.domain();
    const int n = problem.n();
    std::vector<BoundaryGradient> out;

    auto push = [&](int i, int j, BoundarySide side, double u_eta,
                    double u_tan, double line_weight) {
        BoundaryGradient bg;
        bg.node = g.index(i, j);
        bg.side = side;
        bg.p = g.point(bg.node);
        bg.u_eta = u_eta;
        bg.u_tan = u_tan;
        const double f = problem.f_nodes()[static_cast<std::size_t>(bg.node)];
        bg.w = std::sqrt(f + u_eta * u_eta + u_tan * u_tan);
        bg.line_weight = line_weight;
        out.push_back(bg);
    };

    if (g.kind() != GridKind::Cartesian) {
        const int last = g.mr() - 1;
        const bool two_d = g.kind() == GridKind::Polar;
        const double xi_out = problem.row_xi()[static_cast<std::size_t>(last)];
        const double w_out = two_d ? xi_out * g.dt()
                                   : sphere_measure(n) * pow_int(xi_out, n - 1);
        for (int j = 0; j < g.mt(); ++j) {
            const double u_eta = one_sided_out(g, u, last, j, 1, 0, g.dr());
            const double u_tan =
                two_d ? dtan_raw(g, u, last, j) / xi_out : 0.0;
            push(last, j, BoundarySide::Outer, u_eta, u_tan, w_out);
        }
        if (dom.kind() == DomainKind::Annulus) {
            const double xi_in = problem.row_xi()[0];
            const double w_in = two_d
                                    ? xi_in * g.dt()
                                    : sphere_measure(n) * pow_int(xi_in, n - 1);
            for (int j = 0; j < g.mt(); ++j) {
                const double u_eta =
                    (3.0 * uat(g, u, 0, j) - 4.0 * uat(g, u, 1, j) +
                     uat(g, u, 2, j)) /
                    (2.0 * g.dr());
                const double u_tan =
                    two_d ? dtan_raw(g, u, 0, j) / xi_in : 0.0;
                push(0, j, BoundarySide::Inner, u_eta, u_tan, w_in);
            }
        }
        return out;
    }

    const int mx = g.mr(), my = g.mt();
    auto edge_weight = [&](int k, int m, double step) {
        return (k == 0 || k == m - 1) ? 0.5 * step : step;
    };
    for (int j = 0; j < my; ++j) {
        const double lw = edge_weight(j, my, g.dt());
        push(0, j, BoundarySide::XLow,
             (3.0 * uat(g, u, 0, j) - 4.0 * uat(g, u, 1, j) +
              uat(g, u, 2, j)) /
                 (2.0 * g.dr()),
             edge_tangential(g, u, 0, j, false), lw);
        push(mx - 1, j, BoundarySide::XHigh,
             one_sided_out(g, u, mx - 1, j, 1, 0, g.dr()),
             edge_tangential(g, u, mx - 1, j, false), lw);
    }
    for (int i = 0; i < mx; ++i) {
        const double lw = edge_weight(i, mx, g.dr());
        push(i, 0, BoundarySide::YLow,
             (3.0 * uat(g, u, i, 0) - 4.0 * uat(g, u, i, 1) +
              uat(g, u, i, 2)) /
                 (2.0 * g.dt()),
             edge_tangential(g, u, i, 0, true), lw);
        push(i, my - 1, BoundarySide::YHigh,
             one_sided_out(g, u, i, my - 1, 0, 1, g.dt()),
             edge_tangential(g, u, i, my - 1, true), lw);
    }
    return out;
}

const char* solve_status_name(SolveStatus status) {
    switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max-iterations";
    case SolveStatus::LineSearchFailed: return "line-search-failed";
    case SolveStatus::SingularJacobian: return "singular-jacobian";
    case SolveStatus::Diverged: return "diverged";
    }
    return "?";
}

namespace {

// Residual over the interior nodes as a packed vector; entries follow the
// interior ordinal order.
void residual_packed(const Problem& P, const ScalarField& u,
                     const ScalarField& H, std::vector<double>& out) {
    const Grid& g = P.grid();
    const std::vector<int>& interior = P.interior();
    out.resize(interior.size());
    for (std::size_t k = 0; k < interior.size(); ++k) {
        const int node = interior[k];
        out[k] = residual_at(P, u, H, node / g.mt(), node % g.mt());
    }
}

} // namespace

NewtonResult newton_solve(const Problem& problem, const ScalarField& H,
                          const std::function<double(LeafPoint)>& phi,
                          const ScalarField& u0, const SolverOptions& options) {
    const Grid& g = problem.grid();
    const std::vector<int>& interior = problem.interior();
    const std::size_t N = interior.size();
    const kernels::Ops& ops = kernels::active_ops();

    NewtonResult res;
    res.u = u0;
    for (int node : problem.boundary()) {
        res.u[static_cast<std::size_t>(node)] = phi(g.point(node));
    }
    if (options.record_iterates) res.iterates.push_back(res.u);

    std::vector<double> Q;
    residual_packed(problem, res.u, H, Q);
    double norm = ops.max_abs(Q.data(), Q.size());
    res.norm_history.push_back(norm);

    std::vector<double> Qnode(g.num_nodes(), 0.0);
    auto scatter_Q = [&]() {
        for (std::size_t k = 0; k < N; ++k) {
            Qnode[static_cast<std::size_t>(interior[k])] = Q[k];
        }
    };

    ScalarField utry = res.u;
    std::vector<double> Qtry;
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::SparseMatrix<double> A(static_cast<int>(N), static_cast<int>(N));
    Eigen::VectorXd rhs(static_cast<int>(N)), du(static_cast<int>(N));

    for (;;) {
        if (!std::isfinite(norm)) {
            res.status = SolveStatus::Diverged;
            break;
        }
        if (norm <= options.tol) {
            res.status = SolveStatus::Converged;
            break;
        }
        if (res.iterations >= options.max_iterations) {
            res.status = SolveStatus::MaxIterations;
            break;
        }

        scatter_Q();
        trips.clear();
        for (std::size_t c = 0; c < N; ++c) {
            const int cnode = interior[c];
            const int ic = cnode / g.mt(), jc = cnode % g.mt();
            const std::size_t cidx = static_cast<std::size_t>(cnode);
            const double delta = 1e-7 * (1.0 + std::fabs(res.u[cidx]));
            const double saved = res.u[cidx];
            res.u[cidx] = saved + delta;
            for (int di = -1; di <= 1; ++di) {
                const int ri = ic + di;
                if (ri < 0 || ri >= g.mr()) continue;
                for (int dj = -1; dj <= 1; ++dj) {
                    int rj = jc + dj;
                    if (g.periodic()) {
                        rj = g.wrap_j(rj);
                    } else if (rj < 0 || rj >= g.mt()) {
                        continue;
                    }
                    const int rnode = g.index(ri, rj);
                    const int row = problem.interior_ordinal(rnode);
                    if (row < 0) continue;
                    const double qp = residual_at(problem, res.u, H, ri, rj);
                    const double dq =
                        (qp - Qnode[static_cast<std::size_t>(rnode)]) / delta;
                    if (dq != 0.0) {
                        trips.emplace_back(row, static_cast<int>(c), dq);
                    }
                }
            }
            res.u[cidx] = saved;
        }

        A.setFromTriplets(trips.begin(), trips.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(A);
        if (lu.info() != Eigen::Success) {
            res.status = SolveStatus::SingularJacobian;
            break;
        }
        for (std::size_t k = 0; k < N; ++k) rhs[static_cast<int>(k)] = -Q[k];
        du = lu.solve(rhs);
        if (!du.allFinite()) {
            res.status = SolveStatus::Diverged;
            break;
        }

        double s = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= options.max_halvings; ++halving) {
            utry = res.u;
            for (std::size_t k = 0; k < N; ++k) {
                utry[static_cast<std::size_t>(interior[k])] +=
                    s * du[static_cast<int>(k)];
            }
            residual_packed(problem, utry, H, Qtry);
            const double normtry = ops.max_abs(Qtry.data(), Qtry.size());
            if (std::isfinite(normtry) && normtry < norm) {
                accepted = true;
                res.u = utry;
                Q.swap(Qtry);
                norm = normtry;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) {
            res.status = SolveStatus::LineSearchFailed;
            break;
        }
        ++res.iterations;
        res.norm_history.push_back(norm);
        if (options.record_iterates) res.iterates.push_back(res.u);
    }

    res.residual_norm = norm;
    return res;
}

} // namespace kgraph
