#include "kgraph/rotational.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>

namespace kgraph {

namespace {

constexpr double kPi = 3.14159265358979323846;

double pow_int(double base, int e) {
    double acc = 1.0;
    for (int k = 0; k < e; ++k) acc *= base;
    return acc;
}

} // namespace

RotationalModel::RotationalModel(ScalarFn xi, ScalarFn rho, int n)
    : xi_(std::move(xi)), rho_(std::move(rho)), n_(n) {
    if (n < 2) throw DomainError("leaf dimension must be at least 2");
    if (xi_.value(0.0) != 0.0 || xi_.d1(0.0) <= 0.0) {
        throw DomainError(
            "rotsym radius profile must vanish at 0 with positive slope");
    }
}

RotationalModel RotationalModel::from(const AmbientModel& model) {
    if (!model.leaf.is_polar()) {
        throw DomainError(
            "rotational constructions require a rotationally symmetric leaf");
    }
    return RotationalModel(model.leaf.xi(), model.warp.fn(), model.n());
}

double RotationalModel::rho(double r) const {
    const double v = rho_.value(r);
    if (!(v > 0.0)) {
        throw DomainError("warping function must be positive, got " +
                          fmt17(v) + " at " + fmt17(r));
    }
    return v;
}

double RotationalModel::weight(double r) const {
    return rho(r) * pow_int(xi_.value(r), n_ - 1);
}

double RotationalModel::momentum_integral(double r) const {
    if (r < 0.0) throw DomainError("momentum integral needs r >= 0");
    if (r == 0.0) return 0.0;
    auto density = [this](double t) { return weight(t); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        density, 0.0, r, 15, 1e-13);
}

double RotationalModel::serrin_bound(double r0) const {
    if (!(r0 > 0.0)) throw DomainError("serrin bound needs r0 > 0");
    return weight(r0) / momentum_integral(r0);
}

namespace {

struct State {
    double s, r, psi;
};

State rhs(const RotationalModel& m, double nH0, State y) {
    const double rho = m.rho(y.r);
    const double sp = std::sin(y.psi);
    const double logw =
        m.drho(y.r) / rho +
        static_cast<double>(m.n() - 1) * m.dxi(y.r) / m.xi(y.r);
    return {sp / rho, std::cos(y.psi), -nH0 - logw * sp};
}

// Dormand-Prince 5(4) step; returns the 5th-order solution and the
// embedded error estimate.
struct StepResult {
    State y;
    double err;
};

StepResult dp_step(const RotationalModel& m, double nH0, const State& y0,
                   double h, double tol) {
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695,
                        e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                        e6 = 187.0 / 2100, e7 = 1.0 / 40;

    auto axpy = [](const State& y, double c, const State& k) {
        return State{y.s + c * k.s, y.r + c * k.r, y.psi + c * k.psi};
    };

    const State k1 = rhs(m, nH0, y0);
    const State k2 = rhs(m, nH0, axpy(y0, h * a21, k1));
    State t = y0;
    t = axpy(t, h * a31, k1);
    t = axpy(t, h * a32, k2);
    const State k3 = rhs(m, nH0, t);
    t = axpy(axpy(axpy(y0, h * a41, k1), h * a42, k2), h * a43, k3);
    const State k4 = rhs(m, nH0, t);
    t = axpy(axpy(axpy(axpy(y0, h * a51, k1), h * a52, k2), h * a53, k3),
             h * a54, k4);
    const State k5 = rhs(m, nH0, t);
    t = axpy(axpy(axpy(axpy(axpy(y0, h * a61, k1), h * a62, k2), h * a63, k3),
                  h * a64, k4),
             h * a65, k5);
    const State k6 = rhs(m, nH0, t);

    State y5 = y0;
    y5 = axpy(y5, h * b1, k1);
    y5 = axpy(y5, h * b3, k3);
    y5 = axpy(y5, h * b4, k4);
    y5 = axpy(y5, h * b5, k5);
    y5 = axpy(y5, h * b6, k6);

    const State k7 = rhs(m, nH0, y5);
    State y4 = y0;
    y4 = axpy(y4, h * e1, k1);
    y4 = axpy(y4, h * e3, k3);
    y4 = axpy(y4, h * e4, k4);
    y4 = axpy(y4, h * e5, k5);
    y4 = axpy(y4, h * e6, k6);
    y4 = axpy(y4, h * e7, k7);

    const auto scaled = [tol](double diff, double ref) {
        return std::fabs(diff) / (tol + tol * std::fabs(ref));
    };
    const double err = std::max(
        {scaled(y5.s - y4.s, y5.s), scaled(y5.r - y4.r, y5.r),
         scaled(y5.psi - y4.psi, y5.psi)});
    return {y5, err};
}

} // namespace

ProfileCurve integrate_cmc_sphere(const RotationalModel& model, double H0,
                                  const ProfileOptions& options) {
    if (H0 == 0.0 || !std::isfinite(H0)) {
        throw DomainError("compact spheres need a nonzero curvature");
    }
    const bool reflected = H0 > 0.0;
    const double h0 = -std::fabs(H0);
    const double nH0 = model.n() * h0;

    // A turning radius exists iff n|H0| I(r) reaches the momentum weight.
    double r_hint = 0.0;
    {
        const int scan = 400;
        for (int k = 1; k <= scan; ++k) {
            const double r = options.r_limit * k / scan;
            if (-nH0 * model.momentum_integral(r) >= model.weight(r)) {
                r_hint = r;
                break;
            }
        }
        if (r_hint == 0.0) {
            throw DomainError(
                "profile with curvature " + fmt17(H0) +
                " does not close: no turning radius up to r = " +
                fmt17(options.r_limit));
        }
    }

    // Two-term series start near the axis.
    const double l0 = options.start;
    const double p1 = -h0;
    const double xi1 = model.xi_fn().d1(0.0);
    const double xi3 = model.xi_fn().d3(0.0);
    const double rho0 = model.rho(0.0);
    const double rho2 = model.rho_fn().d2(0.0);
    const double cser = static_cast<double>(model.n() - 1) * (xi3 / xi1) / 3.0 +
                        rho2 / rho0;
    const double p3 = -cser * p1 / (model.n() + 2);

    State y{p1 / (2.0 * rho0) * l0 * l0, l0 - p1 * p1 * l0 * l0 * l0 / 6.0,
            p1 * l0 + p3 * l0 * l0 * l0};

    ProfileCurve curve;
    curve.H0 = H0;
    curve.ctilde = 0.0;
    auto push = [&](double l, const State& st) {
        curve.u.push_back(l);
        curve.s.push_back(st.s);
        curve.r.push_back(st.r);
        curve.sdot.push_back(std::sin(st.psi) / model.rho(st.r));
        curve.rdot.push_back(std::cos(st.psi));
    };
    push(0.0, State{0.0, 0.0, 0.0});
    push(l0, y);

    const double half_pi = 0.5 * kPi;
    const double l_max = 20.0 * (r_hint + 1.0);
    double l = l0;
    double step = std::min(options.max_du, 1e-3);
    bool turned = false;
    while (!turned) {
        if (l > l_max) {
            throw DomainError("profile integration exceeded the arc-length "
                              "budget before turning");
        }
        StepResult sr = dp_step(model, nH0, y, step, options.tol);
        if (sr.err > 1.0) {
            step = std::max(step * std::max(0.2, 0.9 * std::pow(sr.err, -0.2)),
                            1e-14);
            continue;
        }
        if (sr.y.psi >= half_pi) {
            // Bisect the final step length so the sample lands on the
            // turning point.
            double lo = 0.0, hi = step;
            State yl = y;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const State ym = dp_step(model, nH0, y, mid, options.tol).y;
                if (std::fabs(ym.psi - half_pi) < 1e-13) {
                    yl = ym;
                    lo = hi = mid;
                    break;
                }
                if (ym.psi < half_pi) {
                    lo = mid;
                    yl = ym;
                } else {
                    hi = mid;
                }
                if (hi - lo <= 1e-16 * std::max(1.0, step)) break;
            }
            const double dl = 0.5 * (lo + hi);
            y = dp_step(model, nH0, y, dl, options.tol).y;
            l += dl;
            y.psi = half_pi;
            push(l, y);
            turned = true;
            break;
        }
        y = sr.y;
        l += step;
        push(l, y);
        const double grow = 0.9 * std::pow(std::max(sr.err, 1e-10), -0.2);
        step = std::min({step * std::clamp(grow, 0.2, 5.0), options.max_du});
    }

    curve.u_turn = l;
    curve.s_turn = y.s;
    curve.r_turn = y.r;

    // Close the sphere by reflecting across the turning plane.
    const std::size_t half = curve.u.size();
    for (std::size_t k = half - 1; k-- > 0;) {
        curve.u.push_back(2.0 * curve.u_turn - curve.u[k]);
        curve.s.push_back(2.0 * curve.s_turn - curve.s[k]);
        curve.r.push_back(curve.r[k]);
        curve.sdot.push_back(curve.sdot[k]);
        curve.rdot.push_back(-curve.rdot[k]);
    }

    if (reflected) {
        for (std::size_t k = 0; k < curve.u.size(); ++k) {
            curve.s[k] = -curve.s[k];
            curve.sdot[k] = -curve.sdot[k];
        }
        curve.s_turn = -curve.s_turn;
    }

    const double nh = model.n() * (reflected ? -h0 : h0);
    curve.flux_residual.resize(curve.u.size());
    for (std::size_t k = 0; k < curve.u.size(); ++k) {
        const double r = curve.r[k];
        const double rho = model.rho(r);
        curve.flux_residual[k] =
            nh * model.momentum_integral(r) +
            curve.sdot[k] * rho * rho * pow_int(model.xi(r), model.n() - 1);
    }
    return curve;
}

FluxCheck graph_flux_check(const Problem& problem, const ScalarField& u,
                           const ScalarField& H) {
    FluxCheck fc;
    const std::vector<double>& w = problem.volume_weights();
    const std::vector<double>& rho = problem.rho_nodes();
    double lhs = 0.0;
    for (std::size_t idx = 0; idx < w.size(); ++idx) {
        lhs += H[idx] * rho[idx] * w[idx];
    }
    fc.lhs = static_cast<double>(problem.n()) * lhs;

    double rhs = 0.0;
    for (const BoundaryGradient& bg : boundary_gradients(problem, u)) {
        const double rho_b = problem.rho_nodes()[static_cast<std::size_t>(
            bg.node)];
        rhs += rho_b * bg.u_eta / bg.w * bg.line_weight;
    }
    fc.rhs = rhs;
    fc.residual = fc.lhs - fc.rhs;
    fc.relative = std::fabs(fc.residual) /
                  std::max({1.0, std::fabs(fc.lhs), std::fabs(fc.rhs)});
    return fc;
}

} // namespace kgraph
