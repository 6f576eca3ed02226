#include "kgraph/runner.hpp"

#include "kgraph/barriers.hpp"
#include "kgraph/rotational.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace kgraph {

namespace {

std::filesystem::path prepare_out_dir(const RunConfig& config,
                                      const RunOptions& options) {
    const std::filesystem::path dir =
        options.out_dir.empty() ? config.out_dir : options.out_dir;
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write \"" + path.string() + "\"");
    }
    out << text;
}

const char* grid_kind_name(GridKind kind) {
    switch (kind) {
    case GridKind::Radial: return "radial";
    case GridKind::Polar: return "polar";
    case GridKind::Cartesian: return "cartesian";
    }
    return "?";
}

std::string homotopy_csv(const std::vector<HomotopyStage>& stages) {
    std::ostringstream os;
    os << "sigma,iterations,residual,sup_u,sup_slope\n";
    for (const HomotopyStage& st : stages) {
        os << fmt17(st.sigma) << ',' << st.newton_iterations << ','
           << fmt17(st.residual_norm) << ',' << fmt17(st.max_abs_u) << ','
           << fmt17(st.sup_slope) << '\n';
    }
    return os.str();
}

std::string coefficients_text(const Problem& problem, const ScalarField& u) {
    const Coefficients co = coefficients(problem, u);
    double w_min = co.W[0], w_max = co.W[0];
    double lam_min = co.lambda[0];
    double cap_max = co.Lambda[0];
    double b_max = 0.0;
    for (std::size_t k = 0; k < problem.grid().num_nodes(); ++k) {
        w_min = std::min(w_min, co.W[k]);
        w_max = std::max(w_max, co.W[k]);
        lam_min = std::min(lam_min, co.lambda[k]);
        cap_max = std::max(cap_max, co.Lambda[k]);
        b_max = std::max(b_max, std::fabs(co.b[k]));
    }
    std::ostringstream os;
    os << "nodes = " << problem.grid().num_nodes() << "\n";
    os << "W_min = " << fmt17(w_min) << "\n";
    os << "W_max = " << fmt17(w_max) << "\n";
    os << "lambda_min = " << fmt17(lam_min) << "\n";
    os << "Lambda_max = " << fmt17(cap_max) << "\n";
    os << "ellipticity_ratio = " << fmt17(cap_max / lam_min) << "\n";
    os << "b_max_abs = " << fmt17(b_max) << "\n";
    return os.str();
}

std::string barrier_text(const BarrierSearch& bs, const HeightCheck& hc,
                         const GradientBarrier& gb) {
    std::ostringstream os;
    os << "barrier_found = " << (bs.found ? 1 : 0) << "\n";
    os << "C = " << fmt17(bs.params.C) << "\n";
    os << "A = " << fmt17(bs.params.A) << "\n";
    os << "eps = " << fmt17(bs.params.eps) << "\n";
    os << "sup_phi = " << fmt17(bs.sup_phi) << "\n";
    os << "inf_phi = " << fmt17(bs.inf_phi) << "\n";
    os << "max_upper_residual = " << fmt17(bs.max_upper_residual) << "\n";
    os << "min_lower_residual = " << fmt17(bs.min_lower_residual) << "\n";
    os << "min_curvature_shift = " << fmt17(bs.min_curvature_shift) << "\n";
    os << "contained = " << (hc.contained ? 1 : 0) << "\n";
    os << "margin = " << fmt17(hc.margin) << "\n";
    os << "gradient_found = " << (gb.found ? 1 : 0) << "\n";
    os << "serrin_ok = " << (gb.serrin_ok ? 1 : 0) << "\n";
    os << "serrin_min = " << fmt17(gb.serrin_min) << "\n";
    os << "K = " << fmt17(gb.K) << "\n";
    os << "mu = " << fmt17(gb.mu) << "\n";
    os << "psi_slope0 = " << fmt17(gb.psi_slope0) << "\n";
    os << "slope_bound = " << fmt17(gb.slope_bound) << "\n";
    os << "sup_boundary_slope = " << fmt17(gb.sup_boundary_slope) << "\n";
    os << "max_strip_residual = " << fmt17(gb.max_strip_residual) << "\n";
    os << "min_strip_residual = " << fmt17(gb.min_strip_residual) << "\n";
    os << "min_domination = " << fmt17(gb.min_domination) << "\n";
    return os.str();
}

std::string flux_text(const FluxCheck& fc) {
    std::ostringstream os;
    os << "lhs = " << fmt17(fc.lhs) << "\n";
    os << "rhs = " << fmt17(fc.rhs) << "\n";
    os << "residual = " << fmt17(fc.residual) << "\n";
    os << "relative = " << fmt17(fc.relative) << "\n";
    return os.str();
}

struct SolveOutcome {
    ScalarField u;
    bool ok = false;
    std::vector<HomotopyStage> stages;
};

SolveOutcome drive_solver(const RunConfig& config, const Problem& problem,
                          const ScalarField& H) {
    const auto& phi = problem.domain().boundary_data();
    SolveOutcome out;
    if (config.homotopy) {
        HomotopyOptions ho;
        ho.step0 = config.sigma_step;
        ho.newton.tol = config.tol;
        ho.newton.max_iterations = config.max_iter;
        HomotopyResult hr = continuity_solve(problem, H, phi, ho);
        out.u = std::move(hr.u);
        out.ok = hr.reached;
        out.stages = std::move(hr.stages);
    } else {
        SolverOptions so;
        so.tol = config.tol;
        so.max_iterations = config.max_iter;
        ScalarField u0(problem.grid(), FieldTag::Height);
        NewtonResult nr = newton_solve(problem, H, phi, u0, so);
        HomotopyStage st;
        st.sigma = 1.0;
        st.step = 1.0;
        st.newton_iterations = nr.iterations;
        st.residual_norm = nr.residual_norm;
        st.max_abs_u = nr.u.max_abs();
        st.sup_slope = 0.0;
        out.u = std::move(nr.u);
        out.ok = nr.status == SolveStatus::Converged;
        out.stages = {st};
    }
    return out;
}

} // namespace

std::string solution_file_text(const Problem& problem, const ScalarField& u) {
    const Grid& grid = problem.grid();
    const Domain& domain = problem.domain();
    const double r0 =
        domain.kind() == DomainKind::Rectangle ? 0.0 : domain.r_outer();
    std::ostringstream os;
    os << "KGRAPH 1\n";
    os << grid_kind_name(grid.kind()) << ' ' << problem.n() << ' ' << grid.mr()
       << ' ' << grid.mt() << ' ' << fmt17(r0) << '\n';
    for (std::size_t k = 0; k < grid.num_nodes(); ++k) {
        os << fmt17(u[k]) << '\n';
    }
    return os.str();
}

int run_solve(const RunConfig& config, const RunOptions& options) {
    const auto dir = prepare_out_dir(config, options);
    const int m = options.grid_override > 0 ? options.grid_override
                                            : config.effective_grid();
    const Problem problem = config.make_problem(m);
    const ScalarField H = config.curvature_field(problem);

    if (config.theorem > 0) {
        const HypothesisReport report = check_theorem_hypotheses(
            problem.model(), problem.domain(), config.curvature_chart(),
            config.theorem);
        write_text(dir / "hypothesis_report.txt", render_report(report));
        if (options.require_hypotheses && !report.verdict) {
            std::cout << "hypothesis check failed (theorem "
                      << config.theorem << "); not solving\n";
            return 1;
        }
    }

    const SolveOutcome outcome = drive_solver(config, problem, H);
    write_text(dir / "homotopy.csv", homotopy_csv(outcome.stages));
    write_text(dir / "solution.kgrid",
               solution_file_text(problem, outcome.u));
    write_text(dir / "coefficients.txt",
               coefficients_text(problem, outcome.u));

    const BarrierSearch bs = choose_barrier_constants(problem, H);
    const HeightCheck hc = verify_height(problem, outcome.u, bs.params);
    const GradientBarrier gb =
        boundary_gradient_barrier(problem, outcome.u, H, bs.params);
    write_text(dir / "barrier_report.txt", barrier_text(bs, hc, gb));

    const FluxCheck fc = graph_flux_check(problem, outcome.u, H);
    write_text(dir / "flux_report.txt", flux_text(fc));

    if (!outcome.ok) {
        std::cout << "solver stalled at sigma = "
                  << fmt17(outcome.stages.empty()
                               ? 0.0
                               : outcome.stages.back().sigma)
                  << "\n";
        return 2;
    }
    std::cout << "converged; outputs in " << dir.string() << "\n";
    return 0;
}

int run_check(const RunConfig& config, const RunOptions& options) {
    if (config.theorem == 0) {
        throw ConfigError("check needs [problem] theorem = 1, 2, or 3");
    }
    const auto dir = prepare_out_dir(config, options);
    const HypothesisReport report = check_theorem_hypotheses(
        config.effective_model(), config.effective_domain(),
        config.curvature_chart(), config.theorem);
    const std::string text = render_report(report);
    write_text(dir / "hypothesis_report.txt", text);
    std::cout << text;
    return report.verdict ? 0 : 1;
}

int run_rotational(const RunConfig& config, const RunOptions& options) {
    if (!config.rot_H0) {
        throw ConfigError("rotational needs [rotational] H0");
    }
    const AmbientModel& model = config.effective_model();
    if (!model.leaf.is_polar()) {
        throw ConfigError(
            "rotational profiles need a rotationally symmetric leaf");
    }
    const auto dir = prepare_out_dir(config, options);
    const RotationalModel rot = RotationalModel::from(model);
    const ProfileCurve curve = integrate_cmc_sphere(rot, *config.rot_H0);

    std::ostringstream csv;
    csv << "u,s,r,sdot,rdot,flux_residual\n";
    for (std::size_t k = 0; k < curve.u.size(); ++k) {
        csv << fmt17(curve.u[k]) << ',' << fmt17(curve.s[k]) << ','
            << fmt17(curve.r[k]) << ',' << fmt17(curve.sdot[k]) << ','
            << fmt17(curve.rdot[k]) << ',' << fmt17(curve.flux_residual[k])
            << '\n';
    }
    write_text(dir / "profile.csv", csv.str());

    double drift = 0.0;
    for (double f : curve.flux_residual) drift = std::max(drift, std::fabs(f));
    std::ostringstream rep;
    rep << "H0 = " << fmt17(curve.H0) << "\n";
    rep << "n = " << rot.n() << "\n";
    rep << "samples = " << curve.u.size() << "\n";
    rep << "r_turn = " << fmt17(curve.r_turn) << "\n";
    rep << "s_turn = " << fmt17(curve.s_turn) << "\n";
    rep << "u_turn = " << fmt17(curve.u_turn) << "\n";
    rep << "ctilde = " << fmt17(curve.ctilde) << "\n";
    rep << "max_flux_drift = " << fmt17(drift) << "\n";
    rep << "turning_identity_residual = "
        << fmt17(rot.n() * std::fabs(curve.H0) *
                     rot.momentum_integral(curve.r_turn) -
                 rot.weight(curve.r_turn))
        << "\n";
    if (config.rot_r0) {
        rep << "r0 = " << fmt17(*config.rot_r0) << "\n";
        rep << "serrin_bound_F = " << fmt17(rot.serrin_bound(*config.rot_r0))
            << "\n";
    }
    write_text(dir / "rotational_report.txt", rep.str());
    std::cout << rep.str();
    return 0;
}

int run_mms(const RunConfig& config, const RunOptions& options) {
    if (!config.case_spec || !config.case_spec->exact) {
        throw ConfigError(
            "mms needs [problem] mms_case with a closed-form solution");
    }
    const CaseSpec& cs = *config.case_spec;
    std::vector<int> grids = config.mms_grids.empty() ? cs.grids
                                                      : config.mms_grids;
    if (options.grid_override > 0) grids = {options.grid_override};

    const auto dir = prepare_out_dir(config, options);
    std::ostringstream csv;
    csv << "m,h,max_error,observed_order\n";
    double prev_err = 0.0;
    bool all_ok = true;
    for (int m : grids) {
        const Problem problem = cs.make_problem(m);
        const ScalarField H = cs.curvature_field(problem);
        SolverOptions so;
        so.tol = config.tol;
        so.max_iterations = config.max_iter;
        ScalarField u0(problem.grid(), FieldTag::Height);
        const NewtonResult nr = newton_solve(
            problem, H, problem.domain().boundary_data(), u0, so);
        all_ok = all_ok && nr.status == SolveStatus::Converged;
        const ScalarField exact = cs.exact_field(problem);
        double err = 0.0;
        for (std::size_t k = 0; k < problem.grid().num_nodes(); ++k) {
            err = std::max(err, std::fabs(nr.u[k] - exact[k]));
        }
        const double order =
            prev_err > 0.0 && err > 0.0 ? std::log2(prev_err / err) : 0.0;
        csv << m << ',' << fmt17(problem.grid().dr()) << ',' << fmt17(err)
            << ',' << fmt17(order) << '\n';
        prev_err = err;
    }
    write_text(dir / "convergence.csv", csv.str());
    std::cout << csv.str();
    return all_ok ? 0 : 2;
}

int run_flux(const RunConfig& config, const RunOptions& options) {
    const auto dir = prepare_out_dir(config, options);
    const int m = options.grid_override > 0 ? options.grid_override
                                            : config.effective_grid();
    const Problem problem = config.make_problem(m);
    const ScalarField H = config.curvature_field(problem);
    const SolveOutcome outcome = drive_solver(config, problem, H);
    const FluxCheck fc = graph_flux_check(problem, outcome.u, H);
    write_text(dir / "flux_report.txt", flux_text(fc));
    std::cout << flux_text(fc);
    return outcome.ok ? 0 : 2;
}

} // namespace kgraph
