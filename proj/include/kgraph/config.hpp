#pragma once

#include "kgraph/mms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kgraph {

// Validated run configuration.  Either a named case supplies the model,
// domain, and grid ladder, or explicit [model]/[domain] sections define
// them; mixing the two is rejected.
struct RunConfig {
    std::optional<CaseSpec> case_spec;
    std::optional<AmbientModel> model;
    std::optional<Domain> domain;
    std::function<double(LeafPoint)> curvature; // null: manufactured by case
    int theorem = 0;                            // 0: no hypothesis check
    int grid = 0;                               // 0: case ladder default
    int grid_theta = 0;                         // 0: kind default
    bool use_polar = false;
    double tol = 1e-10;
    int max_iter = 30;
    bool homotopy = true;
    double sigma_step = 0.1;
    std::vector<int> mms_grids;
    std::optional<double> rot_H0;
    std::optional<double> rot_r0;
    std::string out_dir = "out";

    // Effective model and domain (case registry or explicit sections).
    const AmbientModel& effective_model() const;
    const Domain& effective_domain() const;
    GridKind effective_grid_kind() const;
    // Grid row count: the override when set, otherwise the case's first
    // ladder entry (explicit setups must set [solver] grid).
    int effective_grid() const;
    Grid make_grid(int m) const;
    Problem make_problem(int m) const;
    ScalarField curvature_field(const Problem& problem) const;
    // Chart function of the prescribed curvature (closed form or the
    // manufactured field of the case's exact solution).
    std::function<double(LeafPoint)> curvature_chart() const;
};

// Strict INI reader: '#' comments, [section] headers, key = value lines.
// Unknown sections, unknown keys, duplicate keys, and malformed numbers are
// configuration errors with the line number in the message.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

} // namespace kgraph
