#pragma once

#include "kgraph/mce.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kgraph {

// A named verification case: model, domain, and grid ladder, optionally
// with a closed-form height field whose curvature is generated analytically
// (the manufactured pair), otherwise with a prescribed curvature function.
struct CaseSpec {
    CaseSpec(std::string name, AmbientModel model, Domain domain,
             GridKind grid_kind, std::vector<int> grids)
        : name(std::move(name)), model(std::move(model)),
          domain(std::move(domain)), grid_kind(grid_kind),
          grids(std::move(grids)) {}

    std::string name;
    AmbientModel model;
    Domain domain;
    GridKind grid_kind;
    std::vector<int> grids;
    std::optional<SmoothField> exact;
    std::function<double(LeafPoint)> curvature;
    // Whether the homotopy is expected to reach sigma = 1.
    bool expect_reach = true;

    Grid make_grid(int m) const;
    Problem make_problem(int m) const;
    // Curvature samples: the prescribed function when given, otherwise the
    // manufactured field of the exact solution.
    ScalarField curvature_field(const Problem& problem) const;
    // Exact solution samples (cases with a closed form only).
    ScalarField exact_field(const Problem& problem) const;
};

// Manufactured-solution ladder cases for the convergence harness.
const std::vector<std::string>& mms_case_names();
// Solver battery: the full end-to-end cases, including the stall case.
const std::vector<std::string>& battery_case_names();

CaseSpec named_case(const std::string& name);

} // namespace kgraph
