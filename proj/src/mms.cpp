#include "kgraph/mms.hpp"

#include <cmath>

namespace kgraph {

namespace {

constexpr double kPi = 3.14159265358979323846;

SmoothField zero_field() {
    auto z = [](LeafPoint) { return 0.0; };
    return {z, z, z, z, z, z};
}

// Spherical cap sqrt(1 - r^2) - 0.6: the exact Euclidean graph of constant
// curvature -1 over the disc of radius 0.8 with zero boundary data.
SmoothField cap_field() {
    auto s = [](double r) { return std::sqrt(1.0 - r * r); };
    return {
        [s](LeafPoint p) { return s(p.a) - 0.6; },
        [s](LeafPoint p) { return -p.a / s(p.a); },
        [](LeafPoint) { return 0.0; },
        [s](LeafPoint p) {
            const double w = s(p.a);
            return -1.0 / (w * w * w);
        },
        [](LeafPoint) { return 0.0; },
        [](LeafPoint) { return 0.0; },
    };
}

SmoothField radial_cosh_field() {
    return {
        [](LeafPoint p) { return 0.2 * std::cosh(p.a); },
        [](LeafPoint p) { return 0.2 * std::sinh(p.a); },
        [](LeafPoint) { return 0.0; },
        [](LeafPoint p) { return 0.2 * std::cosh(p.a); },
        [](LeafPoint) { return 0.0; },
        [](LeafPoint) { return 0.0; },
    };
}

SmoothField polar_quadratic_field() {
    return {
        [](LeafPoint p) { return 0.1 * p.a * p.a * std::cos(p.b); },
        [](LeafPoint p) { return 0.2 * p.a * std::cos(p.b); },
        [](LeafPoint p) { return -0.1 * p.a * p.a * std::sin(p.b); },
        [](LeafPoint p) { return 0.2 * std::cos(p.b); },
        [](LeafPoint p) { return -0.2 * p.a * std::sin(p.b); },
        [](LeafPoint p) { return -0.1 * p.a * p.a * std::cos(p.b); },
    };
}

SmoothField cartesian_sine_field() {
    const double a = 0.1;
    return {
        [a](LeafPoint p) {
            return a * std::sin(kPi * p.a) * std::sin(kPi * p.b);
        },
        [a](LeafPoint p) {
            return a * kPi * std::cos(kPi * p.a) * std::sin(kPi * p.b);
        },
        [a](LeafPoint p) {
            return a * kPi * std::sin(kPi * p.a) * std::cos(kPi * p.b);
        },
        [a](LeafPoint p) {
            return -a * kPi * kPi * std::sin(kPi * p.a) * std::sin(kPi * p.b);
        },
        [a](LeafPoint p) {
            return a * kPi * kPi * std::cos(kPi * p.a) * std::cos(kPi * p.b);
        },
        [a](LeafPoint p) {
            return -a * kPi * kPi * std::sin(kPi * p.a) * std::sin(kPi * p.b);
        },
    };
}

AmbientModel euclidean_model() {
    return {LeafMetric::rotsym(ScalarFn::identity(), 2),
            WarpingFunction(ScalarFn::constant(1.0))};
}

AmbientModel warped_model() {
    return {LeafMetric::rotsym(ScalarFn::sinh(), 2),
            WarpingFunction(ScalarFn::cosh())};
}

AmbientModel cartesian_model() {
    return {LeafMetric::cartesian_flat(),
            WarpingFunction(ScalarFn::cosh())};
}

Domain domain_with_trace(Domain domain, const SmoothField& exact) {
    auto value = exact.value;
    return domain.with_boundary_data(
        [value](LeafPoint p) { return value(p); });
}

CaseSpec exact_case(std::string name, AmbientModel model, Domain domain,
                    GridKind kind, std::vector<int> grids,
                    SmoothField exact) {
    CaseSpec cs(std::move(name), std::move(model),
                domain_with_trace(std::move(domain), exact), kind,
                std::move(grids));
    cs.exact = std::move(exact);
    return cs;
}

} // namespace

Grid CaseSpec::make_grid(int m) const {
    switch (grid_kind) {
    case GridKind::Radial:
        return Grid::radial(domain, m);
    case GridKind::Polar:
        return Grid::polar(domain, m, 2 * m);
    case GridKind::Cartesian:
        return Grid::cartesian(domain, m, m);
    }
    throw ConfigError("unknown grid kind");
}

Problem CaseSpec::make_problem(int m) const {
    return Problem(model, domain, make_grid(m));
}

ScalarField CaseSpec::curvature_field(const Problem& problem) const {
    if (curvature) {
        return sample_field(problem, curvature, FieldTag::Curvature);
    }
    if (!exact) {
        throw ConfigError("case " + name +
                          " has neither a curvature function nor an exact "
                          "solution");
    }
    return manufactured_H(problem, *exact);
}

ScalarField CaseSpec::exact_field(const Problem& problem) const {
    if (!exact) {
        throw ConfigError("case " + name + " has no exact solution");
    }
    return sample_field(problem, exact->value, FieldTag::Height);
}

const std::vector<std::string>& mms_case_names() {
    static const std::vector<std::string> names = {
        "zero", "hemisphere", "warped-radial", "warped-polar",
        "cartesian-sine"};
    return names;
}

const std::vector<std::string>& battery_case_names() {
    static const std::vector<std::string> names = {
        "hemisphere",    "flat-minimal",   "warped-radial",
        "warped-polar",  "cartesian-sine", "nonexistence"};
    return names;
}

CaseSpec named_case(const std::string& name) {
    if (name == "zero") {
        return exact_case("zero", euclidean_model(), Domain::disc(1.0),
                          GridKind::Radial, {64, 128, 256}, zero_field());
    }
    if (name == "hemisphere") {
        CaseSpec cs = exact_case("hemisphere", euclidean_model(),
                                 Domain::disc(0.8), GridKind::Radial,
                                 {64, 128, 256}, cap_field());
        cs.curvature = [](LeafPoint) { return -1.0; };
        return cs;
    }
    if (name == "warped-radial") {
        return exact_case("warped-radial", warped_model(), Domain::disc(1.0),
                          GridKind::Radial, {64, 128, 256},
                          radial_cosh_field());
    }
    if (name == "warped-polar") {
        return exact_case("warped-polar", warped_model(), Domain::disc(1.0),
                          GridKind::Polar, {32, 64, 128},
                          polar_quadratic_field());
    }
    if (name == "cartesian-sine") {
        return exact_case("cartesian-sine", cartesian_model(),
                          Domain::rectangle(0.0, 1.0, 0.0, 1.0),
                          GridKind::Cartesian, {32, 64, 128},
                          cartesian_sine_field());
    }
    if (name == "flat-minimal") {
        CaseSpec cs("flat-minimal", euclidean_model(),
                    Domain::disc(1.0).with_boundary_data([](LeafPoint p) {
                        return 0.1 * std::cos(2.0 * p.b);
                    }),
                    GridKind::Polar, {32, 64, 128});
        cs.curvature = [](LeafPoint) { return 0.0; };
        return cs;
    }
    if (name == "nonexistence") {
        CaseSpec cs("nonexistence", euclidean_model(),
                    Domain::disc(1.0).with_boundary_data(
                        [](LeafPoint) { return 0.0; }),
                    GridKind::Radial, {64});
        cs.curvature = [](LeafPoint) { return -2.0; };
        cs.expect_reach = false;
        return cs;
    }
    throw ConfigError("unknown case name \"" + name + "\"");
}

} // namespace kgraph
