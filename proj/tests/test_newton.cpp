#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kgraph/mce.hpp"
#include "support/fields.hpp"

#include <cmath>

using namespace kgraph;
using namespace testsupport;

namespace {

double zero_phi(LeafPoint) { return 0.0; }

} // namespace

TEST_CASE("zero curvature with zero boundary data converges immediately to "
          "the zero graph") {
    const Domain d = Domain::disc(1.0);
    const Problem pr(euclid_model(), d, Grid::radial(d, 32));
    const ScalarField H(pr.grid(), FieldTag::Curvature, 0.0);
    const NewtonResult r =
        newton_solve(pr, H, zero_phi, ScalarField(pr.grid()), SolverOptions{});
    CHECK(r.converged());
    CHECK(r.iterations <= 1);
    CHECK(r.u.max_abs() == 0.0);
}

TEST_CASE("constant curvature -1 over the 0.8 disc reproduces the spherical "
          "cap at second order") {
    const Domain d = Domain::disc(0.8);
    for (int m : {32, 64}) {
        const Problem pr(euclid_model(), d, Grid::radial(d, m));
        const ScalarField H(pr.grid(), FieldTag::Curvature, -1.0);
        const NewtonResult r = newton_solve(pr, H, zero_phi,
                                            ScalarField(pr.grid()),
                                            SolverOptions{});
        REQUIRE(r.converged());
        CHECK(r.iterations <= 8);
        CHECK(r.residual_norm <= 1e-10);
        const ScalarField exact = sample_field(pr, cap_field(0.6).value);
        double err = 0.0;
        for (std::size_t k = 0; k < exact.size(); ++k) {
            err = std::max(err, std::abs(r.u[k] - exact[k]));
        }
        const double h = pr.grid().dr();
        CHECK(err <= 5.0 * h * h);
    }
}

TEST_CASE("every Newton iterate stays uniformly elliptic") {
    const Domain d = Domain::disc(0.8);
    const Problem pr(euclid_model(), d, Grid::radial(d, 32));
    const ScalarField H(pr.grid(), FieldTag::Curvature, -1.0);
    SolverOptions opt;
    opt.record_iterates = true;
    const NewtonResult r =
        newton_solve(pr, H, zero_phi, ScalarField(pr.grid()), opt);
    REQUIRE(r.converged());
    CHECK(r.iterates.size() == static_cast<std::size_t>(r.iterations) + 1);
    CHECK(r.norm_history.size() == r.iterates.size());
    for (const ScalarField& it : r.iterates) {
        const Coefficients co = coefficients(pr, it);
        for (std::size_t k = 0; k < co.lambda.size(); ++k) {
            CHECK(co.lambda[k] > 0.0);
            CHECK(co.lambda[k] <= co.Lambda[k]);
            // f = 1 on the Euclidean model, so W >= 1 and Lambda = 1/W <= 1.
            CHECK(co.Lambda[k] <= 1.0 + 1e-12);
        }
    }
    // At the cap itself lambda = (1 - r^2)^(3/2), smallest at the rim.
    const Coefficients fin = coefficients(pr, r.iterates.back());
    double lmin = 1e300;
    for (std::size_t k = 0; k < fin.lambda.size(); ++k) {
        lmin = std::min(lmin, fin.lambda[k]);
    }
    CHECK(lmin == doctest::Approx(std::pow(0.36, 1.5)).epsilon(0.02));
}

TEST_CASE("solutions translate vertically with the boundary data") {
    const Domain d = Domain::disc(1.0);
    const Problem pr(warped_model(), d, Grid::polar(d, 24, 48));
    const ScalarField H = manufactured_H(pr, polar_quadratic_field());
    const auto phi = polar_quadratic_field().value;
    const NewtonResult r1 = newton_solve(pr, H, phi, ScalarField(pr.grid()),
                                         SolverOptions{});
    const NewtonResult r2 = newton_solve(
        pr, H, [phi](LeafPoint p) { return phi(p) + 0.3; },
        ScalarField(pr.grid()), SolverOptions{});
    REQUIRE(r1.converged());
    REQUIRE(r2.converged());
    for (std::size_t k = 0; k < r1.u.size(); ++k) {
        CHECK(r2.u[k] - r1.u[k] == doctest::Approx(0.3).epsilon(1e-8));
    }
    // And the unshifted solve hits the manufactured graph at grid accuracy.
    const ScalarField exact = sample_field(pr, phi);
    for (std::size_t k = 0; k < exact.size(); ++k) {
        CHECK(r1.u[k] == doctest::Approx(exact[k]).epsilon(2e-4));
    }
}

TEST_CASE("direct iteration on an inadmissible curvature fails without "
          "blowing up") {
    const Domain d = Domain::disc(1.0);
    const Problem pr(euclid_model(), d, Grid::radial(d, 48));
    const ScalarField H(pr.grid(), FieldTag::Curvature, -2.0);
    const NewtonResult r =
        newton_solve(pr, H, zero_phi, ScalarField(pr.grid()), SolverOptions{});
    CHECK(!r.converged());
    CHECK(r.u.all_finite());
}
