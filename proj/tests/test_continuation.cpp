#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kgraph/continuation.hpp"
#include "support/fields.hpp"

#include <cmath>
#include <random>

using namespace kgraph;
using namespace testsupport;

TEST_CASE("the cap family continues from the zero graph all the way to "
          "sigma = 1") {
    const Domain d = Domain::disc(0.8);
    const Problem pr(euclid_model(), d, Grid::radial(d, 64));
    const ScalarField H(pr.grid(), FieldTag::Curvature, -1.0);
    const auto phi = [](LeafPoint) { return 0.0; };
    const HomotopyResult hr = continuity_solve(pr, H, phi, HomotopyOptions{});

    REQUIRE(hr.reached);
    CHECK(hr.sigma == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(!hr.stages.empty());
    CHECK(hr.stages.back().sigma == doctest::Approx(1.0).epsilon(1e-12));

    double prev = 0.0;
    for (const HomotopyStage& st : hr.stages) {
        CHECK(st.sigma > prev); // strictly increasing family parameter
        prev = st.sigma;
        CHECK(st.newton_iterations <= 8); // warm starts keep stages cheap
        CHECK(st.residual_norm <= 1e-10);
    }

    // The family never exceeds the endpoint slope 0.8 / 0.6 of the cap.
    CHECK(hr.family_sup_slope() > 1.0);
    CHECK(hr.family_sup_slope() < 4.0 / 3.0 + 1e-6);

    // Endpoint coincides with the direct solve of the same problem.
    const NewtonResult direct =
        newton_solve(pr, H, phi, ScalarField(pr.grid()), SolverOptions{});
    REQUIRE(direct.converged());
    for (std::size_t k = 0; k < hr.u.size(); ++k) {
        CHECK(hr.u[k] == doctest::Approx(direct.u[k]).epsilon(1e-8));
    }
}

TEST_CASE("an inadmissible curvature stalls the family strictly inside "
          "(0, 1)") {
    const Domain d = Domain::disc(1.0);
    const Problem pr(euclid_model(), d, Grid::radial(d, 64));
    const ScalarField H(pr.grid(), FieldTag::Curvature, -2.0);
    const HomotopyResult hr =
        continuity_solve(pr, H, [](LeafPoint) { return 0.0; },
                         HomotopyOptions{});
    CHECK(!hr.reached);
    CHECK(hr.last_status != SolveStatus::Converged);
    // The invisible wall for |H| = 2 sits at sigma = 1/2: beyond it the
    // prescribed sphere no longer spans the unit disc.
    CHECK(hr.sigma > 0.5);
    CHECK(hr.sigma < 0.55);
    CHECK(hr.u.all_finite());
    REQUIRE(!hr.stages.empty());
    CHECK(hr.stages.back().sigma == doctest::Approx(hr.sigma));
}

TEST_CASE("independent initial guesses land on the same graph") {
    const Domain d = Domain::disc(1.0);
    const Problem pr(warped_model(), d, Grid::polar(d, 16, 32));
    const ScalarField H = manufactured_H(pr, polar_quadratic_field());
    const auto phi = polar_quadratic_field().value;

    std::vector<ScalarField> guesses;
    guesses.emplace_back(pr.grid());
    guesses.emplace_back(pr.grid(), FieldTag::Height, 0.05);
    ScalarField noisy(pr.grid());
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> U(-0.1, 0.1);
    for (std::size_t k = 0; k < noisy.size(); ++k) noisy[k] = U(rng);
    guesses.push_back(noisy);

    const UniquenessProbe up =
        uniqueness_probe(pr, H, phi, guesses, SolverOptions{});
    CHECK(up.attempts == 3);
    CHECK(up.converged == 3);
    CHECK(up.max_pairwise <= 1e-8);
    for (SolveStatus s : up.statuses) {
        CHECK(s == SolveStatus::Converged);
    }
}
