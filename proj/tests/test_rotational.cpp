#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kgraph/continuation.hpp"
#include "kgraph/rotational.hpp"
#include "support/fields.hpp"

#include <cmath>

using namespace kgraph;
using namespace testsupport;

namespace {

RotationalModel euclid_rot() {
    return RotationalModel(ScalarFn::identity(), ScalarFn::constant(1.0), 2);
}

RotationalModel hyperbolic_rot() {
    return RotationalModel(ScalarFn::sinh(), ScalarFn::constant(1.0), 2);
}

RotationalModel warped_rot() {
    return RotationalModel(ScalarFn::sinh(), ScalarFn::cosh(), 2);
}

double max_flux(const ProfileCurve& pc) {
    double m = 0.0;
    for (double f : pc.flux_residual) m = std::max(m, std::abs(f));
    return m;
}

} // namespace

TEST_CASE("unit-curvature profile over the flat leaf is the unit circle") {
    const ProfileCurve pc = integrate_cmc_sphere(euclid_rot(), -1.0);
    const double pi = 2.0 * std::acos(0.0);
    REQUIRE(pc.u.size() > 10u);
    for (std::size_t k = 0; k < pc.u.size(); ++k) {
        CHECK(pc.r[k] == doctest::Approx(std::sin(pc.u[k])).epsilon(1e-8));
        CHECK(pc.s[k] ==
              doctest::Approx(1.0 - std::cos(pc.u[k])).epsilon(1e-8));
    }
    CHECK(pc.r_turn == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pc.s_turn == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pc.u_turn == doctest::Approx(pi / 2.0).epsilon(1e-10));
    // The curve closes on the axis after half a period.
    CHECK(pc.r.back() == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(pc.s.back() == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(pc.u.back() == doctest::Approx(pi).epsilon(1e-10));
    CHECK(pc.ctilde == 0.0);
    CHECK(max_flux(pc) <= 1e-10);
}

TEST_CASE("first integral pins the turning radius on curved leaves") {
    // At the widest ring sin(psi) = 1, so n|H0| I(r_turn) = rho xi^{n-1}.
    for (double H0 : {-2.0, -1.2}) {
        const ProfileCurve pc = integrate_cmc_sphere(hyperbolic_rot(), H0);
        const RotationalModel m = hyperbolic_rot();
        CHECK(2.0 * std::abs(H0) * m.momentum_integral(pc.r_turn) ==
              doctest::Approx(m.weight(pc.r_turn)).epsilon(1e-10));
        CHECK(max_flux(pc) <= 1e-10);
    }
    // Closed form on the hyperbolic leaf: 2|H0|(cosh r - 1) = sinh r at
    // the turn, i.e. r_turn = 2 artanh(1 / (2|H0|)).
    const ProfileCurve pc = integrate_cmc_sphere(hyperbolic_rot(), -2.0);
    CHECK(pc.r_turn == doctest::Approx(2.0 * std::atanh(0.25)).epsilon(1e-10));

    const ProfileCurve pw = integrate_cmc_sphere(warped_rot(), -1.5);
    const RotationalModel w = warped_rot();
    CHECK(2.0 * 1.5 * w.momentum_integral(pw.r_turn) ==
          doctest::Approx(w.weight(pw.r_turn)).epsilon(1e-10));
    CHECK(max_flux(pw) <= 1e-10);
}

TEST_CASE("profiles that never reach a widest ring are rejected") {
    // Horospheres in the hyperbolic leaf have |H| = 1/n per our
    // normalization; below that the momentum never catches the weight.
    CHECK_THROWS_AS(integrate_cmc_sphere(hyperbolic_rot(), -0.4), DomainError);
    CHECK_THROWS_AS(integrate_cmc_sphere(euclid_rot(), 0.0), DomainError);
    const double nan = std::nan("");
    CHECK_THROWS_AS(integrate_cmc_sphere(euclid_rot(), nan), DomainError);
}

TEST_CASE("positive curvature input integrates the mirror profile") {
    const ProfileCurve pm = integrate_cmc_sphere(euclid_rot(), -1.0);
    const ProfileCurve pp = integrate_cmc_sphere(euclid_rot(), 1.0);
    REQUIRE(pm.u.size() == pp.u.size());
    for (std::size_t k = 0; k < pm.u.size(); ++k) {
        CHECK(pp.s[k] == -pm.s[k]);
        CHECK(pp.r[k] == pm.r[k]);
    }
    CHECK(pp.H0 == 1.0);
}

TEST_CASE("momentum bound F has its closed forms and monotone integrand") {
    CHECK(euclid_rot().serrin_bound(1.0) ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK(hyperbolic_rot().serrin_bound(2.0) ==
          doctest::Approx(1.0 / std::tanh(1.0)).epsilon(1e-10));
    for (const RotationalModel& m :
         {euclid_rot(), hyperbolic_rot(), warped_rot()}) {
        double prev = 0.0;
        for (int k = 1; k <= 1000; ++k) {
            const double v = m.momentum_integral(3.0 * k / 1000.0);
            CHECK(v > prev);
            prev = v;
        }
        CHECK(m.momentum_integral(0.0) == 0.0);
        CHECK_THROWS_AS(m.momentum_integral(-0.1), DomainError);
    }
}

TEST_CASE("model construction rejects profiles without an axis") {
    CHECK_THROWS_AS(
        RotationalModel(ScalarFn::cosh(), ScalarFn::constant(1.0), 2),
        DomainError);
    CHECK_THROWS_AS(RotationalModel::from(cartesian_model()), DomainError);
    CHECK_NOTHROW(RotationalModel::from(warped_model()));
    // rho must stay positive where it is evaluated.
    RotationalModel m(ScalarFn::identity(),
                      ScalarFn::polynomial({1.0, -1.0}), 2); // 1 - r
    CHECK_THROWS_AS(m.rho(1.5), DomainError);
}

TEST_CASE("solved hemisphere balances bulk and boundary flux") {
    const Domain d = Domain::disc(0.8);
    const Problem pr(euclid_model(), d, Grid::radial(d, 128));
    const ScalarField H(pr.grid(), FieldTag::Curvature, -1.0);
    const HomotopyResult hr = continuity_solve(
        pr, H, [](LeafPoint) { return 0.0; }, HomotopyOptions{});
    REQUIRE(hr.reached);
    const FluxCheck fc = graph_flux_check(pr, hr.u, H);
    // Closed form: 2 * (-1) * pi * 0.8^2.
    CHECK(fc.lhs == doctest::Approx(-4.021238596594935).epsilon(5e-5));
    CHECK(fc.rhs == doctest::Approx(-4.021238596594935).epsilon(5e-4));
    CHECK(fc.relative <= 5e-4);
    CHECK(fc.residual == doctest::Approx(fc.lhs - fc.rhs).epsilon(1e-14));
}
