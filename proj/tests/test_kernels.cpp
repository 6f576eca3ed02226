#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kgraph/kernels.hpp"

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

using namespace kgraph::kernels;

namespace {

std::vector<double> random_values(std::size_t n, unsigned seed,
                                  double lo = -3.0, double hi = 3.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

// Odd lengths exercise the vector tails of the wide backend.
const std::size_t lengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17,
                               31, 33, 64, 100, 257, 1000, 1023};

} // namespace

TEST_CASE("scalar reference kernels compute the documented pointwise maps") {
    const Ops& ops = scalar_ops();
    std::vector<double> a = {1.0, 4.0, 9.0};
    std::vector<double> b = {0.0, 5.0, 7.0};
    std::vector<double> out(3);

    ops.sqrt_add(a.data(), b.data(), out.data(), 3);
    CHECK(out[0] == 1.0);
    CHECK(out[1] == 3.0);
    CHECK(out[2] == 4.0);

    ops.multiply(a.data(), b.data(), out.data(), 3);
    CHECK(out[1] == 20.0);

    ops.reciprocal(a.data(), out.data(), 3);
    CHECK(out[1] == 0.25);

    ops.div_cube(a.data(), out.data(), out.data(), 3);

    std::vector<double> y = {1.0, 1.0, 1.0};
    ops.add_scaled(y.data(), a.data(), 2.0, 3);
    CHECK(y[2] == 19.0);

    std::vector<double> m = {-5.0, 2.0, 4.5};
    CHECK(ops.max_abs(m.data(), 3) == 5.0);
    std::vector<double> m2 = {-4.0, 2.5, 4.5};
    CHECK(ops.max_abs_diff(m.data(), m2.data(), 3) == 1.0);
}

TEST_CASE("wide backend matches the scalar reference bit for bit") {
    const Ops* wide = avx2_ops();
    if (!wide) return; // host without the wide backend

    const Ops& ref = scalar_ops();
    unsigned seed = 7;
    for (std::size_t n : lengths) {
        std::vector<double> a = random_values(n, seed++);
        std::vector<double> b = random_values(n, seed++);
        std::vector<double> pos = random_values(n, seed++, 0.1, 5.0);
        std::vector<double> w = random_values(n, seed++, 0.5, 4.0);

        std::vector<double> r1(n), r2(n);
        ref.sqrt_add(pos.data(), w.data(), r1.data(), n);
        wide->sqrt_add(pos.data(), w.data(), r2.data(), n);
        CHECK(std::memcmp(r1.data(), r2.data(), n * sizeof(double)) == 0);

        ref.multiply(a.data(), b.data(), r1.data(), n);
        wide->multiply(a.data(), b.data(), r2.data(), n);
        CHECK(std::memcmp(r1.data(), r2.data(), n * sizeof(double)) == 0);

        ref.reciprocal(w.data(), r1.data(), n);
        wide->reciprocal(w.data(), r2.data(), n);
        CHECK(std::memcmp(r1.data(), r2.data(), n * sizeof(double)) == 0);

        ref.div_cube(pos.data(), w.data(), r1.data(), n);
        wide->div_cube(pos.data(), w.data(), r2.data(), n);
        CHECK(std::memcmp(r1.data(), r2.data(), n * sizeof(double)) == 0);

        std::vector<double> y1 = b, y2 = b;
        ref.add_scaled(y1.data(), a.data(), 1.7, n);
        wide->add_scaled(y2.data(), a.data(), 1.7, n);
        CHECK(std::memcmp(y1.data(), y2.data(), n * sizeof(double)) == 0);

        const double m1 = ref.max_abs(a.data(), n);
        const double m2 = wide->max_abs(a.data(), n);
        CHECK(m1 == m2);
        CHECK(ref.max_abs_diff(a.data(), b.data(), n) ==
              wide->max_abs_diff(a.data(), b.data(), n));
    }
}

TEST_CASE("max reductions are exact selections, not accumulations") {
    const Ops& ref = scalar_ops();
    std::vector<double> v = random_values(513, 99);
    double expect = 0.0;
    for (double x : v) expect = std::max(expect, std::fabs(x));
    CHECK(ref.max_abs(v.data(), v.size()) == expect);
    if (const Ops* wide = avx2_ops()) {
        CHECK(wide->max_abs(v.data(), v.size()) == expect);
    }
}

TEST_CASE("active backend is one of the registered implementations") {
    const Ops& active = active_ops();
    const bool is_scalar = active.name == std::string("scalar");
    const bool is_wide = active.name == std::string("avx2");
    CHECK((is_scalar || is_wide));
    if (is_wide) CHECK(avx2_ops() != nullptr);
}
