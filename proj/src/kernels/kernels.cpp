#include "kgraph/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace kgraph::kernels {

namespace {

void s_add_scaled(double* y, const double* x, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_sqrt_add(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(a[i] + b[i]);
}

void s_multiply(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void s_reciprocal(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / x[i];
}

void s_div_cube(const double* f, const double* w, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f[i] / ((w[i] * w[i]) * w[i]);
}

double s_max_abs(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = std::fabs(x[i]);
        if (v > m) m = v;
    }
    return m;
}

double s_max_abs_diff(const double* x, const double* y, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = std::fabs(x[i] - y[i]);
        if (v > m) m = v;
    }
    return m;
}

const Ops scalar_table = {
    s_add_scaled, s_sqrt_add, s_multiply, s_reciprocal,
    s_div_cube,   s_max_abs,  s_max_abs_diff, "scalar",
};

const Ops* select_backend() {
    const Ops* avx2 = avx2_ops();
    const char* force = std::getenv("KGRAPH_KERNELS");
    if (force != nullptr) {
        if (std::strcmp(force, "scalar") == 0) return &scalar_table;
        if (std::strcmp(force, "avx2") == 0 && avx2 != nullptr) return avx2;
    }
    return avx2 != nullptr ? avx2 : &scalar_table;
}

} // namespace

const Ops& scalar_ops() { return scalar_table; }

#if !defined(KGRAPH_AVX2_BUILD)
const Ops* avx2_ops() { return nullptr; }
#endif

const Ops& active_ops() {
    static const Ops* selected = select_backend();
    return *selected;
}

} // namespace kgraph::kernels
