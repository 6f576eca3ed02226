#pragma once

#include <cstddef>

namespace kgraph::kernels {

// Pointwise array kernels used by the solver's inner loops.  Each entry has a
// scalar reference implementation and, on x86-64 hosts that support it, an
// AVX2 variant selected at runtime.  Variants are interchangeable bit for
// bit: both backends are compiled without FP contraction, perform the same
// IEEE-754 operation per element, and the only reductions exposed here are
// max-type reductions, which are associative and order-independent.
struct Ops {
    // y[i] += a * x[i]
    void (*add_scaled)(double* y, const double* x, double a, std::size_t n);
    // out[i] = sqrt(a[i] + b[i]); used for W = sqrt(f + |grad u|^2)
    void (*sqrt_add)(const double* a, const double* b, double* out,
                     std::size_t n);
    // out[i] = a[i] * b[i]
    void (*multiply)(const double* a, const double* b, double* out,
                     std::size_t n);
    // out[i] = 1 / x[i]
    void (*reciprocal)(const double* x, double* out, std::size_t n);
    // out[i] = f[i] / w[i]^3; the small ellipticity eigenvalue lambda
    void (*div_cube)(const double* f, const double* w, double* out,
                     std::size_t n);
    // max_i |x[i]|
    double (*max_abs)(const double* x, std::size_t n);
    // max_i |x[i] - y[i]|
    double (*max_abs_diff)(const double* x, const double* y, std::size_t n);
    const char* name;
};

// Portable reference backend.
const Ops& scalar_ops();

// AVX2 backend, or nullptr when the build or the CPU does not support it.
const Ops* avx2_ops();

// Backend used by the library: AVX2 when available, scalar otherwise.
// The environment variable KGRAPH_KERNELS=scalar|avx2 forces a choice;
// forcing avx2 on an unsupported host falls back to scalar.
const Ops& active_ops();

} // namespace kgraph::kernels
