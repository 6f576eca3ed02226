#include "kgraph/kernels.hpp"

#if defined(KGRAPH_AVX2_BUILD)

#include <cmath>
#include <immintrin.h>

namespace kgraph::kernels {

namespace {

// Clears the sign bit; |x| for every lane.
inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

void v_add_scaled(double* y, const double* x, double a, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = _mm256_loadu_pd(y + i);
        const __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void v_sqrt_add(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d s =
            _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(s));
    }
    for (; i < n; ++i) out[i] = std::sqrt(a[i] + b[i]);
}

void v_multiply(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(
            out + i,
            _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void v_reciprocal(const double* x, double* out, std::size_t n) {
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_div_pd(one, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) out[i] = 1.0 / x[i];
}

void v_div_cube(const double* f, const double* w, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vw = _mm256_loadu_pd(w + i);
        const __m256d w3 = _mm256_mul_pd(_mm256_mul_pd(vw, vw), vw);
        _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_loadu_pd(f + i), w3));
    }
    for (; i < n; ++i) out[i] = f[i] / ((w[i] * w[i]) * w[i]);
}

inline double hmax_pd(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m2 = _mm_max_pd(lo, hi);
    const __m128d m1 = _mm_max_sd(m2, _mm_unpackhi_pd(m2, m2));
    return _mm_cvtsd_f64(m1);
}

double v_max_abs(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
    }
    double m = hmax_pd(acc);
    for (; i < n; ++i) {
        const double v = std::fabs(x[i]);
        if (v > m) m = v;
    }
    return m;
}

double v_max_abs_diff(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d =
            _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_max_pd(acc, abs_pd(d));
    }
    double m = hmax_pd(acc);
    for (; i < n; ++i) {
        const double v = std::fabs(x[i] - y[i]);
        if (v > m) m = v;
    }
    return m;
}

const Ops avx2_table = {
    v_add_scaled, v_sqrt_add, v_multiply, v_reciprocal,
    v_div_cube,   v_max_abs,  v_max_abs_diff, "avx2",
};

} // namespace

const Ops* avx2_ops() {
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &avx2_table : nullptr;
}

} // namespace kgraph::kernels

#endif // KGRAPH_AVX2_BUILD
