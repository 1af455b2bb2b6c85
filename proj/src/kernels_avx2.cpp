// AVX2 kernel variants. This translation unit is the only one built with
// -mavx2; callers reach it through the dispatch in kernels.cpp after a
// CPUID check. mul/add are kept separate (no FMA) so results stay
// bit-identical to the scalar reference.

#ifdef FADECODE_WITH_AVX2

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace fadecode::kernels::avx2 {

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(va, vb));
    }
    // combine as (l0+l2) + (l1+l3), the scalar reference order
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d pair = _mm_add_pd(lo, hi);  // (l0+l2, l1+l3)
    double sum = _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

void axpy(double* y, double alpha, const double* x, std::size_t n) {
    __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        __m256d vx = _mm256_loadu_pd(x + i);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(va, vx));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void add(double* y, const double* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, vx));
    }
    for (; i < n; ++i) y[i] += x[i];
}

void relu(double* dst, const double* src, std::size_t n) {
    __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(src + i);
        _mm256_storeu_pd(dst + i, _mm256_max_pd(v, zero));
    }
    for (; i < n; ++i) dst[i] = src[i] > 0.0 ? src[i] : 0.0;
}

void relu_backward(double* dx, const double* x, const double* dy, std::size_t n) {
    __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vx = _mm256_loadu_pd(x + i);
        __m256d vdy = _mm256_loadu_pd(dy + i);
        __m256d mask = _mm256_cmp_pd(vx, zero, _CMP_GT_OQ);
        _mm256_storeu_pd(dx + i, _mm256_and_pd(vdy, mask));
    }
    for (; i < n; ++i) dx[i] = x[i] > 0.0 ? dy[i] : 0.0;
}

void adam_update(double* p, double* m, double* v, const double* g, std::size_t n, double lr,
                 double b1, double b2, double eps, double c1, double c2) {
    __m256d vb1 = _mm256_set1_pd(b1);
    __m256d vb1c = _mm256_set1_pd(1.0 - b1);
    __m256d vb2 = _mm256_set1_pd(b2);
    __m256d vb2c = _mm256_set1_pd(1.0 - b2);
    __m256d vlr = _mm256_set1_pd(lr);
    __m256d veps = _mm256_set1_pd(eps);
    __m256d vc1 = _mm256_set1_pd(c1);
    __m256d vc2 = _mm256_set1_pd(c2);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vg = _mm256_loadu_pd(g + i);
        __m256d vm = _mm256_loadu_pd(m + i);
        __m256d vv = _mm256_loadu_pd(v + i);
        vm = _mm256_add_pd(_mm256_mul_pd(vb1, vm), _mm256_mul_pd(vb1c, vg));
        vv = _mm256_add_pd(_mm256_mul_pd(vb2, vv), _mm256_mul_pd(vb2c, _mm256_mul_pd(vg, vg)));
        _mm256_storeu_pd(m + i, vm);
        _mm256_storeu_pd(v + i, vv);
        __m256d num = _mm256_mul_pd(vlr, _mm256_mul_pd(vm, vc1));
        __m256d den = _mm256_add_pd(_mm256_sqrt_pd(_mm256_mul_pd(vv, vc2)), veps);
        __m256d vp = _mm256_loadu_pd(p + i);
        _mm256_storeu_pd(p + i, _mm256_sub_pd(vp, _mm256_div_pd(num, den)));
    }
    for (; i < n; ++i) {
        m[i] = b1 * m[i] + (1.0 - b1) * g[i];
        v[i] = b2 * v[i] + (1.0 - b2) * (g[i] * g[i]);
        p[i] -= lr * (m[i] * c1) / (std::sqrt(v[i] * c2) + eps);
    }
}

}  // namespace fadecode::kernels::avx2

#endif  // FADECODE_WITH_AVX2
