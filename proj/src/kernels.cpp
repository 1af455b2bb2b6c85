#include "fadecode/kernels.hpp"

#include <cmath>
#include <stdexcept>

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
#define FADECODE_X86 1
#include <cpuid.h>
#endif

namespace fadecode::kernels {

// AVX2 variants live in kernels_avx2.cpp, compiled with -mavx2 only
#ifdef FADECODE_WITH_AVX2
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double* y, double alpha, const double* x, std::size_t n);
void add(double* y, const double* x, std::size_t n);
void relu(double* dst, const double* src, std::size_t n);
void relu_backward(double* dx, const double* x, const double* dy, std::size_t n);
void adam_update(double* p, double* m, double* v, const double* g, std::size_t n, double lr,
                 double b1, double b2, double eps, double c1, double c2);
}  // namespace avx2
#endif

bool cpu_has_avx2() {
#if defined(FADECODE_X86) && defined(FADECODE_WITH_AVX2)
    unsigned eax = 0, ebx = 0, ecx = 0, edx = 0;
    if (!__get_cpuid_count(7, 0, &eax, &ebx, &ecx, &edx)) return false;
    return (ebx >> 5) & 1;  // AVX2 bit in CPUID.(EAX=7,ECX=0):EBX
#else
    return false;
#endif
}

namespace {
Backend g_backend = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

Backend active_backend() { return g_backend; }

void set_backend(Backend backend) {
    if (backend == Backend::avx2 && !cpu_has_avx2())
        throw std::invalid_argument("set_backend: AVX2 not available");
    g_backend = backend;
}

std::string backend_name(Backend backend) {
    return backend == Backend::avx2 ? "avx2" : "scalar";
}

// --- scalar reference kernels -----------------------------------------------
//
// dot() keeps four independent partial sums so the AVX2 lane layout can
// reproduce the exact same rounding.

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 += a[i] * b[i];
        a1 += a[i + 1] * b[i + 1];
        a2 += a[i + 2] * b[i + 2];
        a3 += a[i + 3] * b[i + 3];
    }
    double sum = (a0 + a2) + (a1 + a3);
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

void axpy(double* y, double alpha, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void add(double* y, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += x[i];
}

void relu(double* dst, const double* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] > 0.0 ? src[i] : 0.0;
}

void relu_backward(double* dx, const double* x, const double* dy, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dx[i] = x[i] > 0.0 ? dy[i] : 0.0;
}

void adam_update(double* p, double* m, double* v, const double* g, std::size_t n, double lr,
                 double b1, double b2, double eps, double c1, double c2) {
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = b1 * m[i] + (1.0 - b1) * g[i];
        v[i] = b2 * v[i] + (1.0 - b2) * (g[i] * g[i]);
        p[i] -= lr * (m[i] * c1) / (std::sqrt(v[i] * c2) + eps);
    }
}

}  // namespace scalar

// --- dispatch ----------------------------------------------------------------

double dot(const double* a, const double* b, std::size_t n) {
#ifdef FADECODE_WITH_AVX2
    if (g_backend == Backend::avx2) return avx2::dot(a, b, n);
#endif
    return scalar::dot(a, b, n);
}

void axpy(double* y, double alpha, const double* x, std::size_t n) {
#ifdef FADECODE_WITH_AVX2
    if (g_backend == Backend::avx2) return avx2::axpy(y, alpha, x, n);
#endif
    scalar::axpy(y, alpha, x, n);
}

void add(double* y, const double* x, std::size_t n) {
#ifdef FADECODE_WITH_AVX2
    if (g_backend == Backend::avx2) return avx2::add(y, x, n);
#endif
    scalar::add(y, x, n);
}

void relu(double* dst, const double* src, std::size_t n) {
#ifdef FADECODE_WITH_AVX2
    if (g_backend == Backend::avx2) return avx2::relu(dst, src, n);
#endif
    scalar::relu(dst, src, n);
}

void relu_backward(double* dx, const double* x, const double* dy, std::size_t n) {
#ifdef FADECODE_WITH_AVX2
    if (g_backend == Backend::avx2) return avx2::relu_backward(dx, x, dy, n);
#endif
    scalar::relu_backward(dx, x, dy, n);
}

void adam_update(double* p, double* m, double* v, const double* g, std::size_t n, double lr,
                 double b1, double b2, double eps, double c1, double c2) {
#ifdef FADECODE_WITH_AVX2
    if (g_backend == Backend::avx2) return avx2::adam_update(p, m, v, g, n, lr, b1, b2, eps, c1, c2);
#endif
    scalar::adam_update(p, m, v, g, n, lr, b1, b2, eps, c1, c2);
}

}  // namespace fadecode::kernels
