/*
Data-parallel inner-loop kernels: scalar reference implementations plus
AVX2 variants selected at runtime.

Every kernel is bit-identical across backends. Reductions use a fixed
4-lane blocked accumulation order in both the scalar and AVX2 paths, and
no FMA contraction is used anywhere, so equivalence tests can assert
exact equality and fixed-seed pipelines do not depend on dispatch.
*/

#ifndef FADECODE_KERNELS_HPP
#define FADECODE_KERNELS_HPP

#include <cstddef>
#include <string>

namespace fadecode::kernels {

enum class Backend { scalar, avx2 };

bool cpu_has_avx2();
Backend active_backend();
// force a backend (tests); throws std::invalid_argument if unsupported here
void set_backend(Backend backend);
std::string backend_name(Backend backend);

// sum_i a[i]*b[i], 4-lane blocked accumulation order
double dot(const double* a, const double* b, std::size_t n);

// y[i] += alpha * x[i]
void axpy(double* y, double alpha, const double* x, std::size_t n);

// y[i] += x[i]
void add(double* y, const double* x, std::size_t n);

// dst[i] = max(0, src[i])
void relu(double* dst, const double* src, std::size_t n);

// dx[i] = x[i] > 0 ? dy[i] : 0   (subgradient at 0 is 0)
void relu_backward(double* dx, const double* x, const double* dy, std::size_t n);

// one bias-corrected Adam step over a parameter block:
//   m = b1*m + (1-b1)*g;  v = b2*v + (1-b2)*g^2
//   p -= lr * (m*c1) / (sqrt(v*c2) + eps)
// with c1 = 1/(1-b1^t), c2 = 1/(1-b2^t) precomputed by the caller
void adam_update(double* p, double* m, double* v, const double* g, std::size_t n,
                 double lr, double b1, double b2, double eps, double c1, double c2);

}  // namespace fadecode::kernels

#endif
