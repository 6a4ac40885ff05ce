#pragma once

#include <cstddef>

// Dense arithmetic kernels shared by the simplex, the group-lasso solvers and
// the Haar transform. Every kernel has a scalar reference implementation and,
// on x86-64 with AVX2, a vectorized variant selected once at startup. The
// dispatched entry points are the unqualified functions; kern::scalar is kept
// callable so equivalence tests can compare backends directly.
namespace groupsel::kern {

enum class Backend { scalar, avx2 };

Backend active_backend();
bool avx2_supported();

// Forces a backend (tests, or GROUPSEL_SIMD=scalar in the environment).
// Throws Error(numerical_failure) if the backend is not available.
void set_backend(Backend b);

double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sum_squares(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);   // y += alpha*x
void scale(double alpha, double* x, std::size_t n);                   // x *= alpha
void square(const double* x, double* out, std::size_t n);             // out = x.^2
void sub(const double* a, const double* b, double* out, std::size_t n);  // out = a-b

// One analysis level of the orthonormal Haar transform over `pairs` adjacent
// pairs: avg[i] = (x[2i]+x[2i+1])*c, diff[i] = (x[2i]-x[2i+1])*c.
void haar_split(const double* x, std::size_t pairs, double c, double* avg, double* diff);
// Inverse level: x[2i] = (avg[i]+diff[i])*c, x[2i+1] = (avg[i]-diff[i])*c.
void haar_merge(const double* avg, const double* diff, std::size_t pairs, double c, double* x);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sum_squares(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
void square(const double* x, double* out, std::size_t n);
void sub(const double* a, const double* b, double* out, std::size_t n);
void haar_split(const double* x, std::size_t pairs, double c, double* avg, double* diff);
void haar_merge(const double* avg, const double* diff, std::size_t pairs, double c, double* x);
}  // namespace scalar

}  // namespace groupsel::kern
