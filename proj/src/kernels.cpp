#include "groupsel/simd_kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "groupsel/errors.hpp"

namespace groupsel::kern {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double sum_squares(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void square(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * x[i];
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void haar_split(const double* x, std::size_t pairs, double c, double* avg, double* diff) {
  for (std::size_t i = 0; i < pairs; ++i) {
    avg[i] = (x[2 * i] + x[2 * i + 1]) * c;
    diff[i] = (x[2 * i] - x[2 * i + 1]) * c;
  }
}

void haar_merge(const double* avg, const double* diff, std::size_t pairs, double c, double* x) {
  for (std::size_t i = 0; i < pairs; ++i) {
    x[2 * i] = (avg[i] + diff[i]) * c;
    x[2 * i + 1] = (avg[i] - diff[i]) * c;
  }
}

}  // namespace scalar

#ifdef GROUPSEL_HAVE_AVX2
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double sum_squares(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
void square(const double* x, double* out, std::size_t n);
void sub(const double* a, const double* b, double* out, std::size_t n);
void haar_split(const double* x, std::size_t pairs, double c, double* avg, double* diff);
void haar_merge(const double* avg, const double* diff, std::size_t pairs, double c, double* x);
}  // namespace avx2
#endif

namespace {

struct Vtable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*sum_squares)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
  void (*square)(const double*, double*, std::size_t);
  void (*sub)(const double*, const double*, double*, std::size_t);
  void (*haar_split)(const double*, std::size_t, double, double*, double*);
  void (*haar_merge)(const double*, const double*, std::size_t, double, double*);
};

constexpr Vtable kScalar = {scalar::dot,    scalar::sum,    scalar::sum_squares,
                            scalar::axpy,   scalar::scale,  scalar::square,
                            scalar::sub,    scalar::haar_split, scalar::haar_merge};

#ifdef GROUPSEL_HAVE_AVX2
constexpr Vtable kAvx2 = {avx2::dot,    avx2::sum,    avx2::sum_squares,
                          avx2::axpy,   avx2::scale,  avx2::square,
                          avx2::sub,    avx2::haar_split, avx2::haar_merge};
#endif

bool cpu_has_avx2() {
#if defined(GROUPSEL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend pick_default() {
  if (const char* env = std::getenv("GROUPSEL_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<const Vtable*> g_vt{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};

const Vtable* vt() {
  const Vtable* p = g_vt.load(std::memory_order_acquire);
  if (!p) {
    Backend b = pick_default();
#ifdef GROUPSEL_HAVE_AVX2
    p = (b == Backend::avx2) ? &kAvx2 : &kScalar;
#else
    p = &kScalar;
#endif
    g_backend.store(b, std::memory_order_relaxed);
    g_vt.store(p, std::memory_order_release);
  }
  return p;
}

}  // namespace

bool avx2_supported() { return cpu_has_avx2(); }

Backend active_backend() {
  vt();
  return g_backend.load(std::memory_order_relaxed);
}

void set_backend(Backend b) {
  if (b == Backend::avx2) {
#ifdef GROUPSEL_HAVE_AVX2
    if (!cpu_has_avx2()) fail(Errc::numerical_failure, "avx2 backend not supported on this cpu");
    g_vt.store(&kAvx2, std::memory_order_release);
#else
    fail(Errc::numerical_failure, "avx2 backend not compiled in");
#endif
  } else {
    g_vt.store(&kScalar, std::memory_order_release);
  }
  g_backend.store(b, std::memory_order_relaxed);
}

double dot(const double* a, const double* b, std::size_t n) { return vt()->dot(a, b, n); }
double sum(const double* a, std::size_t n) { return vt()->sum(a, n); }
double sum_squares(const double* a, std::size_t n) { return vt()->sum_squares(a, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { vt()->axpy(alpha, x, y, n); }
void scale(double alpha, double* x, std::size_t n) { vt()->scale(alpha, x, n); }
void square(const double* x, double* out, std::size_t n) { vt()->square(x, out, n); }
void sub(const double* a, const double* b, double* out, std::size_t n) { vt()->sub(a, b, out, n); }
void haar_split(const double* x, std::size_t pairs, double c, double* avg, double* diff) {
  vt()->haar_split(x, pairs, c, avg, diff);
}
void haar_merge(const double* avg, const double* diff, std::size_t pairs, double c, double* x) {
  vt()->haar_merge(avg, diff, pairs, c, x);
}

}  // namespace groupsel::kern
