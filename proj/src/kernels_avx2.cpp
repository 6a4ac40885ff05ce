// AVX2 variants of the dense kernels. Compiled with -mavx2 -mfma; only called
// after the runtime cpuid check in kernels.cpp.
#ifdef GROUPSEL_HAVE_AVX2

#include <immintrin.h>

#include <cstddef>

namespace groupsel::kern::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    __m256d va = _mm256_loadu_pd(a + i);
    __m256d vb = _mm256_loadu_pd(b + i);
    acc = _mm256_fmadd_pd(va, vb, acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return hsum(acc) + tail;
}

double sum(const double* a, std::size_t n) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i];
  return hsum(acc) + tail;
}

double sum_squares(const double* a, std::size_t n) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(a + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * a[i];
  return hsum(acc) + tail;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  __m256d va = _mm256_set1_pd(alpha);
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
  std::size_t i = 0;
  __m256d va = _mm256_set1_pd(alpha);
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

void square(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(v, v));
  }
  for (; i < n; ++i) out[i] = x[i] * x[i];
}

void sub(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void haar_split(const double* x, std::size_t pairs, double c, double* avg, double* diff) {
  std::size_t i = 0;
  __m256d vc = _mm256_set1_pd(c);
  for (; i + 4 <= pairs; i += 4) {
    __m256d lo = _mm256_loadu_pd(x + 2 * i);      // x0 x1 x2 x3
    __m256d hi = _mm256_loadu_pd(x + 2 * i + 4);  // x4 x5 x6 x7
    __m256d even = _mm256_unpacklo_pd(lo, hi);    // x0 x4 x2 x6
    __m256d odd = _mm256_unpackhi_pd(lo, hi);     // x1 x5 x3 x7
    even = _mm256_permute4x64_pd(even, 0b11011000);  // x0 x2 x4 x6
    odd = _mm256_permute4x64_pd(odd, 0b11011000);    // x1 x3 x5 x7
    _mm256_storeu_pd(avg + i, _mm256_mul_pd(_mm256_add_pd(even, odd), vc));
    _mm256_storeu_pd(diff + i, _mm256_mul_pd(_mm256_sub_pd(even, odd), vc));
  }
  for (; i < pairs; ++i) {
    avg[i] = (x[2 * i] + x[2 * i + 1]) * c;
    diff[i] = (x[2 * i] - x[2 * i + 1]) * c;
  }
}

void haar_merge(const double* avg, const double* diff, std::size_t pairs, double c, double* x) {
  std::size_t i = 0;
  __m256d vc = _mm256_set1_pd(c);
  for (; i + 4 <= pairs; i += 4) {
    __m256d a = _mm256_loadu_pd(avg + i);
    __m256d d = _mm256_loadu_pd(diff + i);
    __m256d ev = _mm256_mul_pd(_mm256_add_pd(a, d), vc);  // x0 x2 x4 x6
    __m256d od = _mm256_mul_pd(_mm256_sub_pd(a, d), vc);  // x1 x3 x5 x7
    ev = _mm256_permute4x64_pd(ev, 0b11011000);           // x0 x4 x2 x6
    od = _mm256_permute4x64_pd(od, 0b11011000);           // x1 x5 x3 x7
    _mm256_storeu_pd(x + 2 * i, _mm256_unpacklo_pd(ev, od));
    _mm256_storeu_pd(x + 2 * i + 4, _mm256_unpackhi_pd(ev, od));
  }
  for (; i < pairs; ++i) {
    x[2 * i] = (avg[i] + diff[i]) * c;
    x[2 * i + 1] = (avg[i] - diff[i]) * c;
  }
}

}  // namespace groupsel::kern::avx2

#endif  // GROUPSEL_HAVE_AVX2
