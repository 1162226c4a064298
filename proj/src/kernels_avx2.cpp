// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0
//
// AVX2+FMA variants. Compiled with -mavx2 -mfma (see CMakeLists); only
// reached when the dispatcher has confirmed CPU support.

#include "schedlab/kernels.hpp"

#ifdef SCHEDLAB_HAVE_AVX2_KERNELS

#include <immintrin.h>

namespace schedlab::kern::avx2 {

namespace {

// ((v0+v1) + (v2+v3)), then low128+high128, then lane0+lane1.
inline double hsum4(__m256d v0, __m256d v1, __m256d v2, __m256d v3) {
  const __m256d s01 = _mm256_add_pd(v0, v1);
  const __m256d s23 = _mm256_add_pd(v2, v3);
  const __m256d s = _mm256_add_pd(s01, s23);
  const __m128d lo = _mm256_castpd256_pd128(s);
  const __m128d hi = _mm256_extractf128_pd(s, 1);
  const __m128d t = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(t) + _mm_cvtsd_f64(_mm_unpackhi_pd(t, t));
}

}  // namespace

double dot_f32_f64(const float* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 16 <= n; j += 16) {
    const __m256 f0 = _mm256_loadu_ps(x + j);
    const __m256 f1 = _mm256_loadu_ps(x + j + 8);
    a0 = _mm256_fmadd_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(f0)),
                         _mm256_loadu_pd(y + j), a0);
    a1 = _mm256_fmadd_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(f0, 1)),
                         _mm256_loadu_pd(y + j + 4), a1);
    a2 = _mm256_fmadd_pd(_mm256_cvtps_pd(_mm256_castps256_ps128(f1)),
                         _mm256_loadu_pd(y + j + 8), a2);
    a3 = _mm256_fmadd_pd(_mm256_cvtps_pd(_mm256_extractf128_ps(f1, 1)),
                         _mm256_loadu_pd(y + j + 12), a3);
  }
  double s = hsum4(a0, a1, a2, a3);
  for (; j < n; ++j) s += static_cast<double>(x[j]) * y[j];
  return s;
}

void axpy_f32_f64(double w, const float* x, double* acc, std::size_t n) {
  const __m256d vw = _mm256_set1_pd(w);
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    const __m256 f = _mm256_loadu_ps(x + j);
    const __m256d lo = _mm256_cvtps_pd(_mm256_castps256_ps128(f));
    const __m256d hi = _mm256_cvtps_pd(_mm256_extractf128_ps(f, 1));
    _mm256_storeu_pd(acc + j,
                     _mm256_fmadd_pd(vw, lo, _mm256_loadu_pd(acc + j)));
    _mm256_storeu_pd(acc + j + 4,
                     _mm256_fmadd_pd(vw, hi, _mm256_loadu_pd(acc + j + 4)));
  }
  for (; j < n; ++j) acc[j] += w * static_cast<double>(x[j]);
}

double dot_f64(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 16 <= n; j += 16) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + j), _mm256_loadu_pd(y + j), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + j + 4), _mm256_loadu_pd(y + j + 4), a1);
    a2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + j + 8), _mm256_loadu_pd(y + j + 8), a2);
    a3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + j + 12), _mm256_loadu_pd(y + j + 12), a3);
  }
  double s = hsum4(a0, a1, a2, a3);
  for (; j < n; ++j) s += x[j] * y[j];
  return s;
}

double sq_norm_f64(const double* x, std::size_t n) { return dot_f64(x, x, n); }

double sq_dist_f64(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + j), _mm256_loadu_pd(y + j));
    const __m256d d1 =
        _mm256_sub_pd(_mm256_loadu_pd(x + j + 4), _mm256_loadu_pd(y + j + 4));
    a0 = _mm256_fmadd_pd(d0, d0, a0);
    a1 = _mm256_fmadd_pd(d1, d1, a1);
  }
  const __m256d z = _mm256_setzero_pd();
  double s = hsum4(a0, a1, z, z);
  for (; j < n; ++j) {
    const double d = x[j] - y[j];
    s += d * d;
  }
  return s;
}

}  // namespace schedlab::kern::avx2

#endif  // SCHEDLAB_HAVE_AVX2_KERNELS
