// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0

#include "schedlab/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace schedlab::kern {

namespace {

Isa detect() {
#ifdef SCHEDLAB_HAVE_AVX2_KERNELS
  if (const char* env = std::getenv("SCHEDLAB_KERNEL")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
    if (std::strcmp(env, "avx2") == 0) return Isa::avx2;
  }
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Isa::avx2;
#endif
  return Isa::scalar;
}

Isa g_active = detect();

}  // namespace

Isa active() { return g_active; }

void force(Isa isa) {
#ifndef SCHEDLAB_HAVE_AVX2_KERNELS
  isa = Isa::scalar;
#endif
  g_active = isa;
}

const char* name(Isa isa) {
  switch (isa) {
    case Isa::avx2: return "avx2";
    default: return "scalar";
  }
}

#ifdef SCHEDLAB_HAVE_AVX2_KERNELS
#define SCHEDLAB_DISPATCH(fn, ...)                     \
  (g_active == Isa::avx2 ? avx2::fn(__VA_ARGS__)       \
                         : scalar::fn(__VA_ARGS__))
#else
#define SCHEDLAB_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double dot_f32_f64(const float* x, const double* y, std::size_t n) {
  return SCHEDLAB_DISPATCH(dot_f32_f64, x, y, n);
}

void axpy_f32_f64(double w, const float* x, double* acc, std::size_t n) {
  SCHEDLAB_DISPATCH(axpy_f32_f64, w, x, acc, n);
}

double dot_f64(const double* x, const double* y, std::size_t n) {
  return SCHEDLAB_DISPATCH(dot_f64, x, y, n);
}

double sq_norm_f64(const double* x, std::size_t n) {
  return SCHEDLAB_DISPATCH(sq_norm_f64, x, n);
}

double sq_dist_f64(const double* x, const double* y, std::size_t n) {
  return SCHEDLAB_DISPATCH(sq_dist_f64, x, y, n);
}

#undef SCHEDLAB_DISPATCH

}  // namespace schedlab::kern
