// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Runtime-dispatched arithmetic kernels for the dataset-scan inner loops.
// Rows are stored as float32; every accumulation is carried out in float64.
// Each implementation (scalar, AVX2) is deterministic on its own: a fixed
// accumulator layout and a fixed horizontal-sum order, so repeated calls are
// bitwise identical. Scalar and SIMD variants may differ in the last ulps;
// the equivalence tests bound that difference.

#pragma once

#include <cstddef>
#include <string>

namespace schedlab::kern {

enum class Isa { scalar, avx2 };

// Active instruction set. Chosen once at startup from CPUID, overridable
// via force() or the SCHEDLAB_KERNEL environment variable (scalar|avx2).
Isa active();
void force(Isa isa);
const char* name(Isa isa);

// sum_j x[j]*y[j], float32 row against float64 vector
double dot_f32_f64(const float* x, const double* y, std::size_t n);
// acc[j] += w * x[j]
void axpy_f32_f64(double w, const float* x, double* acc, std::size_t n);
// sum_j x[j]*y[j], both float64
double dot_f64(const double* x, const double* y, std::size_t n);
// sum_j x[j]^2
double sq_norm_f64(const double* x, std::size_t n);
// sum_j (x[j]-y[j])^2
double sq_dist_f64(const double* x, const double* y, std::size_t n);

// Reference (scalar) entry points, used by the equivalence tests.
namespace scalar {
double dot_f32_f64(const float* x, const double* y, std::size_t n);
void axpy_f32_f64(double w, const float* x, double* acc, std::size_t n);
double dot_f64(const double* x, const double* y, std::size_t n);
double sq_norm_f64(const double* x, std::size_t n);
double sq_dist_f64(const double* x, const double* y, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define SCHEDLAB_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot_f32_f64(const float* x, const double* y, std::size_t n);
void axpy_f32_f64(double w, const float* x, double* acc, std::size_t n);
double dot_f64(const double* x, const double* y, std::size_t n);
double sq_norm_f64(const double* x, std::size_t n);
double sq_dist_f64(const double* x, const double* y, std::size_t n);
}  // namespace avx2
#endif

}  // namespace schedlab::kern
