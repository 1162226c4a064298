// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0

#include "schedlab/kernels.hpp"

namespace schedlab::kern::scalar {

double dot_f32_f64(const float* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += static_cast<double>(x[j]) * y[j];
  return s;
}

void axpy_f32_f64(double w, const float* x, double* acc, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) acc[j] += w * static_cast<double>(x[j]);
}

double dot_f64(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += x[j] * y[j];
  return s;
}

double sq_norm_f64(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) s += x[j] * x[j];
  return s;
}

double sq_dist_f64(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = x[j] - y[j];
    s += d * d;
  }
  return s;
}

}  // namespace schedlab::kern::scalar
