// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Dataset loading (CIFAR-10 binary batches, raw float32 tensors, synthetic
// generators) and the statistics the analysis consumes. Rows are stored as
// float32; all statistics are accumulated in float64.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "schedlab/errors.hpp"
#include "schedlab/schedules.hpp"

namespace schedlab {

enum class Normalization { unit_range, edm_scaled, raw };

const char* normalization_name(Normalization n);

struct Dataset {
  std::int64_t n = 0, d = 0;
  Normalization norm = Normalization::raw;
  std::vector<float> values;        // row-major, n*d entries
  std::vector<double> row_sq_norm;  // |x_i|^2 per row

  const float* row(std::int64_t i) const { return values.data() + i * d; }

  // Validates finiteness (reporting the offending flat index) and fills
  // row_sq_norm. Must be called after `values` is populated.
  void finalize();
};

struct DatasetStats {
  // Root mean square of all entries. The un-centered convention: for a
  // single row, sigma_d^2 = |x|^2 / d exactly.
  double sigma_d = 0.0;
  double mean = 0.0;
  std::int64_t n = 0, d = 0;
};

// CIFAR-10 binary batches: records of 3073 bytes (label + 3*32*32 pixels,
// channel-major). Labels are discarded. unit_range maps bytes to [-1, 1];
// edm_scaled additionally multiplies by 0.5.
Dataset load_cifar10(const std::vector<std::string>& paths, Normalization norm);

// Little-endian float32, row-major, n*d entries.
Dataset load_raw_tensor(const std::string& path, std::int64_t n, std::int64_t d);
void save_raw_tensor(const std::string& path, const std::vector<double>& row_major,
                     std::int64_t n, std::int64_t d);

enum class SinglePointFill { constant, uniform_pm1 };
Dataset synth_single_point(std::int64_t d, SinglePointFill fill, double value,
                           std::uint64_t seed);

enum class SynthDistribution { gaussian, uniform_pm1 };
Dataset synth_points(std::int64_t n, std::int64_t d, SynthDistribution dist,
                     double sigma, std::uint64_t seed);

DatasetStats dataset_stats(const Dataset& ds);

struct NoisyPoint {
  std::vector<double> z;
  // Provenance, sufficient to reconstruct z exactly.
  double t_star = 0.0;
  std::int64_t index = -1;
  std::vector<double> eps;
};

// z = a(t*) x_index + b(t*) eps with eps ~ N(0, I) drawn from `seed`.
NoisyPoint corrupt(const Dataset& ds, std::int64_t index, double t_star,
                   const ScheduleView& view, std::uint64_t seed);

// Recomputes a(t*) x_index + b(t*) eps from the provenance fields.
std::vector<double> reconstruct(const Dataset& ds, const NoisyPoint& p,
                                const ScheduleView& view);

}  // namespace schedlab
