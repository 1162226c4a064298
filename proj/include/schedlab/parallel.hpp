// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic chunk-parallel helpers. Work is split on a fixed chunk grid
// that depends only on the problem size, each chunk writes to its own slot,
// and partial results are combined in a fixed-shape pairwise tree. Numeric
// output is therefore independent of the number of worker threads.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace schedlab::par {

// Rows per chunk in dataset scans. Fixed: changing it changes the reduction
// shape and thus the last-ulp rounding of results.
inline constexpr std::int64_t kRowChunk = 2048;

void set_threads(int n);
int threads();

inline std::size_t chunk_count(std::int64_t n, std::int64_t chunk) {
  return n <= 0 ? 0 : static_cast<std::size_t>((n + chunk - 1) / chunk);
}

// f(chunk_index, begin, end) over [0, n); chunks may run on any thread.
void for_chunks(std::int64_t n, std::int64_t chunk,
                const std::function<void(std::size_t, std::int64_t, std::int64_t)>& f);

// Pairwise-tree sum of per-chunk partials (consumed in place).
double tree_sum(std::vector<double>& partials);

// Pairwise-tree elementwise sum of per-chunk partial vectors; the result is
// left in partials[0] (empty input leaves `out` zeroed by the caller).
void tree_sum_rows(std::vector<std::vector<double>>& partials);

}  // namespace schedlab::par
