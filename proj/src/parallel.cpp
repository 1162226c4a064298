// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0

#include "schedlab/parallel.hpp"

#include <algorithm>
#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace schedlab::par {

namespace {
std::atomic<int> g_threads{0};  // 0 = library default
}

void set_threads(int n) {
  g_threads.store(n > 0 ? n : 0);
#ifdef _OPENMP
  omp_set_num_threads(n > 0 ? n : omp_get_num_procs());
#endif
}

int threads() {
  const int n = g_threads.load();
  if (n > 0) return n;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void for_chunks(std::int64_t n, std::int64_t chunk,
                const std::function<void(std::size_t, std::int64_t, std::int64_t)>& f) {
  const std::size_t nchunks = chunk_count(n, chunk);
  if (nchunks == 0) return;
  if (nchunks == 1 || threads() == 1) {
    for (std::size_t c = 0; c < nchunks; ++c) {
      const std::int64_t b = static_cast<std::int64_t>(c) * chunk;
      f(c, b, std::min(n, b + chunk));
    }
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
  for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(nchunks); ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    const std::int64_t b = ci * chunk;
    f(c, b, std::min(n, b + chunk));
  }
}

double tree_sum(std::vector<double>& p) {
  if (p.empty()) return 0.0;
  std::size_t len = p.size();
  while (len > 1) {
    const std::size_t half = (len + 1) / 2;
    for (std::size_t i = 0; i + half < len; ++i) p[i] += p[i + half];
    len = half;
  }
  return p[0];
}

void tree_sum_rows(std::vector<std::vector<double>>& p) {
  if (p.empty()) return;
  std::size_t len = p.size();
  while (len > 1) {
    const std::size_t half = (len + 1) / 2;
    for (std::size_t i = 0; i + half < len; ++i) {
      auto& dst = p[i];
      const auto& src = p[i + half];
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
    }
    len = half;
  }
}

}  // namespace schedlab::par
