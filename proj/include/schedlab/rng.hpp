// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0
//
// Seed derivation. Every random draw in the library comes from an engine
// derived as engine(base_seed, purpose_tag, indices...), so draws are
// addressable by (seed, purpose, index) and never depend on execution or
// scheduling order.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace schedlab::rng {

constexpr std::uint64_t fnv1a(const char* s) {
  std::uint64_t h = 1469598103934665603ull;
  while (*s) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(*s++));
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t h, std::uint64_t w) {
  return splitmix(h ^ (w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t tag,
                            std::uint64_t i0 = 0, std::uint64_t i1 = 0) {
  std::uint64_t h = splitmix(seed);
  h = mix(h, tag);
  h = mix(h, i0);
  h = mix(h, i1);
  return h;
}

inline std::mt19937_64 engine(std::uint64_t seed, std::uint64_t tag,
                              std::uint64_t i0 = 0, std::uint64_t i1 = 0) {
  return std::mt19937_64(derive(seed, tag, i0, i1));
}

inline double gaussian(std::mt19937_64& eng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return n(eng);
}

inline std::vector<double> gaussian_vec(std::mt19937_64& eng, std::size_t n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(eng);
  return v;
}

}  // namespace schedlab::rng
