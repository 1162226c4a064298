// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0

#include "schedlab/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "schedlab/kernels.hpp"
#include "schedlab/parallel.hpp"
#include "schedlab/rng.hpp"

namespace schedlab {

namespace {

constexpr std::int64_t kCifarRecordBytes = 3073;  // 1 label + 3*32*32 pixels
constexpr std::int64_t kCifarPixels = 3072;

constexpr std::uint64_t kTagCorrupt = rng::fnv1a("corrupt-eps");
constexpr std::uint64_t kTagSynth = rng::fnv1a("synth-points");
constexpr std::uint64_t kTagSingle = rng::fnv1a("synth-single");

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  in.seekg(0, std::ios::end);
  const std::streamoff len = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<unsigned char> buf(static_cast<std::size_t>(len));
  if (!in.read(reinterpret_cast<char*>(buf.data()), len))
    throw IoError("short read on " + path);
  return buf;
}

}  // namespace

const char* normalization_name(Normalization n) {
  switch (n) {
    case Normalization::unit_range: return "unit";
    case Normalization::edm_scaled: return "edm";
    case Normalization::raw: return "raw";
  }
  return "?";
}

void Dataset::finalize() {
  if (n <= 0 || d <= 0) throw DataError("dataset is empty");
  if (static_cast<std::int64_t>(values.size()) != n * d)
    throw DataError("dataset size mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i]))
      throw DataError("non-finite dataset entry at flat index " +
                      std::to_string(i));
  row_sq_norm.resize(n);
  par::for_chunks(n, par::kRowChunk, [&](std::size_t, std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) {
      const float* r = row(i);
      double s = 0.0;
      for (std::int64_t j = 0; j < d; ++j)
        s += static_cast<double>(r[j]) * static_cast<double>(r[j]);
      row_sq_norm[i] = s;
    }
  });
}

Dataset load_cifar10(const std::vector<std::string>& paths, Normalization norm) {
  if (paths.empty()) throw DataError("no CIFAR batch files given");
  Dataset ds;
  ds.d = kCifarPixels;
  ds.norm = norm;
  const double scale = norm == Normalization::edm_scaled ? 0.5 : 1.0;
  for (const auto& path : paths) {
    const auto buf = read_file(path);
    if (buf.empty() || buf.size() % kCifarRecordBytes != 0)
      throw DataError(path + ": length " + std::to_string(buf.size()) +
                      " is not a multiple of 3073");
    const std::int64_t records =
        static_cast<std::int64_t>(buf.size()) / kCifarRecordBytes;
    ds.values.reserve(ds.values.size() +
                      static_cast<std::size_t>(records * kCifarPixels));
    for (std::int64_t r = 0; r < records; ++r) {
      const unsigned char* rec = buf.data() + r * kCifarRecordBytes;
      // rec[0] is the label; pixels follow in R,G,B planes.
      for (std::int64_t j = 0; j < kCifarPixels; ++j)
        ds.values.push_back(static_cast<float>(
            scale * (static_cast<double>(rec[1 + j]) / 127.5 - 1.0)));
    }
    ds.n += records;
  }
  ds.finalize();
  return ds;
}

Dataset load_raw_tensor(const std::string& path, std::int64_t n, std::int64_t d) {
  if (n < 1 || d < 1) throw DataError("raw tensor: N and d must be >= 1");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  in.seekg(0, std::ios::end);
  const std::streamoff len = in.tellg();
  in.seekg(0, std::ios::beg);
  const std::int64_t want = n * d * static_cast<std::int64_t>(sizeof(float));
  if (len != want)
    throw DataError(path + ": expected " + std::to_string(want) +
                    " bytes for " + std::to_string(n) + "x" + std::to_string(d) +
                    " float32, found " + std::to_string(len));
  Dataset ds;
  ds.n = n;
  ds.d = d;
  ds.norm = Normalization::raw;
  ds.values.resize(static_cast<std::size_t>(n * d));
  if (!in.read(reinterpret_cast<char*>(ds.values.data()), want))
    throw IoError("short read on " + path);
  ds.finalize();
  return ds;
}

void save_raw_tensor(const std::string& path, const std::vector<double>& row_major,
                     std::int64_t n, std::int64_t d) {
  if (static_cast<std::int64_t>(row_major.size()) != n * d)
    throw DataError("save_raw_tensor: size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  std::vector<float> f(row_major.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = static_cast<float>(row_major[i]);
  out.write(reinterpret_cast<const char*>(f.data()),
            static_cast<std::streamsize>(f.size() * sizeof(float)));
  if (!out) throw IoError("write failed on " + path);
}

Dataset synth_single_point(std::int64_t d, SinglePointFill fill, double value,
                           std::uint64_t seed) {
  if (d < 1) throw DataError("synth_single_point: d must be >= 1");
  Dataset ds;
  ds.n = 1;
  ds.d = d;
  ds.norm = Normalization::unit_range;
  ds.values.resize(static_cast<std::size_t>(d));
  if (fill == SinglePointFill::constant) {
    for (auto& v : ds.values) v = static_cast<float>(value);
  } else {
    auto eng = rng::engine(seed, kTagSingle);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : ds.values) v = static_cast<float>(u(eng));
  }
  ds.finalize();
  return ds;
}

Dataset synth_points(std::int64_t n, std::int64_t d, SynthDistribution dist,
                     double sigma, std::uint64_t seed) {
  if (n < 1 || d < 1) throw DataError("synth_points: N and d must be >= 1");
  Dataset ds;
  ds.n = n;
  ds.d = d;
  ds.norm = dist == SynthDistribution::uniform_pm1 ? Normalization::unit_range
                                                   : Normalization::raw;
  ds.values.resize(static_cast<std::size_t>(n * d));
  // One engine per row so generation is order-independent under chunking.
  par::for_chunks(n, par::kRowChunk, [&](std::size_t, std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) {
      auto eng = rng::engine(seed, kTagSynth, static_cast<std::uint64_t>(i));
      float* r = ds.values.data() + i * d;
      if (dist == SynthDistribution::gaussian) {
        std::normal_distribution<double> g(0.0, sigma);
        for (std::int64_t j = 0; j < d; ++j) r[j] = static_cast<float>(g(eng));
      } else {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (std::int64_t j = 0; j < d; ++j) r[j] = static_cast<float>(u(eng));
      }
    }
  });
  ds.finalize();
  return ds;
}

DatasetStats dataset_stats(const Dataset& ds) {
  DatasetStats st;
  st.n = ds.n;
  st.d = ds.d;
  const std::size_t nchunks = par::chunk_count(ds.n, par::kRowChunk);
  std::vector<double> sum(nchunks, 0.0), sumsq(nchunks, 0.0);
  par::for_chunks(ds.n, par::kRowChunk,
                  [&](std::size_t c, std::int64_t b, std::int64_t e) {
                    double s = 0.0, s2 = 0.0;
                    for (std::int64_t i = b; i < e; ++i) {
                      const float* r = ds.row(i);
                      for (std::int64_t j = 0; j < ds.d; ++j)
                        s += static_cast<double>(r[j]);
                      s2 += ds.row_sq_norm[i];
                    }
                    sum[c] = s;
                    sumsq[c] = s2;
                  });
  const double count = static_cast<double>(ds.n) * static_cast<double>(ds.d);
  st.mean = par::tree_sum(sum) / count;
  st.sigma_d = std::sqrt(par::tree_sum(sumsq) / count);
  return st;
}

NoisyPoint corrupt(const Dataset& ds, std::int64_t index, double t_star,
                   const ScheduleView& view, std::uint64_t seed) {
  if (index < 0 || index >= ds.n)
    throw DomainError("corrupt: index out of range");
  const TrainCoeffs cf = view.coeffs(t_star);
  NoisyPoint p;
  p.t_star = t_star;
  p.index = index;
  auto eng = rng::engine(seed, kTagCorrupt);
  p.eps = rng::gaussian_vec(eng, static_cast<std::size_t>(ds.d));
  p.z.resize(static_cast<std::size_t>(ds.d));
  const float* x = ds.row(index);
  for (std::int64_t j = 0; j < ds.d; ++j)
    p.z[j] = cf.a * static_cast<double>(x[j]) + cf.b * p.eps[j];
  return p;
}

std::vector<double> reconstruct(const Dataset& ds, const NoisyPoint& p,
                                const ScheduleView& view) {
  const TrainCoeffs cf = view.coeffs(p.t_star);
  std::vector<double> z(static_cast<std::size_t>(ds.d));
  const float* x = ds.row(p.index);
  for (std::int64_t j = 0; j < ds.d; ++j)
    z[j] = cf.a * static_cast<double>(x[j]) + cf.b * p.eps[j];
  return z;
}

}  // namespace schedlab
