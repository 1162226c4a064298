// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0

#include "schedlab/mixture.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "schedlab/kernels.hpp"
#include "schedlab/parallel.hpp"

namespace schedlab {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

struct Affine {
  double c0, c1, c2;  // s_i = c0 + c1 * dots[i] + c2 * nsq[i]
};

Affine affine_for(const ZScan& scan, double a, double b) {
  if (!(b > 0.0))
    throw DegenerateNoiseError("mixture: b(t) must be positive");
  const double inv2b2 = 1.0 / (2.0 * b * b);
  return {-scan.z_sq * inv2b2, 2.0 * a * inv2b2, -a * a * inv2b2};
}

}  // namespace

ZScan scan_point(const Dataset& ds, const std::vector<double>& z) {
  if (static_cast<std::int64_t>(z.size()) != ds.d)
    throw DomainError("scan_point: dimension mismatch");
  ZScan s;
  s.ds = &ds;
  s.z = z;
  s.z_sq = kern::sq_norm_f64(z.data(), z.size());
  s.dots.resize(ds.n);
  par::for_chunks(ds.n, par::kRowChunk,
                  [&](std::size_t, std::int64_t b, std::int64_t e) {
                    for (std::int64_t i = b; i < e; ++i)
                      s.dots[i] = kern::dot_f32_f64(ds.row(i), z.data(), z.size());
                  });
  return s;
}

WeightStats weight_stats(const ZScan& scan, double a, double b) {
  const Affine af = affine_for(scan, a, b);
  const Dataset& ds = *scan.ds;
  const std::size_t nchunks = par::chunk_count(ds.n, par::kRowChunk);

  struct ChunkMax {
    double v = -std::numeric_limits<double>::infinity();
    std::int64_t idx = 0;
  };
  std::vector<ChunkMax> cmax(nchunks);
  par::for_chunks(ds.n, par::kRowChunk,
                  [&](std::size_t c, std::int64_t lo, std::int64_t hi) {
                    ChunkMax m;
                    m.idx = lo;
                    for (std::int64_t i = lo; i < hi; ++i) {
                      const double s =
                          af.c0 + af.c1 * scan.dots[i] + af.c2 * ds.row_sq_norm[i];
                      if (s > m.v) {
                        m.v = s;
                        m.idx = i;
                      }
                    }
                    cmax[c] = m;
                  });
  WeightStats ws;
  ws.max_s = -std::numeric_limits<double>::infinity();
  ws.argmax = 0;
  // Chunks are combined in index order with strict >, so the first index
  // wins ties regardless of which thread ran which chunk.
  for (const auto& m : cmax)
    if (m.v > ws.max_s) {
      ws.max_s = m.v;
      ws.argmax = m.idx;
    }

  std::vector<double> partial(nchunks, 0.0);
  const double ms = ws.max_s;
  par::for_chunks(ds.n, par::kRowChunk,
                  [&](std::size_t c, std::int64_t lo, std::int64_t hi) {
                    double acc = 0.0;
                    for (std::int64_t i = lo; i < hi; ++i) {
                      const double s =
                          af.c0 + af.c1 * scan.dots[i] + af.c2 * ds.row_sq_norm[i];
                      acc += std::exp(s - ms);
                    }
                    partial[c] = acc;
                  });
  ws.log_sum = std::log(par::tree_sum(partial));
  return ws;
}

double log_density(const ZScan& scan, double a, double b, const WeightStats& ws) {
  (void)a;
  const Dataset& ds = *scan.ds;
  return ws.max_s + ws.log_sum - std::log(static_cast<double>(ds.n)) -
         0.5 * static_cast<double>(ds.d) * (kLog2Pi + 2.0 * std::log(b));
}

std::vector<double> weighted_mean(const ZScan& scan, double a, double b,
                                  const WeightStats& ws) {
  std::vector<GridPointCoeffs> pts{{a, b, ws}};
  return weighted_means_multi(scan, pts)[0];
}

std::vector<std::vector<double>> weighted_means_multi(
    const ZScan& scan, const std::vector<GridPointCoeffs>& pts) {
  const Dataset& ds = *scan.ds;
  const std::size_t K = pts.size();
  const auto dim = static_cast<std::size_t>(ds.d);
  std::vector<Affine> af(K);
  std::vector<double> norm(K);  // max + log-sum per grid point
  for (std::size_t k = 0; k < K; ++k) {
    af[k] = affine_for(scan, pts[k].a, pts[k].b);
    norm[k] = pts[k].ws.max_s + pts[k].ws.log_sum;
  }
  const std::size_t nchunks = par::chunk_count(ds.n, par::kRowChunk);
  std::vector<std::vector<double>> partial(nchunks);
  par::for_chunks(ds.n, par::kRowChunk,
                  [&](std::size_t c, std::int64_t lo, std::int64_t hi) {
                    auto& acc = partial[c];
                    acc.assign(K * dim, 0.0);
                    for (std::int64_t i = lo; i < hi; ++i) {
                      const double q = scan.dots[i];
                      const double n2 = ds.row_sq_norm[i];
                      const float* x = ds.row(i);
                      for (std::size_t k = 0; k < K; ++k) {
                        const double w =
                            std::exp(af[k].c0 + af[k].c1 * q + af[k].c2 * n2 -
                                     norm[k]);
                        if (w != 0.0)
                          kern::axpy_f32_f64(w, x, acc.data() + k * dim, dim);
                      }
                    }
                  });
  par::tree_sum_rows(partial);
  std::vector<std::vector<double>> out(K, std::vector<double>(dim, 0.0));
  if (!partial.empty())
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t j = 0; j < dim; ++j) out[k][j] = partial[0][k * dim + j];
  return out;
}

std::vector<double> collapsed_weighted_sum(const ZScan& scan,
                                           const std::vector<GridPointCoeffs>& pts,
                                           const std::vector<double>& coef) {
  const Dataset& ds = *scan.ds;
  const std::size_t K = pts.size();
  if (coef.size() != K)
    throw DomainError("collapsed_weighted_sum: coefficient count mismatch");
  const auto dim = static_cast<std::size_t>(ds.d);
  std::vector<Affine> af(K);
  std::vector<double> norm(K);
  for (std::size_t k = 0; k < K; ++k) {
    af[k] = affine_for(scan, pts[k].a, pts[k].b);
    norm[k] = pts[k].ws.max_s + pts[k].ws.log_sum;
  }
  const std::size_t nchunks = par::chunk_count(ds.n, par::kRowChunk);
  std::vector<std::vector<double>> partial(nchunks);
  par::for_chunks(ds.n, par::kRowChunk,
                  [&](std::size_t c, std::int64_t lo, std::int64_t hi) {
                    auto& acc = partial[c];
                    acc.assign(dim, 0.0);
                    for (std::int64_t i = lo; i < hi; ++i) {
                      const double q = scan.dots[i];
                      const double n2 = ds.row_sq_norm[i];
                      double u = 0.0;
                      for (std::size_t k = 0; k < K; ++k)
                        u += coef[k] * std::exp(af[k].c0 + af[k].c1 * q +
                                                af[k].c2 * n2 - norm[k]);
                      if (u != 0.0)
                        kern::axpy_f32_f64(u, ds.row(i), acc.data(), dim);
                    }
                  });
  par::tree_sum_rows(partial);
  return partial.empty() ? std::vector<double>(dim, 0.0) : std::move(partial[0]);
}

double weighted_dot_z(const ZScan& scan, double a, double b,
                      const WeightStats& ws) {
  const Affine af = affine_for(scan, a, b);
  const Dataset& ds = *scan.ds;
  const double norm = ws.max_s + ws.log_sum;
  const std::size_t nchunks = par::chunk_count(ds.n, par::kRowChunk);
  std::vector<double> partial(nchunks, 0.0);
  par::for_chunks(ds.n, par::kRowChunk,
                  [&](std::size_t c, std::int64_t lo, std::int64_t hi) {
                    double acc = 0.0;
                    for (std::int64_t i = lo; i < hi; ++i) {
                      const double s = af.c0 + af.c1 * scan.dots[i] +
                                       af.c2 * ds.row_sq_norm[i];
                      acc += std::exp(s - norm) * scan.dots[i];
                    }
                    partial[c] = acc;
                  });
  return par::tree_sum(partial);
}

MixtureEval log_p_z_given_t(const Dataset& ds, const ScheduleView& view,
                            const std::vector<double>& z, double t) {
  const TrainCoeffs cf = view.coeffs(t);
  const ZScan scan = scan_point(ds, z);
  const WeightStats ws = weight_stats(scan, cf.a, cf.b);
  MixtureEval ev;
  ev.log_density = log_density(scan, cf.a, cf.b, ws);
  ev.argmax = ws.argmax;
  ev.log_weights.resize(ds.n);
  const Affine af = affine_for(scan, cf.a, cf.b);
  for (std::int64_t i = 0; i < ds.n; ++i)
    ev.log_weights[i] = af.c0 + af.c1 * scan.dots[i] + af.c2 * ds.row_sq_norm[i];
  return ev;
}

std::vector<double> posterior_weighted_mean(const Dataset& ds,
                                            const ScheduleView& view,
                                            const std::vector<double>& z,
                                            double t) {
  const TrainCoeffs cf = view.coeffs(t);
  const ZScan scan = scan_point(ds, z);
  const WeightStats ws = weight_stats(scan, cf.a, cf.b);
  return weighted_mean(scan, cf.a, cf.b, ws);
}

}  // namespace schedlab
