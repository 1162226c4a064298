// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "schedlab/rng.hpp"
#include "schedlab/schedules.hpp"

using namespace schedlab;

namespace {

// Table-column oracles, written out independently of the library's
// expression trees.
void oracle_iddpm_column(double ab_i, double ab_n, double& kappa, double& eta,
                         double& zeta) {
  kappa = std::sqrt(ab_n / ab_i);
  eta = (std::sqrt(ab_i / ab_n) - std::sqrt(ab_n / ab_i)) / std::sqrt(1.0 - ab_i);
  zeta = std::sqrt((1.0 - ab_i / ab_n) * (1.0 - ab_n) / (1.0 - ab_i));
}

void oracle_ddim_column(double ab_i, double ab_n, double& kappa, double& eta,
                        double& zeta) {
  kappa = std::sqrt(ab_n / ab_i);
  eta = std::sqrt(1.0 - ab_n) - std::sqrt(ab_n / ab_i * (1.0 - ab_i));
  zeta = 0.0;
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("training coefficient rows at pinned points") {
  SUBCASE("fm t=0.25") {
    const auto c = eval_train_schedule(ScheduleSpec::fm(), 0.25);
    CHECK(c.a == 0.75);
    CHECK(c.b == 0.25);
    CHECK(c.c == -1.0);
    CHECK(c.d == 1.0);
    CHECK(c.w == 1.0);
  }
  SUBCASE("edm sigma=0.5 t=0.5") {
    const auto c = eval_train_schedule(ScheduleSpec::edm(0.5), 0.5);
    CHECK(c.a == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(c.b == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(c.c == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(c.d == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-12));
    CHECK(c.w == 1.0);
  }
  SUBCASE("iddpm midpoint T=4000 t=2000") {
    const auto spec = ScheduleSpec::iddpm(4000);
    CHECK(spec.alpha_bar(2000) == doctest::Approx(0.5).epsilon(1e-15));
    const auto c = eval_train_schedule(spec, 2000);
    CHECK(c.a == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(c.b == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(c.c == 0.0);
    CHECK(c.d == 1.0);
  }
}

TEST_CASE("domain checks reject out-of-range times") {
  CHECK_THROWS_AS(eval_train_schedule(ScheduleSpec::edm(), 0.0), DomainError);
  CHECK_THROWS_AS(eval_train_schedule(ScheduleSpec::edm(), 80.5), DomainError);
  CHECK_THROWS_AS(eval_train_schedule(ScheduleSpec::fm(), -0.1), DomainError);
  CHECK_THROWS_AS(eval_train_schedule(ScheduleSpec::fm(), 1.1), DomainError);
  CHECK_THROWS_AS(eval_train_schedule(ScheduleSpec::iddpm(), 0.0), DomainError);
  CHECK_THROWS_AS(eval_train_schedule(ScheduleSpec::iddpm(), 2.5), DomainError);
  CHECK_THROWS_AS(eval_train_schedule(ScheduleSpec::iddpm(4000), 4001.0),
                  DomainError);
}

TEST_CASE("family invariants hold across the domain") {
  SUBCASE("variance preserving") {
    for (const auto spec : {ScheduleSpec::iddpm(4000), ScheduleSpec::ddim(1000)}) {
      for (int t = 1; t <= spec.T; t += 97) {
        const auto c = eval_train_schedule(spec, t);
        CHECK(std::abs(c.a * c.a + c.b * c.b - 1.0) < 1e-12);
        CHECK(c.w == 1.0);
      }
    }
  }
  SUBCASE("flow matching") {
    for (double t = 0.0; t <= 1.0; t += 0.01) {
      const auto c = eval_train_schedule(ScheduleSpec::fm(), t);
      CHECK(std::abs(c.a + c.b - 1.0) < 1e-12);
      CHECK(c.c == -1.0);
      CHECK(c.d == 1.0);
      CHECK(c.w == 1.0);
    }
  }
  SUBCASE("edm-style noise-to-signal ratio") {
    for (const auto spec : {ScheduleSpec::edm(0.5), ScheduleSpec::uedm(0.5)}) {
      for (double t = 0.002; t < 80.0; t *= 1.7) {
        const auto c = eval_train_schedule(spec, t);
        CHECK(std::abs(c.b / c.a - t) < 1e-12 * std::max(1.0, t));
        if (spec.family == Family::EDM) {
          CHECK(c.w == 1.0);
        } else {
          const double want = (0.25 + t * t) / (0.5 * t);
          CHECK(close(c.w, want, 1e-12));
        }
      }
    }
  }
  SUBCASE("alpha_bar endpoints and monotonicity") {
    const auto cosine = ScheduleSpec::iddpm(4000);
    CHECK(cosine.alpha_bar(0) == 1.0);
    CHECK(cosine.alpha_bar(4000) == 0.0);
    const auto linear = ScheduleSpec::ddim(1000);
    CHECK(linear.alpha_bar(0) == 1.0);
    CHECK(linear.alpha_bar(1000) > 0.0);
    for (const auto& spec : {cosine, linear})
      for (int t = 1; t <= spec.T; ++t)
        CHECK(spec.alpha_bar(t) <= spec.alpha_bar(t - 1) + 1e-15);
  }
}

TEST_CASE("time grids") {
  SUBCASE("edm appendix form") {
    const auto g = make_time_grid(ScheduleSpec::edm(), 18);
    CHECK(g.times[0] == doctest::Approx(80.0).epsilon(1e-12));
    CHECK(g.times[17] == doctest::Approx(0.002).epsilon(1e-12));
    CHECK(g.times[18] == 0.0);
  }
  SUBCASE("edm table form keeps t_N = t_min") {
    const auto g = make_time_grid(ScheduleSpec::edm(), 18, EdmGridForm::table);
    CHECK(g.times[0] == doctest::Approx(80.0).epsilon(1e-12));
    CHECK(g.times[18] == doctest::Approx(0.002).epsilon(1e-12));
  }
  SUBCASE("fm endpoints") {
    const auto g = make_time_grid(ScheduleSpec::fm(), 100);
    CHECK(g.times[0] == 1.0);
    CHECK(g.times[100] == 0.0);
  }
  SUBCASE("vp grids are integer") {
    const auto g = make_time_grid(ScheduleSpec::ddim(1000), 100);
    CHECK(g.times[0] == 1000.0);
    CHECK(g.times[100] == 0.0);
    for (double t : g.times) CHECK(t == std::floor(t));
  }
  SUBCASE("n=0 rejected") {
    CHECK_THROWS_AS(make_time_grid(ScheduleSpec::fm(), 0), DomainError);
  }
  SUBCASE("edm n=1 degenerates to [t_max, 0]") {
    const auto g = make_time_grid(ScheduleSpec::edm(), 1);
    CHECK(g.times[0] == doctest::Approx(80.0));
    CHECK(g.times[1] == 0.0);
  }
}

TEST_CASE("lambda-interpolated sampler boundary equivalence") {
  // Table-column formulas evaluated on the same linear alpha_bar, as an
  // independent route.
  const auto spec = ScheduleSpec::ddim(1000);
  const auto grid = make_time_grid(spec, 100);
  const auto at1 = sampler_coefficients(spec, grid, 1.0);
  const auto at0 = sampler_coefficients(spec, grid, 0.0);
  const auto plain = sampler_coefficients(spec, grid);
  for (int i = 0; i < 100; ++i) {
    const double ab_i = spec.alpha_bar(static_cast<int>(grid.times[i]));
    const double ab_n = spec.alpha_bar(static_cast<int>(grid.times[i + 1]));
    double k, e, z;
    oracle_iddpm_column(ab_i, ab_n, k, e, z);
    CHECK(std::abs(at1.kappa[i] - k) < 1e-12);
    CHECK(std::abs(at1.eta[i] - e) < 1e-12);
    CHECK(std::abs(at1.zeta[i] - z) < 1e-12);
    oracle_ddim_column(ab_i, ab_n, k, e, z);
    CHECK(std::abs(at0.kappa[i] - k) < 1e-12);
    CHECK(std::abs(at0.eta[i] - e) < 1e-12);
    CHECK(at0.zeta[i] == 0.0);
    CHECK(std::abs(plain.kappa[i] - at0.kappa[i]) == 0.0);
    CHECK(std::abs(plain.eta[i] - at0.eta[i]) == 0.0);
  }
  // the iDDPM family's own plan matches the column oracle at interior steps
  const auto ispec = ScheduleSpec::iddpm(4000);
  const auto igrid = make_time_grid(ispec, 100);
  const auto iplan = sampler_coefficients(ispec, igrid);
  for (int i = 1; i < 100; ++i) {
    const double ab_i = ispec.alpha_bar(static_cast<int>(igrid.times[i]));
    const double ab_n = ispec.alpha_bar(static_cast<int>(igrid.times[i + 1]));
    double k, e, z;
    oracle_iddpm_column(ab_i, ab_n, k, e, z);
    CHECK(std::abs(iplan.kappa[i] - k) < 1e-12);
    CHECK(std::abs(iplan.eta[i] - e) < 1e-12);
    CHECK(std::abs(iplan.zeta[i] - z) < 1e-12);
  }
  // cosine endpoint: alpha_bar(T) = 0 takes the degenerate-step convention
  CHECK(iplan.kappa[0] == 0.0);
  CHECK(iplan.eta[0] == 0.0);
  CHECK(iplan.zeta[0] ==
        doctest::Approx(std::sqrt(1.0 - ispec.alpha_bar(3960))).epsilon(1e-12));
}

TEST_CASE("lambda validation") {
  const auto spec = ScheduleSpec::ddim(1000);
  const auto grid = make_time_grid(spec, 10);
  CHECK_THROWS_AS(sampler_coefficients(spec, grid, 1.5), DomainError);
  CHECK_THROWS_AS(sampler_coefficients(spec, grid, -0.1), DomainError);
  const auto fm = ScheduleSpec::fm();
  const auto fmg = make_time_grid(fm, 10);
  CHECK_THROWS_AS(sampler_coefficients(fm, fmg, 0.5), DomainError);
}

TEST_CASE("fm plan is the euler update") {
  const auto spec = ScheduleSpec::fm();
  const auto plan = sampler_coefficients(spec, make_time_grid(spec, 100));
  for (int i = 0; i < 100; ++i) {
    CHECK(plan.kappa[i] == 1.0);
    CHECK(plan.eta[i] == doctest::Approx(-0.01).epsilon(1e-12));
    CHECK(plan.zeta[i] == 0.0);
  }
}

TEST_CASE("kappa is non-negative for every family plan") {
  for (auto f : {Family::iDDPM, Family::DDIM, Family::EDM, Family::FM,
                 Family::uEDM}) {
    const auto spec = ScheduleSpec::defaults(f);
    const auto plan = sampler_coefficients(spec, make_time_grid(spec, 50));
    for (double k : plan.kappa) CHECK(k >= 0.0);
  }
}

TEST_CASE("ddpm one-step identity under the exact eps oracle") {
  // one sampler step takes the noise level from b(t_i) to b(t_{i+1}) in law
  const auto spec = ScheduleSpec::iddpm(4000);
  const auto grid = make_time_grid(spec, 40);
  const auto plan = sampler_coefficients(spec, grid);
  const int d = 16;
  std::mt19937_64 eng(rng::fnv1a("ddpm-identity"));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> x(d);
  for (auto& v : x) v = unif(eng);

  for (int i : {5, 20, 38}) {
    const auto ci = eval_train_schedule(spec, grid.times[i]);
    const auto cn = eval_train_schedule(spec, grid.times[i + 1]);
    const int M = 20000;
    double second_moment = 0.0;
    for (int m = 0; m < M; ++m) {
      for (int j = 0; j < d; ++j) {
        const double eps = gauss(eng);
        const double xi = ci.a * x[j] + ci.b * eps;
        const double oracle_eps = (xi - ci.a * x[j]) / ci.b;
        const double xn = plan.kappa[i] * xi + plan.eta[i] * oracle_eps +
                          plan.zeta[i] * gauss(eng);
        const double dev = xn - cn.a * x[j];
        second_moment += dev * dev;
      }
    }
    second_moment /= static_cast<double>(M) * d;
    CHECK(second_moment ==
          doctest::Approx(cn.b * cn.b).epsilon(0.02));
  }
}

TEST_CASE("edm precondition absorption reproduces the family rows") {
  SUBCASE("edm coefficients on a 1000-point grid") {
    const auto spec = ScheduleSpec::edm(0.5);
    const auto absorbed = edm_precondition_to_unified(stock_edm_precondition(0.5));
    for (int k = 0; k < 1000; ++k) {
      const double t =
          0.002 * std::pow(80.0 / 0.002, static_cast<double>(k) / 999);
      const auto lhs = absorbed.coeffs(t);
      const auto rhs = eval_train_schedule(spec, t);
      CHECK(close(lhs.a, rhs.a, 1e-10));
      CHECK(close(lhs.b, rhs.b, 1e-10));
      CHECK(close(lhs.c, rhs.c, 1e-10));
      CHECK(close(lhs.d, rhs.d, 1e-10));
      CHECK(close(lhs.w, rhs.w, 1e-10));
    }
  }
  SUBCASE("uedm coefficients match the published row") {
    const double sd = 0.5, sd2 = 0.25;
    const auto absorbed =
        edm_precondition_to_unified(stock_uedm_precondition(sd));
    for (double t = 0.002; t < 80.0; t *= 1.31) {
      const auto c = absorbed.coeffs(t);
      CHECK(close(c.a, 1.0 / std::sqrt(t * t + 1.0), 1e-12));
      CHECK(close(c.b, t / std::sqrt(t * t + 1.0), 1e-12));
      CHECK(close(c.c, t * t / (t * t + sd2), 1e-12));
      CHECK(close(c.d, -t * sd2 / (t * t + sd2), 1e-12));
      CHECK(close(c.w, (sd2 + t * t) / (sd * t), 1e-12));
    }
  }
  SUBCASE("identity preconditions") {
    EdmPrecondition pre;
    pre.c_in = [](double) { return 1.0; };
    pre.c_out = [](double) { return 1.0; };
    pre.c_skip = [](double) { return 0.0; };
    pre.lambda_w = [](double) { return 1.0; };
    pre.sigma_d = 1.0;
    const auto absorbed = edm_precondition_to_unified(pre);
    const auto c = absorbed.coeffs(0.7);
    CHECK(c.a == 1.0);
    CHECK(c.b == 0.7);
    CHECK(c.c == 1.0);
    CHECK(c.d == 0.0);
    CHECK(c.w == 1.0);
  }
  SUBCASE("sampler plans agree between the two routes") {
    for (auto f : {Family::EDM, Family::uEDM}) {
      const auto spec = ScheduleSpec::defaults(f);
      const auto grid = make_time_grid(spec, 100);
      const auto family_plan = sampler_coefficients(spec, grid);
      const auto absorbed = edm_precondition_to_unified(
          f == Family::EDM ? stock_edm_precondition(spec.sigma_d)
                           : stock_uedm_precondition(spec.sigma_d));
      const auto plan = absorbed.sampler_plan(grid);
      CHECK(plan.output_rescale == family_plan.output_rescale);
      for (int i = 0; i < 100; ++i) {
        CHECK(close(plan.kappa[i], family_plan.kappa[i], 1e-10));
        CHECK(close(plan.eta[i], family_plan.eta[i], 1e-10));
        CHECK(plan.zeta[i] == 0.0);
      }
    }
  }
  SUBCASE("zero mid-grid time rejected") {
    const auto spec = ScheduleSpec::edm();
    auto grid = make_time_grid(spec, 10);
    grid.times[5] = 0.0;
    const auto absorbed = edm_precondition_to_unified(stock_edm_precondition());
    CHECK_THROWS_AS(absorbed.sampler_plan(grid), DomainError);
  }
}

TEST_CASE("time prior sampling") {
  SUBCASE("fm support") {
    auto eng = rng::engine(1, rng::fnv1a("prior-fm"));
    const auto spec = ScheduleSpec::fm();
    for (int i = 0; i < 1000; ++i) {
      const double t = sample_time_prior(spec, eng);
      CHECK(t >= 0.0);
      CHECK(t <= 1.0);
    }
  }
  SUBCASE("vp draws are integers in range") {
    auto eng = rng::engine(2, rng::fnv1a("prior-vp"));
    const auto spec = ScheduleSpec::iddpm(4000);
    for (int i = 0; i < 100000; ++i) {
      const double t = sample_time_prior(spec, eng);
      CHECK(t == std::floor(t));
      CHECK(t >= 1.0);
      CHECK(t <= 4000.0);
    }
  }
  SUBCASE("edm prior is log-normal(-1.2, 1.2^2)") {
    auto eng = rng::engine(3, rng::fnv1a("prior-edm"));
    const auto spec = ScheduleSpec::edm();
    double mean_log = 0.0;
    const int M = 1000000;
    for (int i = 0; i < M; ++i) mean_log += std::log(sample_time_prior(spec, eng));
    mean_log /= M;
    CHECK(std::abs(mean_log + 1.2) < 0.01);
  }
}
