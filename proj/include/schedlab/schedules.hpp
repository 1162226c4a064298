// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0
//
// The five schedule families in the unified notation: training coefficients
// a, b, c, d, w, time priors p(t), discrete time grids, and first-order
// sampler coefficients kappa_i, eta_i, zeta_i.
//
// Conventions:
//   * forward corruption        z = a(t) x + b(t) eps
//   * regression target         r = c(t) x + d(t) eps, loss weight w(t)
//   * sampler update            x_{i+1} = kappa_i x_i + eta_i NN(x_i) + zeta_i e_i
//   * grids run from high noise (t_0) down to t_N (the final state).

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "schedlab/errors.hpp"

namespace schedlab {

enum class Family { iDDPM, DDIM, EDM, FM, uEDM };

const char* family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

struct TrainCoeffs {
  double a, b, c, d, w;
};

struct ScheduleSpec {
  Family family = Family::FM;

  // Discrete (variance-preserving) families.
  int T = 4000;
  double k1 = 1e-4, k2 = 2e-2;  // DDIM linear alpha-bar slopes

  // EDM-style families.
  double sigma_d = 0.5;
  double rho = 7.0;
  double t_min = 0.002, t_max = 80.0;
  double prior_log_mean = -1.2, prior_log_std = 1.2;

  static ScheduleSpec iddpm(int T = 4000);
  static ScheduleSpec ddim(int T = 1000, double k1 = 1e-4, double k2 = 2e-2);
  static ScheduleSpec edm(double sigma_d = 0.5);
  static ScheduleSpec fm();
  static ScheduleSpec uedm(double sigma_d = 0.5);
  static ScheduleSpec defaults(Family f);

  // alpha_bar(t) for the discrete families; t = 0..T (DDIM values cached).
  double alpha_bar(int t) const;

 private:
  std::shared_ptr<const std::vector<double>> ddim_alpha_bar_;
};

// Coefficient evaluation interface shared by the built-in families and the
// absorbed-precondition schedules; also the seam test oracles hook into.
struct ScheduleView {
  bool discrete = false;     // t ranges over the integers 1..t_hi
  bool log_quadrature = false;  // integrate in u = ln t (EDM-style prior)
  double t_lo = 0.0, t_hi = 1.0;
  std::function<TrainCoeffs(double)> coeffs;
  // log prior density with respect to the grid coordinate (t, ln t, or the
  // integer pmf for discrete families).
  std::function<double(double)> log_prior;
};

ScheduleView make_view(const ScheduleSpec& spec);

// Table row evaluation. Throws DomainError outside the family's domain
// (integers 1..T for iDDPM/DDIM, (0, t_max] for EDM/uEDM, [0,1] for FM).
TrainCoeffs eval_train_schedule(const ScheduleSpec& spec, double t);

// One draw from the family's training-time prior p(t).
double sample_time_prior(const ScheduleSpec& spec, std::mt19937_64& eng);

enum class EdmGridForm {
  appendix,  // (N-1) denominator, explicit t_N = 0
  table,     // N denominator, t_N = t_min
};

struct TimeGrid {
  Family family;
  int N = 0;
  std::vector<double> times;  // N+1 entries, decreasing noise level
};

TimeGrid make_time_grid(const ScheduleSpec& spec, int N,
                        EdmGridForm form = EdmGridForm::appendix);

struct SamplerPlan {
  Family family;
  int N = 0;
  std::vector<double> times;              // N+1
  std::vector<double> kappa, eta, zeta;   // N each
  std::optional<double> lambda;           // DDIM interpolated sampler only
  double output_rescale = 1.0;            // sigma_d for EDM/uEDM
};

// Closed-form sampler coefficients for the family. lambda is only legal for
// the DDIM family (0 = ODE row, 1 = the iDDPM SDE row).
SamplerPlan sampler_coefficients(const ScheduleSpec& spec, const TimeGrid& grid,
                                 std::optional<double> lambda = std::nullopt);

// EDM-style preconditioned denoiser, to be absorbed into the unified form.
struct EdmPrecondition {
  std::function<double(double)> c_in, c_out, c_skip, lambda_w;
  double sigma_d = 0.5;
};

EdmPrecondition stock_edm_precondition(double sigma_d = 0.5);
EdmPrecondition stock_uedm_precondition(double sigma_d = 0.5);

// A schedule expressed through absorbed preconditions. Used as the second,
// independent route to the EDM/uEDM coefficient rows.
struct AbsorbedSchedule {
  EdmPrecondition pre;
  double output_rescale;  // multiply the final sampler state by sigma_d

  TrainCoeffs coeffs(double t) const;
  SamplerPlan sampler_plan(const TimeGrid& grid) const;
};

AbsorbedSchedule edm_precondition_to_unified(const EdmPrecondition& pre);

}  // namespace schedlab
