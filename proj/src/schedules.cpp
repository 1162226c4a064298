// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0

#include "schedlab/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace schedlab {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp0(double x) { return x > 0.0 ? x : 0.0; }

[[noreturn]] void domain_fail(const ScheduleSpec& spec, double t) {
  throw DomainError(std::string(family_name(spec.family)) +
                    ": t outside schedule domain: t=" + std::to_string(t));
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::iDDPM: return "iddpm";
    case Family::DDIM: return "ddim";
    case Family::EDM: return "edm";
    case Family::FM: return "fm";
    case Family::uEDM: return "uedm";
  }
  return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
  if (name == "iddpm") return Family::iDDPM;
  if (name == "ddim") return Family::DDIM;
  if (name == "edm") return Family::EDM;
  if (name == "fm") return Family::FM;
  if (name == "uedm") return Family::uEDM;
  return std::nullopt;
}

ScheduleSpec ScheduleSpec::iddpm(int T) {
  ScheduleSpec s;
  s.family = Family::iDDPM;
  s.T = T;
  return s;
}

ScheduleSpec ScheduleSpec::ddim(int T, double k1, double k2) {
  ScheduleSpec s;
  s.family = Family::DDIM;
  s.T = T;
  s.k1 = k1;
  s.k2 = k2;
  // alpha_bar(t) = prod_{i=0}^{t-1} (1 - k1 - k2 * i/(T-1)); cached once.
  auto table = std::make_shared<std::vector<double>>(T + 1);
  (*table)[0] = 1.0;
  for (int t = 1; t <= T; ++t) {
    const double factor = 1.0 - k1 - k2 * static_cast<double>(t - 1) / (T - 1);
    (*table)[t] = (*table)[t - 1] * factor;
  }
  s.ddim_alpha_bar_ = std::move(table);
  return s;
}

ScheduleSpec ScheduleSpec::edm(double sigma_d) {
  ScheduleSpec s;
  s.family = Family::EDM;
  s.sigma_d = sigma_d;
  return s;
}

ScheduleSpec ScheduleSpec::fm() {
  ScheduleSpec s;
  s.family = Family::FM;
  return s;
}

ScheduleSpec ScheduleSpec::uedm(double sigma_d) {
  ScheduleSpec s;
  s.family = Family::uEDM;
  s.sigma_d = sigma_d;
  return s;
}

ScheduleSpec ScheduleSpec::defaults(Family f) {
  switch (f) {
    case Family::iDDPM: return iddpm();
    case Family::DDIM: return ddim();
    case Family::EDM: return edm();
    case Family::FM: return fm();
    case Family::uEDM: return uedm();
  }
  return fm();
}

double ScheduleSpec::alpha_bar(int t) const {
  if (t < 0 || t > T) throw DomainError("alpha_bar: t outside [0, T]");
  if (family == Family::iDDPM)
    return 0.5 * (1.0 + std::cos(kPi * static_cast<double>(t) / T));
  if (family == Family::DDIM) return (*ddim_alpha_bar_)[t];
  throw DomainError("alpha_bar: not a discrete-time family");
}

TrainCoeffs eval_train_schedule(const ScheduleSpec& spec, double t) {
  switch (spec.family) {
    case Family::iDDPM:
    case Family::DDIM: {
      if (t < 1.0 || t > spec.T || t != std::floor(t)) domain_fail(spec, t);
      const double ab = spec.alpha_bar(static_cast<int>(t));
      return {std::sqrt(ab), std::sqrt(1.0 - ab), 0.0, 1.0, 1.0};
    }
    case Family::EDM: {
      if (!(t > 0.0) || t > spec.t_max) domain_fail(spec, t);
      const double sd = spec.sigma_d;
      const double s = std::sqrt(t * t + sd * sd);
      return {1.0 / s, t / s, t / (sd * s), -sd / s, 1.0};
    }
    case Family::FM: {
      if (t < 0.0 || t > 1.0) domain_fail(spec, t);
      return {1.0 - t, t, -1.0, 1.0, 1.0};
    }
    case Family::uEDM: {
      if (!(t > 0.0) || t > spec.t_max) domain_fail(spec, t);
      const double sd2 = spec.sigma_d * spec.sigma_d;
      const double s = std::sqrt(t * t + 1.0);
      return {1.0 / s, t / s, t * t / (t * t + sd2), -t * sd2 / (t * t + sd2),
              (sd2 + t * t) / (spec.sigma_d * t)};
    }
  }
  domain_fail(spec, t);
}

double sample_time_prior(const ScheduleSpec& spec, std::mt19937_64& eng) {
  switch (spec.family) {
    case Family::iDDPM:
    case Family::DDIM: {
      std::uniform_int_distribution<int> d(1, spec.T);
      return static_cast<double>(d(eng));
    }
    case Family::FM: {
      std::uniform_real_distribution<double> d(0.0, 1.0);
      return d(eng);
    }
    case Family::EDM:
    case Family::uEDM: {
      std::normal_distribution<double> d(spec.prior_log_mean, spec.prior_log_std);
      return std::exp(d(eng));
    }
  }
  return 0.0;
}

ScheduleView make_view(const ScheduleSpec& spec) {
  ScheduleView v;
  v.coeffs = [spec](double t) { return eval_train_schedule(spec, t); };
  switch (spec.family) {
    case Family::iDDPM:
    case Family::DDIM: {
      v.discrete = true;
      v.t_lo = 1.0;
      v.t_hi = spec.T;
      const double logp = -std::log(static_cast<double>(spec.T));
      v.log_prior = [logp](double) { return logp; };
      break;
    }
    case Family::FM: {
      v.t_lo = 0.0;
      v.t_hi = 1.0;
      v.log_prior = [](double) { return 0.0; };
      break;
    }
    case Family::EDM:
    case Family::uEDM: {
      // Quadrature runs in u = ln t over the truncated support; the
      // log-normal prior is a plain normal density in u.
      v.log_quadrature = true;
      v.t_lo = spec.t_min;
      v.t_hi = spec.t_max;
      const double mu = spec.prior_log_mean, sig = spec.prior_log_std;
      v.log_prior = [mu, sig](double u) {
        const double r = (u - mu) / sig;
        return -0.5 * r * r - std::log(sig) - 0.5 * std::log(2.0 * kPi);
      };
      break;
    }
  }
  return v;
}

TimeGrid make_time_grid(const ScheduleSpec& spec, int N, EdmGridForm form) {
  if (N < 1) throw DomainError("make_time_grid: N must be >= 1");
  TimeGrid g;
  g.family = spec.family;
  g.N = N;
  g.times.resize(N + 1);
  switch (spec.family) {
    case Family::iDDPM:
    case Family::DDIM: {
      bool rounded = false;
      for (int i = 0; i <= N; ++i) {
        const double exact = static_cast<double>(N - i) / N * spec.T;
        const double t = std::round(exact);
        if (t != exact) rounded = true;
        g.times[i] = t;
      }
      if (rounded)
        std::fprintf(stderr,
                     "schedlab: warning: %s grid N=%d does not divide T=%d; "
                     "times rounded to integers\n",
                     family_name(spec.family), N, spec.T);
      break;
    }
    case Family::FM: {
      for (int i = 0; i <= N; ++i)
        g.times[i] = 1.0 - static_cast<double>(i) / N;
      break;
    }
    case Family::EDM:
    case Family::uEDM: {
      const double hi = std::pow(spec.t_max, 1.0 / spec.rho);
      const double lo = std::pow(spec.t_min, 1.0 / spec.rho);
      if (form == EdmGridForm::appendix) {
        for (int i = 0; i < N; ++i) {
          const double base =
              N == 1 ? hi : (hi * (N - 1 - i) + lo * i) / (N - 1);
          g.times[i] = std::pow(base, spec.rho);
        }
        g.times[N] = 0.0;
      } else {
        for (int i = 0; i <= N; ++i) {
          const double base = hi + static_cast<double>(i) / N * (lo - hi);
          g.times[i] = std::pow(base, spec.rho);
        }
      }
      break;
    }
  }
  return g;
}

namespace {

// The cosine schedule reaches alpha_bar(T) = 0 exactly, where the
// eps-prediction step coefficients diverge. A state with alpha_bar = 0
// carries no signal, and the one-step law of the sampler has the finite
// limit below; plans use it for such steps.
void vp_degenerate_step(double ab_n, double lambda, double& kappa, double& eta,
                        double& zeta) {
  kappa = std::sqrt(clamp0((1.0 - lambda * lambda) * (1.0 - ab_n)));
  eta = 0.0;
  zeta = lambda * std::sqrt(1.0 - ab_n);
}

// VP sampler coefficients at one step, from alpha_bar at both ends.
// lambda = 0 is the DDIM ODE row; lambda = 1 reduces to the iDDPM SDE row.
void vp_lambda_step(double ab_i, double ab_n, double lambda, double& kappa,
                    double& eta, double& zeta) {
  if (ab_i == 0.0) return vp_degenerate_step(ab_n, lambda, kappa, eta, zeta);
  const double sig2 =
      (ab_n - ab_i) * (1.0 - ab_n) / (ab_n * (1.0 - ab_i));
  kappa = std::sqrt(ab_n / ab_i);
  eta = std::sqrt(clamp0(1.0 - ab_n - lambda * lambda * sig2)) -
        std::sqrt(ab_n / ab_i * (1.0 - ab_i));
  zeta = lambda * std::sqrt(clamp0(sig2));
}

void iddpm_step(double ab_i, double ab_n, double& kappa, double& eta,
                double& zeta) {
  if (ab_i == 0.0) return vp_degenerate_step(ab_n, 1.0, kappa, eta, zeta);
  kappa = std::sqrt(ab_n / ab_i);
  eta = (std::sqrt(ab_i / ab_n) - std::sqrt(ab_n / ab_i)) /
        std::sqrt(1.0 - ab_i);
  zeta = std::sqrt(clamp0((1.0 - ab_i / ab_n) * (1.0 - ab_n) / (1.0 - ab_i)));
}

}  // namespace

SamplerPlan sampler_coefficients(const ScheduleSpec& spec, const TimeGrid& grid,
                                 std::optional<double> lambda) {
  if (grid.family != spec.family)
    throw DomainError("sampler_coefficients: grid family mismatch");
  if (lambda && spec.family != Family::DDIM)
    throw DomainError("sampler_coefficients: lambda only applies to ddim");
  if (lambda && (*lambda < 0.0 || *lambda > 1.0))
    throw DomainError("sampler_coefficients: lambda outside [0, 1]");

  SamplerPlan p;
  p.family = spec.family;
  p.N = grid.N;
  p.times = grid.times;
  p.lambda = lambda;
  p.kappa.resize(grid.N);
  p.eta.resize(grid.N);
  p.zeta.resize(grid.N);

  for (int i = 0; i < grid.N; ++i) {
    const double t0 = grid.times[i], t1 = grid.times[i + 1];
    switch (spec.family) {
      case Family::iDDPM: {
        const double ab_i = spec.alpha_bar(static_cast<int>(t0));
        const double ab_n = spec.alpha_bar(static_cast<int>(t1));
        iddpm_step(ab_i, ab_n, p.kappa[i], p.eta[i], p.zeta[i]);
        break;
      }
      case Family::DDIM: {
        const double ab_i = spec.alpha_bar(static_cast<int>(t0));
        const double ab_n = spec.alpha_bar(static_cast<int>(t1));
        vp_lambda_step(ab_i, ab_n, lambda.value_or(0.0), p.kappa[i], p.eta[i],
                       p.zeta[i]);
        break;
      }
      case Family::EDM: {
        const double sd2 = spec.sigma_d * spec.sigma_d;
        p.kappa[i] = std::sqrt((sd2 + t0 * t0) / (sd2 + t1 * t1)) *
                     (1.0 - t0 * (t0 - t1) / (t0 * t0 + sd2));
        p.eta[i] = spec.sigma_d * (t0 - t1) /
                   std::sqrt((t0 * t0 + sd2) * (t1 * t1 + sd2));
        p.zeta[i] = 0.0;
        break;
      }
      case Family::FM: {
        // The Euler update x + (t1-t0) * NN; kappa is 1, not the table's 0.
        p.kappa[i] = 1.0;
        p.eta[i] = t1 - t0;
        p.zeta[i] = 0.0;
        break;
      }
      case Family::uEDM: {
        const double sd2 = spec.sigma_d * spec.sigma_d;
        p.kappa[i] = std::sqrt((t0 * t0 + 1.0) / (t1 * t1 + 1.0)) *
                     (1.0 - t0 * (t0 - t1) / (t0 * t0 + sd2));
        p.eta[i] = (t0 - t1) / (t0 * std::sqrt(t1 * t1 + 1.0));
        p.zeta[i] = 0.0;
        break;
      }
    }
    if (p.kappa[i] < 0.0)
      throw DomainError("sampler_coefficients: negative kappa at step " +
                        std::to_string(i));
  }
  if (spec.family == Family::EDM || spec.family == Family::uEDM)
    p.output_rescale = spec.sigma_d;
  return p;
}

EdmPrecondition stock_edm_precondition(double sigma_d) {
  EdmPrecondition p;
  p.sigma_d = sigma_d;
  p.c_in = [sigma_d](double t) { return 1.0 / std::sqrt(sigma_d * sigma_d + t * t); };
  p.c_out = [sigma_d](double t) {
    return sigma_d * t / std::sqrt(sigma_d * sigma_d + t * t);
  };
  p.c_skip = [sigma_d](double t) {
    return sigma_d * sigma_d / (sigma_d * sigma_d + t * t);
  };
  p.lambda_w = [sigma_d](double t) {
    return (sigma_d * sigma_d + t * t) / (sigma_d * sigma_d * t * t);
  };
  return p;
}

EdmPrecondition stock_uedm_precondition(double sigma_d) {
  EdmPrecondition p;
  p.sigma_d = sigma_d;
  p.c_in = [](double t) { return 1.0 / std::sqrt(1.0 + t * t); };
  p.c_out = [](double) { return 1.0; };
  p.c_skip = [sigma_d](double t) {
    return sigma_d * sigma_d / (sigma_d * sigma_d + t * t);
  };
  // Chosen so that the absorbed weight w = lambda * c_out^2 lands on the
  // published uEDM row, (sigma_d^2 + t^2) / (sigma_d t).
  p.lambda_w = [sigma_d](double t) {
    return (sigma_d * sigma_d + t * t) / (sigma_d * t);
  };
  return p;
}

TrainCoeffs AbsorbedSchedule::coeffs(double t) const {
  const double cin = pre.c_in(t);
  const double cout = pre.c_out(t);
  const double cskip = pre.c_skip(t);
  return {cin, t * cin, (1.0 - cskip) / cout, -t * cskip / cout,
          pre.lambda_w(t) * cout * cout};
}

SamplerPlan AbsorbedSchedule::sampler_plan(const TimeGrid& grid) const {
  SamplerPlan p;
  p.family = grid.family;
  p.N = grid.N;
  p.times = grid.times;
  p.kappa.resize(grid.N);
  p.eta.resize(grid.N);
  p.zeta.assign(grid.N, 0.0);
  p.output_rescale = output_rescale;
  for (int i = 0; i < grid.N; ++i) {
    const double t0 = grid.times[i], t1 = grid.times[i + 1];
    if (t0 == 0.0)
      throw DomainError("absorbed sampler: t_i = 0 mid-grid at step " +
                        std::to_string(i));
    // kappa written with the (t1 - t0)/t1 factor multiplied through so the
    // final step (t1 = 0) stays well defined.
    p.kappa[i] = pre.c_in(t1) / pre.c_in(t0) *
                 ((t1 - (t1 - t0) * pre.c_skip(t0)) / t0);
    p.eta[i] = (t0 - t1) / t0 * pre.c_out(t0) * pre.c_in(t1);
  }
  return p;
}

AbsorbedSchedule edm_precondition_to_unified(const EdmPrecondition& pre) {
  return AbsorbedSchedule{pre, pre.sigma_d};
}

}  // namespace schedlab
