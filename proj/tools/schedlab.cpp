// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0
//
// schedlab: posterior noise-level analysis, effective regression targets,
// accumulated error bounds, and oracle-denoiser sampling over real or
// synthetic datasets.
//
// Exit codes: 0 success, 1 validation band violated, 2 usage error,
// 3 I/O or data error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "schedlab/bounds.hpp"
#include "schedlab/dataset.hpp"
#include "schedlab/io.hpp"
#include "schedlab/kernels.hpp"
#include "schedlab/parallel.hpp"
#include "schedlab/sampler.hpp"
#include "schedlab/theory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace schedlab;

namespace {

constexpr int kSchemaVersion = 1;

struct Options {
  // dataset
  std::string dataset;
  std::string data_format = "auto";  // cifar10|raw|synth|auto
  std::string normalization = "unit";
  std::string synth_kind = "gaussian";  // gaussian|uniform|single-uniform|single-const
  std::int64_t synth_n = 1024, synth_d = 64;
  double synth_sigma = 1.0, synth_value = 0.0;
  std::uint64_t synth_seed = 0;

  // schedule
  std::string family = "fm";
  double sigma_d = 0.5, rho = 7.0, t_min = 0.002, t_max = 80.0;
  int T = -1;  // -1: family default
  double k1 = 1e-4, k2 = 2e-2;
  std::string edm_grid = "appendix";

  // posterior
  int coarse_n = 100, refine_n = 100;
  double drop_threshold = 40.0;
  bool single_stage = false;

  // run
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out = "out";
  std::string format = "csv";
  std::string kernel = "auto";
};

ScheduleSpec build_spec(const Options& o) {
  const auto fam = family_from_name(o.family);
  if (!fam) throw CLI::ValidationError("--family", "unknown family " + o.family);
  ScheduleSpec spec;
  switch (*fam) {
    case Family::iDDPM:
      spec = ScheduleSpec::iddpm(o.T > 0 ? o.T : 4000);
      break;
    case Family::DDIM:
      spec = ScheduleSpec::ddim(o.T > 0 ? o.T : 1000, o.k1, o.k2);
      break;
    case Family::EDM:
      spec = ScheduleSpec::edm(o.sigma_d);
      break;
    case Family::FM:
      spec = ScheduleSpec::fm();
      break;
    case Family::uEDM:
      spec = ScheduleSpec::uedm(o.sigma_d);
      break;
  }
  spec.rho = o.rho;
  spec.t_min = o.t_min;
  spec.t_max = o.t_max;
  return spec;
}

Normalization parse_norm(const std::string& s) {
  if (s == "unit") return Normalization::unit_range;
  if (s == "edm") return Normalization::edm_scaled;
  if (s == "raw") return Normalization::raw;
  throw CLI::ValidationError("--normalization", "unknown mode " + s);
}

std::vector<std::string> cifar_batches(const std::string& path) {
  std::vector<std::string> files;
  if (fs::is_directory(path)) {
    for (const auto& e : fs::directory_iterator(path))
      if (e.path().extension() == ".bin") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  if (files.empty()) throw IoError("no .bin batches under " + path);
  return files;
}

Dataset build_dataset(const Options& o) {
  std::string format = o.data_format;
  if (format == "synth" || (o.dataset.empty() && format == "auto"))
    format = "synth";
  if (format == "auto")
    format = fs::is_directory(o.dataset) ||
                     fs::path(o.dataset).extension() == ".bin"
                 ? "cifar10"
                 : "raw";
  if (format == "cifar10")
    return load_cifar10(cifar_batches(o.dataset), parse_norm(o.normalization));
  if (format == "raw") {
    const std::string sidecar = o.dataset + ".json";
    std::ifstream in(sidecar);
    if (!in) throw IoError("missing raw-tensor sidecar " + sidecar);
    json meta = json::parse(in);
    return load_raw_tensor(o.dataset, meta.at("N").get<std::int64_t>(),
                           meta.at("d").get<std::int64_t>());
  }
  if (format == "synth") {
    if (o.synth_kind == "gaussian")
      return synth_points(o.synth_n, o.synth_d, SynthDistribution::gaussian,
                          o.synth_sigma, o.synth_seed);
    if (o.synth_kind == "uniform")
      return synth_points(o.synth_n, o.synth_d, SynthDistribution::uniform_pm1,
                          1.0, o.synth_seed);
    if (o.synth_kind == "single-uniform")
      return synth_single_point(o.synth_d, SinglePointFill::uniform_pm1, 0.0,
                                o.synth_seed);
    if (o.synth_kind == "single-const")
      return synth_single_point(o.synth_d, SinglePointFill::constant,
                                o.synth_value, o.synth_seed);
    throw CLI::ValidationError("--synth-kind", "unknown kind " + o.synth_kind);
  }
  throw CLI::ValidationError("--data-format", "unknown format " + format);
}

PosteriorConfig posterior_config(const Options& o) {
  PosteriorConfig cfg;
  cfg.coarse_n = o.coarse_n;
  cfg.refine_n = o.refine_n;
  cfg.drop_log_threshold = o.drop_threshold;
  cfg.single_stage = o.single_stage;
  return cfg;
}

json options_json(const Options& o, const std::string& subcommand) {
  return json{{"schema_version", kSchemaVersion},
              {"subcommand", subcommand},
              {"dataset", o.dataset},
              {"data_format", o.data_format},
              {"normalization", o.normalization},
              {"synth",
               {{"kind", o.synth_kind},
                {"n", o.synth_n},
                {"d", o.synth_d},
                {"sigma", o.synth_sigma},
                {"value", o.synth_value},
                {"seed", o.synth_seed}}},
              {"family", o.family},
              {"sigma_d", o.sigma_d},
              {"rho", o.rho},
              {"t_min", o.t_min},
              {"t_max", o.t_max},
              {"T", o.T},
              {"k1", o.k1},
              {"k2", o.k2},
              {"edm_grid", o.edm_grid},
              {"posterior",
               {{"coarse_n", o.coarse_n},
                {"refine_n", o.refine_n},
                {"drop_threshold", o.drop_threshold},
                {"single_stage", o.single_stage}}},
              {"seed", o.seed},
              {"threads", o.threads},
              {"out", o.out},
              {"format", o.format},
              {"kernel", kern::name(kern::active())}};
}

void prepare_out(const Options& o, const std::string& subcommand) {
  fs::create_directories(o.out);
  std::ofstream cfg(fs::path(o.out) / "config.json");
  cfg << options_json(o, subcommand).dump(2) << "\n";
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
}

json report_json(const ValidationReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"config", r.config},
                    {"empirical", r.empirical},
                    {"stderr", r.stderr_},
                    {"estimate", r.estimate},
                    {"ratio", r.ratio},
                    {"pass", r.pass}});
  return json{{"schema_version", kSchemaVersion},
              {"experiment", rep.experiment},
              {"all_pass", rep.all_pass()},
              {"rows", rows}};
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
  std::vector<std::uint64_t> seeds;
  const auto dots = s.find("..");
  if (dots != std::string::npos) {
    const std::uint64_t lo = std::stoull(s.substr(0, dots));
    const std::uint64_t hi = std::stoull(s.substr(dots + 2));
    for (std::uint64_t v = lo; v <= hi; ++v) seeds.push_back(v);
  } else {
    std::size_t pos = 0;
    while (pos < s.size()) {
      const auto comma = s.find(',', pos);
      seeds.push_back(std::stoull(s.substr(pos, comma - pos)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  if (seeds.empty()) throw CLI::ValidationError("--seeds", "empty seed list");
  return seeds;
}

// ---- subcommand drivers ----

int run_dataset_stats(const Options& o) {
  const Dataset ds = build_dataset(o);
  const DatasetStats st = dataset_stats(ds);
  json j{{"schema_version", kSchemaVersion},
         {"N", st.n},
         {"d", st.d},
         {"sigma_d", st.sigma_d},
         {"mean", st.mean},
         {"normalization", normalization_name(ds.norm)}};
  if (o.format == "json") {
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("N,d,sigma_d,mean\n%lld,%lld,%s,%s\n",
                static_cast<long long>(st.n), static_cast<long long>(st.d),
                format_double(st.sigma_d).c_str(),
                format_double(st.mean).c_str());
  }
  return 0;
}

int run_posterior(const Options& o, const std::vector<double>& tstars,
                  int samples) {
  prepare_out(o, "posterior");
  const Dataset ds = build_dataset(o);
  const ScheduleSpec spec = build_spec(o);
  const auto rows = posterior_profile(ds, make_view(spec), tstars, samples,
                                      o.seed, posterior_config(o));
  std::vector<std::vector<double>> csv;
  csv.reserve(rows.size());
  for (const auto& r : rows)
    csv.push_back({r.t_star, static_cast<double>(r.sample), r.mean_t, r.var_t});
  write_csv((fs::path(o.out) / "posterior.csv").string(),
            {"tstar", "sample_idx", "mean_t", "var_t"}, csv);
  std::printf("wrote %s (%zu rows)\n",
              (fs::path(o.out) / "posterior.csv").string().c_str(), csv.size());
  return 0;
}

int run_targets(const Options& o, const std::vector<double>& tstars,
                int samples) {
  prepare_out(o, "targets");
  const Dataset ds = build_dataset(o);
  const ScheduleSpec spec = build_spec(o);
  const GapTable table = validate_target_gap(ds, spec, tstars, samples, o.seed,
                                             posterior_config(o));
  std::vector<std::vector<double>> csv;
  for (const auto& s : table.samples)
    csv.push_back({s[0], s[1], s[3], s[4], s[2]});
  write_csv((fs::path(o.out) / "targets.csv").string(),
            {"tstar", "sample_idx", "E", "R_norm_sq", "var_t"}, csv);

  std::vector<std::vector<double>> agg;
  for (const auto& r : table.rows)
    agg.push_back({r.t_star, r.mapped_t, r.var_mean, r.var_stderr,
                   r.var_estimate, r.e_mean, r.e_stderr, r.e_estimate,
                   r.rsq_mean, r.rsq_stderr});
  write_csv((fs::path(o.out) / "targets_aggregate.csv").string(),
            {"tstar", "mapped_t", "var_mean", "var_stderr", "var_estimate",
             "E_mean", "E_stderr", "E_estimate", "Rsq_mean", "Rsq_stderr"},
            agg);
  write_json_file(fs::path(o.out) / "summary.json",
                  json{{"schema_version", kSchemaVersion},
                       {"sigma_d", table.sigma_d},
                       {"gap_estimate", 0.5 * (1 + table.sigma_d * table.sigma_d)},
                       {"heuristic_weighting", spec.family == Family::uEDM}});
  std::printf("wrote %s\n", (fs::path(o.out) / "targets.csv").string().c_str());
  return 0;
}

int run_bound(const Options& o, int steps, int samples, double probe_eps) {
  prepare_out(o, "bound");
  const Dataset ds = build_dataset(o);
  const ScheduleSpec spec = build_spec(o);
  const TimeGrid grid = make_time_grid(spec, steps,
                                       o.edm_grid == "table"
                                           ? EdmGridForm::table
                                           : EdmGridForm::appendix);
  const SamplerPlan plan = sampler_coefficients(spec, grid);
  BoundConfig cfg;
  cfg.samples = samples;
  cfg.probe_eps = probe_eps;
  cfg.seed = o.seed;
  cfg.posterior = posterior_config(o);
  const BoundEstimate b = estimate_bound(ds, make_view(spec), plan, cfg);

  std::vector<std::vector<double>> csv;
  for (int i = 0; i < b.N; ++i)
    csv.push_back({static_cast<double>(i), b.t[i], b.kappa[i], b.eta[i], b.L[i],
                   b.delta[i], b.A[i], b.B[i], b.term[i]});
  write_csv((fs::path(o.out) / "bound.csv").string(),
            {"i", "t", "kappa", "eta", "L", "delta", "A", "B", "AB"}, csv);
  write_json_file(fs::path(o.out) / "summary.json",
                  json{{"schema_version", kSchemaVersion},
                       {"family", family_name(spec.family)},
                       {"N", b.N},
                       {"accumulated", b.accumulated},
                       {"accumulated_drop_last10", b.accumulated_drop_last10},
                       {"flagged_steps", b.flagged},
                       {"samples", b.samples},
                       {"probe_eps", b.probe_eps},
                       {"seed", b.seed}});
  std::printf("%s accumulated bound: %.6g (last-10 dropped: %.6g)\n",
              family_name(spec.family), b.accumulated,
              b.accumulated_drop_last10);
  return 0;
}

int run_sample(const Options& o, int steps, const std::string& mode,
               std::optional<double> lambda, const std::string& seeds_arg) {
  prepare_out(o, "sample");
  const Dataset ds = build_dataset(o);
  const ScheduleSpec spec = build_spec(o);
  const ScheduleView view = make_view(spec);
  const TimeGrid grid = make_time_grid(spec, steps,
                                       o.edm_grid == "table"
                                           ? EdmGridForm::table
                                           : EdmGridForm::appendix);
  const SamplerPlan plan = sampler_coefficients(spec, grid, lambda);
  const auto seeds = parse_seed_list(seeds_arg);
  SamplerOptions opts;
  opts.posterior = posterior_config(o);

  if (mode == "paired") {
    std::vector<std::vector<double>> csv;
    double mean_final = 0.0;
    for (const auto s : seeds) {
      const PairedDivergence pd = paired_divergence(ds, view, plan, s, opts);
      for (std::size_t i = 0; i < pd.step_gap.size(); ++i)
        csv.push_back({static_cast<double>(s), static_cast<double>(i),
                       pd.step_gap[i]});
      mean_final += pd.final_gap;
    }
    mean_final /= static_cast<double>(seeds.size());
    write_csv((fs::path(o.out) / "divergence.csv").string(),
              {"seed", "step", "gap"}, csv);
    write_json_file(fs::path(o.out) / "summary.json",
                    json{{"schema_version", kSchemaVersion},
                         {"mode", mode},
                         {"mean_final_gap", mean_final},
                         {"runs", seeds.size()}});
    std::printf("mean final gap over %zu seeds: %.6g\n", seeds.size(),
                mean_final);
    return 0;
  }

  const SamplerMode m = mode == "uncond" ? SamplerMode::unconditional
                                         : SamplerMode::conditional;
  std::vector<double> finals;
  finals.reserve(seeds.size() * static_cast<std::size_t>(ds.d));
  for (const auto s : seeds) {
    const SamplerRun run = run_sampler(ds, view, plan, m, s, opts);
    finals.insert(finals.end(), run.x_final.begin(), run.x_final.end());
  }
  const std::string tensor = (fs::path(o.out) / "finals.f32").string();
  save_raw_tensor(tensor, finals, static_cast<std::int64_t>(seeds.size()), ds.d);
  write_json_file(fs::path(o.out) / "finals.f32.json",
                  json{{"N", seeds.size()}, {"d", ds.d}});
  std::printf("wrote %s (%zu runs)\n", tensor.c_str(), seeds.size());
  return 0;
}

int run_validate_variance(const Options& o, const std::vector<std::int64_t>& dims,
                          const std::vector<double>& tstars, int samples) {
  prepare_out(o, "validate-variance");
  const ValidationReport rep =
      validate_variance_scaling(dims, tstars, samples, o.seed);
  std::vector<std::vector<double>> csv;
  for (const auto& r : rep.rows)
    csv.push_back({r.empirical, r.stderr_, r.estimate, r.ratio,
                   r.pass ? 1.0 : 0.0});
  write_csv((fs::path(o.out) / "variance.csv").string(),
            {"empirical", "stderr", "estimate", "ratio", "pass"}, csv);
  write_json_file(fs::path(o.out) / "summary.json", report_json(rep));
  for (const auto& r : rep.rows)
    std::printf("%-24s var=%.4g est=%.4g ratio=%.3f %s\n", r.config.c_str(),
                r.empirical, r.estimate, r.ratio, r.pass ? "ok" : "FAIL");
  return rep.all_pass() ? 0 : 1;
}

int run_validate_table(const Options& o, int samples) {
  prepare_out(o, "validate-table3");
  const Dataset ds = build_dataset(o);
  const ScheduleSpec spec = build_spec(o);
  const std::vector<double> tstars(std::begin(reference::kTStars),
                                   std::end(reference::kTStars));
  const GapTable table = validate_target_gap(ds, spec, tstars, samples, o.seed,
                                             posterior_config(o));
  std::vector<std::vector<double>> agg;
  for (const auto& r : table.rows)
    agg.push_back({r.t_star, r.var_mean, r.var_stderr, r.var_estimate, r.e_mean,
                   r.e_stderr, r.e_estimate, r.rsq_mean, r.rsq_stderr});
  write_csv((fs::path(o.out) / "table.csv").string(),
            {"tstar", "var_mean", "var_stderr", "var_estimate", "E_mean",
             "E_stderr", "E_estimate", "Rsq_mean", "Rsq_stderr"},
            agg);

  json summary{{"schema_version", kSchemaVersion},
               {"sigma_d", table.sigma_d},
               {"samples", samples}};
  int rc = 0;
  // The reference bands are tied to the CIFAR-scale dataset.
  if (ds.d == 3072 && spec.family == Family::FM) {
    const ValidationReport rep = compare_gap_table_to_reference(table);
    summary["reference"] = report_json(rep);
    for (const auto& r : rep.rows)
      std::printf("%-28s val=%.6g ref=%.6g ratio=%.3f %s\n", r.config.c_str(),
                  r.empirical, r.estimate, r.ratio, r.pass ? "ok" : "FAIL");
    rc = rep.all_pass() ? 0 : 1;
  } else {
    std::printf("dataset is not CIFAR-scale; reference bands not applied\n");
  }
  write_json_file(fs::path(o.out) / "summary.json", summary);
  return rc;
}

int run_validate_bound_figure(const Options& o,
                              const std::vector<std::string>& families, int steps,
                              int samples) {
  prepare_out(o, "validate-bound-figure");
  const Dataset ds = build_dataset(o);
  std::vector<ScheduleSpec> specs;
  for (const auto& f : families) {
    const auto fam = family_from_name(f);
    if (!fam) throw CLI::ValidationError("--families", "unknown family " + f);
    ScheduleSpec s = ScheduleSpec::defaults(*fam);
    specs.push_back(s);
  }
  const auto entries = reproduce_bound_table(ds, specs, steps, o.seed, samples);

  std::vector<SvgSeries> ab_series, a_series, b_series;
  for (const auto& e : entries) {
    std::vector<std::vector<double>> csv;
    SvgSeries ab{family_name(e.family), {}, {}}, sa = ab, sb = ab;
    for (int i = 0; i < e.bound.N; ++i) {
      csv.push_back({static_cast<double>(i), e.bound.t[i], e.bound.kappa[i],
                     e.bound.eta[i], e.bound.L[i], e.bound.delta[i],
                     e.bound.A[i], e.bound.B[i], e.bound.term[i]});
      ab.x.push_back(i);
      ab.y.push_back(e.bound.term[i]);
      sa.x.push_back(i);
      sa.y.push_back(e.bound.A[i]);
      sb.x.push_back(i);
      sb.y.push_back(e.bound.B[i]);
    }
    write_csv((fs::path(o.out) /
               (std::string("bound_") + family_name(e.family) + ".csv"))
                  .string(),
              {"i", "t", "kappa", "eta", "L", "delta", "A", "B", "AB"}, csv);
    ab_series.push_back(std::move(ab));
    a_series.push_back(std::move(sa));
    b_series.push_back(std::move(sb));
  }
  emit_svg_lineplot(ab_series,
                    {"per-step bound terms", "step i", "A_i B_i", true},
                    (fs::path(o.out) / "bound_terms.svg").string());
  emit_svg_lineplot(a_series, {"amplification factors", "step i", "A_i", true},
                    (fs::path(o.out) / "bound_A.svg").string());
  emit_svg_lineplot(b_series, {"per-step target gaps", "step i", "B_i", true},
                    (fs::path(o.out) / "bound_B.svg").string());

  json summary{{"schema_version", kSchemaVersion}, {"N", steps}};
  json accum = json::object();
  for (const auto& e : entries) {
    accum[family_name(e.family)] = e.bound.accumulated;
    std::printf("%-6s accumulated=%.6g drop-last-10=%.6g flagged=%zu steps\n",
                family_name(e.family), e.bound.accumulated,
                e.bound.accumulated_drop_last10, e.bound.flagged.size());
  }
  summary["accumulated"] = accum;
  int rc = 0;
  if (ds.d == 3072 && ds.n == 50000) {
    const ValidationReport rep = compare_bound_table_to_reference(entries);
    summary["reference"] = report_json(rep);
    for (const auto& r : rep.rows)
      std::printf("%-24s val=%.6g ref=%.6g %s\n", r.config.c_str(), r.empirical,
                  r.estimate, r.pass ? "ok" : "FAIL");
    rc = rep.all_pass() ? 0 : 1;
  } else {
    std::printf("dataset is not CIFAR-scale; reference bands not applied\n");
  }
  write_json_file(fs::path(o.out) / "summary.json", summary);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"noise-schedule analysis toolkit"};
  app.fallthrough();
  app.set_config("--config", "", "read options from a config file");
  app.require_subcommand(1);

  app.add_option("--seed", o.seed, "base RNG seed");
  app.add_option("--threads", o.threads, "worker threads (0 = hardware)");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--format", o.format, "stdout format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--kernel", o.kernel, "force kernel variant: auto|scalar|avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  app.add_option("--dataset", o.dataset, "dataset path (dir of .bin, or raw tensor)");
  app.add_option("--data-format", o.data_format, "cifar10|raw|synth|auto")
      ->check(CLI::IsMember({"cifar10", "raw", "synth", "auto"}));
  app.add_option("--normalization", o.normalization, "unit|edm|raw")
      ->check(CLI::IsMember({"unit", "edm", "raw"}));
  app.add_option("--synth-kind", o.synth_kind,
                 "gaussian|uniform|single-uniform|single-const");
  app.add_option("--synth-n", o.synth_n, "synthetic point count");
  app.add_option("--synth-d", o.synth_d, "synthetic dimension");
  app.add_option("--synth-sigma", o.synth_sigma, "gaussian sigma");
  app.add_option("--synth-value", o.synth_value, "constant fill value");
  app.add_option("--synth-seed", o.synth_seed, "synthetic generator seed");

  app.add_option("--family", o.family, "iddpm|ddim|edm|fm|uedm");
  app.add_option("--sigma-d", o.sigma_d, "data std parameter");
  app.add_option("--rho", o.rho, "EDM grid warp exponent");
  app.add_option("--t-min", o.t_min, "EDM t_min");
  app.add_option("--t-max", o.t_max, "EDM t_max");
  app.add_option("--T", o.T, "training step count (discrete families)");
  app.add_option("--k1", o.k1, "DDIM linear schedule offset");
  app.add_option("--k2", o.k2, "DDIM linear schedule slope");
  app.add_option("--edm-grid", o.edm_grid, "appendix|table")
      ->check(CLI::IsMember({"appendix", "table"}));

  app.add_option("--coarse-n", o.coarse_n, "posterior coarse grid size");
  app.add_option("--refine-n", o.refine_n, "posterior refined grid size");
  app.add_option("--drop-threshold", o.drop_threshold,
                 "coarse log-drop threshold (nats)");
  app.add_flag("--single-stage", o.single_stage,
               "skip the coarse posterior stage");

  // dataset stats
  auto* ds_cmd = app.add_subcommand("dataset", "dataset utilities");
  auto* stats_cmd = ds_cmd->add_subcommand("stats", "dataset statistics");
  std::string stats_input;
  stats_cmd->add_option("--input", stats_input, "dataset path");

  // posterior / targets
  std::vector<double> tstars{0.1, 0.3, 0.5, 0.7, 0.9};
  int samples = 25;
  auto* post_cmd =
      app.add_subcommand("posterior", "posterior noise-level profile");
  post_cmd->add_option("--tstar", tstars, "noise levels")->delimiter(',');
  post_cmd->add_option("--samples", samples, "draws per level");
  auto* tgt_cmd = app.add_subcommand("targets", "effective-target gap table");
  tgt_cmd->add_option("--tstar", tstars, "noise levels")->delimiter(',');
  tgt_cmd->add_option("--samples", samples, "draws per level");

  // bound
  int steps = 100, probe_samples = 10;
  double probe_eps = 0.01;
  auto* bound_cmd = app.add_subcommand("bound", "accumulated error bound");
  bound_cmd->add_option("--steps", steps, "sampler steps N");
  bound_cmd->add_option("--probes", probe_samples, "delta/L probe count");
  bound_cmd->add_option("--probe-eps", probe_eps, "Lipschitz probe radius");

  // sample
  std::string mode = "cond", seeds_arg = "0";
  double lambda_val = -1.0;
  auto* sample_cmd = app.add_subcommand("sample", "oracle-denoiser sampling");
  sample_cmd->add_option("--steps", steps, "sampler steps N");
  sample_cmd->add_option("--mode", mode, "cond|uncond|paired")
      ->check(CLI::IsMember({"cond", "uncond", "paired"}));
  sample_cmd->add_option("--lambda", lambda_val,
                         "DDIM stochasticity (0=ODE, 1=SDE)");
  sample_cmd->add_option("--seeds", seeds_arg, "seed list: a..b or a,b,c");

  // validate
  auto* val_cmd = app.add_subcommand("validate", "validation experiments");
  val_cmd->require_subcommand(1);
  auto* val_table = val_cmd->add_subcommand(
      "table3", "variance / target-gap table on a real dataset");
  int table_samples = 25;
  val_table->add_option("--samples", table_samples, "draws per level");
  auto* val_var = val_cmd->add_subcommand(
      "variance", "posterior concentration scaling on synthetic data");
  std::vector<std::int64_t> dims{256, 1024, 4096};
  std::vector<double> var_tstars{0.2, 0.5, 0.8};
  int var_samples = 50;
  val_var->add_option("--dims", dims, "dimensions")->delimiter(',');
  val_var->add_option("--tstar", var_tstars, "noise levels")->delimiter(',');
  val_var->add_option("--samples", var_samples, "draws per cell");
  auto* val_bound = val_cmd->add_subcommand(
      "bound-figure", "per-family accumulated bound comparison");
  std::vector<std::string> families{"ddim", "edm", "fm", "uedm"};
  val_bound->add_option("--families", families, "families to compare")
      ->delimiter(',');
  val_bound->add_option("--steps", steps, "sampler steps N");
  val_bound->add_option("--probes", probe_samples, "delta/L probe count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (o.threads > 0) par::set_threads(o.threads);
  if (o.kernel == "scalar") kern::force(kern::Isa::scalar);
  if (o.kernel == "avx2") kern::force(kern::Isa::avx2);

  try {
    if (stats_cmd->parsed()) {
      if (!stats_input.empty()) o.dataset = stats_input;
      return run_dataset_stats(o);
    }
    if (post_cmd->parsed()) return run_posterior(o, tstars, samples);
    if (tgt_cmd->parsed()) return run_targets(o, tstars, samples);
    if (bound_cmd->parsed()) return run_bound(o, steps, probe_samples, probe_eps);
    if (sample_cmd->parsed()) {
      std::optional<double> lambda;
      if (lambda_val >= 0.0) lambda = lambda_val;
      return run_sample(o, steps, mode, lambda, seeds_arg);
    }
    if (val_table->parsed()) return run_validate_table(o, table_samples);
    if (val_var->parsed())
      return run_validate_variance(o, dims, var_tstars, var_samples);
    if (val_bound->parsed())
      return run_validate_bound_figure(o, families, steps, probe_samples);
    std::fprintf(stderr, "no subcommand selected\n");
    return 2;
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return 3;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
