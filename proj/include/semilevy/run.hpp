#pragma once

// Command execution for the semilevy front end. Every output is a pure function
// of (config, seed): Monte Carlo units use split seeds, so thread count does not
// change a single byte.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "semilevy/classify.hpp"
#include "semilevy/config.hpp"
#include "semilevy/lln.hpp"
#include "semilevy/schedule.hpp"
#include "semilevy/skeleton.hpp"

namespace semilevy {

struct RunResult {
  std::string summary;
  std::vector<std::filesystem::path> files;
};

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path, RunResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file " + path.string());
  result.files.push_back(path);
  return out;
}

inline std::vector<double> default_horizons(const RunConfig& cfg, std::vector<double> fallback) {
  return cfg.horizons ? *cfg.horizons : fallback;
}

inline RunResult run_simulate(const RunConfig& cfg, const std::filesystem::path& dir) {
  RunResult result;
  const std::int64_t n_paths = cfg.n_paths.value_or(1);
  const double horizon = default_horizons(cfg, {10.0}).back();
  std::vector<double> occupation;
  for (std::int64_t i = 0; i < n_paths; ++i) {
    const PathSample path = sample_path(cfg.schedule, horizon, cfg.step, stream_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    auto out = open_output(dir / ("path_" + std::to_string(i) + ".csv"), result);
    write_path_csv(out, path);
    occupation.push_back(occupation_time(path, cfg.a));
  }
  {
    auto out = open_output(dir / "occupation.csv", result);
    write_occupation_csv(out, occupation);
  }
  result.summary = "simulate: paths=" + std::to_string(n_paths) + " horizon=" + format_short(horizon) +
                   " step=" + format_short(cfg.step) + " mean_occupation=" + format_short(stats::mean(occupation));
  return result;
}

inline RunResult run_classify(const RunConfig& cfg, const std::filesystem::path& dir) {
  RunResult result;
  ChungFuchsOptions cf_options;
  cf_options.seed = cfg.seed;
  const Verdict cf = chung_fuchs_verdict(cfg.schedule, cfg.a, cfg.q0, cfg.levels, cf_options);

  std::vector<std::pair<std::string, Verdict>> lines;
  Verdict primary = cf;
  if (cfg.schedule.dim() == 1) {
    const Verdict mc = mean_criterion(cfg.schedule);
    if (mc.decision != Decision::Inconclusive) primary = mc;
    lines.emplace_back("supporting", mc);
  }
  lines.insert(lines.begin(), {"supporting", cf});
  for (double a : {0.5 * cfg.a, 2.0 * cfg.a})
    lines.emplace_back("sweep", chung_fuchs_verdict(cfg.schedule, a, cfg.q0, cfg.levels, cf_options));

  if (cfg.horizons) {
    EmpiricalOptions emp;
    emp.step = cfg.step;
    emp.threads = cfg.threads;
    const auto report = empirical_diagnostic(cfg.schedule, cfg.a, *cfg.horizons, cfg.n_paths.value_or(200),
                                             cfg.seed, emp);
    lines.emplace_back("diagnostic", to_verdict(report));
    auto occ = open_output(dir / "occupation.csv", result);
    write_occupation_csv(occ, report.per_path.back());
  }

  auto out = open_output(dir / "verdict.txt", result);
  out << format_verdict(primary) << " role=primary\n";
  for (const auto& [role, v] : lines) out << format_verdict(v) << " role=" << role << '\n';
  result.summary = "classify: " + format_verdict(primary);
  return result;
}

inline RunResult run_skeleton(const RunConfig& cfg, const std::filesystem::path& dir) {
  RunResult result;
  const std::int64_t n_walks = cfg.n_paths.value_or(1000);
  const auto curve = simulate_ball_visits(cfg.schedule, cfg.rs, cfg.n_steps, n_walks, cfg.a, cfg.seed, cfg.threads);
  auto out = open_output(dir / "ball_visit.csv", result);
  write_ball_visit_csv(out, curve);
  result.summary = "skeleton: period=" + std::to_string(skeleton_period(cfg.rs)) +
                   " walks=" + std::to_string(n_walks) + " n_steps=" + std::to_string(cfg.n_steps) +
                   " partial_sum=" + format_short(curve.back().partial_sum);
  return result;
}

inline RunResult run_lln(const RunConfig& cfg, const std::filesystem::path& dir) {
  RunResult result;
  LlnOptions options;
  options.threads = cfg.threads;
  const std::int64_t n_paths = cfg.n_paths.value_or(100);
  std::ostringstream summary;
  summary << "lln:";
  LLNReport horizons_report;
  if (mean_Xp(cfg.schedule)) {
    horizons_report = slln_check(cfg.schedule, default_horizons(cfg, {100.0, 200.0, 400.0}), n_paths, cfg.seed, options);
    summary << " target=" << format_short(norm(*horizons_report.target))
            << " mean_dev=" << format_short(horizons_report.deviations.back().mean_dev)
            << " converged=" << (horizons_report.converged ? 1 : 0);
  } else {
    horizons_report = divergence_check(cfg.schedule, default_horizons(cfg, {100.0, 1000.0, 10000.0}), n_paths,
                                       cfg.seed, options);
    summary << " target=none median_running_max=" << format_short(horizons_report.deviations.back().median_dev)
            << " divergence_consistent=" << (horizons_report.divergence_consistent ? 1 : 0);
  }
  {
    auto out = open_output(dir / "lln_horizons.csv", result);
    write_deviation_csv(out, horizons_report);
  }
  const LLNReport tail = wlln_conditions(cfg.schedule, cfg.t_grid, cfg.n_samples, cfg.seed, options);
  {
    auto out = open_output(dir / "lln_tail.csv", result);
    write_tail_csv(out, tail);
  }
  summary << " tail_last=" << format_short(tail.tail_curve.back().tail)
          << " tail_to_zero=" << (tail.tail_trends_to_zero ? 1 : 0);
  if (tail.implied_c) summary << " implied_c=" << format_short((*tail.implied_c)[0]);
  result.summary = summary.str();
  return result;
}

} // namespace detail

/// Executes cfg.command, writing its artifacts into out_dir (created if needed).
inline RunResult run(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  if (!cfg.command) throw ConfigError("run: no command given");
  std::filesystem::create_directories(out_dir);
  switch (*cfg.command) {
  case Command::Simulate: return detail::run_simulate(cfg, out_dir);
  case Command::Classify: return detail::run_classify(cfg, out_dir);
  case Command::Skeleton: return detail::run_skeleton(cfg, out_dir);
  case Command::Lln: return detail::run_lln(cfg, out_dir);
  }
  throw ConfigError("run: unknown command");
}

/// Exit status for an exception escaping run(): 1 usage/parse, 2 numerical failure.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const PreconditionError*>(&e)) return 1;
  return 2;
}

} // namespace semilevy
