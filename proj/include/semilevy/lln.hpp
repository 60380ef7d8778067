#pragma once

// Laws of large numbers for semi-Levy processes, checked by simulation:
//   E|X_p| < inf  =>  X_t / t -> E[X_p] / p a.s.          (slln_check)
//   E|X_p| = inf  =>  limsup |X_t| / t = inf a.s.          (divergence_check)
//   X_t / t -> c in probability  <=>  t P(|X_p| > t) -> 0 and
//                                     E[X_p 1{|X_p| <= t}] -> c p   (wlln_conditions)

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "semilevy/csv.hpp"
#include "semilevy/errors.hpp"
#include "semilevy/parallel.hpp"
#include "semilevy/random.hpp"
#include "semilevy/schedule.hpp"
#include "semilevy/stats.hpp"

namespace semilevy {

struct HorizonDeviation {
  double horizon = 0.0;
  double mean_dev = 0.0;
  double max_dev = 0.0;
  double median_dev = 0.0;
};

struct TailPoint {
  double t = 0.0;
  double tail = 0.0;    // t * P(|X_p| > t)
  double tail_se = 0.0;
  Vector trunc_mean;    // E[X_p 1{|X_p| <= t}]
  Vector trunc_se;
};

struct LLNReport {
  std::vector<HorizonDeviation> deviations;
  std::optional<Vector> target; // E[X_p] / p; absent when divergence is expected
  std::optional<double> clt_scale;
  bool converged = false;
  bool divergence_consistent = false;
  std::vector<TailPoint> tail_curve;
  bool tail_trends_to_zero = false;
  std::optional<Vector> implied_c;
};

struct LlnOptions {
  unsigned threads = 0;
  double step = 0.0; // divergence_check grid step; 0 means one period
};

namespace detail {

inline void check_horizons(std::span<const double> horizons) {
  if (horizons.empty()) throw PreconditionError("lln: needs at least one horizon");
  if (!(horizons.front() > 0.0)) throw PreconditionError("lln: horizons must be positive");
  for (std::size_t j = 1; j < horizons.size(); ++j)
    if (!(horizons[j] > horizons[j - 1])) throw PreconditionError("lln: horizons must increase");
}

inline HorizonDeviation summarize(double horizon, const std::vector<double>& devs) {
  return {horizon, stats::mean(devs), *std::max_element(devs.begin(), devs.end()), stats::quantile(devs, 0.5)};
}

} // namespace detail

/// Deviations |X_T / T - E[X_p] / p| over n_paths paths; X is sampled exactly at
/// the horizons. Converged when the mean deviation at the largest horizon is at
/// most 3 sqrt(Var(X_p) / (p T)) (variance summed over coordinates).
inline LLNReport slln_check(const SemiLevySchedule& schedule, std::span<const double> horizons,
                            std::int64_t n_paths, std::uint64_t seed, const LlnOptions& options = {}) {
  detail::check_horizons(horizons);
  if (n_paths < 50) throw PreconditionError("slln_check: needs at least 50 paths");
  const auto m = mean_Xp(schedule);
  if (!m) throw PreconditionError("slln_check: E[|X_p|] is infinite, use divergence_check");

  LLNReport report;
  const double p = schedule.period();
  report.target = scaled(*m, 1.0 / p);
  const auto paths = static_cast<std::size_t>(n_paths);
  std::vector<std::vector<double>> dev(horizons.size(), std::vector<double>(paths));

  parallel_for(paths, options.threads, [&](std::size_t i) {
    Rng rng = make_stream(seed, i);
    Vector x(schedule.dim(), 0.0);
    double prev = 0.0;
    for (std::size_t j = 0; j < horizons.size(); ++j) {
      add_into(x, sample_increment(schedule, prev, horizons[j], rng));
      prev = horizons[j];
      Vector r = scaled(x, 1.0 / horizons[j]);
      for (std::size_t k = 0; k < r.size(); ++k) r[k] -= (*report.target)[k];
      dev[j][i] = norm(r);
    }
  });

  for (std::size_t j = 0; j < horizons.size(); ++j) report.deviations.push_back(detail::summarize(horizons[j], dev[j]));
  if (const auto v = variance_Xp(schedule)) {
    double total = 0.0;
    for (double x : *v) total += x;
    report.clt_scale = std::sqrt(total / (p * horizons.back()));
    report.converged = report.deviations.back().mean_dev <= 3.0 * *report.clt_scale + 1e-12;
  } else {
    report.converged = report.deviations.back().mean_dev < report.deviations.front().mean_dev;
  }
  return report;
}

/// Running maximum M(T) = max_{grid t <= T} |X_t| / t per path, for schedules with
/// E|X_p| = infinity. Divergence-consistent when the median of M grows by at least
/// 50% from the first to the last horizon.
inline LLNReport divergence_check(const SemiLevySchedule& schedule, std::span<const double> horizons,
                                  std::int64_t n_paths, std::uint64_t seed, const LlnOptions& options = {}) {
  detail::check_horizons(horizons);
  if (n_paths < 1) throw PreconditionError("divergence_check: needs at least one path");
  if (mean_Xp(schedule)) throw PreconditionError("divergence_check: E[|X_p|] is finite, use slln_check");

  LLNReport report;
  const double step = options.step > 0.0 ? options.step : schedule.period();
  const std::vector<double> grid = make_grid(horizons.back(), std::min(step, horizons.back()));
  const auto paths = static_cast<std::size_t>(n_paths);
  std::vector<std::vector<double>> run_max(horizons.size(), std::vector<double>(paths));

  parallel_for(paths, options.threads, [&](std::size_t i) {
    Rng rng = make_stream(seed, i);
    double best = 0.0;
    std::size_t j = 0;
    walk_grid(schedule, grid, rng, [&](double t, const Vector& x) {
      if (t > 0.0) best = std::max(best, norm(x) / t);
      while (j < horizons.size() && t >= horizons[j] - 1e-9 * step) run_max[j++][i] = best;
    });
    for (; j < horizons.size(); ++j) run_max[j][i] = best;
  });

  for (std::size_t j = 0; j < horizons.size(); ++j)
    report.deviations.push_back(detail::summarize(horizons[j], run_max[j]));
  report.divergence_consistent =
      horizons.size() >= 2 && report.deviations.back().median_dev >= 1.5 * report.deviations.front().median_dev;
  return report;
}

/// Monte Carlo estimates of t P(|X_p| > t) and E[X_p 1{|X_p| <= t}] with standard
/// errors. X_p is drawn directly as one period increment; block b of 4096 samples
/// uses stream_seed(seed, b).
inline LLNReport wlln_conditions(const SemiLevySchedule& schedule, std::span<const double> t_grid,
                                 std::int64_t n_samples, std::uint64_t seed, const LlnOptions& options = {}) {
  if (n_samples < 10000) throw PreconditionError("wlln_conditions: needs at least 10^4 samples");
  if (t_grid.empty()) throw PreconditionError("wlln_conditions: empty t grid");

  constexpr std::size_t kBlock = 4096;
  const auto n = static_cast<std::size_t>(n_samples);
  const std::size_t d = schedule.dim();
  std::vector<Vector> xs(n);
  parallel_for((n + kBlock - 1) / kBlock, options.threads, [&](std::size_t b) {
    Rng rng = make_stream(seed, b);
    for (std::size_t i = b * kBlock; i < std::min(n, (b + 1) * kBlock); ++i) xs[i] = sample_Xp(schedule, rng);
  });
  std::vector<double> radius(n);
  for (std::size_t i = 0; i < n; ++i) radius[i] = norm(xs[i]);

  LLNReport report;
  const double nn = static_cast<double>(n);
  for (double t : t_grid) {
    TailPoint pt;
    pt.t = t;
    std::size_t above = 0;
    std::vector<double> trunc(n);
    pt.trunc_mean.assign(d, 0.0);
    pt.trunc_se.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (radius[i] > t) ++above;
    const double phat = static_cast<double>(above) / nn;
    pt.tail = t * phat;
    pt.tail_se = t * std::sqrt(phat * (1.0 - phat) / nn);
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t i = 0; i < n; ++i) trunc[i] = radius[i] <= t ? xs[i][k] : 0.0;
      pt.trunc_mean[k] = stats::mean(trunc);
      pt.trunc_se[k] = stats::standard_error(trunc);
    }
    report.tail_curve.push_back(std::move(pt));
  }

  double max_tail = 0.0;
  for (const auto& pt : report.tail_curve) max_tail = std::max(max_tail, pt.tail);
  report.tail_trends_to_zero = report.tail_curve.back().tail <= 0.1 * max_tail;
  if (report.tail_trends_to_zero) report.implied_c = scaled(report.tail_curve.back().trunc_mean, 1.0 / schedule.period());
  return report;
}

inline void write_deviation_csv(std::ostream& out, const LLNReport& report) {
  out << "T,mean_dev,max_dev\n";
  for (const auto& row : report.deviations)
    out << format_double(row.horizon) << ',' << format_double(row.mean_dev) << ',' << format_double(row.max_dev)
        << '\n';
}

/// t,tail,tail_se,trunc_mean,trunc_se; multi-dimensional schedules get one
/// trunc_meanK,trunc_seK pair per coordinate.
inline void write_tail_csv(std::ostream& out, const LLNReport& report) {
  const std::size_t d = report.tail_curve.empty() ? 1 : report.tail_curve.front().trunc_mean.size();
  out << "t,tail,tail_se";
  if (d == 1) {
    out << ",trunc_mean,trunc_se";
  } else {
    for (std::size_t k = 1; k <= d; ++k) out << ",trunc_mean" << k << ",trunc_se" << k;
  }
  out << '\n';
  for (const auto& pt : report.tail_curve) {
    out << format_double(pt.t) << ',' << format_double(pt.tail) << ',' << format_double(pt.tail_se);
    for (std::size_t k = 0; k < pt.trunc_mean.size(); ++k)
      out << ',' << format_double(pt.trunc_mean[k]) << ',' << format_double(pt.trunc_se[k]);
    out << '\n';
  }
}

} // namespace semilevy
