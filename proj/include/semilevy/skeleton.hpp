#pragma once

// Skeletons X_{nh} of semi-Levy processes with h = p * n1 / n2, which are
// semi-random walks of period n2, and the ball-visit / occupation statistics
// behind the recurrence sum and integral criteria.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <vector>

#include "semilevy/csv.hpp"
#include "semilevy/errors.hpp"
#include "semilevy/parallel.hpp"
#include "semilevy/random.hpp"
#include "semilevy/schedule.hpp"

namespace semilevy {

/// Step h = p * n1 / n2 held as an exact rational multiple of the period,
/// reduced to lowest terms on construction.
class RationalStep {
public:
  RationalStep(std::int64_t n1, std::int64_t n2) {
    if (n1 <= 0 || n2 <= 0) throw ConfigError("rational step: n1 and n2 must be positive");
    const std::int64_t g = std::gcd(n1, n2);
    n1_ = n1 / g;
    n2_ = n2 / g;
  }

  std::int64_t n1() const { return n1_; }
  std::int64_t n2() const { return n2_; }

  /// Time n*h as (cycle, offset), computed in integers so skeleton times land
  /// on exactly the same offsets every period.
  TimePoint time_of(std::int64_t n, double period) const {
    const std::int64_t units = n * n1_;
    return {units / n2_, period * static_cast<double>(units % n2_) / static_cast<double>(n2_)};
  }

  double step_length(double period) const {
    return period * static_cast<double>(n1_) / static_cast<double>(n2_);
  }

  bool operator==(const RationalStep&) const = default;

private:
  std::int64_t n1_ = 1;
  std::int64_t n2_ = 1;
};

/// Period of the semi-random walk {X_{nh}}.
inline std::int64_t skeleton_period(const RationalStep& rs) { return rs.n2(); }

struct WalkSample {
  std::vector<Vector> steps; // steps[n] = X_{nh}, steps[0] = 0
  RationalStep rational_step{1, 1};
  std::uint64_t seed = 0;
};

/// Streams X_{nh}, n = 0..n_steps, composing exact segment increments.
template <class Urbg, class Visit>
void walk_skeleton(const SemiLevySchedule& schedule, const RationalStep& rs, std::int64_t n_steps,
                   Urbg& rng, Visit&& visit) {
  Vector x(schedule.dim(), 0.0);
  TimePoint prev = rs.time_of(0, schedule.period());
  visit(std::int64_t{0}, static_cast<const Vector&>(x));
  for (std::int64_t n = 1; n <= n_steps; ++n) {
    const TimePoint cur = rs.time_of(n, schedule.period());
    add_into(x, sample_exposed(schedule, schedule.exposure(prev, cur), rng));
    prev = cur;
    visit(n, static_cast<const Vector&>(x));
  }
}

inline WalkSample sample_walk(const SemiLevySchedule& schedule, const RationalStep& rs, std::int64_t n_steps,
                              std::uint64_t seed) {
  if (n_steps < 1) throw PreconditionError("sample_walk: n_steps must be at least 1");
  WalkSample w{{}, rs, seed};
  w.steps.reserve(static_cast<std::size_t>(n_steps) + 1);
  Rng rng(seed);
  walk_skeleton(schedule, rs, n_steps, rng, [&](std::int64_t, const Vector& x) { w.steps.push_back(x); });
  return w;
}

struct BallVisitPoint {
  std::int64_t n = 0;
  double p_hat = 0.0;       // fraction of walks with |S_n| < a
  double partial_sum = 0.0; // sum_{k=1..n} p_hat(k)
};

inline std::vector<BallVisitPoint> ball_visit_curve_from_counts(std::span<const std::int64_t> hits,
                                                                std::int64_t n_walks) {
  std::vector<BallVisitPoint> curve;
  curve.reserve(hits.size());
  double running = 0.0;
  for (std::size_t n = 1; n <= hits.size(); ++n) {
    const double p = static_cast<double>(hits[n - 1]) / static_cast<double>(n_walks);
    running += p;
    curve.push_back({static_cast<std::int64_t>(n), p, running});
  }
  return curve;
}

/// Estimated P(S_n in B_a) for n = 1..N from an ensemble of walks of common length.
inline std::vector<BallVisitPoint> ball_visit_curve(std::span<const WalkSample> walks, double a) {
  if (walks.empty()) throw PreconditionError("ball_visit_curve: no walks given");
  if (walks.size() < 30) throw PreconditionError("ball_visit_curve: needs at least 30 walks");
  if (!(a > 0.0)) throw PreconditionError("ball_visit_curve: radius must be positive");
  const std::size_t len = walks.front().steps.size();
  std::vector<std::int64_t> hits(len > 0 ? len - 1 : 0, 0);
  for (const auto& w : walks) {
    if (w.steps.size() != len) throw PreconditionError("ball_visit_curve: walks must have a common length");
    for (std::size_t n = 1; n < len; ++n)
      if (norm(w.steps[n]) < a) ++hits[n - 1];
  }
  return ball_visit_curve_from_counts(hits, static_cast<std::int64_t>(walks.size()));
}

/// Same estimate without storing walks: walk i uses stream_seed(seed, i).
inline std::vector<BallVisitPoint> simulate_ball_visits(const SemiLevySchedule& schedule, const RationalStep& rs,
                                                        std::int64_t n_steps, std::int64_t n_walks, double a,
                                                        std::uint64_t seed, unsigned threads = 0) {
  if (n_walks < 30) throw PreconditionError("ball_visit_curve: needs at least 30 walks");
  if (n_steps < 1) throw PreconditionError("sample_walk: n_steps must be at least 1");
  if (!(a > 0.0)) throw PreconditionError("ball_visit_curve: radius must be positive");
  const auto len = static_cast<std::size_t>(n_steps);
  std::vector<std::vector<char>> inside(static_cast<std::size_t>(n_walks));
  parallel_for(inside.size(), threads, [&](std::size_t i) {
    auto& flags = inside[i];
    flags.assign(len, 0);
    Rng rng = make_stream(seed, i);
    walk_skeleton(schedule, rs, n_steps, rng, [&](std::int64_t n, const Vector& x) {
      if (n > 0 && norm(x) < a) flags[static_cast<std::size_t>(n - 1)] = 1;
    });
  });
  std::vector<std::int64_t> hits(len, 0);
  for (const auto& flags : inside)
    for (std::size_t n = 0; n < len; ++n) hits[n] += flags[n];
  return ball_visit_curve_from_counts(hits, n_walks);
}

inline void write_ball_visit_csv(std::ostream& out, std::span<const BallVisitPoint> curve) {
  out << "n,p_hat,partial_sum\n";
  for (const auto& row : curve)
    out << row.n << ',' << format_double(row.p_hat) << ',' << format_double(row.partial_sum) << '\n';
}

// ---------------------------------------------------------------------------
// Occupation time.

/// Left-endpoint Riemann sum of the time spent in the open ball B_a.
inline double occupation_time(const PathSample& path, double a) {
  if (path.grid.empty()) throw PreconditionError("occupation_time: empty path");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.grid.size(); ++i)
    if (norm(path.values[i]) < a) total += path.grid[i + 1] - path.grid[i];
  return total;
}

inline void write_occupation_csv(std::ostream& out, std::span<const double> occupations) {
  out << "path_id,occupation\n";
  for (std::size_t i = 0; i < occupations.size(); ++i) out << i << ',' << format_double(occupations[i]) << '\n';
}

} // namespace semilevy
