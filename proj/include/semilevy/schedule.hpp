#pragma once

// Semi-Levy processes as periodic schedules of Levy segments. On every period
// [np, (n+1)p) the process follows segment k's dynamics for duration_k time
// units, in order. Increments over disjoint intervals are independent, and
// X_{t+p} - X_{s+p} has the same law as X_t - X_s.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "semilevy/csv.hpp"
#include "semilevy/errors.hpp"
#include "semilevy/levy_models.hpp"
#include "semilevy/random.hpp"

namespace semilevy {

struct Segment {
  double duration = 0.0;
  LevyModel model;
  bool operator==(const Segment&) const = default;
};

/// A time t written as cycle * period + offset with offset in [0, period).
struct TimePoint {
  std::int64_t cycle = 0;
  double offset = 0.0;
};

class SemiLevySchedule {
public:
  static constexpr double kBoundaryTolerance = 1e-12;

  SemiLevySchedule(double period, std::vector<Segment> segments)
      : period_(period), segments_(std::move(segments)) {
    if (!(period_ > 0.0) || !std::isfinite(period_)) throw ConfigError("schedule: period must be positive");
    if (segments_.empty()) throw ConfigError("schedule: needs at least one segment");
    dim_ = segments_.front().model.dim();
    double total = 0.0;
    for (const auto& s : segments_) {
      if (!(s.duration > 0.0)) throw ConfigError("schedule: segment durations must be positive");
      if (s.model.dim() != dim_) throw ConfigError("schedule: all segment models must share the same dimension");
      starts_.push_back(total);
      total += s.duration;
    }
    if (std::abs(total - period_) > kBoundaryTolerance * period_) {
      throw ConfigError("schedule: segment durations sum to " + format_double(total) +
                        " but the period is " + format_double(period_));
    }
  }

  /// An ordinary Levy process viewed as a schedule with one segment.
  static SemiLevySchedule single(LevyModel model, double period = 1.0) {
    return SemiLevySchedule(period, {Segment{period, std::move(model)}});
  }

  double period() const { return period_; }
  std::size_t dim() const { return dim_; }
  const std::vector<Segment>& segments() const { return segments_; }

  /// Segment k occupies [start(k), end(k)) inside each period.
  double start(std::size_t k) const { return starts_[k]; }
  double end(std::size_t k) const { return k + 1 < starts_.size() ? starts_[k + 1] : period_; }

  TimePoint reduce(double t) const {
    if (!(t >= 0.0) || !std::isfinite(t)) throw PreconditionError("schedule: times must be finite and nonnegative");
    double n = std::floor(t / period_);
    double r = std::fma(-n, period_, t);
    if (r < 0.0) {
      n -= 1.0;
      r += period_;
    }
    if (r >= period_ * (1.0 - kBoundaryTolerance)) {
      n += 1.0;
      r = 0.0;
    } else if (r < kBoundaryTolerance * period_) {
      r = 0.0;
    }
    return {static_cast<std::int64_t>(n), r};
  }

  /// Index of the segment governing the dynamics at time t, using right-closed
  /// pieces (np + start_k, np + end_k]; t = 0 belongs to the first segment.
  std::size_t active_segment(double t) const {
    const TimePoint tp = reduce(t);
    if (tp.offset == 0.0) return tp.cycle == 0 ? 0 : segments_.size() - 1;
    for (std::size_t k = 0; k < segments_.size(); ++k)
      if (tp.offset <= end(k) + kBoundaryTolerance * period_) return k;
    return segments_.size() - 1;
  }

  /// Time spent in each segment's dynamics during [s, t].
  Vector exposure(const TimePoint& s, const TimePoint& t) const {
    Vector e(segments_.size());
    const auto cycles = static_cast<double>(t.cycle - s.cycle);
    for (std::size_t k = 0; k < e.size(); ++k) {
      e[k] = cycles * segments_[k].duration + covered(k, t.offset) - covered(k, s.offset);
      if (e[k] < 0.0) e[k] = 0.0;
    }
    return e;
  }

  Vector exposure(double s, double t) const {
    if (t < s) throw PreconditionError("schedule: exposure requires s <= t");
    return exposure(reduce(s), reduce(t));
  }

  bool operator==(const SemiLevySchedule& o) const {
    return period_ == o.period_ && segments_ == o.segments_;
  }

private:
  double covered(std::size_t k, double offset) const {
    const double c = offset - starts_[k];
    if (c <= 0.0) return 0.0;
    return std::min(c, segments_[k].duration);
  }

  double period_;
  std::vector<Segment> segments_;
  std::size_t dim_ = 0;
  std::vector<double> starts_;
};

/// Two-piece splice: Y-dynamics on (np, np+q], Z-dynamics on (np+q, (n+1)p].
inline SemiLevySchedule make_splice(LevyModel model_y, LevyModel model_z, double q, double p) {
  if (!(q > 0.0 && q < p)) throw ConfigError("splice: requires 0 < q < p");
  if (model_y.dim() != model_z.dim()) throw ConfigError("splice: models must share the same dimension");
  return SemiLevySchedule(p, {Segment{q, std::move(model_y)}, Segment{p - q, std::move(model_z)}});
}

/// log E exp(i<z, X_t - X_s>) = sum_k exposure_k(s, t) * psi_k(z).
inline Complex increment_char(const SemiLevySchedule& schedule, double s, double t,
                              std::span<const double> z) {
  if (z.size() != schedule.dim()) throw PreconditionError("increment_char: dimension mismatch");
  const Vector e = schedule.exposure(s, t);
  Complex acc{};
  for (std::size_t k = 0; k < e.size(); ++k)
    if (e[k] > 0.0) acc += e[k] * char_exponent(schedule.segments()[k].model, z);
  return acc;
}

/// Exponent of the Levy process Y with Y_1 equal in law to X_p.
inline Complex char_exponent_Xp(const SemiLevySchedule& schedule, std::span<const double> z) {
  if (z.size() != schedule.dim()) throw PreconditionError("char_exponent_Xp: dimension mismatch");
  Complex acc{};
  for (const auto& seg : schedule.segments()) acc += seg.duration * char_exponent(seg.model, z);
  return acc;
}

inline Complex char_exponent_Xp(const SemiLevySchedule& schedule, double z) {
  return char_exponent_Xp(schedule, std::span<const double>(&z, 1));
}

/// E[X_p], absent when some segment has E|L_1| = infinity.
inline std::optional<Vector> mean_Xp(const SemiLevySchedule& schedule) {
  Vector acc(schedule.dim(), 0.0);
  for (const auto& seg : schedule.segments()) {
    auto m = mean(seg.model, seg.duration);
    if (!m) return std::nullopt;
    add_into(acc, *m);
  }
  return acc;
}

/// Per-coordinate Var(X_p), absent when some segment has infinite variance.
inline std::optional<Vector> variance_Xp(const SemiLevySchedule& schedule) {
  Vector acc(schedule.dim(), 0.0);
  for (const auto& seg : schedule.segments()) {
    auto v = variance(seg.model, seg.duration);
    if (!v) return std::nullopt;
    add_into(acc, *v);
  }
  return acc;
}

/// Single Levy model whose unit-time law equals that of X_p / time-scale p:
/// its exponent is char_exponent_Xp / p.
inline LevyModel equivalent_levy_model(const SemiLevySchedule& schedule) {
  std::vector<LevyModel> parts;
  for (const auto& seg : schedule.segments())
    parts.push_back(time_scaled(seg.model, seg.duration / schedule.period()));
  if (parts.size() == 1) return std::move(parts.front());
  return LevyModel::sum(std::move(parts));
}

/// Exact draw of X_t - X_s given the exposure vector of [s, t]. Segments are
/// independent Levy pieces, so the increment is a sum of per-segment increments
/// over the total time spent in each.
template <class Urbg>
Vector sample_exposed(const SemiLevySchedule& schedule, std::span<const double> exposure, Urbg& rng) {
  Vector x(schedule.dim(), 0.0);
  for (std::size_t k = 0; k < exposure.size(); ++k)
    if (exposure[k] > 0.0) add_into(x, sample_increment(schedule.segments()[k].model, exposure[k], rng));
  return x;
}

template <class Urbg>
Vector sample_increment(const SemiLevySchedule& schedule, double s, double t, Urbg& rng) {
  return sample_exposed(schedule, schedule.exposure(s, t), rng);
}

template <class Urbg>
Vector sample_Xp(const SemiLevySchedule& schedule, Urbg& rng) {
  Vector e;
  for (const auto& seg : schedule.segments()) e.push_back(seg.duration);
  return sample_exposed(schedule, e, rng);
}

// ---------------------------------------------------------------------------
// Grid paths.

struct PathSample {
  std::vector<double> grid;
  std::vector<Vector> values;
  std::uint64_t seed = 0;
};

/// Grid 0, step, 2 step, ..., with horizon appended when it is not a multiple of step.
inline std::vector<double> make_grid(double horizon, double step) {
  if (!(step > 0.0)) throw PreconditionError("sample_path: step must be positive");
  if (!(horizon >= step)) throw PreconditionError("sample_path: horizon must be at least one step");
  const auto n = static_cast<std::size_t>(std::floor(horizon / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(static_cast<double>(i) * step);
  if (horizon - grid.back() > 1e-9 * step) grid.push_back(horizon);
  return grid;
}

/// Streams (t_i, X_{t_i}) along the grid to visit(t, value) without storing the path.
template <class Urbg, class Visit>
void walk_grid(const SemiLevySchedule& schedule, std::span<const double> grid, Urbg& rng, Visit&& visit) {
  Vector x(schedule.dim(), 0.0);
  TimePoint prev = schedule.reduce(grid.front());
  visit(grid.front(), static_cast<const Vector&>(x));
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const TimePoint cur = schedule.reduce(grid[i]);
    add_into(x, sample_exposed(schedule, schedule.exposure(prev, cur), rng));
    prev = cur;
    visit(grid[i], static_cast<const Vector&>(x));
  }
}

inline PathSample sample_path(const SemiLevySchedule& schedule, double horizon, double step, std::uint64_t seed) {
  PathSample path;
  path.seed = seed;
  path.grid = make_grid(horizon, step);
  path.values.reserve(path.grid.size());
  Rng rng(seed);
  walk_grid(schedule, path.grid, rng, [&](double, const Vector& x) { path.values.push_back(x); });
  return path;
}

/// CSV with header t,x1,...,xd and one row per grid point at full precision.
inline void write_path_csv(std::ostream& out, const PathSample& path) {
  const std::size_t d = path.values.empty() ? 0 : path.values.front().size();
  out << 't';
  for (std::size_t k = 1; k <= d; ++k) out << ",x" << k;
  out << '\n';
  for (std::size_t i = 0; i < path.grid.size(); ++i) {
    out << format_double(path.grid[i]);
    for (double v : path.values[i]) out << ',' << format_double(v);
    out << '\n';
  }
}

} // namespace semilevy
