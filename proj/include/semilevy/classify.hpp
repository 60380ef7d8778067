#pragma once

// Recurrence / transience classification of semi-Levy schedules.
//
// Analytic routes: the Chung-Fuchs integral I(q) = int_{B_a} Re 1/(q - psi(z)) dz
// of the exponent psi of X_p, followed down the ladder q_k = q0 * 4^-k, and the
// one-dimensional mean criterion E[X_p] = 0. The occupation-time diagnostic is
// Monte Carlo corroboration only and never decides on its own.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/erf.hpp>
#include <boost/random/sobol.hpp>

#include "semilevy/csv.hpp"
#include "semilevy/errors.hpp"
#include "semilevy/parallel.hpp"
#include "semilevy/quadrature.hpp"
#include "semilevy/random.hpp"
#include "semilevy/schedule.hpp"
#include "semilevy/skeleton.hpp"
#include "semilevy/stats.hpp"

namespace semilevy {

enum class Decision { Recurrent, Transient, Inconclusive };
enum class Criterion { ChungFuchs, MeanCriterion, DriftTest, Empirical };

inline const char* to_string(Decision d) {
  switch (d) {
  case Decision::Recurrent: return "Recurrent";
  case Decision::Transient: return "Transient";
  case Decision::Inconclusive: return "Inconclusive";
  }
  return "?";
}

inline const char* to_string(Criterion c) {
  switch (c) {
  case Criterion::ChungFuchs: return "ChungFuchs";
  case Criterion::MeanCriterion: return "MeanCriterion";
  case Criterion::DriftTest: return "DriftTest";
  case Criterion::Empirical: return "Empirical";
  }
  return "?";
}

struct Verdict {
  Decision decision = Decision::Inconclusive;
  Criterion criterion = Criterion::ChungFuchs;
  std::vector<std::pair<std::string, double>> evidence;
  std::vector<std::pair<std::string, std::string>> labels;
  std::string reason; // always set for Inconclusive

  std::optional<double> number(const std::string& key) const {
    for (const auto& [k, v] : evidence)
      if (k == key) return v;
    return std::nullopt;
  }

  std::optional<std::string> label(const std::string& key) const {
    for (const auto& [k, v] : labels)
      if (k == key) return v;
    return std::nullopt;
  }
};

/// One line: decision=<..> criterion=<..> [label=value...] [key=number...] [reason="..."]
inline std::string format_verdict(const Verdict& v) {
  std::ostringstream out;
  out << "decision=" << to_string(v.decision) << " criterion=" << to_string(v.criterion);
  for (const auto& [k, s] : v.labels) out << ' ' << k << '=' << s;
  for (const auto& [k, x] : v.evidence) out << ' ' << k << '=' << format_short(x);
  if (!v.reason.empty()) out << " reason=\"" << v.reason << '"';
  return out.str();
}

// ---------------------------------------------------------------------------
// Chung-Fuchs integral.

struct ChungFuchsOptions {
  double rel_tol = 1e-6;                 // d <= 2: required relative accuracy
  std::size_t qmc_points_log2 = 16;      // d >= 3: points per randomized replicate
  std::size_t qmc_replicates = 16;       // d >= 3: 16 * 2^16 > 10^6 nodes
  std::uint64_t seed = 0x5eed;           // d >= 3: replicate shifts
};


namespace detail {

/// Re 1/(q - psi) = (q - Re psi) / ((q - Re psi)^2 + (Im psi)^2), nonnegative when Re psi <= 0.
inline double chung_fuchs_integrand(const SemiLevySchedule& schedule, std::span<const double> z, double q) {
  const Complex psi = char_exponent_Xp(schedule, z);
  const double re = q - psi.real();
  const double im = psi.imag();
  return re / (re * re + im * im);
}

/// Breakpoints 0, len 2^-L, ..., len / 2, len: a dyadic pre-partition refining toward
/// 0, where the integrand concentrates as q -> 0, down to feature_scale / 1024.
inline std::vector<double> dyadic_breakpoints(double len, double feature_scale) {
  const int levels = std::clamp(static_cast<int>(std::ceil(std::log2(len / feature_scale))) + 10, 16, 1000);
  std::vector<double> pts{0.0};
  for (int k = levels; k >= 0; --k) pts.push_back(std::ldexp(len, -k));
  return pts;
}

inline double unit_sphere_area(std::size_t d) {
  const double half = 0.5 * static_cast<double>(d);
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

} // namespace detail

inline IntegralEstimate chung_fuchs_integral(const SemiLevySchedule& schedule, double a, double q,
                                             const ChungFuchsOptions& options = {}) {
  if (!(a > 0.0)) throw PreconditionError("chung_fuchs_integral: radius a must be positive");
  if (!(q > 0.0)) throw PreconditionError("chung_fuchs_integral: q must be positive");
  const std::size_t d = schedule.dim();
  const double feature = std::min(q, std::sqrt(q));
  IntegralEstimate est;

  if (d == 1) {
    auto right = [&](double x) { return detail::chung_fuchs_integrand(schedule, std::span<const double>(&x, 1), q); };
    auto left = [&](double x) {
      const double z = -x;
      return detail::chung_fuchs_integrand(schedule, std::span<const double>(&z, 1), q);
    };
    const auto pts = detail::dyadic_breakpoints(a, feature);
    const auto r = adaptive_gauss_kronrod(right, pts, 0.1 * options.rel_tol);
    const auto l = adaptive_gauss_kronrod(left, pts, 0.1 * options.rel_tol);
    est = {r.value + l.value, r.error + l.error, r.nodes + l.nodes, false};
  } else if (d == 2) {
    const double quarter[5] = {0.0, 0.5 * std::numbers::pi, std::numbers::pi, 1.5 * std::numbers::pi,
                               2.0 * std::numbers::pi};
    auto radial = [&](double r) {
      auto angular = [&](double theta) {
        const double z[2] = {r * std::cos(theta), r * std::sin(theta)};
        return detail::chung_fuchs_integrand(schedule, z, q);
      };
      const double inner_tol = 1e-3 * options.rel_tol;
      const auto inner = adaptive_gauss_kronrod(angular, quarter, inner_tol, 0.0, 2000);
      if (!(inner.error <= inner_tol * std::abs(inner.value))) {
        throw NumericalError("chung_fuchs_integral: angular quadrature did not reach relative tolerance " +
                             format_short(inner_tol) + " at radius " + format_short(r));
      }
      return r * inner.value;
    };
    est = adaptive_gauss_kronrod(radial, detail::dyadic_breakpoints(a, feature), 0.1 * options.rel_tol);
  } else {
    // Randomized QMC in spherical coordinates: radius uniform on [0, a], direction
    // uniform on the sphere, weight a * |S^{d-1}| * r^{d-1}. The r^{d-1} factor keeps
    // the integrand bounded near the origin.
    const std::size_t qdim = d == 3 ? 3 : d + 1;
    const std::size_t n = std::size_t{1} << options.qmc_points_log2;
    std::vector<double> lattice(n * qdim);
    boost::random::sobol sobol(qdim);
    for (double& u : lattice) u = std::ldexp(static_cast<double>(sobol()), -64);

    const double weight = a * detail::unit_sphere_area(d);
    Rng shift_rng(options.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> replicate(options.qmc_replicates);
    std::vector<double> shift(qdim), z(d), g(d);
    for (double& rep : replicate) {
      for (double& s : shift) s = unif(shift_rng);
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double* u = &lattice[i * qdim];
        auto wrap = [&](std::size_t j) {
          double v = u[j] + shift[j];
          return v >= 1.0 ? v - 1.0 : v;
        };
        const double r = a * wrap(0);
        if (d == 3) {
          const double c = 1.0 - 2.0 * wrap(1);
          const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
          const double phi = 2.0 * std::numbers::pi * wrap(2);
          z = {r * s * std::cos(phi), r * s * std::sin(phi), r * c};
        } else {
          for (std::size_t k = 0; k < d; ++k) {
            const double v = std::clamp(wrap(k + 1), 1e-300, 1.0 - 1e-16);
            g[k] = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * v - 1.0);
          }
          const double gn = norm(g);
          for (std::size_t k = 0; k < d; ++k) z[k] = r * g[k] / gn;
        }
        acc += std::pow(r, static_cast<double>(d - 1)) * detail::chung_fuchs_integrand(schedule, z, q);
      }
      rep = weight * acc / static_cast<double>(n);
    }
    est.value = stats::mean(replicate);
    est.error = stats::standard_error(replicate);
    est.nodes = n * options.qmc_replicates;
    est.stochastic = true;
    return est;
  }

  if (!std::isfinite(est.value) || est.error > options.rel_tol * std::abs(est.value)) {
    throw NumericalError("chung_fuchs_integral: quadrature did not reach relative tolerance " +
                         format_short(options.rel_tol) + " (estimate " + format_short(est.value) +
                         ", error " + format_short(est.error) + ")");
  }
  return est;
}

struct ChungFuchsLadder {
  std::vector<double> q;
  std::vector<IntegralEstimate> integral;
};

inline ChungFuchsLadder chung_fuchs_ladder(const SemiLevySchedule& schedule, double a, double q0, int levels,
                                           const ChungFuchsOptions& options = {}) {
  ChungFuchsLadder ladder;
  for (int k = 0; k < levels; ++k) {
    const double q = q0 * std::pow(4.0, -k);
    ladder.q.push_back(q);
    ladder.integral.push_back(chung_fuchs_integral(schedule, a, q, options));
  }
  return ladder;
}

struct ChungFuchsThresholds {
  double min_beta = 0.05;
  double min_r_squared = 0.99;
  double max_decay_ratio = 0.8;   // successive differences must shrink at least this fast
  double max_tail_fraction = 0.01;
  double min_signal_in_se = 5.0;  // QMC only
};

/// Decides divergence of I(q) as q -> 0 along q_k = q0 * 4^-k, k < levels.
///
/// Transient when the sequence is Cauchy-convergent: the last three ratios of
/// successive differences are at most max_decay_ratio and the geometric tail
/// bound |d_last| rho / (1 - rho) is below 1% of the last value. Otherwise
/// Recurrent when I grows like q^-beta (log-log fit, beta >= 0.05) or like
/// log(1/q) (semi-log fit, positive slope) with R^2 >= 0.99, taking the fit with
/// the larger R^2. Anything else is Inconclusive.
inline Verdict chung_fuchs_verdict(const SemiLevySchedule& schedule, double a = 1.0, double q0 = 1e-2,
                                   int levels = 8, const ChungFuchsOptions& options = {},
                                   const ChungFuchsThresholds& th = {}) {
  if (levels < 6) throw PreconditionError("chung_fuchs_verdict: needs at least 6 levels");
  if (!(q0 > 0.0)) throw PreconditionError("chung_fuchs_verdict: q0 must be positive");
  const ChungFuchsLadder ladder = chung_fuchs_ladder(schedule, a, q0, levels, options);

  std::vector<double> x, value, log_value;
  double max_se = 0.0;
  bool stochastic = false;
  for (std::size_t k = 0; k < ladder.q.size(); ++k) {
    x.push_back(std::log(1.0 / ladder.q[k]));
    value.push_back(ladder.integral[k].value);
    log_value.push_back(std::log(ladder.integral[k].value));
    stochastic = stochastic || ladder.integral[k].stochastic;
    if (ladder.integral[k].stochastic) max_se = std::max(max_se, ladder.integral[k].error);
  }

  Verdict v;
  v.criterion = Criterion::ChungFuchs;
  const double last = value.back();
  v.evidence = {{"a", a}, {"q_min", ladder.q.back()}, {"I_first", value.front()}, {"I_last", last}};
  if (stochastic) v.evidence.emplace_back("I_se", max_se);

  // Cauchy convergence.
  std::vector<double> diff;
  for (std::size_t k = 1; k < value.size(); ++k) diff.push_back(value[k] - value[k - 1]);
  double rho = 0.0;
  for (std::size_t k = diff.size() - 3; k < diff.size(); ++k) {
    const double prev = std::abs(diff[k - 1]);
    rho = std::max(rho, prev > 0.0 ? std::abs(diff[k]) / prev : (diff[k] == 0.0 ? 0.0 : 1.0));
  }
  const double tail = rho < 1.0 ? std::abs(diff.back()) * rho / (1.0 - rho) : std::numeric_limits<double>::infinity();
  v.evidence.emplace_back("decay_ratio", rho);
  if (std::isfinite(tail)) v.evidence.emplace_back("tail_bound", tail);

  const stats::LinearFit power = stats::fit_line(x, log_value);
  const stats::LinearFit logfit = stats::fit_line(x, value);
  v.evidence.emplace_back("beta", power.slope);
  v.evidence.emplace_back("r2_power", power.r_squared);
  v.evidence.emplace_back("log_slope", logfit.slope);
  v.evidence.emplace_back("r2_log", logfit.r_squared);

  if (rho <= th.max_decay_ratio && tail < th.max_tail_fraction * std::abs(last)) {
    v.decision = Decision::Transient;
    v.labels.emplace_back("fit", "convergent");
    return v;
  }

  const bool power_ok = power.slope >= th.min_beta && power.r_squared >= th.min_r_squared;
  const bool log_ok = logfit.slope > 0.0 && logfit.r_squared >= th.min_r_squared;
  if (power_ok || log_ok) {
    if (stochastic && !(last - value.front() > th.min_signal_in_se * max_se)) {
      v.decision = Decision::Inconclusive;
      v.reason = "growth of I(q) is within 5 standard errors of the QMC noise";
      return v;
    }
    v.decision = Decision::Recurrent;
    const bool use_log = log_ok && (!power_ok || logfit.r_squared > power.r_squared);
    v.labels.emplace_back("fit", use_log ? "log" : "power");
    return v;
  }

  v.decision = Decision::Inconclusive;
  v.reason = "I(q) neither Cauchy-convergent nor fitted by a divergent law along the q-ladder";
  return v;
}

/// Sensitivity sweep of the Chung-Fuchs verdict over the ball radius.
inline std::vector<Verdict> chung_fuchs_sweep(const SemiLevySchedule& schedule, std::span<const double> radii,
                                              double q0 = 1e-2, int levels = 8,
                                              const ChungFuchsOptions& options = {}) {
  std::vector<Verdict> out;
  for (double a : radii) out.push_back(chung_fuchs_verdict(schedule, a, q0, levels, options));
  return out;
}

// ---------------------------------------------------------------------------
// Mean criterion and drift test (d = 1).

namespace detail {
inline Verdict zero_mean_verdict(double m, double magnitude, Criterion c) {
  Verdict v;
  v.criterion = c;
  v.evidence = {{"mean", m}};
  v.decision = std::abs(m) <= 1e-12 * std::max(1.0, magnitude) ? Decision::Recurrent : Decision::Transient;
  return v;
}
} // namespace detail

/// Recurrent iff E[X_p] = 0 for one-dimensional schedules with E|X_p| finite.
inline Verdict mean_criterion(const SemiLevySchedule& schedule) {
  if (schedule.dim() != 1) throw PreconditionError("mean_criterion: stated for dimension 1 only");
  double total = 0.0, magnitude = 0.0;
  for (const auto& seg : schedule.segments()) {
    const auto m = mean(seg.model, seg.duration);
    if (!m) {
      Verdict v;
      v.criterion = Criterion::MeanCriterion;
      v.reason = "E[|X_p|] possibly infinite";
      return v;
    }
    total += (*m)[0];
    magnitude += std::abs((*m)[0]);
  }
  return detail::zero_mean_verdict(total, magnitude, Criterion::MeanCriterion);
}

/// A one-dimensional Levy process with finite mean is recurrent iff E[L_1] = 0.
inline Verdict drift_test(const LevyModel& model) {
  if (model.dim() != 1) throw PreconditionError("drift_test: stated for dimension 1 only");
  const auto m = mean(model, 1.0);
  if (!m) {
    Verdict v;
    v.criterion = Criterion::DriftTest;
    v.reason = "E[|L_1|] infinite";
    return v;
  }
  return detail::zero_mean_verdict((*m)[0], std::abs((*m)[0]), Criterion::DriftTest);
}

// ---------------------------------------------------------------------------
// Occupation-time diagnostic.

enum class OccupationFlag { RecurrenceConsistent, TransienceConsistent, Unflagged };

inline const char* to_string(OccupationFlag f) {
  switch (f) {
  case OccupationFlag::RecurrenceConsistent: return "growth-consistent-with-recurrence";
  case OccupationFlag::TransienceConsistent: return "saturation-consistent-with-transience";
  case OccupationFlag::Unflagged: return "unflagged";
  }
  return "?";
}

struct OccupationRow {
  double horizon = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  double q10 = 0.0;
  double median = 0.0;
  double q90 = 0.0;
};

struct OccupationReport {
  double radius = 0.0;
  double step = 0.0;
  std::vector<OccupationRow> rows;
  std::vector<std::vector<double>> per_path; // per_path[j][i]: path i, horizon j
  double growth_ratio = 0.0;                 // mean(last) / mean(previous)
  OccupationFlag flag = OccupationFlag::Unflagged;
};

struct EmpiricalOptions {
  double step = 0.01;
  unsigned threads = 0;
};

/// Monte Carlo occupation times of B_a up to each horizon (left-endpoint rule on
/// a grid of the given step). Path i uses stream_seed(seed, i). A diagnostic,
/// never a proof.
inline OccupationReport empirical_diagnostic(const SemiLevySchedule& schedule, double a,
                                             std::span<const double> horizons, std::int64_t n_paths,
                                             std::uint64_t seed, const EmpiricalOptions& options = {}) {
  if (n_paths < 50) throw PreconditionError("empirical_diagnostic: needs at least 50 paths");
  if (horizons.empty()) throw PreconditionError("empirical_diagnostic: needs horizons");
  for (std::size_t j = 1; j < horizons.size(); ++j)
    if (!(horizons[j] > horizons[j - 1])) throw PreconditionError("empirical_diagnostic: horizons must increase");
  if (!(a > 0.0)) throw PreconditionError("empirical_diagnostic: radius must be positive");

  OccupationReport report;
  report.radius = a;
  report.step = options.step;
  const std::vector<double> grid = make_grid(horizons.back(), options.step);
  const auto paths = static_cast<std::size_t>(n_paths);
  report.per_path.assign(horizons.size(), std::vector<double>(paths, 0.0));

  parallel_for(paths, options.threads, [&](std::size_t i) {
    Rng rng = make_stream(seed, i);
    std::vector<double> occ(horizons.size(), 0.0);
    double prev_t = 0.0;
    bool prev_inside = false;
    bool first = true;
    walk_grid(schedule, grid, rng, [&](double t, const Vector& x) {
      if (!first && prev_inside) {
        for (std::size_t j = 0; j < horizons.size(); ++j)
          if (t <= horizons[j] + 1e-9 * options.step) occ[j] += t - prev_t;
      }
      first = false;
      prev_t = t;
      prev_inside = norm(x) < a;
    });
    for (std::size_t j = 0; j < horizons.size(); ++j) report.per_path[j][i] = occ[j];
  });

  for (std::size_t j = 0; j < horizons.size(); ++j) {
    const auto& occ = report.per_path[j];
    report.rows.push_back({horizons[j], stats::mean(occ), stats::standard_error(occ), stats::quantile(occ, 0.1),
                           stats::quantile(occ, 0.5), stats::quantile(occ, 0.9)});
  }
  if (report.rows.size() >= 2) {
    const double prev = report.rows[report.rows.size() - 2].mean;
    const double last = report.rows.back().mean;
    report.growth_ratio = prev > 0.0 ? last / prev : (last > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    if (report.growth_ratio >= 1.2) report.flag = OccupationFlag::RecurrenceConsistent;
    else if (report.growth_ratio < 1.02) report.flag = OccupationFlag::TransienceConsistent;
  }
  return report;
}

/// Packs the diagnostic as an always-Inconclusive verdict so it can never be mistaken for a decision.
inline Verdict to_verdict(const OccupationReport& report) {
  Verdict v;
  v.criterion = Criterion::Empirical;
  v.decision = Decision::Inconclusive;
  v.labels.emplace_back("flag", to_string(report.flag));
  v.evidence = {{"a", report.radius}, {"step", report.step}, {"growth_ratio", report.growth_ratio}};
  if (!report.rows.empty()) v.evidence.emplace_back("mean_occupation_last", report.rows.back().mean);
  v.reason = "occupation-time diagnostic only";
  return v;
}

} // namespace semilevy
