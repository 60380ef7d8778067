// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "semilevy/semilevy.hpp"

namespace semilevy {
namespace {

using std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

SemiLevySchedule bm(std::size_t d) {
  return SemiLevySchedule::single(LevyModel::brownian(Vector(d, 0.0), Matrix::identity(d)));
}

double bm1_oracle(double a, double q) { return 2.0 * std::sqrt(2.0 / q) * std::atan(a / std::sqrt(2.0 * q)); }
double bm3_oracle(double a, double q) {
  return 8.0 * pi * (a - std::sqrt(2.0 * q) * std::atan(a / std::sqrt(2.0 * q)));
}
double cauchy_oracle(double a, double q) { return 2.0 * std::log1p(a / q); }

LevyModel random_model(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (gen() % 4) {
  case 0: return LevyModel::brownian(2.0 * u(gen) - 1.0, 0.2 + u(gen));
  case 1: return LevyModel::stable(0.3 + 1.7 * u(gen), 0.2 + u(gen));
  case 2: return LevyModel::compound_poisson(0.5 + 2.0 * u(gen), LaplaceJump{{2.0 * u(gen) - 1.0}, 0.2 + u(gen)});
  default: return LevyModel::sum({LevyModel::drift(2.0 * u(gen) - 1.0), LevyModel::brownian(0.0, 0.1 + u(gen))});
  }
}

void criterion_1(Outcome& o) {
  const double q = 1e-6;
  const double scaled = chung_fuchs_integral(bm(1), 1.0, q).value * std::sqrt(q);
  const double oracle_scaled = bm1_oracle(1.0, q) * std::sqrt(q);
  const Verdict v = chung_fuchs_verdict(bm(1));
  const double beta = v.number("beta").value_or(NAN);
  o.detail << "I*sqrt(q)=" << scaled << " oracle=" << oracle_scaled << " pi*sqrt2=" << pi * std::sqrt(2.0)
           << " decision=" << to_string(v.decision) << " beta=" << beta;
  o.require(std::abs(scaled / (pi * std::sqrt(2.0)) - 1.0) <= 0.01, "I*sqrt(q) within 1% of pi*sqrt(2)");
  o.require(std::abs(scaled / oracle_scaled - 1.0) <= 0.01, "within 1% of closed form");
  o.require(v.decision == Decision::Recurrent, "Recurrent");
  o.require(beta >= 0.45 && beta <= 0.55, "beta in [0.45, 0.55]");
}

void criterion_2(Outcome& o) {
  const auto ladder = chung_fuchs_ladder(bm(3), 1.0, 1e-2, 8);
  double worst = 0.0;
  for (std::size_t k = 0; k < ladder.q.size(); ++k) {
    const double oracle = bm3_oracle(1.0, ladder.q[k]);
    worst = std::max(worst, std::abs(ladder.integral[k].value / oracle - 1.0));
  }
  const Verdict v = chung_fuchs_verdict(bm(3));
  o.detail << "max_rel_err=" << worst << " over " << ladder.q.size() << " rungs, decision=" << to_string(v.decision);
  o.require(worst <= 0.02, "every rung within 2%");
  o.require(v.decision == Decision::Transient, "Transient");
}

void criterion_3(Outcome& o) {
  const auto cauchy = SemiLevySchedule::single(LevyModel::stable(1.0, 1.0));
  double worst = 0.0;
  for (double q : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    worst = std::max(worst, std::abs(chung_fuchs_integral(cauchy, 1.0, q).value / cauchy_oracle(1.0, q) - 1.0));
  }
  const Verdict v = chung_fuchs_verdict(cauchy);
  o.detail << "max_rel_err=" << worst << " decision=" << to_string(v.decision)
           << " fit=" << v.label("fit").value_or("?");
  o.require(worst <= 0.01, "within 1% of 2 ln(1 + a/q)");
  o.require(v.decision == Decision::Recurrent, "Recurrent");
  o.require(v.label("fit") == "log", "log fit");
}

void criterion_4(Outcome& o) {
  int checked = 0;
  for (double p : {1.0, 3.0, 7.5}) {
    for (double frac : {0.1, 0.5, 0.9}) {
      const double q = frac * p;
      const Verdict rec = mean_criterion(make_splice(LevyModel::drift(p - q), LevyModel::drift(-q), q, p));
      const Verdict tra = mean_criterion(make_splice(LevyModel::drift(1.0), LevyModel::drift(1.0), q, p));
      o.require(rec.decision == Decision::Recurrent, "drift splice (p-q, -q) Recurrent");
      o.require(tra.decision == Decision::Transient, "drift splice (1, 1) Transient");
      ++checked;
    }
  }
  o.detail << checked << " (q, p) pairs checked for both fixtures";
}

void criterion_5(Outcome& o) {
  std::mt19937_64 gen(20240515);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int conclusive = 0, trials = 0, agree = 0;
  while (conclusive < 5 && trials < 40) {
    ++trials;
    const double p = 0.5 + 3.0 * u(gen);
    const double q = p * (0.1 + 0.8 * u(gen));
    const auto s = make_splice(random_model(gen), random_model(gen), q, p);
    const Verdict vs = chung_fuchs_verdict(s);
    const Verdict ve = chung_fuchs_verdict(SemiLevySchedule::single(equivalent_levy_model(s)));
    if (vs.decision == Decision::Inconclusive && ve.decision == Decision::Inconclusive) continue;
    ++conclusive;
    if (vs.decision == ve.decision) ++agree;
    o.detail << to_string(vs.decision)[0] << (vs.decision == ve.decision ? '=' : '!') << to_string(ve.decision)[0]
             << ' ';
  }
  o.detail << "agree=" << agree << "/" << conclusive << " after " << trials << " draws";
  o.require(conclusive == 5, "5 conclusive schedules found");
  o.require(agree == conclusive, "splice and equivalent process agree");
}

void criterion_6(Outcome& o) {
  const auto s = make_splice(LevyModel::brownian(0.5, 1.0),
                             LevyModel::compound_poisson(2.0, UniformBox{{-1.0}, {2.0}}), 0.7, 2.0);
  const double p = s.period();
  constexpr std::size_t n = 10000;
  std::mt19937_64 gen(606);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int rejections = 0, tests = 0;
  double min_p = 1.0;
  for (int pair = 0; pair < 3; ++pair) {
    double a = u(gen) * 2 * p, b = u(gen) * 2 * p;
    if (a > b) std::swap(a, b);
    for (int rep = 0; rep < 3; ++rep) {
      Rng r1(stream_seed(1000 + pair, rep)), r2(stream_seed(2000 + pair, rep));
      std::vector<double> x(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = sample_increment(s, a, b, r1)[0];
        y[i] = sample_increment(s, a + p, b + p, r2)[0];
      }
      const double pv = stats::ks_two_sample(x, y).p_value;
      min_p = std::min(min_p, pv);
      ++tests;
      if (pv < 0.01) ++rejections;
    }
  }
  o.detail << "rejections=" << rejections << "/" << tests << " min_p=" << min_p;
  o.require(rejections <= 1, "at most 1 rejection at alpha 0.01");
}

void criterion_7(Outcome& o) {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double p = 0.5 + 4.0 * u(gen);
    const double q = p * (0.05 + 0.9 * u(gen));
    const LevyModel y = random_model(gen), z = random_model(gen);
    const double w = 20.0 * u(gen) - 10.0;
    const auto lhs = char_exponent_Xp(make_splice(y, z, q, p), w);
    const auto rhs = q * char_exponent(y, w) + (p - q) * char_exponent(z, w);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  o.detail << "max_rel_err=" << worst;
  o.require(worst <= 1e-12, "identity to 1e-12");
}

void criterion_8(Outcome& o) {
  const std::vector<double> horizons{1000.0};
  const double bound = 3.0 / std::sqrt(1000.0);
  const auto zero = slln_check(make_splice(LevyModel::brownian(0.0, 1.0), LevyModel::brownian(0.0, 1.0), 1.0, 2.0),
                               horizons, 100, 42);
  const auto shifted = slln_check(make_splice(LevyModel::brownian(1.0, 1.0), LevyModel::brownian(0.5, 1.0), 1.0, 3.0),
                                  horizons, 100, 43);
  const double target = (*shifted.target)[0];
  o.detail << "zero_mean: mean|X_T/T|=" << zero.deviations.back().mean_dev << " nonzero: target=" << target
           << " mean|X_T/T - target|=" << shifted.deviations.back().mean_dev << " bound=" << bound;
  o.require(zero.deviations.back().mean_dev <= 0.095, "zero-mean deviation <= 0.095");
  o.require(std::abs(target - 2.0 / 3.0) <= 1e-12, "target E[X_p]/p");
  o.require(shifted.deviations.back().mean_dev <= bound, "nonzero-mean deviation within 3x CLT scale");
}

void criterion_9(Outcome& o) {
  const double c = 1.0;
  const std::vector<double> t_grid{10.0, 30.0, 100.0};
  const auto cauchy = wlln_conditions(SemiLevySchedule::single(LevyModel::stable(1.0, c)), t_grid, 100000, 9);
  for (const auto& pt : cauchy.tail_curve) {
    o.detail << "t=" << pt.t << ":" << pt.tail << "+-" << pt.tail_se << " ";
    o.require(std::abs(pt.tail - 2 * c / pi) <= 3 * pt.tail_se, "Cauchy tail within 3 SE of 2c/pi");
  }
  o.require(!cauchy.implied_c, "no constant c for Cauchy");
  const std::vector<double> t10{10.0};
  const auto gauss = wlln_conditions(bm(1), t10, 100000, 10);
  o.detail << "gaussian t=10: " << gauss.tail_curve.back().tail;
  o.require(gauss.tail_curve.back().tail < 0.01, "Gaussian tail < 0.01 at t = 10");
}

void criterion_10(Outcome& o) {
  constexpr std::int64_t n_walks = 10000;
  const auto rec = simulate_ball_visits(bm(1), RationalStep(1, 1), 1000, n_walks, 1.0, 1010);
  const double s500 = rec[499].partial_sum, s1000 = rec[999].partial_sum;
  const auto tra = simulate_ball_visits(SemiLevySchedule::single(LevyModel::drift(1.0)), RationalStep(1, 1), 1000,
                                        n_walks, 1.0, 1011);
  const double t3 = tra[2].partial_sum, t1000 = tra[999].partial_sum;
  o.detail << "bm: S(500)=" << s500 << " S(1000)=" << s1000 << " growth=" << s1000 / s500 - 1.0
           << " drift: S(3)=" << t3 << " S(1000)=" << t1000;
  o.require(s1000 > 10.0, "recurrent partial sum at N=1000 exceeds 10");
  o.require(s1000 >= 1.25 * s500, "growth >= 25% from N=500 to N=1000");
  o.require(t1000 <= 2.0, "transient partial sum <= 2");
  o.require(t1000 == t3, "transient partial sum flat after n=3");
}

struct AcceptanceItem {
  int id;
  const char* title;
  double budget_seconds;
  std::function<void(Outcome&)> run;
};

} // namespace
} // namespace semilevy

int main() {
  using namespace semilevy;
  const std::vector<AcceptanceItem> criteria{
      {1, "Chung-Fuchs d=1 Brownian motion", 5.0, criterion_1},
      {2, "Chung-Fuchs d=3 Brownian motion", 60.0, criterion_2},
      {3, "Chung-Fuchs d=1 symmetric Cauchy", 5.0, criterion_3},
      {4, "mean criterion drift splices", 1.0, criterion_4},
      {5, "splice vs equivalent Levy process", 60.0, criterion_5},
      {6, "periodicity of increment laws", 30.0, criterion_6},
      {7, "splice exponent identity", 1.0, criterion_7},
      {8, "strong law of large numbers", 60.0, criterion_8},
      {9, "weak law tail conditions", 30.0, criterion_9},
      {10, "skeleton ball-visit sums", 60.0, criterion_10},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream budget;
    budget << "runtime " << secs << "s within " << c.budget_seconds << "s";
    o.require(secs <= c.budget_seconds, budget.str());
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s): %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail.str().c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
