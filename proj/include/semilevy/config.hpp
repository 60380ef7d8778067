#pragma once

// Plain-text run configuration.
//
//   # comment
//   [schedule]
//   period  = 3
//   dim     = 1                       (optional, default 1; needed by stable models in d > 1)
//   segment = 1 brownian drift=1 var=1
//   segment = 2 brownian drift=-0.5 var=1 + poisson rate=2 jump=point:1
//
//   [run]
//   command   = classify              (optional; the CLI subcommand must agree)
//   seed      = 42                    (mandatory)
//   threads   = 0                     (0 = all cores)
//   a = 1   q0 = 0.01   levels = 8   step = 0.01   rs = 1/2   n_steps = 1000
//   horizons = 100,200,400   t_grid = 10,30,100   n_paths = 200   n_samples = 100000
//
// Segment models (`+` joins independent components into a sum):
//   brownian drift=<vec> var=<real> | cov=<matrix>
//   stable   alpha=<real> scale=<real>
//   poisson  rate=<real> jump=point:<vec> | uniform:<vec>:<vec> | gauss:<vec>:<matrix> | laplace:<vec>:<real>
//   drift    gamma=<vec>
// <vec> is comma-separated; <matrix> is rows separated by ';' (a single number means that multiple of I).

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "semilevy/csv.hpp"
#include "semilevy/errors.hpp"
#include "semilevy/levy_models.hpp"
#include "semilevy/schedule.hpp"
#include "semilevy/skeleton.hpp"

namespace semilevy {

enum class Command { Simulate, Classify, Skeleton, Lln };

inline const char* to_string(Command c) {
  switch (c) {
  case Command::Simulate: return "simulate";
  case Command::Classify: return "classify";
  case Command::Skeleton: return "skeleton";
  case Command::Lln: return "lln";
  }
  return "?";
}

inline std::optional<Command> parse_command(std::string_view s) {
  if (s == "simulate") return Command::Simulate;
  if (s == "classify") return Command::Classify;
  if (s == "skeleton") return Command::Skeleton;
  if (s == "lln") return Command::Lln;
  return std::nullopt;
}

struct RunConfig {
  explicit RunConfig(SemiLevySchedule s) : schedule(std::move(s)) {}

  SemiLevySchedule schedule;
  std::optional<Command> command;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double a = 1.0;
  std::optional<std::vector<double>> horizons;
  double step = 0.01;
  double q0 = 1e-2;
  int levels = 8;
  std::optional<std::int64_t> n_paths;
  RationalStep rs{1, 1};
  std::int64_t n_steps = 1000;
  std::vector<double> t_grid{10.0, 30.0, 100.0};
  std::int64_t n_samples = 100000;
  std::string out;

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
    if (next == std::string_view::npos) return out;
    pos = next + 1;
  }
}

inline std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto b = s.find_first_not_of(" \t", pos);
    if (b == std::string_view::npos) break;
    const auto e = s.find_first_of(" \t", b);
    out.push_back(s.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b));
    pos = e == std::string_view::npos ? s.size() : e;
  }
  return out;
}

class LineError {
public:
  explicit LineError(std::size_t line) : line_(line) {}
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("line " + std::to_string(line_) + ": " + msg);
  }

private:
  std::size_t line_;
};

inline double to_real(std::string_view s, const LineError& at) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    at.fail("expected a number, got '" + std::string(s) + "'");
  return v;
}

template <class Int>
Int to_int(std::string_view s, const LineError& at) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) at.fail("expected an integer, got '" + std::string(s) + "'");
  return v;
}

inline Vector to_vector(std::string_view s, const LineError& at) {
  Vector v;
  for (auto part : split(s, ',')) v.push_back(to_real(part, at));
  return v;
}

inline Matrix to_matrix(std::string_view s, std::size_t dim, const LineError& at) {
  const auto rows = split(s, ';');
  if (rows.size() == 1 && split(rows[0], ',').size() == 1) return Matrix::identity(dim, to_real(rows[0], at));
  if (rows.size() != dim) at.fail("matrix must have " + std::to_string(dim) + " rows");
  Matrix m(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const Vector row = to_vector(rows[r], at);
    if (row.size() != dim) at.fail("matrix row " + std::to_string(r + 1) + " must have " + std::to_string(dim) + " entries");
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = row[c];
  }
  return m;
}

inline JumpDistribution parse_jump(std::string_view s, std::size_t dim, const LineError& at) {
  const auto parts = split(s, ':');
  const auto kind = parts[0];
  auto need = [&](std::size_t n) {
    if (parts.size() != n) at.fail("jump '" + std::string(kind) + "' takes " + std::to_string(n - 1) + " fields");
  };
  if (kind == "point") {
    need(2);
    return PointMass{to_vector(parts[1], at)};
  }
  if (kind == "uniform") {
    need(3);
    return UniformBox{to_vector(parts[1], at), to_vector(parts[2], at)};
  }
  if (kind == "gauss") {
    need(3);
    Vector m = to_vector(parts[1], at);
    Matrix c = to_matrix(parts[2], m.size(), at);
    return make_gaussian_jump(std::move(m), std::move(c));
  }
  if (kind == "laplace") {
    need(3);
    return LaplaceJump{to_vector(parts[1], at), to_real(parts[2], at)};
  }
  (void)dim;
  at.fail("unknown jump distribution '" + std::string(kind) + "'");
}

inline LevyModel parse_model(std::span<const std::string_view> toks, std::size_t dim, const LineError& at) {
  if (toks.empty()) at.fail("missing model kind");
  const auto kind = toks[0];
  std::vector<std::pair<std::string_view, std::string_view>> kv;
  for (std::size_t i = 1; i < toks.size(); ++i) {
    const auto eq = toks[i].find('=');
    if (eq == std::string_view::npos) at.fail("expected key=value, got '" + std::string(toks[i]) + "'");
    kv.emplace_back(toks[i].substr(0, eq), toks[i].substr(eq + 1));
  }
  auto get = [&](std::string_view key) -> std::optional<std::string_view> {
    for (const auto& [k, v] : kv)
      if (k == key) return v;
    return std::nullopt;
  };
  auto allow = [&](std::initializer_list<std::string_view> keys) {
    for (const auto& [k, v] : kv) {
      bool ok = false;
      for (auto key : keys) ok = ok || key == k;
      if (!ok) at.fail("unknown parameter '" + std::string(k) + "' for model '" + std::string(kind) + "'");
    }
  };
  try {
    if (kind == "brownian") {
      allow({"drift", "var", "cov"});
      Vector drift = get("drift") ? to_vector(*get("drift"), at) : Vector(dim, 0.0);
      if (get("var") && get("cov")) at.fail("brownian: give var or cov, not both");
      const auto cov = get("cov") ? get("cov") : get("var");
      Matrix c = cov ? to_matrix(*cov, drift.size(), at) : Matrix::identity(drift.size());
      return LevyModel::brownian(std::move(drift), std::move(c));
    }
    if (kind == "stable") {
      allow({"alpha", "scale"});
      if (!get("alpha")) at.fail("stable: alpha is required");
      const double scale = get("scale") ? to_real(*get("scale"), at) : 1.0;
      return LevyModel::stable(to_real(*get("alpha"), at), scale, dim);
    }
    if (kind == "poisson") {
      allow({"rate", "jump"});
      if (!get("rate") || !get("jump")) at.fail("poisson: rate and jump are required");
      return LevyModel::compound_poisson(to_real(*get("rate"), at), parse_jump(*get("jump"), dim, at));
    }
    if (kind == "drift") {
      allow({"gamma"});
      return LevyModel::drift(get("gamma") ? to_vector(*get("gamma"), at) : Vector(dim, 0.0));
    }
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.rfind("line ", 0) == 0) throw;
    at.fail(msg);
  }
  at.fail("unknown model kind '" + std::string(kind) + "'");
}

inline std::string render_vector(const Vector& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

inline std::string render_matrix(const Matrix& m) {
  std::string s;
  for (std::size_t r = 0; r < m.n; ++r) {
    if (r) s += ';';
    for (std::size_t c = 0; c < m.n; ++c) s += (c ? "," : "") + format_double(m(r, c));
  }
  return s;
}

inline std::string render_jump(const JumpDistribution& j) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PointMass>) return "point:" + render_vector(d.at);
        else if constexpr (std::is_same_v<T, UniformBox>)
          return "uniform:" + render_vector(d.lo) + ":" + render_vector(d.hi);
        else if constexpr (std::is_same_v<T, GaussianJump>)
          return "gauss:" + render_vector(d.mean) + ":" + render_matrix(d.covariance);
        else return "laplace:" + render_vector(d.location) + ":" + format_double(d.scale);
      },
      j);
}

inline std::string render_model(const LevyModel& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BrownianDrift>)
          return "brownian drift=" + render_vector(m.drift) + " cov=" + render_matrix(m.covariance);
        else if constexpr (std::is_same_v<T, SymmetricStable>)
          return "stable alpha=" + format_double(m.alpha) + " scale=" + format_double(m.scale);
        else if constexpr (std::is_same_v<T, CompoundPoisson>)
          return "poisson rate=" + format_double(m.rate) + " jump=" + render_jump(m.jump);
        else if constexpr (std::is_same_v<T, PureDrift>) return "drift gamma=" + render_vector(m.drift);
        else {
          std::string s;
          for (std::size_t i = 0; i < m.parts.size(); ++i) {
            if (m.parts[i].kind().index() == 4) throw ConfigError("render: nested sums are not representable");
            s += (i ? " + " : "") + render_model(m.parts[i]);
          }
          return s;
        }
      },
      model.kind());
}

inline std::string render_list(const std::vector<double>& v) { return render_vector(v); }

} // namespace detail

/// Parses the configuration text; all schedule invariants are checked here.
inline RunConfig parse_config(std::string_view text) {
  enum class Section { None, Schedule, Run } section = Section::None;
  std::optional<double> period;
  std::size_t dim = 1;
  bool dim_seen = false;
  struct PendingSegment {
    std::size_t line;
    std::string text;
  };
  std::vector<PendingSegment> pending;
  std::vector<std::pair<std::size_t, std::pair<std::string, std::string>>> run_keys;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    const detail::LineError at(lineno);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line == "[schedule]") section = Section::Schedule;
      else if (line == "[run]") section = Section::Run;
      else at.fail("unknown section " + std::string(line));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) at.fail("expected key = value");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (value.empty()) at.fail("missing value for '" + std::string(key) + "'");
    if (section == Section::Schedule) {
      if (key == "period") {
        period = detail::to_real(value, at);
      } else if (key == "dim") {
        dim = detail::to_int<std::size_t>(value, at);
        if (dim == 0) at.fail("dim must be positive");
        dim_seen = true;
      } else if (key == "segment") {
        pending.push_back({lineno, std::string(value)});
      } else {
        at.fail("unknown schedule key '" + std::string(key) + "'");
      }
    } else if (section == Section::Run) {
      run_keys.push_back({lineno, {std::string(key), std::string(value)}});
    } else {
      at.fail("key outside of a [schedule] or [run] section");
    }
  }

  if (!period) throw ConfigError("schedule: missing period");
  if (pending.empty()) throw ConfigError("schedule: needs at least one segment");
  std::vector<Segment> segments;
  for (const auto& seg : pending) {
    const detail::LineError at(seg.line);
    const auto toks = detail::tokens(seg.text);
    if (toks.size() < 2) at.fail("segment needs a duration and a model");
    const double duration = detail::to_real(toks[0], at);
    std::vector<LevyModel> parts;
    std::size_t begin = 1;
    for (std::size_t i = 1; i <= toks.size(); ++i) {
      if (i == toks.size() || toks[i] == "+") {
        parts.push_back(detail::parse_model(std::span(toks).subspan(begin, i - begin), dim, at));
        begin = i + 1;
      }
    }
    try {
      LevyModel model = parts.size() == 1 ? std::move(parts.front()) : LevyModel::sum(std::move(parts));
      if (dim_seen && model.dim() != dim) at.fail("model dimension " + std::to_string(model.dim()) +
                                                  " does not match dim = " + std::to_string(dim));
      segments.push_back({duration, std::move(model)});
    } catch (const ConfigError& e) {
      if (std::string(e.what()).rfind("line ", 0) == 0) throw;
      at.fail(e.what());
    }
  }

  RunConfig cfg(SemiLevySchedule(*period, std::move(segments)));
  bool seed_seen = false;
  for (const auto& [line, kv] : run_keys) {
    const detail::LineError at(line);
    const auto& [key, value] = kv;
    auto positive = [&](double v) {
      if (!(v > 0.0)) at.fail(key + " must be positive");
      return v;
    };
    auto positive_list = [&](std::string_view s) {
      std::vector<double> v = detail::to_vector(s, at);
      for (std::size_t i = 0; i < v.size(); ++i) {
        positive(v[i]);
        if (i > 0 && !(v[i] > v[i - 1])) at.fail(key + " must be increasing");
      }
      return v;
    };
    if (key == "command") {
      cfg.command = parse_command(value);
      if (!cfg.command) at.fail("unknown command '" + value + "'");
    } else if (key == "seed") {
      cfg.seed = detail::to_int<std::uint64_t>(value, at);
      seed_seen = true;
    } else if (key == "threads") {
      cfg.threads = detail::to_int<unsigned>(value, at);
    } else if (key == "a") {
      cfg.a = positive(detail::to_real(value, at));
    } else if (key == "horizons") {
      cfg.horizons = positive_list(value);
    } else if (key == "step") {
      cfg.step = positive(detail::to_real(value, at));
    } else if (key == "q0") {
      cfg.q0 = positive(detail::to_real(value, at));
    } else if (key == "levels") {
      cfg.levels = detail::to_int<int>(value, at);
      if (cfg.levels < 6) at.fail("levels must be at least 6");
    } else if (key == "n_paths") {
      cfg.n_paths = detail::to_int<std::int64_t>(value, at);
      if (*cfg.n_paths < 1) at.fail("n_paths must be positive");
    } else if (key == "rs") {
      const auto parts = detail::split(value, '/');
      if (parts.size() != 2) at.fail("rs must be written n1/n2");
      try {
        cfg.rs = RationalStep(detail::to_int<std::int64_t>(parts[0], at), detail::to_int<std::int64_t>(parts[1], at));
      } catch (const ConfigError& e) {
        if (std::string(e.what()).rfind("line ", 0) == 0) throw;
        at.fail(e.what());
      }
    } else if (key == "n_steps") {
      cfg.n_steps = detail::to_int<std::int64_t>(value, at);
      if (cfg.n_steps < 1) at.fail("n_steps must be positive");
    } else if (key == "t_grid") {
      cfg.t_grid = positive_list(value);
    } else if (key == "n_samples") {
      cfg.n_samples = detail::to_int<std::int64_t>(value, at);
      if (cfg.n_samples < 1) at.fail("n_samples must be positive");
    } else if (key == "out") {
      cfg.out = value;
    } else {
      at.fail("unknown run key '" + key + "'");
    }
  }
  if (!seed_seen) throw ConfigError("run: seed is mandatory");
  return cfg;
}

/// Canonical text form; parse_config(render_config(c)) == c.
inline std::string render_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[schedule]\n";
  out << "period = " << format_double(cfg.schedule.period()) << '\n';
  out << "dim = " << cfg.schedule.dim() << '\n';
  for (const auto& seg : cfg.schedule.segments())
    out << "segment = " << format_double(seg.duration) << ' ' << detail::render_model(seg.model) << '\n';
  out << "\n[run]\n";
  if (cfg.command) out << "command = " << to_string(*cfg.command) << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "threads = " << cfg.threads << '\n';
  out << "a = " << format_double(cfg.a) << '\n';
  if (cfg.horizons) out << "horizons = " << detail::render_list(*cfg.horizons) << '\n';
  out << "step = " << format_double(cfg.step) << '\n';
  out << "q0 = " << format_double(cfg.q0) << '\n';
  out << "levels = " << cfg.levels << '\n';
  if (cfg.n_paths) out << "n_paths = " << *cfg.n_paths << '\n';
  out << "rs = " << cfg.rs.n1() << '/' << cfg.rs.n2() << '\n';
  out << "n_steps = " << cfg.n_steps << '\n';
  out << "t_grid = " << detail::render_list(cfg.t_grid) << '\n';
  out << "n_samples = " << cfg.n_samples << '\n';
  if (!cfg.out.empty()) out << "out = " << cfg.out << '\n';
  return out.str();
}

} // namespace semilevy
