#pragma once

// Catalog of Levy building blocks: each model carries its Levy-Khintchine data,
// a closed-form characteristic exponent psi (E exp(i<z, L_t>) = exp(t psi(z)))
// and an exact sampler for increments L_{t+dt} - L_t.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "semilevy/errors.hpp"
#include "semilevy/linalg.hpp"

namespace semilevy {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Jump distributions for compound Poisson models. All are product or Gaussian
// laws so the Fourier transform and moments are closed-form.

struct PointMass {
  Vector at;
  bool operator==(const PointMass&) const = default;
};

/// Independent uniform coordinates on the box [lo, hi].
struct UniformBox {
  Vector lo;
  Vector hi;
  bool operator==(const UniformBox&) const = default;
};

struct GaussianJump {
  Vector mean;
  Matrix covariance;
  Matrix factor; // covariance = factor * factor^T, filled by make_gaussian_jump
  bool operator==(const GaussianJump& o) const {
    return mean == o.mean && covariance == o.covariance;
  }
};

/// Independent two-sided exponential (Laplace) coordinates: location + scale * (E1 - E2).
struct LaplaceJump {
  Vector location;
  double scale = 1.0;
  bool operator==(const LaplaceJump&) const = default;
};

using JumpDistribution = std::variant<PointMass, UniformBox, GaussianJump, LaplaceJump>;

inline GaussianJump make_gaussian_jump(Vector mean, Matrix covariance) {
  if (covariance.n != mean.size()) throw ConfigError("gaussian jump: mean/covariance dimension mismatch");
  GaussianJump j{std::move(mean), std::move(covariance), {}};
  j.factor = psd_factor(j.covariance);
  return j;
}

inline std::size_t jump_dim(const JumpDistribution& j) {
  return std::visit(
      [](const auto& d) -> std::size_t {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PointMass>) return d.at.size();
        else if constexpr (std::is_same_v<T, UniformBox>) return d.lo.size();
        else if constexpr (std::is_same_v<T, GaussianJump>) return d.mean.size();
        else return d.location.size();
      },
      j);
}

inline void validate_jump(const JumpDistribution& j) {
  if (jump_dim(j) == 0) throw ConfigError("jump distribution has dimension 0");
  if (const auto* u = std::get_if<UniformBox>(&j)) {
    if (u->lo.size() != u->hi.size()) throw ConfigError("uniform jump: lo/hi dimension mismatch");
    for (std::size_t k = 0; k < u->lo.size(); ++k)
      if (!(u->lo[k] <= u->hi[k])) throw ConfigError("uniform jump: requires lo <= hi");
  } else if (const auto* l = std::get_if<LaplaceJump>(&j)) {
    if (!(l->scale > 0.0)) throw ConfigError("laplace jump: scale must be positive");
  } else if (const auto* g = std::get_if<GaussianJump>(&j)) {
    if (g->covariance.n != g->mean.size() || g->factor.n != g->mean.size())
      throw ConfigError("gaussian jump: build it with make_gaussian_jump");
  }
}

/// Fourier transform E exp(i<z, J>).
inline Complex jump_transform(const JumpDistribution& j, std::span<const double> z) {
  constexpr Complex i{0.0, 1.0};
  return std::visit(
      [&](const auto& d) -> Complex {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return std::exp(i * dot(z, d.at));
        } else if constexpr (std::is_same_v<T, UniformBox>) {
          Complex acc{1.0, 0.0};
          for (std::size_t k = 0; k < z.size(); ++k) {
            const double mid = 0.5 * (d.lo[k] + d.hi[k]);
            const double half = 0.5 * z[k] * (d.hi[k] - d.lo[k]);
            const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
            acc *= std::exp(i * (z[k] * mid)) * sinc;
          }
          return acc;
        } else if constexpr (std::is_same_v<T, GaussianJump>) {
          return std::exp(Complex{-0.5 * quad_form(d.covariance, z), dot(z, d.mean)});
        } else {
          Complex acc{1.0, 0.0};
          for (std::size_t k = 0; k < z.size(); ++k) {
            const double bz = d.scale * z[k];
            acc *= std::exp(i * (z[k] * d.location[k])) / (1.0 + bz * bz);
          }
          return acc;
        }
      },
      j);
}

inline Vector jump_mean(const JumpDistribution& j) {
  return std::visit(
      [](const auto& d) -> Vector {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PointMass>) return d.at;
        else if constexpr (std::is_same_v<T, UniformBox>) {
          Vector m(d.lo.size());
          for (std::size_t k = 0; k < m.size(); ++k) m[k] = 0.5 * (d.lo[k] + d.hi[k]);
          return m;
        } else if constexpr (std::is_same_v<T, GaussianJump>) return d.mean;
        else return d.location;
      },
      j);
}

/// Per-coordinate E[J_k^2].
inline Vector jump_second_moment(const JumpDistribution& j) {
  return std::visit(
      [](const auto& d) -> Vector {
        using T = std::decay_t<decltype(d)>;
        Vector m;
        if constexpr (std::is_same_v<T, PointMass>) {
          for (double x : d.at) m.push_back(x * x);
        } else if constexpr (std::is_same_v<T, UniformBox>) {
          for (std::size_t k = 0; k < d.lo.size(); ++k)
            m.push_back((d.lo[k] * d.lo[k] + d.lo[k] * d.hi[k] + d.hi[k] * d.hi[k]) / 3.0);
        } else if constexpr (std::is_same_v<T, GaussianJump>) {
          for (std::size_t k = 0; k < d.mean.size(); ++k)
            m.push_back(d.mean[k] * d.mean[k] + d.covariance(k, k));
        } else {
          for (double mu : d.location) m.push_back(mu * mu + 2.0 * d.scale * d.scale);
        }
        return m;
      },
      j);
}

template <class Urbg>
Vector sample_jump(const JumpDistribution& j, Urbg& rng) {
  return std::visit(
      [&](const auto& d) -> Vector {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return d.at;
        } else if constexpr (std::is_same_v<T, UniformBox>) {
          std::uniform_real_distribution<double> u(0.0, 1.0);
          Vector x(d.lo.size());
          for (std::size_t k = 0; k < x.size(); ++k) x[k] = d.lo[k] + (d.hi[k] - d.lo[k]) * u(rng);
          return x;
        } else if constexpr (std::is_same_v<T, GaussianJump>) {
          std::normal_distribution<double> n01;
          Vector g(d.mean.size());
          for (double& v : g) v = n01(rng);
          Vector x = mat_vec(d.factor, g);
          add_into(x, d.mean);
          return x;
        } else {
          std::exponential_distribution<double> e1;
          Vector x(d.location.size());
          for (std::size_t k = 0; k < x.size(); ++k) x[k] = d.location[k] + d.scale * (e1(rng) - e1(rng));
          return x;
        }
      },
      j);
}

// ---------------------------------------------------------------------------
// Levy models.

struct BrownianDrift {
  Vector drift;
  Matrix covariance;
  Matrix factor; // covariance = factor * factor^T
  bool operator==(const BrownianDrift& o) const {
    return drift == o.drift && covariance == o.covariance;
  }
};

/// Rotation-invariant symmetric alpha-stable law: psi(z) = -scale * |z|^alpha.
/// alpha = 1 is the symmetric Cauchy process, alpha = 2 is Brownian motion with
/// covariance 2 * scale * I.
struct SymmetricStable {
  double alpha = 2.0;
  double scale = 1.0;
  std::size_t dim = 1;
  bool operator==(const SymmetricStable&) const = default;
};

struct CompoundPoisson {
  double rate = 1.0;
  JumpDistribution jump;
  bool operator==(const CompoundPoisson&) const = default;
};

struct PureDrift {
  Vector drift;
  bool operator==(const PureDrift&) const = default;
};

class LevyModel;

/// Independent sum of component processes.
struct SumModel {
  std::vector<LevyModel> parts;
  bool operator==(const SumModel& o) const;
};

class LevyModel {
public:
  using Kind = std::variant<BrownianDrift, SymmetricStable, CompoundPoisson, PureDrift, SumModel>;

  static LevyModel brownian(Vector drift, Matrix covariance) {
    if (drift.empty()) throw ConfigError("brownian: dimension must be positive");
    if (covariance.n != drift.size()) throw ConfigError("brownian: drift/covariance dimension mismatch");
    BrownianDrift b{std::move(drift), std::move(covariance), {}};
    b.factor = psd_factor(b.covariance);
    const std::size_t d = b.drift.size();
    return LevyModel(std::move(b), d);
  }

  /// One-dimensional Brownian motion with drift and variance per unit time.
  static LevyModel brownian(double drift, double variance) {
    return brownian(Vector{drift}, Matrix::identity(1, variance));
  }

  static LevyModel stable(double alpha, double scale, std::size_t dim = 1) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw ConfigError("stable: alpha must lie in (0, 2]");
    if (!(scale > 0.0)) throw ConfigError("stable: scale must be positive");
    if (dim == 0) throw ConfigError("stable: dimension must be positive");
    return LevyModel(SymmetricStable{alpha, scale, dim}, dim);
  }

  static LevyModel compound_poisson(double rate, JumpDistribution jump) {
    if (!(rate > 0.0)) throw ConfigError("compound poisson: rate must be positive");
    validate_jump(jump);
    const std::size_t d = jump_dim(jump);
    return LevyModel(CompoundPoisson{rate, std::move(jump)}, d);
  }

  static LevyModel drift(Vector gamma) {
    if (gamma.empty()) throw ConfigError("drift: dimension must be positive");
    const std::size_t d = gamma.size();
    return LevyModel(PureDrift{std::move(gamma)}, d);
  }

  static LevyModel drift(double gamma) { return drift(Vector{gamma}); }

  static LevyModel sum(std::vector<LevyModel> parts) {
    if (parts.empty()) throw ConfigError("sum: needs at least one component");
    const std::size_t d = parts.front().dim();
    for (const auto& p : parts)
      if (p.dim() != d) throw ConfigError("sum: components must share the same dimension");
    return LevyModel(SumModel{std::move(parts)}, d);
  }

  const Kind& kind() const { return kind_; }
  std::size_t dim() const { return dim_; }

  bool operator==(const LevyModel&) const = default;

private:
  LevyModel(Kind k, std::size_t d) : kind_(std::move(k)), dim_(d) {}

  Kind kind_;
  std::size_t dim_;
};

inline bool SumModel::operator==(const SumModel& o) const { return parts == o.parts; }

namespace detail {

inline void require_dim(const LevyModel& m, std::size_t got) {
  if (got != m.dim()) {
    throw PreconditionError("dimension mismatch: model has dim " + std::to_string(m.dim()) +
                            ", argument has dim " + std::to_string(got));
  }
}

/// Standard symmetric alpha-stable variate with E exp(izX) = exp(-|z|^alpha), alpha < 2.
template <class Urbg>
double standard_symmetric_stable(double alpha, Urbg& rng) {
  std::uniform_real_distribution<double> angle(-0.5 * std::numbers::pi, 0.5 * std::numbers::pi);
  std::exponential_distribution<double> expo;
  const double v = angle(rng);
  const double w = expo(rng);
  if (alpha == 1.0) return std::tan(v);
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

/// Positive stable variate with Laplace transform exp(-s^beta), 0 < beta < 1 (Kanter).
template <class Urbg>
double positive_stable(double beta, Urbg& rng) {
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::exponential_distribution<double> expo;
  double v = angle(rng);
  while (v == 0.0) v = angle(rng);
  const double w = expo(rng);
  return std::sin(beta * v) / std::pow(std::sin(v), 1.0 / beta) *
         std::pow(std::sin((1.0 - beta) * v) / w, (1.0 - beta) / beta);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Operations.

/// psi(z) with E exp(i<z, L_t>) = exp(t psi(z)).
inline Complex char_exponent(const LevyModel& model, std::span<const double> z) {
  detail::require_dim(model, z.size());
  return std::visit(
      [&](const auto& m) -> Complex {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BrownianDrift>) {
          return {-0.5 * quad_form(m.covariance, z), dot(m.drift, z)};
        } else if constexpr (std::is_same_v<T, SymmetricStable>) {
          const double r = norm(z);
          return {r == 0.0 ? 0.0 : -m.scale * std::pow(r, m.alpha), 0.0};
        } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
          return m.rate * (jump_transform(m.jump, z) - 1.0);
        } else if constexpr (std::is_same_v<T, PureDrift>) {
          return {0.0, dot(m.drift, z)};
        } else {
          Complex acc{};
          for (const auto& part : m.parts) acc += char_exponent(part, z);
          return acc;
        }
      },
      model.kind());
}

inline Complex char_exponent(const LevyModel& model, double z) {
  return char_exponent(model, std::span<const double>(&z, 1));
}

/// Exact draw of L_{t+dt} - L_t.
template <class Urbg>
Vector sample_increment(const LevyModel& model, double dt, Urbg& rng) {
  if (!(dt >= 0.0)) throw PreconditionError("sample_increment: dt must be nonnegative");
  const std::size_t d = model.dim();
  if (dt == 0.0) return Vector(d, 0.0);
  return std::visit(
      [&](const auto& m) -> Vector {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BrownianDrift>) {
          std::normal_distribution<double> n01;
          Vector g(d);
          for (double& v : g) v = n01(rng);
          Vector x = mat_vec(m.factor, g);
          const double sd = std::sqrt(dt);
          for (std::size_t k = 0; k < d; ++k) x[k] = x[k] * sd + m.drift[k] * dt;
          return x;
        } else if constexpr (std::is_same_v<T, SymmetricStable>) {
          std::normal_distribution<double> n01;
          Vector x(d);
          if (m.alpha == 2.0) {
            const double sd = std::sqrt(2.0 * m.scale * dt);
            for (double& v : x) v = sd * n01(rng);
          } else if (d == 1) {
            x[0] = std::pow(m.scale * dt, 1.0 / m.alpha) * detail::standard_symmetric_stable(m.alpha, rng);
          } else {
            // Sub-Gaussian representation: sqrt(A) * G with A positive (alpha/2)-stable.
            const double a = detail::positive_stable(0.5 * m.alpha, rng);
            const double sd = std::sqrt(2.0 * a) * std::pow(m.scale * dt, 1.0 / m.alpha);
            for (double& v : x) v = sd * n01(rng);
          }
          return x;
        } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
          std::poisson_distribution<long long> count(m.rate * dt);
          const long long n = count(rng);
          Vector x(d, 0.0);
          for (long long k = 0; k < n; ++k) add_into(x, sample_jump(m.jump, rng));
          return x;
        } else if constexpr (std::is_same_v<T, PureDrift>) {
          return scaled(m.drift, dt);
        } else {
          Vector x(d, 0.0);
          for (const auto& part : m.parts) add_into(x, sample_increment(part, dt, rng));
          return x;
        }
      },
      model.kind());
}

/// E[L_t] = t E[L_1] when E|L_1| < infinity; std::nullopt encodes an infinite first moment.
inline std::optional<Vector> mean(const LevyModel& model, double t) {
  if (!(t >= 0.0)) throw PreconditionError("mean: t must be nonnegative");
  return std::visit(
      [&](const auto& m) -> std::optional<Vector> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BrownianDrift>) {
          return scaled(m.drift, t);
        } else if constexpr (std::is_same_v<T, SymmetricStable>) {
          if (m.alpha <= 1.0) return std::nullopt;
          return Vector(m.dim, 0.0);
        } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
          return scaled(jump_mean(m.jump), m.rate * t);
        } else if constexpr (std::is_same_v<T, PureDrift>) {
          return scaled(m.drift, t);
        } else {
          Vector acc(model.dim(), 0.0);
          for (const auto& part : m.parts) {
            auto pm = mean(part, t);
            if (!pm) return std::nullopt;
            add_into(acc, *pm);
          }
          return acc;
        }
      },
      model.kind());
}

/// Per-coordinate Var(L_t), or std::nullopt when the second moment is infinite.
inline std::optional<Vector> variance(const LevyModel& model, double t) {
  return std::visit(
      [&](const auto& m) -> std::optional<Vector> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BrownianDrift>) {
          Vector v(m.drift.size());
          for (std::size_t k = 0; k < v.size(); ++k) v[k] = m.covariance(k, k) * t;
          return v;
        } else if constexpr (std::is_same_v<T, SymmetricStable>) {
          if (m.alpha < 2.0) return std::nullopt;
          return Vector(m.dim, 2.0 * m.scale * t);
        } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
          return scaled(jump_second_moment(m.jump), m.rate * t);
        } else if constexpr (std::is_same_v<T, PureDrift>) {
          return Vector(m.drift.size(), 0.0);
        } else {
          Vector acc(model.dim(), 0.0);
          for (const auto& part : m.parts) {
            auto pv = variance(part, t);
            if (!pv) return std::nullopt;
            add_into(acc, *pv);
          }
          return acc;
        }
      },
      model.kind());
}

/// The Levy process t -> L_{factor * t}; its exponent is factor * psi.
inline LevyModel time_scaled(const LevyModel& model, double factor) {
  if (!(factor > 0.0)) throw PreconditionError("time_scaled: factor must be positive");
  return std::visit(
      [&](const auto& m) -> LevyModel {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BrownianDrift>) {
          return LevyModel::brownian(scaled(m.drift, factor), scaled(m.covariance, factor));
        } else if constexpr (std::is_same_v<T, SymmetricStable>) {
          return LevyModel::stable(m.alpha, m.scale * factor, m.dim);
        } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
          return LevyModel::compound_poisson(m.rate * factor, m.jump);
        } else if constexpr (std::is_same_v<T, PureDrift>) {
          return LevyModel::drift(scaled(m.drift, factor));
        } else {
          std::vector<LevyModel> parts;
          parts.reserve(m.parts.size());
          for (const auto& part : m.parts) parts.push_back(time_scaled(part, factor));
          return LevyModel::sum(std::move(parts));
        }
      },
      model.kind());
}

} // namespace semilevy
