#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace semilevy {
namespace {

using testing::catalog;
using testing::matrix;
using Cx = std::complex<double>;

TEST(CharExponent, VanishesAtOriginForEveryModel) {
  for (std::size_t d : {1u, 2u, 3u}) {
    for (const auto& [name, model] : catalog(d)) {
      const Vector z(d, 0.0);
      EXPECT_EQ(char_exponent(model, z), Cx(0.0, 0.0)) << name << " d=" << d;
    }
  }
}

TEST(CharExponent, StandardBrownianAtTwo) {
  EXPECT_DOUBLE_EQ(char_exponent(LevyModel::brownian(0.0, 1.0), 2.0).real(), -2.0);
  EXPECT_DOUBLE_EQ(char_exponent(LevyModel::brownian(0.0, 1.0), 2.0).imag(), 0.0);
}

TEST(CharExponent, CauchyAtThree) {
  const Cx psi = char_exponent(LevyModel::stable(1.0, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(psi.real(), -3.0);
  EXPECT_DOUBLE_EQ(psi.imag(), 0.0);
}

TEST(CharExponent, CauchyMatchesEmpiricalCharacteristicFunction) {
  const auto xs = testing::draw(LevyModel::stable(1.0, 1.0), 1.0, 100000, 11);
  for (double z : {0.1, 0.5, 1.0, 3.0}) {
    // E exp(i z C) = exp(-|z|) for a standard Cauchy variate.
    EXPECT_LT(testing::cf_gap(xs, {z}, -std::abs(z)), 4.0 / std::sqrt(1e5)) << "z=" << z;
  }
}

TEST(CharExponent, ClosedFormsPerKind) {
  const Vector z{0.7, -1.3};
  const Matrix a = matrix(2, {2.0, 0.5, 0.5, 1.0});
  const Vector g{0.25, -1.0};
  const double qf = 0.7 * 0.7 * 2.0 + 2 * 0.7 * -1.3 * 0.5 + 1.3 * 1.3 * 1.0;
  const double gz = 0.25 * 0.7 + 1.0 * 1.3;
  EXPECT_NEAR(std::abs(char_exponent(LevyModel::brownian(g, a), z) - Cx(-0.5 * qf, gz)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(char_exponent(LevyModel::drift(g), z) - Cx(0.0, gz)), 0.0, 1e-14);
  const double r = std::hypot(0.7, 1.3);
  EXPECT_NEAR(char_exponent(LevyModel::stable(1.5, 0.8, 2), z).real(), -0.8 * std::pow(r, 1.5), 1e-14);

  // Compound Poisson: rate * (J^(z) - 1) with the jump transform computed directly.
  const double rate = 1.7;
  const Cx laplace = std::exp(Cx(0.0, gz)) / ((1.0 + 0.36 * 0.49) * (1.0 + 0.36 * 1.69));
  EXPECT_NEAR(std::abs(char_exponent(LevyModel::compound_poisson(rate, LaplaceJump{g, 0.6}), z) -
                       rate * (laplace - 1.0)),
              0.0, 1e-14);
  const Cx gauss = std::exp(Cx(-0.5 * qf, gz));
  EXPECT_NEAR(std::abs(char_exponent(LevyModel::compound_poisson(rate, make_gaussian_jump(g, a)), z) -
                       rate * (gauss - 1.0)),
              0.0, 1e-14);
  auto unif = [](double lo, double hi, double t) {
    return (std::exp(Cx(0.0, hi * t)) - std::exp(Cx(0.0, lo * t))) / (Cx(0.0, t) * (hi - lo));
  };
  const Cx box = unif(-1.0, 0.5, 0.7) * unif(0.0, 2.0, -1.3);
  EXPECT_NEAR(std::abs(char_exponent(LevyModel::compound_poisson(rate, UniformBox{{-1.0, 0.0}, {0.5, 2.0}}), z) -
                       rate * (box - 1.0)),
              0.0, 1e-14);
  const Cx point = std::exp(Cx(0.0, gz));
  EXPECT_NEAR(std::abs(char_exponent(LevyModel::compound_poisson(rate, PointMass{g}), z) - rate * (point - 1.0)),
              0.0, 1e-14);
}

TEST(CharExponent, UniformJumpAtZeroCoordinate) {
  const auto m = LevyModel::compound_poisson(1.0, UniformBox{{0.0, -1.0}, {1.0, 1.0}});
  const Cx psi = char_exponent(m, Vector{0.0, 0.0});
  EXPECT_EQ(psi, Cx(0.0, 0.0));
  EXPECT_TRUE(std::isfinite(std::abs(char_exponent(m, Vector{0.0, 2.0}))));
}

TEST(CharExponent, ModulusBoundOnBall) {
  std::mt19937_64 gen(2024);
  for (std::size_t d : {1u, 2u, 3u}) {
    for (const auto& [name, model] : catalog(d)) {
      for (int i = 0; i < 300; ++i) {
        Vector z = testing::random_vector(gen, d, 10.0);
        if (norm(z) > 10.0) z = scaled(z, 10.0 / norm(z));
        const Cx psi = char_exponent(model, z);
        EXPECT_LE(std::abs(std::exp(psi)), 1.0 + 1e-12) << name;
        EXPECT_LE(psi.real(), 1e-15) << name;
      }
    }
  }
}

TEST(CharExponent, SumIsAdditive) {
  std::mt19937_64 gen(7);
  for (std::size_t d : {1u, 2u}) {
    const auto models = catalog(d);
    for (std::size_t i = 0; i < models.size(); ++i) {
      const auto& m1 = models[i].second;
      const auto& m2 = models[(i + 3) % models.size()].second;
      const auto sum = LevyModel::sum({m1, m2});
      for (int k = 0; k < 50; ++k) {
        const Vector z = testing::random_vector(gen, d, 5.0);
        const Cx expected = char_exponent(m1, z) + char_exponent(m2, z);
        EXPECT_LE(std::abs(char_exponent(sum, z) - expected), 1e-12 * std::max(1.0, std::abs(expected)));
      }
    }
  }
}

TEST(CharExponent, DimensionMismatchThrows) {
  const auto m = LevyModel::brownian(0.0, 1.0);
  EXPECT_THROW(char_exponent(m, Vector{1.0, 2.0}), PreconditionError);
  EXPECT_THROW(char_exponent(LevyModel::stable(1.0, 1.0, 3), 1.0), PreconditionError);
}

TEST(SampleIncrement, PureDriftIsDeterministic) {
  Rng rng(1);
  const Vector x = sample_increment(LevyModel::drift(1.0), 0.5, rng);
  ASSERT_EQ(x.size(), 1u);
  EXPECT_DOUBLE_EQ(x[0], 0.5);
}

TEST(SampleIncrement, StandardBrownianMomentsWithinClt) {
  constexpr std::size_t n = 100000;
  const auto xs = testing::coordinate(testing::draw(LevyModel::brownian(0.0, 1.0), 1.0, n, 5), 0);
  EXPECT_LE(std::abs(stats::mean(xs)), 3.0 / std::sqrt(double(n)));
  EXPECT_NEAR(stats::variance(xs), 1.0, 0.05);
}

TEST(SampleIncrement, PoissonPointMassMean) {
  constexpr std::size_t n = 100000;
  const auto xs = testing::coordinate(
      testing::draw(LevyModel::compound_poisson(2.0, PointMass{{1.0}}), 1.0, n, 6), 0);
  EXPECT_LE(std::abs(stats::mean(xs) - 2.0), 3.0 * std::sqrt(2.0) / std::sqrt(double(n)));
  for (double x : xs) EXPECT_EQ(x, std::round(x));
}

// The empirical CF of 10^5 increments must sit within 4/sqrt(N) of exp(dt psi(z)).
TEST(SampleIncrement, EmpiricalCharacteristicFunctionMatchesExponent) {
  constexpr std::size_t n = 100000;
  const double tol = 4.0 / std::sqrt(double(n));
  std::uint64_t seed = 100;
  for (std::size_t d : {1u, 2u, 3u}) {
    std::vector<Vector> zs;
    for (double s : {0.15, 0.4, 0.8, 1.3, 2.1}) {
      Vector z(d);
      for (std::size_t k = 0; k < d; ++k) z[k] = s * (k % 2 == 0 ? 1.0 : -0.6);
      zs.push_back(z);
    }
    for (const auto& [name, model] : catalog(d)) {
      for (double dt : {0.37, 1.0}) {
        const auto xs = testing::draw(model, dt, n, ++seed);
        for (const auto& z : zs)
          EXPECT_LT(testing::cf_gap(xs, z, dt * char_exponent(model, z)), tol)
              << name << " d=" << d << " dt=" << dt << " |z|=" << norm(z);
      }
    }
  }
}

TEST(SampleIncrement, SingularCovarianceSamplesOnALine) {
  const auto m = LevyModel::brownian(Vector{0.0, 0.0}, matrix(2, {1.0, 1.0, 1.0, 1.0}));
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const Vector x = sample_increment(m, 1.0, rng);
    EXPECT_NEAR(x[0], x[1], 1e-9);
  }
}

TEST(Mean, Examples) {
  EXPECT_EQ(*mean(LevyModel::drift(2.0), 3.0), Vector{6.0});
  EXPECT_FALSE(mean(LevyModel::stable(1.0, 1.0), 1.0).has_value());
  EXPECT_DOUBLE_EQ((*mean(LevyModel::compound_poisson(2.0, UniformBox{{0.0}, {1.0}}), 1.0))[0], 1.0);
  EXPECT_FALSE(mean(LevyModel::stable(0.5, 1.0), 2.0).has_value());
  EXPECT_EQ(*mean(LevyModel::stable(1.5, 1.0, 2), 2.0), (Vector{0.0, 0.0}));
  EXPECT_FALSE(mean(LevyModel::sum({LevyModel::drift(1.0), LevyModel::stable(1.0, 1.0)}), 1.0).has_value());
}

TEST(Mean, AgreesWithEmpiricalMeanForFiniteVarianceModels) {
  constexpr std::size_t n = 100000;
  std::uint64_t seed = 500;
  for (std::size_t d : {1u, 2u}) {
    for (const auto& [name, model] : catalog(d)) {
      const auto m = mean(model, 1.3);
      if (!m || !variance(model, 1.3)) continue;
      const auto xs = testing::draw(model, 1.3, n, ++seed);
      for (std::size_t k = 0; k < d; ++k) {
        const auto c = testing::coordinate(xs, k);
        EXPECT_LE(std::abs(stats::mean(c) - (*m)[k]), std::max(5.0 * stats::standard_error(c), 1e-12))
            << name << " coord " << k;
      }
    }
  }
}

TEST(Variance, AgreesWithEmpiricalVariance) {
  constexpr std::size_t n = 100000;
  std::uint64_t seed = 900;
  for (const auto& [name, model] : catalog(2)) {
    const auto v = variance(model, 0.8);
    if (!v) continue;
    const auto xs = testing::draw(model, 0.8, n, ++seed);
    for (std::size_t k = 0; k < 2; ++k)
      EXPECT_NEAR(stats::variance(testing::coordinate(xs, k)), (*v)[k], 0.05 * (*v)[k] + 1e-12) << name;
  }
}

TEST(Validation, CovarianceMustBeSymmetricPsd) {
  EXPECT_THROW(LevyModel::brownian(Vector{0.0, 0.0}, matrix(2, {1.0, 0.5, 0.4, 1.0})), ConfigError);
  EXPECT_THROW(LevyModel::brownian(Vector{0.0, 0.0}, matrix(2, {1.0, 2.0, 2.0, 1.0})), ConfigError);
  EXPECT_THROW(LevyModel::brownian(0.0, -1.0), ConfigError);
  EXPECT_NO_THROW(LevyModel::brownian(Vector{0.0, 0.0}, matrix(2, {1.0, 1.0, 1.0, 1.0})));
  EXPECT_NO_THROW(LevyModel::brownian(0.0, 0.0));
  EXPECT_THROW(make_gaussian_jump({0.0, 0.0}, matrix(2, {-1.0, 0.0, 0.0, 1.0})), ConfigError);
}

TEST(Validation, ParameterRanges) {
  EXPECT_THROW(LevyModel::stable(0.0, 1.0), ConfigError);
  EXPECT_THROW(LevyModel::stable(2.5, 1.0), ConfigError);
  EXPECT_THROW(LevyModel::stable(1.0, 0.0), ConfigError);
  EXPECT_THROW(LevyModel::compound_poisson(0.0, PointMass{{1.0}}), ConfigError);
  EXPECT_THROW(LevyModel::compound_poisson(1.0, UniformBox{{1.0}, {0.0}}), ConfigError);
  EXPECT_THROW(LevyModel::compound_poisson(1.0, LaplaceJump{{0.0}, -1.0}), ConfigError);
  EXPECT_THROW(LevyModel::sum({LevyModel::drift(1.0), LevyModel::drift(Vector{1.0, 2.0})}), ConfigError);
  EXPECT_THROW(LevyModel::sum({}), ConfigError);
  EXPECT_THROW(LevyModel::drift(Vector{}), ConfigError);
}

TEST(TimeScaled, ScalesTheExponent) {
  std::mt19937_64 gen(99);
  for (const auto& [name, model] : catalog(2)) {
    const auto scaled_model = time_scaled(model, 2.5);
    for (int k = 0; k < 20; ++k) {
      const Vector z = testing::random_vector(gen, 2, 4.0);
      const Cx expected = 2.5 * char_exponent(model, z);
      EXPECT_LE(std::abs(char_exponent(scaled_model, z) - expected), 1e-12 * std::max(1.0, std::abs(expected)))
          << name;
    }
  }
}

} // namespace
} // namespace semilevy
