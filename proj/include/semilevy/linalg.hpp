#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "semilevy/errors.hpp"

namespace semilevy {

using Vector = std::vector<double>;

/// Dense square matrix, row-major.
struct Matrix {
  std::size_t n = 0;
  std::vector<double> data;

  Matrix() = default;
  explicit Matrix(std::size_t size) : n(size), data(size * size, 0.0) {}

  static Matrix identity(std::size_t size, double diag = 1.0) {
    Matrix m(size);
    for (std::size_t i = 0; i < size; ++i) m(i, i) = diag;
    return m;
  }

  double& operator()(std::size_t r, std::size_t c) { return data[r * n + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * n + c]; }

  bool operator==(const Matrix&) const = default;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

/// <z, A z>
inline double quad_form(const Matrix& a, std::span<const double> z) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < a.n; ++j) row += a(i, j) * z[j];
    acc += z[i] * row;
  }
  return acc;
}

inline Vector scaled(std::span<const double> v, double s) {
  Vector out(v.begin(), v.end());
  for (double& x : out) x *= s;
  return out;
}

inline Matrix scaled(const Matrix& m, double s) {
  Matrix out = m;
  for (double& x : out.data) x *= s;
  return out;
}

inline void add_into(Vector& acc, std::span<const double> v) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
}

/// Returns F with A = F F^T for a symmetric positive semi-definite A.
/// Throws ConfigError if A is not symmetric or has a pivot below -tol.
inline Matrix psd_factor(const Matrix& a, double tol = 1e-10) {
  const auto n = static_cast<Eigen::Index>(a.n);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      a.data.data(), n, n);
  if (n > 0 && (m - m.transpose()).cwiseAbs().maxCoeff() > tol * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    throw ConfigError("covariance matrix is not symmetric");
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  if (ldlt.info() != Eigen::Success) throw ConfigError("covariance factorization failed");
  const Eigen::VectorXd d = ldlt.vectorD();
  if (d.size() > 0 && d.minCoeff() < -tol) {
    throw ConfigError("covariance matrix is not positive semi-definite");
  }
  const Eigen::VectorXd sqrt_d = d.cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd l = ldlt.matrixL();
  Eigen::MatrixXd f = ldlt.transpositionsP().transpose() * (l * sqrt_d.asDiagonal());
  Matrix out(a.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j)
      out(i, j) = f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

inline Vector mat_vec(const Matrix& m, std::span<const double> v) {
  Vector out(m.n, 0.0);
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) out[i] += m(i, j) * v[j];
  return out;
}

} // namespace semilevy
