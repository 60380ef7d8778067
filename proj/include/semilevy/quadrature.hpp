#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace semilevy {

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0; // absolute error estimate, or standard error when stochastic
  std::size_t nodes = 0;
  bool stochastic = false;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1]; Gauss nodes are the odd
// Kronrod indices.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double lo, hi, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

template <class F>
Piece gauss_kronrod_15(F& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(mid);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = f(mid - dx) + f(mid + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

} // namespace detail

/// Globally adaptive G7/K15 quadrature over consecutive breakpoints: the piece
/// with the largest |K15 - G7| is bisected until the summed estimate drops below
/// max(abs_tol, rel_tol * |integral|) or max_pieces is reached. The caller decides
/// what to do with a result whose error is still above tolerance.
template <class F>
IntegralEstimate adaptive_gauss_kronrod(F&& f, std::span<const double> breakpoints, double rel_tol,
                                        double abs_tol = 0.0, std::size_t max_pieces = 20000) {
  std::priority_queue<detail::Piece> heap;
  IntegralEstimate est;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const auto p = detail::gauss_kronrod_15(f, breakpoints[i], breakpoints[i + 1]);
    est.value += p.value;
    est.error += p.error;
    est.nodes += 15;
    heap.push(p);
  }
  while (!heap.empty() && est.error > std::max(abs_tol, rel_tol * std::abs(est.value)) &&
         heap.size() < max_pieces) {
    const detail::Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      // Interval exhausted at double resolution; keep its contribution as is.
      heap.push({worst.lo, worst.hi, worst.value, 0.0});
      est.error -= worst.error;
      continue;
    }
    const auto left = detail::gauss_kronrod_15(f, worst.lo, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.hi);
    est.value += left.value + right.value - worst.value;
    est.error += left.error + right.error - worst.error;
    est.nodes += 30;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed accumulated cancellation from the running updates.
  est.value = 0.0;
  est.error = 0.0;
  while (!heap.empty()) {
    est.value += heap.top().value;
    est.error += heap.top().error;
    heap.pop();
  }
  return est;
}

} // namespace semilevy
