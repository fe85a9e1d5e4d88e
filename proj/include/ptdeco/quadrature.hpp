#pragma once

// Globally adaptive 15-point Gauss-Kronrod quadrature on a finite interval,
// after QUADPACK's QAG: the interval with the largest error estimate is
// bisected until the summed estimate meets the tolerance.

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace ptdeco {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  long evaluations = 0;
  bool converged = false;
};

namespace detail {

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

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_centre = f(centre);
  double kronrod = f_centre * kKronrodWeights[7];
  double gauss = f_centre * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f1[j] = f(centre - dx);
    f2[j] = f(centre + dx);
    const double pair = f1[j] + f2[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(f_centre - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    asc += kKronrodWeights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }

  const double width = std::abs(half);
  const double result = kronrod * half;
  asc *= width;
  abs_sum *= width;
  double error = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && error != 0.0) {
    error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) {
    error = std::max(50.0 * eps * abs_sum, error);
  }
  return {a, b, result, error};
}

}  // namespace detail

/// Integrates f over the consecutive intervals delimited by `breakpoints`
/// (at least two ascending values), refining globally until the total error
/// estimate is below max(abs_tol, rel_tol*|I|) or the evaluation budget runs out.
template <class F>
QuadratureResult integrate_adaptive(F&& f, std::span<const double> breakpoints, double abs_tol,
                                    double rel_tol = 0.0, long max_evaluations = 5'000'000) {
  QuadratureResult out;
  if (breakpoints.size() < 2) return out;

  std::priority_queue<detail::Segment> heap;
  double total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const detail::Segment seg = detail::gauss_kronrod_15(f, breakpoints[i], breakpoints[i + 1]);
    out.evaluations += 15;
    total += seg.value;
    error += seg.error;
    heap.push(seg);
  }

  constexpr double kMinWidth = 1e-14;
  while (error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (out.evaluations + 30 > max_evaluations) break;
    const detail::Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.b - worst.a <= kMinWidth * std::max(1.0, std::abs(mid))) break;
    heap.pop();
    const detail::Segment left = detail::gauss_kronrod_15(f, worst.a, mid);
    const detail::Segment right = detail::gauss_kronrod_15(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed the drift accumulated by incremental updates.
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.abs_error = error;
  out.converged = error <= std::max(abs_tol, rel_tol * std::abs(total));
  return out;
}

}  // namespace ptdeco
