#pragma once

// Regularized two-sided time integrals over the quadrant t1 < 0 < t2.
//
// For a correlator term amp * exp(i nu t12) the damped integral
//   int_{-inf}^{0} dt1 int_{0}^{inf} dt2  e^{eps t1} e^{-eps t2} e^{i nu (t1 - t2)}
// factorizes into 1 / (i nu + eps)^2, and its eps -> 0+ limit is the
// quadrant kernel K(nu) = -1 / nu^2 for nu != 0. A zero-frequency amplitude
// has no finite limit (divergent DC).

#include <span>
#include <vector>

#include "psgeo/harmonics.hpp"
#include "psgeo/types.hpp"

namespace psgeo {

struct KernelConfig {
  enum class Mode { AnalyticLimit, DampedNumeric };

  Mode mode = Mode::AnalyticLimit;
  /// Base damping for DampedNumeric; the evaluation runs at
  /// epsilon * 2^{-j}, j = 0 .. richardson_orders-1, and extrapolates.
  double epsilon = 0.1;
  int richardson_orders = 6;
};

/// K(nu) = lim_{eps->0+} 1/(i nu + eps)^2 = -1/nu^2. Throws DivergentDcError
/// at nu = 0.
Complex quadrant_kernel(double nu);

/// The damped kernel 1/(i nu + eps)^2 at finite eps.
Complex quadrant_kernel_damped(double nu, double epsilon);

/// Apply the quadrant kernel to a correlator series:
///   sum_r amp_r K(nu_r)            (analytic limit)
///   Richardson-extrapolated damped sums   (damped numeric)
///
/// Damped sums use the +-eps symmetrized kernel, whose deviation from the
/// limit is analytic in eps^2, so the extrapolation table runs in h = eps^2.
/// Empty series integrate to zero.
Complex integrate_correlator(const CorrelatorSeries& c, const KernelConfig& cfg = {});

/// Polynomial (Neville) extrapolation of f(h) to h = 0 given samples at
/// strictly decreasing positive h. Works for scalars and Eigen matrices.
template <typename T>
T extrapolate_to_zero(std::span<const double> h, std::vector<T> f) {
  if (h.size() != f.size() || f.empty()) {
    throw DimensionError("extrapolate_to_zero: need matching non-empty samples");
  }
  const std::size_t n = f.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double denom = h[i] - h[i + level];
      f[i] = f[i + 1] + (f[i + 1] - f[i]) * (h[i + level] / denom);
    }
  }
  return f[0];
}

}  // namespace psgeo
