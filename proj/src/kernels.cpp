#include "psgeo/kernels.hpp"

#include <cmath>

namespace psgeo {

namespace {

// Frequencies are O(1) for every built-in model; treat anything this small
// as DC rather than letting 1/nu^2 blow up silently.
constexpr double kDcThreshold = 1e-12;

}  // namespace

Complex quadrant_kernel(double nu) {
  if (std::abs(nu) < kDcThreshold) {
    throw DivergentDcError(
        "quadrant kernel has no eps -> 0 limit at zero frequency");
  }
  return Complex{-1.0 / (nu * nu), 0.0};
}

Complex quadrant_kernel_damped(double nu, double epsilon) {
  const Complex denom{epsilon, nu};
  return 1.0 / (denom * denom);
}

Complex integrate_correlator(const CorrelatorSeries& c, const KernelConfig& cfg) {
  if (c.terms.empty()) return Complex{0.0, 0.0};

  if (cfg.mode == KernelConfig::Mode::AnalyticLimit) {
    Complex sum{0.0, 0.0};
    for (const auto& term : c.terms) {
      if (std::abs(term.nu) < kDcThreshold) {
        throw DivergentDcError(
            "correlator has a zero-frequency amplitude of magnitude " +
            std::to_string(std::abs(term.amp)) +
            "; its quadrant integral diverges");
      }
      sum += term.amp * quadrant_kernel(term.nu);
    }
    return sum;
  }

  if (cfg.epsilon <= 0.0 || cfg.richardson_orders < 1) {
    throw ParameterError("damped-numeric kernel needs epsilon > 0 and at least one order");
  }
  for (const auto& term : c.terms) {
    if (std::abs(term.nu) < kDcThreshold) {
      throw DivergentDcError(
          "correlator has a zero-frequency amplitude; the damped integral "
          "grows as 1/eps^2 and has no extrapolation limit");
    }
  }
  // The one-sided kernel 1/(i nu + eps)^2 carries an O(eps) imaginary part
  // that pollutes complex-amplitude pairs, so the sum uses the +-eps average
  //   (K(nu, eps) + K(nu, -eps)) / 2 = -(nu^2 - eps^2) / (nu^2 + eps^2)^2,
  // an admissible regularizer with the same limit whose deviation is
  // genuinely analytic in eps^2.
  std::vector<double> h;
  std::vector<Complex> f;
  double eps = cfg.epsilon;
  for (int j = 0; j < cfg.richardson_orders; ++j, eps *= 0.5) {
    Complex sum{0.0, 0.0};
    for (const auto& term : c.terms) {
      sum += term.amp * 0.5 *
             (quadrant_kernel_damped(term.nu, eps) + quadrant_kernel_damped(term.nu, -eps));
    }
    h.push_back(eps * eps);
    f.push_back(sum);
  }
  return extrapolate_to_zero<Complex>(h, std::move(f));
}

}  // namespace psgeo
