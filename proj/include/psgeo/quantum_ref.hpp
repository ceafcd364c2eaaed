#pragma once

// Closed-form quantum reference tensors for the built-in models (lowest
// eigenstate unless a state label says otherwise), plus the two special
// functions they need. The formulas here are written directly in the model
// parameters and never touch the correlator machinery, so they serve as the
// independent side of every semiclassical comparison.

#include <string>

#include <Eigen/Dense>

#include "psgeo/types.hpp"

namespace psgeo {

/// Real dilogarithm Li2(z) = sum_{k>=1} z^k / k^2 for z in [-0.5, 1].
/// Power series for z <= 1/2, the reflection identity
/// Li2(z) + Li2(1-z) = pi^2/6 - ln z ln(1-z) above it.
double dilog(double z);

/// Trigamma psi_1(z) = sum_{n>=0} 1/(z+n)^2 for z > 0. Upward recurrence
/// into the asymptotic regime (shifted argument > 10), then the Bernoulli
/// tail series.
double trigamma(double z);

/// Quantum metric and curvature of a built-in model at parameter point x.
struct QuantumReference {
  std::string model_id;
  std::string state;  // "ground" for the bosonic models, "+" / "-" for spin
  double hbar = 1.0;
  Eigen::MatrixXd metric;
  Eigen::MatrixXd curvature;
};

/// Reference tensors for model_id in {"gho", "sco", "lco", "singular",
/// "spin"}. The parameter names on x select the spin parametrization
/// ({B1,B2,B3} Cartesian or {B,theta,phi} spherical); other models ignore
/// the state label.
QuantumReference quantum_tensors(const std::string& model_id,
                                 const ParameterPoint& x, double hbar,
                                 const std::string& state = "ground");

}  // namespace psgeo
