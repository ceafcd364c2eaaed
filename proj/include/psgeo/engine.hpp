#pragma once

// Assembly of geometric tensors from a model: correlator integration for
// bosonic models, the spectral path for fermionic ones, gauge and
// coordinate transformations, and the semiclassical comparison against the
// quantum reference tensors.

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "psgeo/kernels.hpp"
#include "psgeo/models.hpp"

namespace psgeo {

/// Metric over parameter space at the given action values:
///   g_ij = - integral over the (t1 < 0, t2 > 0) quadrant of the connected
///          correlator of lambda_i(t1), lambda_j(t2).
/// Bosonic models go through the harmonic-series correlator and the quadrant
/// kernel; fermionic ones through the spectral two-level formulas. Entries
/// keeping an imaginary residue above 1e-10 (relative to the entry size)
/// raise NumericalQualityError, as does an asymmetric result.
GeometricTensor classical_metric(const ModelSpec& model, const Eigen::VectorXd& actions,
                                 const KernelConfig& config = {});

/// Curvature over parameter space:
///   F_ij = + the same quadrant integral of the angle-averaged Poisson
///          bracket {lambda_i(t1), lambda_j(t2)} taken in (phi0, I).
/// Needs action derivatives on every harmonic term (CapabilityError
/// otherwise); fermionic models use the spectral path.
GeometricTensor classical_curvature(const ModelSpec& model, const Eigen::VectorXd& actions,
                                    const KernelConfig& config = {});

/// Shift the angle origin phi0 -> phi0 + shift: harmonic amplitudes pick up
/// exp(i k . shift), fermionic eigenvector columns rotate by exp(-i shift_a),
/// and the phase-space map starts from shifted angles. Both tensors are
/// invariant under this reparametrization.
ModelSpec gauge_shift(const ModelSpec& model, const Eigen::VectorXd& shift);

/// Congruence transform t' = J^T t J for a change of parameter coordinates
/// x_old = x_old(x_new) with J_ij = d x_old_i / d x_new_j. J may be
/// rectangular (restriction to a submanifold). new_point, when given,
/// relabels the parameter point of the result.
GeometricTensor tensor_transform(const GeometricTensor& tensor, const Eigen::MatrixXd& jacobian,
                                 std::optional<ParameterPoint> new_point = std::nullopt);

/// One side (metric or curvature) of the semiclassical comparison.
struct RelationSide {
  Eigen::MatrixXd classical;  // monomials evaluated at the registry's values
  Eigen::MatrixXd quantized;  // classical / hbar^2 (metric) or / hbar (curvature)
  Eigen::MatrixXd quantum;    // reference tensor
  Eigen::MatrixXd residual;   // quantum - quantized
};

/// Order-by-order comparison of one tensor entry as a series in hbar,
/// used where quantization matches at leading order but not beyond.
struct ExpansionComparison {
  int row = 0, col = 0;
  Eigen::VectorXd classical_coeffs;  // coefficients of hbar, hbar^2, ...
  Eigen::VectorXd quantum_coeffs;
};

struct RelationReport {
  std::string model_id;
  double hbar = 1.0;
  std::string state;
  RelationSide metric;
  std::optional<RelationSide> curvature;           // absent when the model has no curvature monomials
  std::optional<Eigen::MatrixXd> anomaly_expected; // exact expected metric residual, when known
  std::optional<ExpansionComparison> expansion;
};

/// Substitute the registry's values into the model's action-monomial
/// decomposition, divide by the appropriate hbar power, and compare against
/// the quantum reference for the given state. The expansion field is filled
/// for the singular oscillator, whose g_22 agrees at order hbar only.
RelationReport check_semiclassical(const ModelSpec& model, const QuantizationRegistry& registry,
                                   const std::string& state = "ground");

}  // namespace psgeo
