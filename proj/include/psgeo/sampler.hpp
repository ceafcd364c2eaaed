#pragma once

#include <Eigen/Dense>

#include <vector>

#include "psgeo/models.hpp"
#include "psgeo/types.hpp"

namespace psgeo {

// Knobs for the trajectory sampler.  The defaults keep every built-in model
// within a 1e-4 agreement band against the harmonic engine.
struct SamplerOptions {
  // Angle-grid points per angle dimension; 0 means the model default.
  int grid = 0;
  // Damping strengths for the double time integral, extrapolated to zero.
  std::vector<double> epsilons = {0.1, 0.05, 0.025};
  // Integration horizon per damping value: T = horizon_factor / epsilon,
  // chosen so the discarded tail e^{-horizon_factor} is far below the
  // extrapolation error.
  double horizon_factor = 40.0;
  // Step-size rule: dt = max_phase_step / (fastest observable frequency).
  double max_phase_step = 0.005;
  // Relative energy-drift bound checked at the end of each sweep.
  double drift_bound = 1e-8;
  // Recompute on a doubled angle grid and flag entries that move.
  bool check_grid_doubling = false;
};

// A single integrated trajectory, states stored one column per time node.
struct Trajectory {
  Eigen::VectorXd times;
  Eigen::MatrixXd states;
  double max_drift = 0.0;  // largest relative energy deviation seen
};

// Least-squares harmonic decomposition of a sampled signal.
struct HarmonicFit {
  Eigen::VectorXcd amplitudes;  // one per requested frequency
  double residual = 0.0;        // rms misfit of the reconstruction
  double condition = 0.0;       // singular-value ratio of the design matrix
};

// Metric of `model` at the given actions by direct phase-space sampling:
// Hamilton's equations are integrated from a uniform angle grid, the damped
// double time integral is evaluated by composite Simpson quadrature for each
// epsilon, and the results are Richardson-extrapolated to zero damping.
// This path never touches the model's harmonic series, so it serves as an
// independent oracle for the harmonic engine.
GeometricTensor sample_tensor(const ModelSpec& model, const Eigen::VectorXd& actions,
                              const SamplerOptions& options = {});

// Curvature by the same scheme, with observable gradients pulled back to
// t = 0 through the tangent propagator of the linearized flow.  Requires
// curvature-capable phase-space hooks with a linear flow.
GeometricTensor sample_curvature(const ModelSpec& model, const Eigen::VectorXd& actions,
                                 const SamplerOptions& options = {});

// Integrates the hooks' flow from state z0 over [0, t_end] (either sign of
// t_end) with steps of magnitude dt, using the exact Cayley propagator when
// the flow is linear and the implicit midpoint rule otherwise.  Throws when
// the relative energy drift exceeds drift_bound at any step.
Trajectory integrate_trajectory(const PhaseSpaceHooks& hooks, const Eigen::VectorXd& z0,
                                double t_end, double dt, double drift_bound = 1e-8);

// Fits values(t) ~ sum_k a_k exp(i nu_k t) in the least-squares sense.
// Throws ConditioningError when the design matrix is numerically rank
// deficient (near-degenerate frequency list).
HarmonicFit extract_harmonics(const Eigen::VectorXd& times, const Eigen::VectorXd& values,
                              const Eigen::VectorXd& frequencies);

}  // namespace psgeo
