#pragma once

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psgeo/fermionic.hpp"
#include "psgeo/types.hpp"

namespace psgeo {

// Hooks exposing a model as a real dynamical system on phase space, used by
// the trajectory sampler.  All closures capture the action values they were
// built for, so a hook set is valid for exactly one torus.
struct PhaseSpaceHooks {
  // Number of canonical pairs in the integrator state (q_1..q_n, p_1..p_n).
  int n_dof = 1;
  // Default angle-grid resolution per angle dimension.
  int grid_default = 64;
  // Whether the sampler may compute geometric tensors for this model.
  bool tensor_capable = true;
  // Whether tangent-propagator curvature sampling is supported.
  bool curvature_capable = false;

  // Map torus angles to a phase-space state at t = 0.
  std::function<Eigen::VectorXd(const Eigen::VectorXd& angles)> from_angles;
  // Energy of a state; used for drift monitoring.
  std::function<double(const Eigen::VectorXd& state)> hamiltonian;
  // Time derivative of the state under the Hamiltonian flow.
  std::function<Eigen::VectorXd(const Eigen::VectorXd& state)> flow;
  // When set, flow(z) == linear_flow * z and the stepper may use the exact
  // Cayley propagator for the whole batch at once.
  std::optional<Eigen::MatrixXd> linear_flow;
  // Observable values (one per model parameter) at a state.
  std::function<Eigen::VectorXd(const Eigen::VectorXd& state)> observables;
  // Phase-space gradients of the observables, one column per observable;
  // only required when curvature_capable is true.
  std::function<Eigen::MatrixXd(const Eigen::VectorXd& state)> observable_gradients;

  // Optional batched fast paths used by the sampler's inner loop; they must
  // agree columnwise with the scalar hooks above.  states has one phase-space
  // column per trajectory; observables_batch returns one row per observable,
  // gradients_batch the gradient columns of observable `index`.
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd& states)> observables_batch;
  std::function<Eigen::MatrixXd(int index, const Eigen::MatrixXd& states)> gradients_batch;
};

// A concrete integrable model bound to one point of its parameter manifold.
// Everything action-dependent is exposed as a closure over an ActionVector,
// so one spec serves every torus of the family.
struct ModelSpec {
  std::string id;                         // "gho", "sco", "lco", "singular", "spin"
  ParameterPoint point;                   // parameter values the tensors refer to
  std::vector<std::string> action_names;  // CLI-facing names, defines ordering
  int n_angles = 0;
  bool fermionic = false;
  // True when every harmonic term carries action derivatives, i.e. the
  // Poisson-bracket route to the curvature is available.
  bool bracket_capable = false;

  // Validate raw action values and attach torus frequencies.
  std::function<ActionVector(const Eigen::VectorXd&)> make_actions;

  // Bosonic path: one harmonic series per model parameter.
  std::function<std::vector<HarmonicSeries>(const ActionVector&)> observable_series;
  // d Omega_a / d I_b, needed to detect secular bracket terms.
  std::function<Eigen::MatrixXd(const ActionVector&)> frequency_jacobian;

  // Fermionic path: spectral data of the single-particle matrix.
  std::function<FermionicSystem(const ActionVector&)> fermionic_system;

  // Closed-form references.
  std::function<Eigen::MatrixXd(const ActionVector&)> closed_metric;
  std::function<Eigen::MatrixXd(const ActionVector&)> closed_curvature;

  // Decomposition of the closed forms into action monomials: the tensor is
  // sum_m coefficient(key_m) * C_m with C_m depending on parameters only.
  // Keys name the monomials ("I^2", "I1*I2", "Ir", ...).  For the singular
  // model the metric map is the leading Taylor expansion about I_theta = 0.
  std::map<std::string, Eigen::MatrixXd> metric_monomials;
  std::map<std::string, Eigen::MatrixXd> curvature_monomials;

  // Default monomial -> value substitution used by the semiclassical checks.
  std::function<QuantizationRegistry(double hbar, const std::string& state)> registry;

  // Expected exact residual of the semiclassical metric comparison, when the
  // model has one (quantum metric minus quantized classical metric).
  std::optional<Eigen::MatrixXd> metric_anomaly;

  // Sampler support; empty function means the model has no phase-space map.
  std::function<PhaseSpaceHooks(const ActionVector&)> phase_space;

  int n_params() const { return point.size(); }
};

// Generalized harmonic oscillator H = (X q^2 + 2 Y q p + Z p^2) / 2 with
// observables (q^2/2, qp, p^2/2).  Requires X Z - Y^2 > 0 and Z > 0.
ModelSpec gho_model(double X, double Y, double Z);

// Two coupled unit masses, H = (p1^2 + p2^2 + k (q1^2 + q2^2) + kp (q1 - q2)^2) / 2,
// observables (sum of normal-mode intensities, relative-mode intensity).
ModelSpec sco_model(double k, double kp);

// Linearly coupled pair H = (p1^2 + p2^2 + A q1^2 + B q2^2 + C q1 q2) / 2 with
// observables (q1^2/2, q2^2/2, q1 q2 / 2).  Requires C != 0, A != B, both
// normal-mode frequencies real and nondegenerate.
ModelSpec lco_model(double A, double B, double C);

// Isotropic 2d oscillator with an inverse-square barrier, reduced to the
// radial torus.  Observables (omega r^2, alpha / r^2); the second one has an
// infinite harmonic series built by discrete Fourier transform and truncated
// at relative tolerance trunc_tol.
ModelSpec singular_model(double omega, double alpha, double trunc_tol = 1e-14,
                         int fft_size = 4096);

// Two-level spin M = sum_i B_i sigma_i with parameters (B1, B2, B3) or the
// spherical chart (B, theta, phi).  Fermionic: tensors come from the spectral
// engine; action values are the level occupations (I1, I2).
ModelSpec spin_model_cartesian(double B1, double B2, double B3);
ModelSpec spin_model_spherical(double B, double theta, double phi);

// CLI entry point: build a model from its id and a name -> value map.
// "spin" dispatches on the parameter names present.
ModelSpec model_from_params(const std::string& id,
                            const std::map<std::string, double>& params);

}  // namespace psgeo
