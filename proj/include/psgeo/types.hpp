#pragma once

// Core value types shared by every module: parameter points, action-angle
// data, finite harmonic series, geometric tensors and quantization rules.
//
// Conventions used throughout the library:
//   * an observable on a torus is a finite sum of terms
//         amp * exp(i (k . phi0 + nu t))
//     with integer wavevector k over the angles and real time frequency nu;
//   * for motion generated by an integrable Hamiltonian, nu = k . Omega,
//     where Omega are the angular frequencies at the given actions;
//   * a series is "real closed" when for every term the conjugate partner
//     (-k, -nu, conj(amp)) is also present, i.e. the observable is real.

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace psgeo {

using Complex = std::complex<double>;

inline constexpr const char* kVersion = "0.1.0";

// Shared default tolerances. They sit well below the accuracy of the
// closed-form builders, and every routine that consumes one takes it as a
// defaulted argument so callers can tighten or relax as needed.
inline constexpr double kMergeDropTol = 1e-15;      // |amp| below this is discarded after merging
inline constexpr double kConjClosureTol = 1e-12;    // reality (conjugation-closure) check
inline constexpr double kNuConsistencyTol = 1e-12;  // relative |nu - k.Omega| bound
inline constexpr double kIncommensurateTol = 1e-9;  // relative |nu_r + nu_s| bound when pairing terms
inline constexpr double kTensorShapeTol = 1e-10;    // metric symmetry / curvature antisymmetry

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };   // mismatched angle/action/parameter counts
struct ParameterError : Error { using Error::Error; };   // inadmissible model parameters or actions
struct DomainError : Error { using Error::Error; };      // argument outside a function's domain
struct CapabilityError : Error { using Error::Error; };  // operation needs data the input lacks
struct SecularTermError : Error { using Error::Error; }; // action derivative would hit an action-dependent frequency
struct DivergentDcError : Error { using Error::Error; }; // zero-frequency amplitude reached a quadrant kernel
struct IncommensurateFrequencyError : Error { using Error::Error; };
struct DegeneracyError : Error { using Error::Error; };  // two-level spectrum too close to crossing
struct RegistryError : Error { using Error::Error; };    // missing quantization rule for a monomial
struct ConditioningError : Error { using Error::Error; };
struct NumericalQualityError : Error { using Error::Error; }; // drift, asymmetry or grid-resolution failure

/// A point x in the space of adiabatic Hamiltonian parameters.
struct ParameterPoint {
  std::vector<std::string> names;
  Eigen::VectorXd values;

  int size() const { return static_cast<int>(values.size()); }
  double value(const std::string& name) const;
};

/// Action variables I_a together with the angular frequencies Omega_a of the
/// corresponding angles at this point of phase space.
struct ActionVector {
  Eigen::VectorXd actions;
  Eigen::VectorXd frequencies;

  int size() const { return static_cast<int>(actions.size()); }
};

/// One Fourier component of an observable along the flow,
/// amp * exp(i (k . phi0 + nu t)).
///
/// amp_dI, when present, holds the partial derivatives of amp with respect
/// to each action (needed for Poisson brackets taken in angle-action form).
/// degree, when present, gives the homogeneity exponents of amp in each
/// action; only models whose amplitudes are pure action monomials fill it.
struct HarmonicTerm {
  Eigen::VectorXi wavevector;
  double nu = 0.0;
  Complex amp{0.0, 0.0};
  std::optional<Eigen::VectorXcd> amp_dI;
  std::optional<Eigen::VectorXd> degree;
};

/// A finite harmonic series over n_angles angles. Instances built through
/// make_series are canonical: terms are sorted, duplicates merged, and
/// negligible amplitudes dropped.
struct HarmonicSeries {
  std::vector<HarmonicTerm> terms;
  int n_angles = 0;
  bool real_closed = false;

  /// Direct evaluation at an angle point and time; used by tests and grid
  /// oracles, not by the analytic pipeline.
  Complex eval(const Eigen::VectorXd& phi0, double t) const;

  int max_abs_wavevector() const;
  double max_abs_frequency() const;
  bool has_action_derivatives() const;
};

/// Canonicalize a set of terms: sort by (k, nu), merge duplicates by
/// amplitude addition, drop |amp| < drop_tol, and detect reality closure.
/// Merging adds amp_dI vectors when both sides carry them (the merged term
/// loses them if only one side does) and keeps degree only when it agrees.
HarmonicSeries make_series(std::vector<HarmonicTerm> terms, int n_angles,
                           double drop_tol = kMergeDropTol);

/// True when every term has its conjugate partner within tol.
bool is_real_closed(const HarmonicSeries& series, double tol = kConjClosureTol);

/// Check nu = k . Omega for every term (relative tolerance against the
/// frequency scale). Throws IncommensurateFrequencyError on failure.
void check_frequency_consistency(const HarmonicSeries& series,
                                 const Eigen::VectorXd& omega,
                                 double rel_tol = kNuConsistencyTol);

/// Provenance and configuration attached to a computed tensor.
struct TensorMeta {
  std::string backend;      // "harmonic" | "spectral" | "sampler" | "closed-form"
  std::string kernel_mode;  // "analytic-limit" | "damped-numeric" | ""
  double epsilon = 0.0;
  int richardson_orders = 0;
  int truncation_order = 0;  // harmonic truncation (singular-oscillator series)
  int grid = 0;              // sampler angle grid per dimension
  double horizon = 0.0;      // sampler time horizon factor
};

/// A metric or curvature tensor over parameter space, evaluated at one
/// (actions, parameters) point.
struct GeometricTensor {
  enum class Kind { Metric, Curvature };

  Kind kind = Kind::Metric;
  Eigen::MatrixXd matrix;
  ParameterPoint point;
  ActionVector actions;
  TensorMeta meta;
};

/// Build a metric tensor: asserts the matrix is symmetric to shape_tol
/// (NumericalQualityError otherwise), stores the symmetrized matrix.
GeometricTensor make_metric(const Eigen::MatrixXd& m, ParameterPoint point,
                            ActionVector actions, TensorMeta meta,
                            double shape_tol = kTensorShapeTol);

/// Build a curvature tensor: asserts antisymmetry to shape_tol, stores the
/// antisymmetrized matrix.
GeometricTensor make_curvature(const Eigen::MatrixXd& f, ParameterPoint point,
                               ActionVector actions, TensorMeta meta,
                               double shape_tol = kTensorShapeTol);

/// Semiclassical substitution rules: the value each action monomial takes in
/// the lowest quantum state, as a function of hbar. Keys name monomials in
/// the model's action variables, e.g. "I^2", "I1*I2", "Ir".
struct QuantizationRegistry {
  double hbar = 1.0;
  std::map<std::string, double> rules;

  double rule_for(const std::string& monomial) const;
};

}  // namespace psgeo
