#pragma once

// Algebra of finite harmonic series along an integrable flow: products and
// angle averages, connected two-time correlators, and non-equal-time Poisson
// brackets taken in angle-action form.
//
// A two-time object produced here depends only on t12 = t1 - t2 and is stored
// as a one-dimensional frequency series sum_r amp_r exp(i nu_r t12).

#include <vector>

#include "psgeo/types.hpp"

namespace psgeo {

/// One-dimensional frequency series in the time difference t12 = t1 - t2.
struct CorrelatorTerm {
  double nu = 0.0;
  Complex amp{0.0, 0.0};
};

struct CorrelatorSeries {
  std::vector<CorrelatorTerm> terms;
  bool real_closed = false;

  Complex eval(double t12) const;
};

/// Canonicalize correlator terms: sort by nu, merge within tolerance, drop
/// negligible amplitudes, flag reality closure.
CorrelatorSeries make_correlator(std::vector<CorrelatorTerm> terms,
                                 double drop_tol = kMergeDropTol);

/// Angle average over the torus: keeps exactly the k = 0 terms.
HarmonicSeries angle_average(const HarmonicSeries& s);

/// Pointwise product of two series (wavevector/frequency convolution).
HarmonicSeries series_product(const HarmonicSeries& a, const HarmonicSeries& b);

/// Multiply every amplitude (and its action gradient) by c.
HarmonicSeries scale(const HarmonicSeries& s, Complex c);

/// Shift the angle origin: phi0 -> phi0 + c multiplies each term by
/// exp(i k . c). This is the gauge freedom of the angle coordinates.
HarmonicSeries phase_shift(const HarmonicSeries& s, const Eigen::VectorXd& c);

/// Connected correlator <a(t1) b(t2)> - <a><b> as a series in t12.
///
/// Terms pair when their wavevectors cancel (k_r + k_s = 0) with k_r != 0;
/// each pair contributes amp_r * amp_s at frequency nu_r. Pairs whose time
/// frequencies fail to cancel within kIncommensurateTol raise
/// IncommensurateFrequencyError (they cannot come from one frequency map).
CorrelatorSeries connected_correlator(const HarmonicSeries& a,
                                      const HarmonicSeries& b);

/// Angle-averaged Poisson bracket <{a(t1), b(t2)}> with the bracket taken in
/// the initial angle-action variables (phi0, I):
///   d/dphi0 multiplies a term by i k, d/dI uses the stored amp_dI.
///
/// Requires amp_dI on every term of both series (CapabilityError otherwise).
/// domega_dI, when non-empty, is the matrix dOmega_j / dI_a; any term whose
/// frequency would drift with the actions (k . dOmega/dI != 0) makes the
/// angle-action bracket secular and raises SecularTermError.
CorrelatorSeries poisson_bracket(const HarmonicSeries& a, const HarmonicSeries& b,
                                 const Eigen::MatrixXd& domega_dI = Eigen::MatrixXd());

}  // namespace psgeo
