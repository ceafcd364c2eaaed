#pragma once

// Two-level fermionic systems: classical observables built from a pair of
// Grassmann-valued mode amplitudes evolving under a 2x2 Hermitian matrix
// M(x). The anticommuting statistics change the connected correlator's sign
// structure, so these models bypass the commuting harmonic-series algebra
// and evaluate the quadrant integrals in the eigenbasis directly:
//
//   g_ij = -(I1 I2 / (O1 - O2)^2) (s_i[12] s_j[21] + s_i[21] s_j[12])
//   F_ij = (i (I1 - I2) / (O1 - O2)^2) (s_i[21] s_j[12] - s_i[12] s_j[21])
//
// with s_i = U^dag (dM/dx_i) U the parameter gradients rotated into the
// eigenbasis, O the eigenvalues and I the mode occupations.

#include <vector>

#include <Eigen/Dense>

#include "psgeo/types.hpp"

namespace psgeo {

/// A two-level system bound to one parameter point: the Hamiltonian matrix,
/// its parameter gradients, the eigendecomposition and the occupations.
struct FermionicSystem {
  Eigen::Matrix2cd hamiltonian;
  std::vector<Eigen::Matrix2cd> gradients;  // dM/dx_i, one per parameter
  Eigen::Matrix2cd eigenvectors;            // columns ordered by descending eigenvalue
  Eigen::Vector2d frequencies;              // eigenvalues, descending
  Eigen::Vector2d occupations;              // I_1, I_2
};

/// Closed-form eigendecomposition of a 2x2 Hermitian matrix. Eigenvalues
/// descending; each eigenvector's first nonzero component is real positive.
/// Raises DegeneracyError when the gap is below 1e-10 * ||M||.
void diagonalize(const Eigen::Matrix2cd& m, Eigen::Matrix2cd& eigenvectors,
                 Eigen::Vector2d& eigenvalues);

/// Assemble a FermionicSystem (diagonalizes and validates the inputs).
FermionicSystem make_fermionic_system(const Eigen::Matrix2cd& m,
                                      std::vector<Eigen::Matrix2cd> gradients,
                                      const Eigen::Vector2d& occupations);

/// Gradients rotated into the eigenbasis, s_i = U^dag (dM/dx_i) U.
std::vector<Eigen::Matrix2cd> rotated_gradients(const FermionicSystem& sys);

/// Metric over parameter space; real symmetric, rank <= 2 for a two-level
/// system (it is built from the two off-diagonal vectors).
Eigen::MatrixXd fermionic_metric(const FermionicSystem& sys);

/// Curvature over parameter space; real antisymmetric, proportional to the
/// occupation difference I1 - I2.
Eigen::MatrixXd fermionic_curvature(const FermionicSystem& sys);

/// Angle averages of products of mode phase factors,
///   <exp(i (phi_a - phi_b))>            (two-point)
///   <exp(i (phi_a - phi_b + phi_c - phi_d))>  (four-point),
/// which vanish unless the phases cancel:
///   two-point:  delta_ab
///   four-point: delta_ab delta_cd + delta_a1 delta_b2 delta_c2 delta_d1
///                                 + delta_a2 delta_b1 delta_c1 delta_d2.
/// Indices are 1-based mode labels. These rules feed the brute-force
/// term-sum oracle in the test suite.
double moment_rule(int a, int b);
double moment_rule(int a, int b, int c, int d);

/// Value of the (anticommuting) mode-amplitude product
/// psi*_a psi_b psi*_c psi_d after the exchange signs, expressed through the
/// occupations: I_a I_c for distinct paired modes, -I1 I2 for the exchange
/// pairings, 0 when a repeated mode would square to zero.
double grassmann_product_value(int a, int b, int c, int d,
                               const Eigen::Vector2d& occupations);

}  // namespace psgeo
