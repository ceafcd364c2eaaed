#include "psgeo/fermionic.hpp"

#include <cmath>

namespace psgeo {

namespace {

void require_hermitian(const Eigen::Matrix2cd& m, const char* what) {
  const double scale = std::max(1.0, m.norm());
  if ((m - m.adjoint()).norm() > 1e-12 * scale) {
    throw ParameterError(std::string(what) + " must be Hermitian");
  }
}

// Rotate a column so its first component above the noise floor is real
// positive. This pins the eigenvector phase convention.
void fix_phase(Eigen::Matrix2cd& u, int col) {
  const double norm = u.col(col).norm();
  for (int row = 0; row < 2; ++row) {
    const Complex c = u(row, col);
    if (std::abs(c) > 1e-12 * norm) {
      u.col(col) *= std::conj(c) / std::abs(c);
      return;
    }
  }
}

}  // namespace

void diagonalize(const Eigen::Matrix2cd& m, Eigen::Matrix2cd& eigenvectors,
                 Eigen::Vector2d& eigenvalues) {
  require_hermitian(m, "two-level Hamiltonian");
  const double m11 = m(0, 0).real();
  const double m22 = m(1, 1).real();
  const Complex off = m(0, 1);
  const double mean = 0.5 * (m11 + m22);
  const double delta = 0.5 * (m11 - m22);
  const double r = std::hypot(delta, std::abs(off));

  if (2.0 * r < 1e-10 * std::max(1e-300, m.norm())) {
    throw DegeneracyError("two-level spectrum is degenerate: gap " +
                          std::to_string(2.0 * r) + " below threshold");
  }
  eigenvalues << mean + r, mean - r;

  Eigen::Vector2cd v_plus;
  if (std::abs(off) < 1e-14 * std::max(1.0, m.norm())) {
    // Already diagonal: order columns by descending diagonal entry.
    v_plus = (delta >= 0.0) ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
  } else if (delta >= 0.0) {
    v_plus = Eigen::Vector2cd(r + delta, std::conj(off));
  } else {
    v_plus = Eigen::Vector2cd(off, r - delta);
  }
  v_plus.normalize();
  // The second eigenvector of a Hermitian 2x2 is the orthogonal complement.
  const Eigen::Vector2cd v_minus{-std::conj(v_plus(1)), std::conj(v_plus(0))};

  eigenvectors.col(0) = v_plus;
  eigenvectors.col(1) = v_minus;
  fix_phase(eigenvectors, 0);
  fix_phase(eigenvectors, 1);
}

FermionicSystem make_fermionic_system(const Eigen::Matrix2cd& m,
                                      std::vector<Eigen::Matrix2cd> gradients,
                                      const Eigen::Vector2d& occupations) {
  for (const auto& grad : gradients) require_hermitian(grad, "parameter gradient");
  FermionicSystem sys;
  sys.hamiltonian = m;
  sys.gradients = std::move(gradients);
  sys.occupations = occupations;
  diagonalize(m, sys.eigenvectors, sys.frequencies);
  return sys;
}

std::vector<Eigen::Matrix2cd> rotated_gradients(const FermionicSystem& sys) {
  std::vector<Eigen::Matrix2cd> rotated;
  rotated.reserve(sys.gradients.size());
  for (const auto& grad : sys.gradients) {
    rotated.push_back(sys.eigenvectors.adjoint() * grad * sys.eigenvectors);
  }
  return rotated;
}

Eigen::MatrixXd fermionic_metric(const FermionicSystem& sys) {
  const auto rotated = rotated_gradients(sys);
  const int n = static_cast<int>(rotated.size());
  const double gap = sys.frequencies(0) - sys.frequencies(1);
  const double pref = -sys.occupations(0) * sys.occupations(1) / (gap * gap);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) {
    const Complex zi = rotated[i](0, 1);
    for (int j = 0; j < n; ++j) {
      const Complex zj = rotated[j](0, 1);
      // s_i[12] s_j[21] + s_i[21] s_j[12] = 2 Re(z_i conj(z_j))
      g(i, j) = pref * 2.0 * (zi * std::conj(zj)).real();
    }
  }
  return g;
}

Eigen::MatrixXd fermionic_curvature(const FermionicSystem& sys) {
  const auto rotated = rotated_gradients(sys);
  const int n = static_cast<int>(rotated.size());
  const double gap = sys.frequencies(0) - sys.frequencies(1);
  const double pref = sys.occupations(0) - sys.occupations(1);
  Eigen::MatrixXd f(n, n);
  for (int i = 0; i < n; ++i) {
    const Complex zi = rotated[i](0, 1);
    for (int j = 0; j < n; ++j) {
      const Complex zj = rotated[j](0, 1);
      // i (s_i[21] s_j[12] - s_i[12] s_j[21]) = -2 Im(conj(z_i) z_j)
      f(i, j) = -pref * 2.0 * (std::conj(zi) * zj).imag() / (gap * gap);
    }
  }
  return f;
}

double moment_rule(int a, int b) {
  if (a < 1 || a > 2 || b < 1 || b > 2) {
    throw DimensionError("moment_rule: mode labels are 1 or 2");
  }
  return a == b ? 1.0 : 0.0;
}

double moment_rule(int a, int b, int c, int d) {
  for (const int i : {a, b, c, d}) {
    if (i < 1 || i > 2) throw DimensionError("moment_rule: mode labels are 1 or 2");
  }
  double value = 0.0;
  if (a == b && c == d) value += 1.0;
  if (a == 1 && b == 2 && c == 2 && d == 1) value += 1.0;
  if (a == 2 && b == 1 && c == 1 && d == 2) value += 1.0;
  return value;
}

double grassmann_product_value(int a, int b, int c, int d,
                               const Eigen::Vector2d& occupations) {
  if (a == b && c == d) {
    if (a == c) return 0.0;  // a repeated mode squares to zero
    return occupations(a - 1) * occupations(c - 1);
  }
  if ((a == 1 && b == 2 && c == 2 && d == 1) ||
      (a == 2 && b == 1 && c == 1 && d == 2)) {
    return -occupations(0) * occupations(1);  // one exchange: odd sign
  }
  return 0.0;
}

}  // namespace psgeo
