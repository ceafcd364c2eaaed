#include <cmath>
#include <utility>

#include "psgeo/models.hpp"

namespace psgeo {

namespace {

Eigen::Matrix2cd pauli(int i) {
  const Complex i01(0, 1);
  Eigen::Matrix2cd s;
  switch (i) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -i01, i01, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

Eigen::Matrix2cd field_matrix(const Eigen::Vector3d& b) {
  return b(0) * pauli(1) + b(1) * pauli(2) + b(2) * pauli(3);
}

// Shared assembly for both spin charts. metric_shape and curvature_shape
// carry the parameter dependence: the closed forms are
//   g = -(I1 I2 / 2) * metric_shape,
//   F = (I1 - I2) * curvature_shape.
ModelSpec make_spin_spec(ParameterPoint point, Eigen::Matrix2cd hamiltonian,
                         std::vector<Eigen::Matrix2cd> gradients, double level,
                         Eigen::MatrixXd metric_shape, Eigen::MatrixXd curvature_shape) {
  ModelSpec spec;
  spec.id = "spin";
  spec.point = std::move(point);
  spec.action_names = {"I1", "I2"};
  spec.n_angles = 2;
  spec.fermionic = true;
  spec.bracket_capable = true;  // curvature comes from the spectral path

  spec.make_actions = [level](const Eigen::VectorXd& raw) {
    if (raw.size() != 2) {
      throw DimensionError("spin: expected 2 occupation values, got " +
                           std::to_string(raw.size()));
    }
    if (!raw.allFinite()) {
      throw ParameterError("spin: occupations must be finite");
    }
    if (raw(0) < 0.0 || raw(1) < 0.0) {
      throw ParameterError("spin: occupations must be nonnegative");
    }
    ActionVector av;
    av.actions = raw;
    av.frequencies = Eigen::Vector2d(level, -level);
    return av;
  };

  spec.frequency_jacobian = [](const ActionVector&) { return Eigen::MatrixXd::Zero(2, 2).eval(); };

  spec.fermionic_system = [hamiltonian, gradients](const ActionVector& av) {
    return make_fermionic_system(hamiltonian, gradients, av.actions.head<2>());
  };

  spec.closed_metric = [metric_shape](const ActionVector& av) {
    return (-0.5 * av.actions(0) * av.actions(1) * metric_shape).eval();
  };
  spec.closed_curvature = [curvature_shape](const ActionVector& av) {
    return ((av.actions(0) - av.actions(1)) * curvature_shape).eval();
  };
  spec.metric_monomials["I1*I2"] = -0.5 * metric_shape;
  spec.curvature_monomials["I1"] = curvature_shape;
  spec.curvature_monomials["I2"] = -curvature_shape;

  // Lowest-state occupations of the two levels: the "+" (upper-level-empty)
  // state takes (I1, I2) -> (0, hbar) conventions folded into the rules.
  spec.registry = [](double hbar, const std::string& state) {
    const double s = (state == "-" || state == "minus") ? -1.0 : 1.0;
    QuantizationRegistry reg;
    reg.hbar = hbar;
    reg.rules = {{"I1*I2", -0.5 * hbar * hbar}, {"I1", -s * hbar}, {"I2", s * hbar}};
    return reg;
  };

  return spec;
}

}  // namespace

ModelSpec spin_model_cartesian(double B1, double B2, double B3) {
  const Eigen::Vector3d b(B1, B2, B3);
  const double B = b.norm();
  if (!(B > 0.0)) {
    throw ParameterError("spin: field magnitude must be positive");
  }
  ParameterPoint point;
  point.names = {"B1", "B2", "B3"};
  point.values = b;

  std::vector<Eigen::Matrix2cd> gradients = {pauli(1), pauli(2), pauli(3)};

  const Eigen::Matrix3d metric_shape =
      (Eigen::Matrix3d::Identity() * B * B - b * b.transpose()) / (B * B * B * B);
  Eigen::Matrix3d curv = Eigen::Matrix3d::Zero();
  curv(0, 1) = B3;
  curv(1, 2) = B1;
  curv(2, 0) = B2;
  curv -= curv.transpose().eval();
  curv /= 2 * B * B * B;

  return make_spin_spec(std::move(point), field_matrix(b), std::move(gradients), B,
                        metric_shape, curv);
}

ModelSpec spin_model_spherical(double B, double theta, double phi) {
  if (!(B > 0.0)) {
    throw ParameterError("spin: field magnitude must be positive");
  }
  ParameterPoint point;
  point.names = {"B", "theta", "phi"};
  point.values = Eigen::Vector3d(B, theta, phi);

  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  const Eigen::Vector3d n(st * cp, st * sp, ct);
  const Eigen::Vector3d dn_dtheta(ct * cp, ct * sp, -st);
  const Eigen::Vector3d dn_dphi(-st * sp, st * cp, 0.0);

  std::vector<Eigen::Matrix2cd> gradients = {field_matrix(n),
                                             field_matrix((B * dn_dtheta).eval()),
                                             field_matrix((B * dn_dphi).eval())};

  Eigen::Matrix3d metric_shape = Eigen::Matrix3d::Zero();
  metric_shape(1, 1) = 1.0;
  metric_shape(2, 2) = st * st;
  Eigen::Matrix3d curv = Eigen::Matrix3d::Zero();
  curv(1, 2) = 0.5 * st;
  curv(2, 1) = -0.5 * st;

  return make_spin_spec(std::move(point), field_matrix((B * n).eval()), std::move(gradients),
                        B, metric_shape, curv);
}

}  // namespace psgeo
