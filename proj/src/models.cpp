#include "psgeo/models.hpp"

#include <cmath>
#include <utility>

namespace psgeo {

namespace {

// Validate a raw action vector for a bosonic model.
Eigen::VectorXd checked_actions(const Eigen::VectorXd& raw, int n, const char* model) {
  if (raw.size() != n) {
    throw DimensionError(std::string(model) + ": expected " + std::to_string(n) +
                         " action value(s), got " + std::to_string(raw.size()));
  }
  if (!raw.allFinite()) {
    throw ParameterError(std::string(model) + ": action values must be finite");
  }
  for (int i = 0; i < n; ++i) {
    if (raw(i) < 0.0) {
      throw ParameterError(std::string(model) + ": action values must be nonnegative");
    }
  }
  return raw;
}

// Harmonic term whose amplitude is coeff * prod_a I_a^{degree_a}; amp_dI is
// filled from the same coefficient so it stays exact at vanishing actions.
HarmonicTerm monomial_term(const Eigen::VectorXi& k, double nu, Complex amp,
                           const Eigen::VectorXcd& amp_dI, const Eigen::VectorXd& degree) {
  HarmonicTerm t;
  t.wavevector = k;
  t.nu = nu;
  t.amp = amp;
  t.amp_dI = amp_dI;
  t.degree = degree;
  return t;
}

Eigen::VectorXi wavevector1(int k) { return Eigen::VectorXi::Constant(1, k); }

Eigen::VectorXi wavevector2(int k1, int k2) {
  Eigen::VectorXi k(2);
  k << k1, k2;
  return k;
}

}  // namespace

// ---------------------------------------------------------------------------
// Generalized harmonic oscillator
// ---------------------------------------------------------------------------

ModelSpec gho_model(double X, double Y, double Z) {
  const double w2 = X * Z - Y * Y;
  if (!(w2 > 0.0)) {
    throw ParameterError("gho: omega^2 = XZ - Y^2 must be positive");
  }
  if (!(Z > 0.0)) {
    throw ParameterError("gho: Z must be positive");
  }
  const double w = std::sqrt(w2);

  ModelSpec spec;
  spec.id = "gho";
  spec.point.names = {"X", "Y", "Z"};
  spec.point.values = Eigen::Vector3d(X, Y, Z);
  spec.action_names = {"I"};
  spec.n_angles = 1;
  spec.bracket_capable = true;

  spec.make_actions = [w](const Eigen::VectorXd& raw) {
    ActionVector av;
    av.actions = checked_actions(raw, 1, "gho");
    av.frequencies = Eigen::VectorXd::Constant(1, w);
    return av;
  };

  spec.frequency_jacobian = [](const ActionVector&) { return Eigen::MatrixXd::Zero(1, 1).eval(); };

  // Per-exponential coefficients of the observables (q^2/2, qp, p^2/2) in
  // theta = phi0 + w t, with the torus map
  //   q = sqrt(2 Z I / w) sin(theta),
  //   p = sqrt(2 Z I / w) (-(Y/Z) sin(theta) + (w/Z) cos(theta)).
  // Every amplitude is linear in I, so amp_dI is the coefficient itself.
  spec.observable_series = [X, Y, Z, w](const ActionVector& av) {
    const double I = av.actions(0);
    auto term = [&](int k, Complex coeff) {
      return monomial_term(wavevector1(k), k * w, coeff * I,
                           Eigen::VectorXcd::Constant(1, coeff),
                           Eigen::VectorXd::Constant(1, 1.0));
    };
    const Complex i01(0.0, 1.0);
    std::vector<HarmonicSeries> out;
    out.push_back(make_series({term(0, Z / (2 * w)),
                               term(2, -Z / (4 * w)),
                               term(-2, -Z / (4 * w))},
                              1));
    const Complex c_qp = Y / (2 * w) - i01 * 0.5;
    out.push_back(make_series({term(0, -Y / w), term(2, c_qp), term(-2, std::conj(c_qp))}, 1));
    const Complex c_pp = (w * w - Y * Y) / (4 * Z * w) + i01 * Y / (2 * Z);
    out.push_back(make_series({term(0, X / (2 * w)), term(2, c_pp), term(-2, std::conj(c_pp))}, 1));
    return out;
  };

  Eigen::Matrix3d metric_shape;
  metric_shape << Z * Z, -2 * Y * Z, 2 * Y * Y - X * Z,
      -2 * Y * Z, 4 * X * Z, -2 * X * Y,
      2 * Y * Y - X * Z, -2 * X * Y, X * X;
  metric_shape /= 32 * w2 * w2;

  Eigen::Matrix3d curv_shape = Eigen::Matrix3d::Zero();
  curv_shape(0, 1) = -Z;
  curv_shape(0, 2) = Y;
  curv_shape(1, 2) = -X;
  curv_shape -= curv_shape.transpose().eval();
  curv_shape /= 4 * w2 * w;

  spec.closed_metric = [metric_shape](const ActionVector& av) {
    const double I = av.actions(0);
    return (I * I * metric_shape).eval();
  };
  spec.closed_curvature = [curv_shape](const ActionVector& av) {
    const double I = av.actions(0);
    return (I * curv_shape).eval();
  };
  spec.metric_monomials["I^2"] = metric_shape;
  spec.curvature_monomials["I"] = curv_shape;

  spec.registry = [](double hbar, const std::string&) {
    QuantizationRegistry reg;
    reg.hbar = hbar;
    reg.rules = {{"I^2", hbar * hbar}, {"I", hbar / 2}};
    return reg;
  };

  spec.phase_space = [X, Y, Z, w](const ActionVector& av) {
    const double I = av.actions(0);
    PhaseSpaceHooks hooks;
    hooks.n_dof = 1;
    hooks.grid_default = 64;
    hooks.curvature_capable = true;
    const double r = std::sqrt(2 * Z * I / w);
    hooks.from_angles = [r, Y, Z, w](const Eigen::VectorXd& angles) {
      const double s = std::sin(angles(0)), c = std::cos(angles(0));
      Eigen::VectorXd z(2);
      z << r * s, r * (-(Y / Z) * s + (w / Z) * c);
      return z;
    };
    hooks.hamiltonian = [X, Y, Z](const Eigen::VectorXd& z) {
      return 0.5 * (X * z(0) * z(0) + 2 * Y * z(0) * z(1) + Z * z(1) * z(1));
    };
    Eigen::Matrix2d A;
    A << Y, Z, -X, -Y;
    hooks.linear_flow = A;
    hooks.flow = [A](const Eigen::VectorXd& z) { return (A * z).eval(); };
    hooks.observables = [](const Eigen::VectorXd& z) {
      Eigen::VectorXd v(3);
      v << 0.5 * z(0) * z(0), z(0) * z(1), 0.5 * z(1) * z(1);
      return v;
    };
    hooks.observable_gradients = [](const Eigen::VectorXd& z) {
      Eigen::MatrixXd grad(2, 3);
      grad << z(0), z(1), 0.0,
              0.0, z(0), z(1);
      return grad;
    };
    hooks.observables_batch = [](const Eigen::MatrixXd& z) {
      Eigen::MatrixXd v(3, z.cols());
      v.row(0) = 0.5 * z.row(0).cwiseProduct(z.row(0));
      v.row(1) = z.row(0).cwiseProduct(z.row(1));
      v.row(2) = 0.5 * z.row(1).cwiseProduct(z.row(1));
      return v;
    };
    hooks.gradients_batch = [](int index, const Eigen::MatrixXd& z) {
      Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(2, z.cols());
      switch (index) {
        case 0:
          grad.row(0) = z.row(0);
          break;
        case 1:
          grad.row(0) = z.row(1);
          grad.row(1) = z.row(0);
          break;
        default:
          grad.row(1) = z.row(1);
          break;
      }
      return grad;
    };
    return hooks;
  };

  return spec;
}

// ---------------------------------------------------------------------------
// Symmetrically coupled pair
// ---------------------------------------------------------------------------

ModelSpec sco_model(double k, double kp) {
  const double w1sq = k;
  const double w2sq = k + 2 * kp;
  if (!(w1sq > 0.0) || !(w2sq > 0.0)) {
    throw ParameterError("sco: both mode frequencies must be real, needs k > 0 and k + 2 kp > 0");
  }
  const double w1 = std::sqrt(w1sq), w2 = std::sqrt(w2sq);

  ModelSpec spec;
  spec.id = "sco";
  spec.point.names = {"k", "kp"};
  spec.point.values = Eigen::Vector2d(k, kp);
  spec.action_names = {"I1", "I2"};
  spec.n_angles = 2;
  spec.bracket_capable = true;

  spec.make_actions = [w1, w2](const Eigen::VectorXd& raw) {
    ActionVector av;
    av.actions = checked_actions(raw, 2, "sco");
    av.frequencies = Eigen::Vector2d(w1, w2);
    return av;
  };

  spec.frequency_jacobian = [](const ActionVector&) { return Eigen::MatrixXd::Zero(2, 2).eval(); };

  // Normal modes Q1 (center of mass, frequency w1) and Q2 (relative,
  // frequency w2).  Observables conjugate to (k, kp):
  //   d H / d k  = (q1^2 + q2^2) / 2 = (Q1^2 + Q2^2) / 2,
  //   d H / d kp = (q1 - q2)^2 / 2  = Q2^2.
  spec.observable_series = [w1, w2](const ActionVector& av) {
    const double I1 = av.actions(0), I2 = av.actions(1);
    auto mode_term = [&](int a, int kk, double coeff_over_I) {
      const double Ia = a == 0 ? I1 : I2;
      const double wa = a == 0 ? w1 : w2;
      Eigen::VectorXcd dI = Eigen::VectorXcd::Zero(2);
      dI(a) = coeff_over_I;
      Eigen::VectorXd degree = Eigen::VectorXd::Zero(2);
      degree(a) = 1.0;
      return monomial_term(a == 0 ? wavevector2(kk, 0) : wavevector2(0, kk), kk * wa,
                           coeff_over_I * Ia, dI, degree);
    };
    std::vector<HarmonicSeries> out;
    out.push_back(make_series({mode_term(0, 0, 1 / (2 * w1)),
                               mode_term(0, 2, -1 / (4 * w1)),
                               mode_term(0, -2, -1 / (4 * w1)),
                               mode_term(1, 0, 1 / (2 * w2)),
                               mode_term(1, 2, -1 / (4 * w2)),
                               mode_term(1, -2, -1 / (4 * w2))},
                              2));
    out.push_back(make_series({mode_term(1, 0, 1 / w2),
                               mode_term(1, 2, -1 / (2 * w2)),
                               mode_term(1, -2, -1 / (2 * w2))},
                              2));
    return out;
  };

  Eigen::Matrix2d c1 = Eigen::Matrix2d::Zero();
  c1(0, 0) = 1 / (32 * w1sq * w1sq);
  Eigen::Matrix2d c2;
  c2 << 1, 2, 2, 4;
  c2 /= 32 * w2sq * w2sq;

  spec.closed_metric = [c1, c2](const ActionVector& av) {
    const double I1 = av.actions(0), I2 = av.actions(1);
    return (I1 * I1 * c1 + I2 * I2 * c2).eval();
  };
  spec.closed_curvature = [](const ActionVector&) { return Eigen::MatrixXd::Zero(2, 2).eval(); };
  spec.metric_monomials["I1^2"] = c1;
  spec.metric_monomials["I2^2"] = c2;

  spec.registry = [](double hbar, const std::string&) {
    QuantizationRegistry reg;
    reg.hbar = hbar;
    reg.rules = {{"I1^2", hbar * hbar}, {"I2^2", hbar * hbar}};
    return reg;
  };

  spec.phase_space = [w1, w2](const ActionVector& av) {
    const double I1 = av.actions(0), I2 = av.actions(1);
    PhaseSpaceHooks hooks;
    hooks.n_dof = 2;
    hooks.grid_default = 12;
    const double r1 = std::sqrt(2 * I1 / w1), r2 = std::sqrt(2 * I2 / w2);
    hooks.from_angles = [r1, r2, w1, w2](const Eigen::VectorXd& angles) {
      Eigen::VectorXd z(4);
      z << r1 * std::sin(angles(0)), r2 * std::sin(angles(1)),
          r1 * w1 * std::cos(angles(0)), r2 * w2 * std::cos(angles(1));
      return z;
    };
    hooks.hamiltonian = [w1sq = w1 * w1, w2sq = w2 * w2](const Eigen::VectorXd& z) {
      return 0.5 * (z(2) * z(2) + z(3) * z(3) + w1sq * z(0) * z(0) + w2sq * z(1) * z(1));
    };
    Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
    A(0, 2) = 1;
    A(1, 3) = 1;
    A(2, 0) = -w1 * w1;
    A(3, 1) = -w2 * w2;
    hooks.linear_flow = A;
    hooks.flow = [A](const Eigen::VectorXd& z) { return (A * z).eval(); };
    hooks.observables = [](const Eigen::VectorXd& z) {
      Eigen::VectorXd v(2);
      v << 0.5 * (z(0) * z(0) + z(1) * z(1)), z(1) * z(1);
      return v;
    };
    hooks.observables_batch = [](const Eigen::MatrixXd& z) {
      Eigen::MatrixXd v(2, z.cols());
      v.row(0) = 0.5 * (z.row(0).cwiseProduct(z.row(0)) + z.row(1).cwiseProduct(z.row(1)));
      v.row(1) = z.row(1).cwiseProduct(z.row(1));
      return v;
    };
    return hooks;
  };

  return spec;
}

// ---------------------------------------------------------------------------
// Linearly coupled pair
// ---------------------------------------------------------------------------

namespace {

// Normal-mode frame of H = (p^2 + A q1^2 + B q2^2 + C q1 q2) / 2: rotation
// angle alpha diagonalizing the quadratic form, mode frequencies, and the
// parameter-space gradients of (w1, w2, alpha).
struct NormalModeFrame {
  double w1 = 0, w2 = 0;
  double alpha = 0, mu = 0, nu = 0;  // mu = cos 2a, nu = sin 2a
  Eigen::Vector3d dw1, dw2, dalpha;
};

NormalModeFrame lco_frame(double A, double B, double C) {
  if (C == 0.0) {
    throw ParameterError("lco: C must be nonzero (modes decouple at C = 0)");
  }
  if (A == B) {
    throw ParameterError("lco: A and B must differ (rotation angle undefined at A = B)");
  }
  NormalModeFrame f;
  const double two_alpha = std::atan(C / (B - A));
  f.alpha = 0.5 * two_alpha;
  f.mu = std::cos(two_alpha);
  f.nu = std::sin(two_alpha);
  const double tan_alpha = f.nu / (1.0 + f.mu);
  const double w1sq = A - 0.5 * C * tan_alpha;
  const double w2sq = B + 0.5 * C * tan_alpha;
  if (!(w1sq > 0.0) || !(w2sq > 0.0)) {
    throw ParameterError("lco: both normal-mode frequencies must be real");
  }
  f.w1 = std::sqrt(w1sq);
  f.w2 = std::sqrt(w2sq);
  if (std::abs(f.w1 - f.w2) <= 1e-8 * std::max(f.w1, f.w2)) {
    throw ParameterError("lco: normal modes are degenerate at this point");
  }
  const Eigen::Vector3d dw1sq(0.5 * (1 + f.mu), 0.5 * (1 - f.mu), -0.5 * f.nu);
  const Eigen::Vector3d dw2sq(0.5 * (1 - f.mu), 0.5 * (1 + f.mu), 0.5 * f.nu);
  f.dw1 = dw1sq / (2 * f.w1);
  f.dw2 = dw2sq / (2 * f.w2);
  f.dalpha = Eigen::Vector3d(f.nu * f.nu, -f.nu * f.nu, f.mu * f.nu) / (2 * C);
  return f;
}

}  // namespace

ModelSpec lco_model(double A, double B, double C) {
  const NormalModeFrame f = lco_frame(A, B, C);

  ModelSpec spec;
  spec.id = "lco";
  spec.point.names = {"A", "B", "C"};
  spec.point.values = Eigen::Vector3d(A, B, C);
  spec.action_names = {"I1", "I2"};
  spec.n_angles = 2;
  spec.bracket_capable = true;

  spec.make_actions = [f](const Eigen::VectorXd& raw) {
    ActionVector av;
    av.actions = checked_actions(raw, 2, "lco");
    av.frequencies = Eigen::Vector2d(f.w1, f.w2);
    return av;
  };

  spec.frequency_jacobian = [](const ActionVector&) { return Eigen::MatrixXd::Zero(2, 2).eval(); };

  // In normal coordinates the observable conjugate to parameter i is
  //   lambda_i = w1 d_i(w1) Q1^2 + w2 d_i(w2) Q2^2 + (w2^2 - w1^2) d_i(alpha) Q1 Q2,
  // which expands into single-mode harmonics (k = 0, +-2 e_a) plus the
  // beat harmonics k = (+-1, -+1) and (+-1, +-1) from Q1 Q2.
  spec.observable_series = [f](const ActionVector& av) {
    const double I1 = av.actions(0), I2 = av.actions(1);
    const double gap = f.w2 * f.w2 - f.w1 * f.w1;
    std::vector<HarmonicSeries> out;
    for (int i = 0; i < 3; ++i) {
      std::vector<HarmonicTerm> terms;
      auto add_mode = [&](int a, double di_w) {
        const double Ia = a == 0 ? I1 : I2;
        const double wa = a == 0 ? f.w1 : f.w2;
        Eigen::VectorXd degree = Eigen::VectorXd::Zero(2);
        degree(a) = 1.0;
        Eigen::VectorXcd dc_dI = Eigen::VectorXcd::Zero(2);
        dc_dI(a) = di_w;
        terms.push_back(monomial_term(wavevector2(0, 0), 0.0, di_w * Ia, dc_dI, degree));
        for (int kk : {2, -2}) {
          Eigen::VectorXcd dI = Eigen::VectorXcd::Zero(2);
          dI(a) = -0.5 * di_w;
          terms.push_back(monomial_term(a == 0 ? wavevector2(kk, 0) : wavevector2(0, kk),
                                        kk * wa, -0.5 * di_w * Ia, dI, degree));
        }
      };
      add_mode(0, f.dw1(i));
      add_mode(1, f.dw2(i));
      if (I1 > 0.0 && I2 > 0.0) {
        const double s = gap * f.dalpha(i) * std::sqrt(I1 * I2 / (f.w1 * f.w2));
        const Eigen::VectorXd degree = Eigen::VectorXd::Constant(2, 0.5);
        auto cross = [&](int k1, int k2, double amp) {
          Eigen::VectorXcd dI(2);
          dI << amp / (2 * I1), amp / (2 * I2);
          terms.push_back(monomial_term(wavevector2(k1, k2), k1 * f.w1 + k2 * f.w2,
                                        amp, dI, degree));
        };
        cross(1, -1, 0.5 * s);
        cross(-1, 1, 0.5 * s);
        cross(1, 1, -0.5 * s);
        cross(-1, -1, -0.5 * s);
      }
      out.push_back(make_series(std::move(terms), 2));
    }
    return out;
  };

  const Eigen::Matrix3d m1 = (f.dw1 * f.dw1.transpose()) / (8 * f.w1 * f.w1);
  const Eigen::Matrix3d m2 = (f.dw2 * f.dw2.transpose()) / (8 * f.w2 * f.w2);
  const double ratio = f.w1 / f.w2 + f.w2 / f.w1;
  const Eigen::Matrix3d mx = ratio * (f.dalpha * f.dalpha.transpose());

  spec.closed_metric = [m1, m2, mx](const ActionVector& av) {
    const double I1 = av.actions(0), I2 = av.actions(1);
    return (I1 * I1 * m1 + I2 * I2 * m2 + I1 * I2 * mx).eval();
  };
  spec.closed_curvature = [](const ActionVector&) { return Eigen::MatrixXd::Zero(3, 3).eval(); };
  spec.metric_monomials["I1^2"] = m1;
  spec.metric_monomials["I2^2"] = m2;
  spec.metric_monomials["I1*I2"] = mx;
  spec.metric_anomaly = (-0.5 * (f.dalpha * f.dalpha.transpose())).eval();

  spec.registry = [](double hbar, const std::string&) {
    QuantizationRegistry reg;
    reg.hbar = hbar;
    reg.rules = {{"I1^2", hbar * hbar}, {"I2^2", hbar * hbar}, {"I1*I2", hbar * hbar / 4}};
    return reg;
  };

  spec.phase_space = [f](const ActionVector& av) {
    const double I1 = av.actions(0), I2 = av.actions(1);
    PhaseSpaceHooks hooks;
    hooks.n_dof = 2;
    hooks.grid_default = 12;
    const double r1 = std::sqrt(2 * I1 / f.w1), r2 = std::sqrt(2 * I2 / f.w2);
    const double w1 = f.w1, w2 = f.w2;
    hooks.from_angles = [r1, r2, w1, w2](const Eigen::VectorXd& angles) {
      Eigen::VectorXd z(4);
      z << r1 * std::sin(angles(0)), r2 * std::sin(angles(1)),
          r1 * w1 * std::cos(angles(0)), r2 * w2 * std::cos(angles(1));
      return z;
    };
    hooks.hamiltonian = [w1, w2](const Eigen::VectorXd& z) {
      return 0.5 * (z(2) * z(2) + z(3) * z(3) + w1 * w1 * z(0) * z(0) + w2 * w2 * z(1) * z(1));
    };
    Eigen::Matrix4d Aflow = Eigen::Matrix4d::Zero();
    Aflow(0, 2) = 1;
    Aflow(1, 3) = 1;
    Aflow(2, 0) = -w1 * w1;
    Aflow(3, 1) = -w2 * w2;
    hooks.linear_flow = Aflow;
    hooks.flow = [Aflow](const Eigen::VectorXd& z) { return (Aflow * z).eval(); };
    // Observables live in the original coordinates q = R(alpha) Q.
    const double ca = std::cos(f.alpha), sa = std::sin(f.alpha);
    hooks.observables = [ca, sa](const Eigen::VectorXd& z) {
      const double q1 = ca * z(0) + sa * z(1);
      const double q2 = -sa * z(0) + ca * z(1);
      Eigen::VectorXd v(3);
      v << 0.5 * q1 * q1, 0.5 * q2 * q2, 0.5 * q1 * q2;
      return v;
    };
    hooks.observables_batch = [ca, sa](const Eigen::MatrixXd& z) {
      const Eigen::RowVectorXd q1 = ca * z.row(0) + sa * z.row(1);
      const Eigen::RowVectorXd q2 = -sa * z.row(0) + ca * z.row(1);
      Eigen::MatrixXd v(3, z.cols());
      v.row(0) = 0.5 * q1.cwiseProduct(q1);
      v.row(1) = 0.5 * q2.cwiseProduct(q2);
      v.row(2) = 0.5 * q1.cwiseProduct(q2);
      return v;
    };
    return hooks;
  };

  return spec;
}

// ---------------------------------------------------------------------------
// CLI dispatch
// ---------------------------------------------------------------------------

namespace {

double take_param(std::map<std::string, double>& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) {
    throw ParameterError("missing parameter '" + key + "'");
  }
  const double v = it->second;
  m.erase(it);
  return v;
}

void expect_no_leftovers(const std::map<std::string, double>& m, const std::string& id) {
  if (!m.empty()) {
    throw ParameterError("unknown parameter '" + m.begin()->first + "' for model '" + id + "'");
  }
}

}  // namespace

ModelSpec model_from_params(const std::string& id,
                            const std::map<std::string, double>& params) {
  auto p = params;
  if (id == "gho") {
    const double X = take_param(p, "X"), Y = take_param(p, "Y"), Z = take_param(p, "Z");
    expect_no_leftovers(p, id);
    return gho_model(X, Y, Z);
  }
  if (id == "sco") {
    const double k = take_param(p, "k");
    const double kp = p.count("k'") ? take_param(p, "k'") : take_param(p, "kp");
    expect_no_leftovers(p, id);
    return sco_model(k, kp);
  }
  if (id == "lco") {
    const double A = take_param(p, "A"), B = take_param(p, "B"), C = take_param(p, "C");
    expect_no_leftovers(p, id);
    return lco_model(A, B, C);
  }
  if (id == "singular") {
    const double omega = take_param(p, "omega"), alpha = take_param(p, "alpha");
    double trunc_tol = 1e-14;
    int fft_size = 4096;
    if (p.count("trunc_tol")) trunc_tol = take_param(p, "trunc_tol");
    if (p.count("fft_size")) fft_size = static_cast<int>(take_param(p, "fft_size"));
    expect_no_leftovers(p, id);
    return singular_model(omega, alpha, trunc_tol, fft_size);
  }
  if (id == "spin") {
    if (p.count("B1") || p.count("B2") || p.count("B3")) {
      const double B1 = take_param(p, "B1"), B2 = take_param(p, "B2"), B3 = take_param(p, "B3");
      expect_no_leftovers(p, id);
      return spin_model_cartesian(B1, B2, B3);
    }
    if (p.count("B") || p.count("theta") || p.count("phi")) {
      const double B = take_param(p, "B"), theta = take_param(p, "theta"),
                   phi = take_param(p, "phi");
      expect_no_leftovers(p, id);
      return spin_model_spherical(B, theta, phi);
    }
    throw ParameterError("spin: expected parameters B1,B2,B3 or B,theta,phi");
  }
  throw ParameterError("unknown model id '" + id + "'");
}

}  // namespace psgeo
