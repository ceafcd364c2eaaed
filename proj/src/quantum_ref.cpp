#include "psgeo/quantum_ref.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>

namespace psgeo {

namespace {

constexpr double kPi = std::numbers::pi;

double dilog_series(double z) {
  // |z| <= 1/2: geometric decay, ~55 terms at the boundary.
  double sum = 0.0;
  double power = 1.0;
  for (int k = 1; k < 200; ++k) {
    power *= z;
    const double term = power / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

}  // namespace

double dilog(double z) {
  if (!(z >= -0.5 && z <= 1.0)) {
    throw DomainError("dilog implemented on [-0.5, 1]; got z = " + std::to_string(z));
  }
  if (z <= 0.5) return dilog_series(z);
  if (z == 1.0) return kPi * kPi / 6.0;
  // Reflection: Li2(z) = pi^2/6 - ln(z) ln(1-z) - Li2(1-z), 1-z in (0, 1/2].
  return kPi * kPi / 6.0 - std::log(z) * std::log1p(-z) - dilog_series(1.0 - z);
}

double trigamma(double z) {
  if (!(z > 0.0)) {
    throw DomainError("trigamma requires z > 0; got z = " + std::to_string(z));
  }
  // psi_1(z) = psi_1(z+1) + 1/z^2 until the asymptotic series is accurate.
  double acc = 0.0;
  while (z < 10.0) {
    acc += 1.0 / (z * z);
    z += 1.0;
  }
  const double inv = 1.0 / z;
  const double inv2 = inv * inv;
  // Bernoulli numbers B_2 .. B_14 over z^{2k+1}.
  static constexpr double bernoulli[] = {1.0 / 6.0,   -1.0 / 30.0,    1.0 / 42.0,
                                         -1.0 / 30.0, 5.0 / 66.0,     -691.0 / 2730.0,
                                         7.0 / 6.0};
  double tail = inv + 0.5 * inv2;
  double power = inv * inv2;  // 1/z^3
  for (const double b : bernoulli) {
    tail += b * power;
    power *= inv2;
  }
  return acc + tail;
}

namespace {

Eigen::MatrixXd zero_like(int n) { return Eigen::MatrixXd::Zero(n, n); }

QuantumReference gho_reference(const ParameterPoint& x, double hbar) {
  const double X = x.value("X"), Y = x.value("Y"), Z = x.value("Z");
  const double w2 = X * Z - Y * Y;
  if (w2 <= 0.0) throw ParameterError("gho reference needs X Z - Y^2 > 0");
  const double w = std::sqrt(w2);

  Eigen::Matrix3d g;
  g << Z * Z, -2.0 * Y * Z, 2.0 * Y * Y - X * Z,
       -2.0 * Y * Z, 4.0 * X * Z, -2.0 * X * Y,
       2.0 * Y * Y - X * Z, -2.0 * X * Y, X * X;
  g /= 32.0 * w2 * w2;

  Eigen::Matrix3d f = Eigen::Matrix3d::Zero();
  const double c = 1.0 / (8.0 * w2 * w);
  f(0, 1) = -Z * c;
  f(0, 2) = Y * c;
  f(1, 2) = -X * c;
  f -= Eigen::Matrix3d(f.transpose()).eval();

  return {"gho", "ground", hbar, g, f};
}

QuantumReference sco_reference(const ParameterPoint& x, double hbar) {
  const double k = x.value("k"), kp = x.value("kp");
  const double w1sq = k, w2sq = k + 2.0 * kp;
  if (w1sq <= 0.0 || w2sq <= 0.0) throw ParameterError("sco reference needs positive mode frequencies");
  Eigen::Matrix2d g;
  const double a = 1.0 / (w1sq * w1sq), b = 1.0 / (w2sq * w2sq);
  g << a + b, 2.0 * b, 2.0 * b, 4.0 * b;
  g /= 32.0;
  return {"sco", "ground", hbar, g, zero_like(2)};
}

struct LcoGeometry {
  double w1, w2;          // mode frequencies
  Eigen::Vector3d dw1, dw2, dalpha;
};

// Shared normal-mode geometry of the linearly coupled pair: rotation angle
// alpha in (-pi/4, pi/4) with tan(2 alpha) = C / (B - A), and the gradients
// of (w1, w2, alpha) with respect to (A, B, C).
LcoGeometry lco_geometry(double A, double B, double C) {
  if (A == B) throw ParameterError("coupled-oscillator geometry needs A != B");
  const double two_alpha = std::atan(C / (B - A));
  const double mu = std::cos(two_alpha);
  const double nu = std::sin(two_alpha);
  const double tan_alpha = nu / (1.0 + mu);
  const double w1sq = A - 0.5 * C * tan_alpha;
  const double w2sq = B + 0.5 * C * tan_alpha;
  if (w1sq <= 0.0 || w2sq <= 0.0) {
    throw ParameterError("coupled-oscillator geometry needs positive mode frequencies");
  }
  LcoGeometry geo;
  geo.w1 = std::sqrt(w1sq);
  geo.w2 = std::sqrt(w2sq);
  if (std::abs(geo.w1 - geo.w2) <= 1e-8 * std::max(geo.w1, geo.w2)) {
    throw ParameterError("coupled-oscillator geometry is degenerate: w1 == w2");
  }
  const Eigen::Vector3d grad_w1sq{0.5 * (1.0 + mu), 0.5 * (1.0 - mu), -0.5 * nu};
  const Eigen::Vector3d grad_w2sq{0.5 * (1.0 - mu), 0.5 * (1.0 + mu), 0.5 * nu};
  geo.dw1 = grad_w1sq / (2.0 * geo.w1);
  geo.dw2 = grad_w2sq / (2.0 * geo.w2);
  geo.dalpha = Eigen::Vector3d{nu * nu, -nu * nu, mu * nu} / (2.0 * C);
  return geo;
}

QuantumReference lco_reference(const ParameterPoint& x, double hbar) {
  const auto geo = lco_geometry(x.value("A"), x.value("B"), x.value("C"));
  const double ratio = geo.w1 / geo.w2 + geo.w2 / geo.w1;
  Eigen::Matrix3d g = geo.dw1 * geo.dw1.transpose() / (8.0 * geo.w1 * geo.w1) +
                      geo.dw2 * geo.dw2.transpose() / (8.0 * geo.w2 * geo.w2) +
                      geo.dalpha * geo.dalpha.transpose() * (0.25 * ratio - 0.5);
  return {"lco", "ground", hbar, g, zero_like(3)};
}

QuantumReference singular_reference(const ParameterPoint& x, double hbar) {
  const double w = x.value("omega"), alpha = x.value("alpha");
  if (w <= 0.0) throw ParameterError("singular reference needs omega > 0");
  if (alpha <= 0.0) {
    throw DomainError("singular quantum reference needs alpha > 0 (normalizable states)");
  }
  Eigen::Matrix2d g;
  g(0, 0) = (alpha + hbar) / (4.0 * hbar * w * w);
  g(0, 1) = g(1, 0) = -1.0 / (4.0 * hbar * w);
  g(1, 1) = trigamma(1.0 + alpha / hbar) / (4.0 * hbar * hbar);
  return {"singular", "ground", hbar, g, zero_like(2)};
}

QuantumReference spin_spherical_reference(const ParameterPoint& x, double hbar,
                                          const std::string& state) {
  const double theta = x.value("theta");
  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
  g(1, 1) = 0.25;
  g(2, 2) = 0.25 * std::sin(theta) * std::sin(theta);
  Eigen::Matrix3d f = Eigen::Matrix3d::Zero();
  const double sign = (state == "-") ? 1.0 : -1.0;
  f(1, 2) = sign * std::sin(theta);
  f(2, 1) = -f(1, 2);
  return {"spin", state, hbar, g, f};
}

QuantumReference spin_cartesian_reference(const ParameterPoint& x, double hbar,
                                          const std::string& state) {
  const Eigen::Vector3d B{x.value("B1"), x.value("B2"), x.value("B3")};
  const double Bn = B.norm();
  if (Bn <= 0.0) throw ParameterError("spin reference needs |B| > 0");
  Eigen::Matrix3d g =
      (Bn * Bn * Eigen::Matrix3d::Identity() - B * B.transpose()) / (4.0 * std::pow(Bn, 4));
  const double sign = (state == "-") ? 1.0 : -1.0;
  Eigen::Matrix3d f = Eigen::Matrix3d::Zero();
  const double c = sign / (Bn * Bn * Bn);
  f(0, 1) = c * B(2);
  f(1, 2) = c * B(0);
  f(2, 0) = c * B(1);
  f -= Eigen::Matrix3d(f.transpose()).eval();
  return {"spin", state, hbar, g, f};
}

bool has_names(const ParameterPoint& x, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (std::find(x.names.begin(), x.names.end(), n) == x.names.end()) return false;
  }
  return true;
}

}  // namespace

QuantumReference quantum_tensors(const std::string& model_id, const ParameterPoint& x,
                                 double hbar, const std::string& state) {
  if (hbar <= 0.0) throw ParameterError("quantum reference needs hbar > 0");
  if (model_id == "gho") return gho_reference(x, hbar);
  if (model_id == "sco") return sco_reference(x, hbar);
  if (model_id == "lco") return lco_reference(x, hbar);
  if (model_id == "singular") return singular_reference(x, hbar);
  if (model_id == "spin") {
    const std::string s = (state == "ground") ? "+" : state;
    if (s != "+" && s != "-") throw ParameterError("spin state label must be '+' or '-'");
    if (has_names(x, {"B", "theta", "phi"})) return spin_spherical_reference(x, hbar, s);
    if (has_names(x, {"B1", "B2", "B3"})) return spin_cartesian_reference(x, hbar, s);
    throw ParameterError("spin reference needs {B,theta,phi} or {B1,B2,B3} parameters");
  }
  throw ParameterError("no quantum reference for model id '" + model_id + "'");
}

}  // namespace psgeo
