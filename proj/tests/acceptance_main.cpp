// Acceptance suite: one line per criterion, PASS or FAIL, nonzero exit when
// anything fails. Each criterion checks a behavior of the library against
// independently written formulas or independently computed oracles.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "psgeo/engine.hpp"
#include "psgeo/fermionic.hpp"
#include "psgeo/kernels.hpp"
#include "psgeo/quantum_ref.hpp"
#include "psgeo/sampler.hpp"

using namespace psgeo;

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double rel_dev(const Eigen::MatrixXd& value, const Eigen::MatrixXd& reference) {
  const double scale = std::max(1.0, reference.cwiseAbs().maxCoeff());
  return (value - reference).cwiseAbs().maxCoeff() / scale;
}

int failures = 0;

void criterion(const char* name, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("threw: ") + e.what();
  }
  if (ok) {
    std::printf("PASS  %s\n", name);
  } else {
    std::printf("FAIL  %s%s%s\n", name, detail.empty() ? "" : " -- ", detail.c_str());
    ++failures;
  }
  std::fflush(stdout);
}

bool within(std::string& detail, double dev, double tol, const char* what) {
  if (dev < tol) return true;
  detail += std::string(what) + " deviates by " + std::to_string(dev) + "; ";
  return false;
}

// --- independent closed forms ----------------------------------------------

Eigen::Matrix3d gho_metric_formula(double X, double Y, double Z, double I) {
  const double w2 = X * Z - Y * Y;
  Eigen::Matrix3d g;
  g << Z * Z, -2 * Y * Z, 2 * Y * Y - X * Z,
      -2 * Y * Z, 4 * X * Z, -2 * X * Y,
      2 * Y * Y - X * Z, -2 * X * Y, X * X;
  return (I * I / (32 * w2 * w2)) * g;
}

Eigen::Matrix3d gho_curvature_formula(double X, double Y, double Z, double I) {
  const double w3 = std::pow(X * Z - Y * Y, 1.5);
  Eigen::Matrix3d f = Eigen::Matrix3d::Zero();
  f(0, 1) = -Z * I / (4 * w3);
  f(0, 2) = Y * I / (4 * w3);
  f(1, 2) = -X * I / (4 * w3);
  f -= Eigen::Matrix3d(f.transpose()).eval();
  return f;
}

Eigen::Matrix2cd random_hermitian(std::mt19937& rng) {
  const double a = uniform(rng, -2.0, 2.0);
  const double d = uniform(rng, -2.0, 2.0);
  const Complex off{uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)};
  Eigen::Matrix2cd m;
  m << a, off, std::conj(off), d;
  return m;
}

Eigen::MatrixXd fermionic_metric_by_term_sum(const FermionicSystem& sys) {
  const auto s = rotated_gradients(sys);
  const int n = static_cast<int>(s.size());
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex acc{0.0, 0.0};
      for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
          for (int c = 1; c <= 2; ++c)
            for (int d = 1; d <= 2; ++d) {
              const double weight =
                  (moment_rule(a, b, c, d) - moment_rule(a, b) * moment_rule(c, d)) *
                  grassmann_product_value(a, b, c, d, sys.occupations);
              if (weight == 0.0) continue;
              const double nu = sys.frequencies(a - 1) - sys.frequencies(b - 1);
              acc += s[i](a - 1, b - 1) * s[j](c - 1, d - 1) * weight * quadrant_kernel(nu);
            }
      g(i, j) = -acc.real();
    }
  }
  return g;
}

}  // namespace

int main() {
  criterion("gho: correlator tensors match the closed forms at random points",
            [](std::string& detail) {
              std::mt19937 rng(101);
              bool ok = true;
              for (int rep = 0; rep < 10; ++rep) {
                const double Z = uniform(rng, 0.3, 2.5);
                const double Y = uniform(rng, -1.0, 1.0);
                const double X = (Y * Y + uniform(rng, 0.2, 2.0)) / Z;
                const double I = uniform(rng, 0.3, 2.0);
                const ModelSpec model = gho_model(X, Y, Z);
                const Eigen::VectorXd actions = Eigen::VectorXd::Constant(1, I);
                ok &= within(detail,
                             rel_dev(classical_metric(model, actions).matrix,
                                     gho_metric_formula(X, Y, Z, I)),
                             1e-10, "metric");
                ok &= within(detail,
                             rel_dev(classical_curvature(model, actions).matrix,
                                     gho_curvature_formula(X, Y, Z, I)),
                             1e-10, "curvature");
              }
              return ok;
            });

  criterion("gho: quantized monomials reproduce the quantum reference exactly",
            [](std::string& detail) {
              bool ok = true;
              for (const double hbar : {0.3, 0.7, 1.0}) {
                const ModelSpec model = gho_model(1.3, 0.4, 0.9);
                const RelationReport rep =
                    check_semiclassical(model, model.registry(hbar, "ground"));
                ok &= within(detail, rep.metric.residual.cwiseAbs().maxCoeff(), 1e-12,
                             "metric residual");
                ok &= rep.curvature.has_value();
                if (rep.curvature) {
                  ok &= within(detail, rep.curvature->residual.cwiseAbs().maxCoeff(),
                               1e-12, "curvature residual");
                }
              }
              return ok;
            });

  criterion("sco: metric, determinant, flat curvature, frequency-gradient split",
            [](std::string& detail) {
              std::mt19937 rng(202);
              bool ok = true;
              for (int rep = 0; rep < 10; ++rep) {
                const double k = uniform(rng, 0.4, 2.0);
                const double kp = uniform(rng, -0.15, 1.5);
                const double I1 = uniform(rng, 0.3, 2.0);
                const double I2 = uniform(rng, 0.3, 2.0);
                const ModelSpec model = sco_model(k, kp);
                const Eigen::Vector2d actions(I1, I2);
                const ActionVector av = model.make_actions(actions);

                const Eigen::MatrixXd g = classical_metric(model, actions).matrix;
                const Eigen::MatrixXd g_closed = model.closed_metric(av);
                ok &= within(detail, rel_dev(g, g_closed), 1e-10, "metric");

                const double w1sq = k, w2sq = k + 2 * kp;
                const double det_ref =
                    I1 * I1 * I2 * I2 / (256 * w1sq * w1sq * w2sq * w2sq);
                ok &= within(detail, std::abs(g.determinant() - det_ref) / det_ref, 1e-10,
                             "determinant");

                ok &= within(detail,
                             classical_curvature(model, actions).matrix.cwiseAbs().maxCoeff(),
                             1e-10, "curvature");

                // Sum over modes of I_a^2 (d_i w_a)(d_j w_a) / (8 w_a^2), with
                // d(w^2) = (1, 0) and (1, 2) for the two modes.
                const double w1 = std::sqrt(w1sq), w2 = std::sqrt(w2sq);
                const Eigen::Vector2d dw1 = Eigen::Vector2d(1, 0) / (2 * w1);
                const Eigen::Vector2d dw2 = Eigen::Vector2d(1, 2) / (2 * w2);
                const Eigen::Matrix2d split =
                    (I1 * I1 / (8 * w1sq)) * dw1 * dw1.transpose() +
                    (I2 * I2 / (8 * w2sq)) * dw2 * dw2.transpose();
                ok &= within(detail, rel_dev(g_closed, split), 1e-12, "mode split");
              }
              return ok;
            });

  criterion("lco: metric closed form, flat curvature, exact quantization residual",
            [](std::string& detail) {
              std::mt19937 rng(303);
              bool ok = true;
              for (int rep = 0; rep < 10; ++rep) {
                const double lo = uniform(rng, 1.0, 3.0);
                const double hi = lo + uniform(rng, 0.4, 2.0);
                const double A = (rep % 2) ? lo : hi;
                const double B = (rep % 2) ? hi : lo;
                const double C = uniform(rng, 0.2, 1.2) * ((rep % 3) ? 1.0 : -1.0);
                const double I1 = uniform(rng, 0.3, 1.5);
                const double I2 = uniform(rng, 0.3, 1.5);

                const double two_alpha = std::atan(C / (B - A));
                const double mu = std::cos(two_alpha), nu = std::sin(two_alpha);
                const double tan_alpha = nu / (1.0 + mu);
                const double w1sq = A - 0.5 * C * tan_alpha;
                const double w2sq = B + 0.5 * C * tan_alpha;
                if (w1sq <= 0 || w2sq <= 0) continue;
                const double w1 = std::sqrt(w1sq), w2 = std::sqrt(w2sq);
                const Eigen::Vector3d dw1 =
                    Eigen::Vector3d(0.5 * (1 + mu), 0.5 * (1 - mu), -0.5 * nu) / (2 * w1);
                const Eigen::Vector3d dw2 =
                    Eigen::Vector3d(0.5 * (1 - mu), 0.5 * (1 + mu), 0.5 * nu) / (2 * w2);
                const Eigen::Vector3d da =
                    Eigen::Vector3d(nu * nu, -nu * nu, mu * nu) / (2 * C);
                const double ratio = w1 / w2 + w2 / w1;
                const Eigen::Matrix3d formula =
                    (I1 * I1 / (8 * w1sq)) * dw1 * dw1.transpose() +
                    (I2 * I2 / (8 * w2sq)) * dw2 * dw2.transpose() +
                    ratio * I1 * I2 * da * da.transpose();

                const ModelSpec model = lco_model(A, B, C);
                const Eigen::Vector2d actions(I1, I2);
                ok &= within(detail,
                             rel_dev(classical_metric(model, actions).matrix, formula),
                             1e-10, "metric");
                ok &= within(detail,
                             classical_curvature(model, actions).matrix.cwiseAbs().maxCoeff(),
                             1e-10, "curvature");

                const RelationReport rep_rel =
                    check_semiclassical(model, model.registry(0.5, "ground"));
                const Eigen::Matrix3d anomaly = -0.5 * da * da.transpose();
                ok &= within(detail, rel_dev(rep_rel.metric.residual, anomaly), 1e-10,
                             "quantization residual");
              }
              return ok;
            });

  criterion("singular: dilog metric, flat curvature, order-by-order quantization",
            [](std::string& detail) {
              bool ok = true;
              const double w = 1.0, alpha = 1.0;
              const ModelSpec model = singular_model(w, alpha);
              for (const double a : {0.3, 0.6, 0.9}) {
                const double E = w * alpha / std::sqrt(1 - a * a);
                const double Ir = (E / w - alpha) / 2;
                const Eigen::Vector2d actions(Ir, 0.0);
                const Eigen::MatrixXd g = classical_metric(model, actions).matrix;

                const double ptheta = alpha;  // Itheta = 0
                ok &= within(detail,
                             std::abs(g(0, 0) - (Ir * Ir + Ir * ptheta) / (2 * w * w)) /
                                 std::max(1.0, std::abs(g(0, 0))),
                             1e-10, "g(0,0)");
                ok &= within(detail,
                             std::abs(g(0, 1) + alpha * Ir / (2 * w * ptheta)) /
                                 std::max(1.0, std::abs(g(0, 1))),
                             1e-10, "g(0,1)");
                const double g11_ref = 0.5 * alpha * alpha / (ptheta * ptheta) *
                                       dilog(Ir / (Ir + ptheta));
                ok &= within(detail, std::abs(g(1, 1) - g11_ref), 1e-6, "g(1,1)");

                const Eigen::Matrix2d closed =
                    model.closed_metric(model.make_actions(actions));
                ok &= within(detail,
                             std::abs(g.determinant() - closed.determinant()) /
                                 std::abs(closed.determinant()),
                             1e-6, "determinant");

                ok &= within(detail,
                             classical_curvature(model, actions).matrix.cwiseAbs().maxCoeff(),
                             1e-8, "curvature");
              }

              const RelationReport rep =
                  check_semiclassical(model, model.registry(0.2, "ground"));
              if (!rep.expansion) {
                detail += "no expansion comparison; ";
                return false;
              }
              const auto& e = *rep.expansion;
              ok &= within(detail,
                           std::abs(e.classical_coeffs(0) - e.quantum_coeffs(0)) /
                               std::abs(e.quantum_coeffs(0)),
                           1e-6, "first-order coefficient");
              const double gap = e.classical_coeffs(1) - e.quantum_coeffs(1);
              const double gap_ref = -1.0 / (16 * alpha * alpha);
              ok &= within(detail, std::abs(gap - gap_ref) / std::abs(gap_ref), 1e-4,
                           "second-order mismatch");
              return ok;
            });

  criterion("spin: spectral tensors, both charts, relations, flux, term-sum oracle",
            [](std::string& detail) {
              bool ok = true;
              std::mt19937 rng(404);

              // Cartesian closed form and the zero mode along the field.
              for (int rep = 0; rep < 5; ++rep) {
                Eigen::Vector3d B(uniform(rng, -1.5, 1.5), uniform(rng, -1.5, 1.5),
                                  uniform(rng, -1.5, 1.5));
                if (B.norm() < 0.3) B(2) += 1.0;
                const double I1 = uniform(rng, 0.0, 1.2), I2 = uniform(rng, 0.0, 1.2);
                const ModelSpec model = spin_model_cartesian(B(0), B(1), B(2));
                const Eigen::Vector2d actions(I1, I2);
                const Eigen::MatrixXd g = classical_metric(model, actions).matrix;
                const double B2 = B.squaredNorm();
                const Eigen::Matrix3d S =
                    (B2 * Eigen::Matrix3d::Identity() - B * B.transpose()) / (B2 * B2);
                ok &= within(detail, rel_dev(g, -0.5 * I1 * I2 * S), 1e-12, "cartesian metric");
                ok &= within(detail, (g * B).cwiseAbs().maxCoeff(), 1e-12, "field null mode");
                ok &= within(detail, std::abs(g.determinant()), 1e-12, "rank");

                const double c = (I1 - I2) / (2 * std::pow(B.norm(), 3));
                Eigen::Matrix3d f = Eigen::Matrix3d::Zero();
                f(0, 1) = c * B(2);
                f(1, 2) = c * B(0);
                f(2, 0) = c * B(1);
                f -= Eigen::Matrix3d(f.transpose()).eval();
                ok &= within(detail,
                             rel_dev(classical_curvature(model, actions).matrix, f), 1e-12,
                             "cartesian curvature");
              }

              // Spherical chart.
              for (int rep = 0; rep < 5; ++rep) {
                const double Bmag = uniform(rng, 0.5, 2.0);
                const double theta = uniform(rng, 0.2, kPi - 0.2);
                const double phi = uniform(rng, 0.0, 2 * kPi);
                const double I1 = uniform(rng, 0.0, 1.2), I2 = uniform(rng, 0.0, 1.2);
                const ModelSpec model = spin_model_spherical(Bmag, theta, phi);
                const Eigen::Vector2d actions(I1, I2);
                Eigen::Matrix3d g_ref = Eigen::Matrix3d::Zero();
                g_ref(1, 1) = -0.5 * I1 * I2;
                g_ref(2, 2) = -0.5 * I1 * I2 * std::sin(theta) * std::sin(theta);
                ok &= within(detail,
                             rel_dev(classical_metric(model, actions).matrix, g_ref), 1e-12,
                             "spherical metric");
                const Eigen::MatrixXd f = classical_curvature(model, actions).matrix;
                ok &= within(detail,
                             std::abs(f(1, 2) - 0.5 * (I1 - I2) * std::sin(theta)), 1e-12,
                             "spherical curvature");
              }

              // Semiclassical relations on both sheets.
              const ModelSpec rel_model = spin_model_spherical(1.2, 0.9, 0.3);
              for (const char* state : {"+", "-"}) {
                const RelationReport rep =
                    check_semiclassical(rel_model, rel_model.registry(1.0, state), state);
                ok &= within(detail, rep.metric.residual.cwiseAbs().maxCoeff(), 1e-12,
                             "metric relation");
                if (rep.curvature) {
                  ok &= within(detail, rep.curvature->residual.cwiseAbs().maxCoeff(), 1e-12,
                               "curvature relation");
                } else {
                  detail += "missing curvature relation; ";
                  ok = false;
                }
              }

              // Flux of the curvature across the sphere of field directions.
              {
                const double I1 = 1.0, I2 = 0.25;
                const int n_theta = 2000, n_phi = 8;
                const double d_theta = kPi / n_theta, d_phi = 2 * kPi / n_phi;
                double flux = 0.0;
                for (int it = 0; it < n_theta; ++it) {
                  const double theta = (it + 0.5) * d_theta;
                  for (int ip = 0; ip < n_phi; ++ip) {
                    const double phi = (ip + 0.5) * d_phi;
                    const ModelSpec model = spin_model_spherical(1.3, theta, phi);
                    flux += model.closed_curvature(
                                model.make_actions(Eigen::Vector2d(I1, I2)))(1, 2) *
                            d_theta * d_phi;
                  }
                }
                ok &= within(detail,
                             std::abs(flux - 2 * kPi * (I1 - I2)) / (2 * kPi * (I1 - I2)),
                             1e-6, "flux");
              }

              // Spectral engine against the angle-average term-sum oracle.
              int tested = 0;
              for (int rep = 0; rep < 40 && tested < 20; ++rep) {
                const Eigen::Matrix2cd m = random_hermitian(rng);
                Eigen::Matrix2cd u;
                Eigen::Vector2d ev;
                try {
                  diagonalize(m, u, ev);
                } catch (const DegeneracyError&) {
                  continue;
                }
                if (ev(0) - ev(1) < 0.1) continue;
                std::vector<Eigen::Matrix2cd> grads;
                for (int i = 0; i < 3; ++i) grads.push_back(random_hermitian(rng));
                const Eigen::Vector2d occ(uniform(rng, 0.2, 1.5), uniform(rng, 0.2, 1.5));
                const FermionicSystem sys = make_fermionic_system(m, grads, occ);
                ok &= within(detail,
                             rel_dev(fermionic_metric(sys), fermionic_metric_by_term_sum(sys)),
                             1e-12, "term-sum oracle");
                ++tested;
              }
              if (tested < 20) {
                detail += "only " + std::to_string(tested) + " oracle systems; ";
                ok = false;
              }
              return ok;
            });

  criterion("kernels: exact integral identities and damped-limit convergence",
            [](std::string& detail) {
              bool ok = true;
              ok &= quadrant_kernel(2.0) == Complex{-0.25, 0.0};
              ok &= quadrant_kernel(-2.0) == Complex{-0.25, 0.0};
              ok &= quadrant_kernel(0.5) == Complex{-4.0, 0.0};
              if (!ok) detail += "pinned kernel values; ";

              const CorrelatorSeries cos2 =
                  make_correlator({{2.0, {1.0 / 32, 0.0}}, {-2.0, {1.0 / 32, 0.0}}});
              ok &= within(detail,
                           std::abs(integrate_correlator(cos2).real() + 1.0 / 64), 1e-15,
                           "cosine integral");

              const CorrelatorSeries mixed = make_correlator({{3.0, {0.25, 0.0}},
                                                              {-3.0, {0.25, 0.0}},
                                                              {1.0, {0.25, 0.0}},
                                                              {-1.0, {0.25, 0.0}}});
              ok &= within(detail,
                           std::abs(integrate_correlator(mixed).real() + 5.0 / 9), 1e-15,
                           "product-of-cosines integral");

              const CorrelatorSeries generic = make_correlator({{0.7, {0.2, 0.05}},
                                                                {-0.7, {0.2, -0.05}},
                                                                {1.9, {-0.1, 0.3}},
                                                                {-1.9, {-0.1, -0.3}}});
              KernelConfig cfg;
              cfg.mode = KernelConfig::Mode::DampedNumeric;
              cfg.epsilon = 0.1;
              cfg.richardson_orders = 6;
              ok &= within(detail,
                           std::abs(integrate_correlator(generic, cfg) -
                                    integrate_correlator(generic)),
                           1e-8, "damped extrapolation");
              return ok;
            });

  criterion("sampler: phase-space integration reproduces the correlator engine",
            [](std::string& detail) {
              bool ok = true;
              std::mt19937 rng(505);
              for (int rep = 0; rep < 3; ++rep) {
                const double Z = uniform(rng, 0.5, 2.0);
                const double Y = uniform(rng, -0.8, 0.8);
                const double X = (Y * Y + uniform(rng, 0.3, 1.5)) / Z;
                const double I = uniform(rng, 0.4, 1.6);
                const ModelSpec model = gho_model(X, Y, Z);
                const Eigen::VectorXd actions = Eigen::VectorXd::Constant(1, I);
                ok &= within(detail,
                             rel_dev(sample_tensor(model, actions).matrix,
                                     classical_metric(model, actions).matrix),
                             1e-4, "gho sampled metric");
              }
              for (int rep = 0; rep < 3; ++rep) {
                const ModelSpec model =
                    sco_model(uniform(rng, 0.5, 1.8), uniform(rng, 0.0, 1.2));
                const Eigen::Vector2d actions(uniform(rng, 0.4, 1.5),
                                              uniform(rng, 0.4, 1.5));
                ok &= within(detail,
                             rel_dev(sample_tensor(model, actions).matrix,
                                     classical_metric(model, actions).matrix),
                             1e-4, "sco sampled metric");
              }
              for (int rep = 0; rep < 3; ++rep) {
                const double A = uniform(rng, 1.0, 2.0);
                const double B = A + uniform(rng, 0.5, 1.5);
                const double C = uniform(rng, 0.3, 1.0);
                const ModelSpec model = lco_model(A, B, C);
                const Eigen::Vector2d actions(uniform(rng, 0.4, 1.5),
                                              uniform(rng, 0.4, 1.5));
                ok &= within(detail,
                             rel_dev(sample_tensor(model, actions).matrix,
                                     classical_metric(model, actions).matrix),
                             1e-4, "lco sampled metric");
              }
              {
                const ModelSpec model = gho_model(1.7, 0.5, 1.1);
                const Eigen::VectorXd actions = Eigen::VectorXd::Constant(1, 0.9);
                ok &= within(detail,
                             rel_dev(sample_curvature(model, actions).matrix,
                                     classical_curvature(model, actions).matrix),
                             1e-3, "gho sampled curvature");
              }
              return ok;
            });

  criterion("properties: gauge invariance, symmetry, scaling, positivity, chart change",
            [](std::string& detail) {
              bool ok = true;
              std::mt19937 rng(606);

              // Gauge invariance under random angle-origin shifts.
              struct Case {
                ModelSpec model;
                Eigen::VectorXd actions;
              };
              std::vector<Case> cases;
              cases.push_back({gho_model(1.7, 0.5, 1.1), Eigen::VectorXd::Constant(1, 0.9)});
              cases.push_back({sco_model(1.3, 0.8), Eigen::Vector2d(0.7, 1.2)});
              cases.push_back({lco_model(2.4, 1.1, 0.9), Eigen::Vector2d(0.6, 1.4)});
              cases.push_back({singular_model(1.3, 0.8), Eigen::Vector2d(0.9, 0.4)});
              cases.push_back({spin_model_cartesian(0.3, -0.8, 1.1), Eigen::Vector2d(1.0, 0.2)});
              for (const auto& c : cases) {
                const Eigen::MatrixXd g0 = classical_metric(c.model, c.actions).matrix;
                const Eigen::MatrixXd f0 = classical_curvature(c.model, c.actions).matrix;
                ok &= within(detail, rel_dev(g0, g0.transpose()), 1e-12, "metric symmetry");
                ok &= within(detail, rel_dev(f0, Eigen::MatrixXd(-f0.transpose())), 1e-12,
                             "curvature antisymmetry");
                for (int rep = 0; rep < 5; ++rep) {
                  Eigen::VectorXd shift(c.model.n_angles);
                  for (int d = 0; d < c.model.n_angles; ++d)
                    shift(d) = uniform(rng, 0.0, 2 * kPi);
                  const ModelSpec shifted = gauge_shift(c.model, shift);
                  ok &= within(detail,
                               rel_dev(classical_metric(shifted, c.actions).matrix, g0),
                               1e-10, "gauge-shifted metric");
                  ok &= within(detail,
                               rel_dev(classical_curvature(shifted, c.actions).matrix, f0),
                               1e-10, "gauge-shifted curvature");
                }
              }

              // Action scaling of the one-mode model.
              {
                const ModelSpec model = gho_model(1.7, 0.5, 1.1);
                const double s = 1.7, I = 0.8;
                const Eigen::VectorXd one = Eigen::VectorXd::Constant(1, I);
                const Eigen::VectorXd scaled = Eigen::VectorXd::Constant(1, s * I);
                ok &= within(detail,
                             rel_dev(classical_metric(model, scaled).matrix,
                                     s * s * classical_metric(model, one).matrix),
                             1e-12, "metric scaling");
                ok &= within(detail,
                             rel_dev(classical_curvature(model, scaled).matrix,
                                     s * classical_curvature(model, one).matrix),
                             1e-12, "curvature scaling");
              }

              // Positive semidefiniteness of the bosonic metrics.
              for (std::size_t ci = 0; ci + 1 < cases.size(); ++ci) {  // bosonic cases only
                const Eigen::MatrixXd g =
                    classical_metric(cases[ci].model, cases[ci].actions).matrix;
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
                ok &= within(detail, std::max(0.0, -es.eigenvalues().minCoeff()), 1e-12,
                             "metric positivity");
              }

              // Chart change: spherical tensors are the cartesian ones pulled
              // back through B(B, theta, phi).
              {
                const double Bmag = 1.4, theta = 0.9, phi = 0.5;
                const Eigen::Vector2d actions(1.0, 0.3);
                const ModelSpec cart = spin_model_cartesian(
                    Bmag * std::sin(theta) * std::cos(phi),
                    Bmag * std::sin(theta) * std::sin(phi), Bmag * std::cos(theta));
                const ModelSpec sph = spin_model_spherical(Bmag, theta, phi);
                Eigen::Matrix3d jac;
                jac << std::sin(theta) * std::cos(phi),
                    Bmag * std::cos(theta) * std::cos(phi),
                    -Bmag * std::sin(theta) * std::sin(phi),
                    std::sin(theta) * std::sin(phi),
                    Bmag * std::cos(theta) * std::sin(phi),
                    Bmag * std::sin(theta) * std::cos(phi),
                    std::cos(theta), -Bmag * std::sin(theta), 0.0;
                const GeometricTensor g_cart = classical_metric(cart, actions);
                const GeometricTensor f_cart = classical_curvature(cart, actions);
                ok &= within(detail,
                             rel_dev(tensor_transform(g_cart, jac).matrix,
                                     classical_metric(sph, actions).matrix),
                             1e-10, "metric chart change");
                ok &= within(detail,
                             rel_dev(tensor_transform(f_cart, jac).matrix,
                                     classical_curvature(sph, actions).matrix),
                             1e-10, "curvature chart change");
              }
              return ok;
            });

  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria failed\n", failures);
  return 1;
}
