#include "psgeo/engine.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "psgeo/fermionic.hpp"
#include "psgeo/harmonics.hpp"
#include "psgeo/quantum_ref.hpp"

namespace psgeo {

namespace {

// Imaginary parts of the assembled entries must be numerical noise; a real
// residue means the series was not conjugation closed.
double real_entry(Complex value, const char* what) {
  if (std::abs(value.imag()) > 1e-10 * std::max(1.0, std::abs(value.real()))) {
    throw NumericalQualityError(std::string(what) + " entry kept an imaginary residue of " +
                                std::to_string(value.imag()));
  }
  return value.real();
}

TensorMeta harmonic_meta(const KernelConfig& config, int truncation_order) {
  TensorMeta meta;
  meta.backend = "harmonic";
  if (config.mode == KernelConfig::Mode::AnalyticLimit) {
    meta.kernel_mode = "analytic-limit";
  } else {
    meta.kernel_mode = "damped-numeric";
    meta.epsilon = config.epsilon;
    meta.richardson_orders = config.richardson_orders;
  }
  meta.truncation_order = truncation_order;
  return meta;
}

std::vector<HarmonicSeries> checked_series(const ModelSpec& model, const ActionVector& av) {
  if (!model.observable_series) {
    throw CapabilityError("model '" + model.id + "' provides no harmonic series");
  }
  std::vector<HarmonicSeries> series = model.observable_series(av);
  if (static_cast<int>(series.size()) != model.n_params()) {
    throw DimensionError("model '" + model.id + "' produced " + std::to_string(series.size()) +
                         " series for " + std::to_string(model.n_params()) + " parameters");
  }
  for (const auto& s : series) check_frequency_consistency(s, av.frequencies);
  return series;
}

int truncation_order(const std::vector<HarmonicSeries>& series) {
  int order = 0;
  for (const auto& s : series) order = std::max(order, s.max_abs_wavevector());
  return order;
}

}  // namespace

GeometricTensor classical_metric(const ModelSpec& model, const Eigen::VectorXd& actions,
                                 const KernelConfig& config) {
  if (!model.make_actions) throw CapabilityError("model '" + model.id + "' lacks an action map");
  const ActionVector av = model.make_actions(actions);

  if (model.fermionic) {
    if (!model.fermionic_system) {
      throw CapabilityError("model '" + model.id + "' is fermionic but has no spectral data");
    }
    TensorMeta meta;
    meta.backend = "spectral";
    return make_metric(fermionic_metric(model.fermionic_system(av)), model.point, av, meta);
  }

  const auto series = checked_series(model, av);
  const int n = model.n_params();
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex val = integrate_correlator(connected_correlator(series[i], series[j]), config);
      g(i, j) = -real_entry(val, "metric");
    }
  }
  return make_metric(g, model.point, av, harmonic_meta(config, truncation_order(series)));
}

GeometricTensor classical_curvature(const ModelSpec& model, const Eigen::VectorXd& actions,
                                    const KernelConfig& config) {
  if (!model.make_actions) throw CapabilityError("model '" + model.id + "' lacks an action map");
  const ActionVector av = model.make_actions(actions);

  if (model.fermionic) {
    if (!model.fermionic_system) {
      throw CapabilityError("model '" + model.id + "' is fermionic but has no spectral data");
    }
    TensorMeta meta;
    meta.backend = "spectral";
    return make_curvature(fermionic_curvature(model.fermionic_system(av)), model.point, av, meta);
  }

  const auto series = checked_series(model, av);
  const Eigen::MatrixXd domega =
      model.frequency_jacobian ? model.frequency_jacobian(av) : Eigen::MatrixXd();
  const int n = model.n_params();
  Eigen::MatrixXd f(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex val =
          integrate_correlator(poisson_bracket(series[i], series[j], domega), config);
      f(i, j) = real_entry(val, "curvature");
    }
  }
  return make_curvature(f, model.point, av, harmonic_meta(config, truncation_order(series)));
}

ModelSpec gauge_shift(const ModelSpec& model, const Eigen::VectorXd& shift) {
  if (shift.size() != model.n_angles) {
    throw DimensionError("gauge shift needs one offset per angle (" +
                         std::to_string(model.n_angles) + ")");
  }
  ModelSpec out = model;
  if (model.observable_series) {
    auto orig = model.observable_series;
    out.observable_series = [orig, shift](const ActionVector& av) {
      auto series = orig(av);
      for (auto& s : series) s = phase_shift(s, shift);
      return series;
    };
  }
  if (model.fermionic_system) {
    auto orig = model.fermionic_system;
    out.fermionic_system = [orig, shift](const ActionVector& av) {
      FermionicSystem sys = orig(av);
      for (int a = 0; a < 2; ++a) {
        sys.eigenvectors.col(a) *= std::exp(Complex(0.0, -shift(a)));
      }
      return sys;
    };
  }
  if (model.phase_space) {
    auto orig = model.phase_space;
    out.phase_space = [orig, shift](const ActionVector& av) {
      PhaseSpaceHooks hooks = orig(av);
      if (hooks.from_angles) {
        auto from = hooks.from_angles;
        hooks.from_angles = [from, shift](const Eigen::VectorXd& angles) {
          return from((angles + shift).eval());
        };
      }
      return hooks;
    };
  }
  return out;
}

GeometricTensor tensor_transform(const GeometricTensor& tensor, const Eigen::MatrixXd& jacobian,
                                 std::optional<ParameterPoint> new_point) {
  if (jacobian.rows() != tensor.matrix.rows()) {
    throw DimensionError("jacobian rows must match the tensor dimension");
  }
  if (!jacobian.allFinite()) {
    throw DomainError("jacobian contains non-finite entries");
  }
  ParameterPoint point = new_point ? std::move(*new_point) : tensor.point;
  if (point.size() != jacobian.cols()) {
    throw DimensionError("parameter point of the transformed tensor must match jacobian columns");
  }
  const Eigen::MatrixXd m = jacobian.transpose() * tensor.matrix * jacobian;
  if (tensor.kind == GeometricTensor::Kind::Metric) {
    return make_metric(m, std::move(point), tensor.actions, tensor.meta);
  }
  return make_curvature(m, std::move(point), tensor.actions, tensor.meta);
}

namespace {

// Quantum expansion coefficients of one tensor entry in powers of hbar,
// extracted by evaluating the reference at shrinking hbar and peeling
// orders off with polynomial extrapolation.
Eigen::VectorXd quantum_expansion_coeffs(const ModelSpec& model, const std::string& state,
                                         int row, int col, int orders) {
  const double scale = 0.1 * std::abs(model.point.value("alpha"));
  const int samples = 6;
  std::vector<double> hs(samples);
  std::vector<double> q(samples);
  for (int j = 0; j < samples; ++j) {
    hs[j] = scale / (1 << j);
    const QuantumReference ref = quantum_tensors(model.id, model.point, hs[j], state);
    q[j] = hs[j] * hs[j] * ref.metric(row, col);
  }
  Eigen::VectorXd coeffs(orders);
  std::vector<double> remainder = q;
  for (int order = 0; order < orders; ++order) {
    std::vector<double> scaled(samples);
    for (int j = 0; j < samples; ++j) {
      double p = hs[j];
      for (int k = 0; k < order; ++k) p *= hs[j];
      scaled[j] = remainder[j] / p;
    }
    coeffs(order) = extrapolate_to_zero<double>(hs, scaled);
    for (int j = 0; j < samples; ++j) {
      double p = hs[j];
      for (int k = 0; k < order; ++k) p *= hs[j];
      remainder[j] -= coeffs(order) * p;
    }
  }
  return coeffs;
}

}  // namespace

RelationReport check_semiclassical(const ModelSpec& model, const QuantizationRegistry& registry,
                                   const std::string& state) {
  if (!(registry.hbar > 0.0)) {
    throw ParameterError("check_semiclassical: hbar must be positive");
  }
  const double hbar = registry.hbar;
  const int n = model.n_params();
  auto assemble = [&](const std::map<std::string, Eigen::MatrixXd>& monomials) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [key, shape] : monomials) m += registry.rule_for(key) * shape;
    return m;
  };

  RelationReport report;
  report.model_id = model.id;
  report.hbar = hbar;
  report.state = state;

  const QuantumReference ref = quantum_tensors(model.id, model.point, hbar, state);

  report.metric.classical = assemble(model.metric_monomials);
  report.metric.quantized = report.metric.classical / (hbar * hbar);
  report.metric.quantum = ref.metric;
  report.metric.residual = report.metric.quantum - report.metric.quantized;

  {
    RelationSide side;
    side.classical = assemble(model.curvature_monomials);
    side.quantized = side.classical / hbar;
    side.quantum = ref.curvature;
    side.residual = side.quantum - side.quantized;
    report.curvature = std::move(side);
  }

  report.anomaly_expected = model.metric_anomaly;

  if (model.id == "singular") {
    ExpansionComparison cmp;
    cmp.row = 1;
    cmp.col = 1;
    const double c1 = model.metric_monomials.at("Ir")(1, 1) * (registry.rule_for("Ir") / hbar);
    const double c2 =
        model.metric_monomials.at("Ir^2")(1, 1) * (registry.rule_for("Ir^2") / (hbar * hbar));
    cmp.classical_coeffs = Eigen::Vector2d(c1, c2);
    cmp.quantum_coeffs = quantum_expansion_coeffs(model, state, 1, 1, 2);
    report.expansion = std::move(cmp);
  }

  return report;
}

}  // namespace psgeo
