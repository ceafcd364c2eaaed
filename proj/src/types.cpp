#include "psgeo/types.hpp"

#include <algorithm>
#include <cmath>

namespace psgeo {

double ParameterPoint::value(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[static_cast<Eigen::Index>(i)];
  }
  throw ParameterError("unknown parameter name: " + name);
}

Complex HarmonicSeries::eval(const Eigen::VectorXd& phi0, double t) const {
  if (phi0.size() != n_angles) {
    throw DimensionError("eval: angle point has wrong dimension");
  }
  Complex sum{0.0, 0.0};
  for (const auto& term : terms) {
    const double phase = term.wavevector.cast<double>().dot(phi0) + term.nu * t;
    sum += term.amp * std::polar(1.0, phase);
  }
  return sum;
}

int HarmonicSeries::max_abs_wavevector() const {
  int m = 0;
  for (const auto& term : terms) {
    m = std::max(m, term.wavevector.cwiseAbs().maxCoeff());
  }
  return m;
}

double HarmonicSeries::max_abs_frequency() const {
  double m = 0.0;
  for (const auto& term : terms) m = std::max(m, std::abs(term.nu));
  return m;
}

bool HarmonicSeries::has_action_derivatives() const {
  return std::all_of(terms.begin(), terms.end(),
                     [](const HarmonicTerm& t) { return t.amp_dI.has_value(); });
}

namespace {

// Strict ordering on (k, nu); nu ties are broken later by the tolerance
// grouping in the merge pass.
bool term_less(const HarmonicTerm& a, const HarmonicTerm& b) {
  for (Eigen::Index i = 0; i < a.wavevector.size(); ++i) {
    if (a.wavevector[i] != b.wavevector[i]) return a.wavevector[i] < b.wavevector[i];
  }
  return a.nu < b.nu;
}

bool same_slot(const HarmonicTerm& a, const HarmonicTerm& b) {
  if (a.wavevector != b.wavevector) return false;
  const double scale = std::max({1.0, std::abs(a.nu), std::abs(b.nu)});
  return std::abs(a.nu - b.nu) <= kIncommensurateTol * scale;
}

void merge_into(HarmonicTerm& dst, const HarmonicTerm& src) {
  dst.amp += src.amp;
  if (dst.amp_dI && src.amp_dI) {
    *dst.amp_dI += *src.amp_dI;
  } else {
    dst.amp_dI.reset();
  }
  if (!(dst.degree && src.degree && dst.degree->isApprox(*src.degree))) {
    dst.degree.reset();
  }
}

}  // namespace

HarmonicSeries make_series(std::vector<HarmonicTerm> terms, int n_angles,
                           double drop_tol) {
  if (n_angles <= 0) throw DimensionError("make_series: n_angles must be positive");
  for (const auto& term : terms) {
    if (term.wavevector.size() != n_angles) {
      throw DimensionError("make_series: wavevector dimension does not match n_angles");
    }
    // One action per angle, so action-gradient vectors share the dimension.
    if (term.amp_dI && term.amp_dI->size() != n_angles) {
      throw DimensionError("make_series: amp_dI dimension does not match the action count");
    }
  }
  std::sort(terms.begin(), terms.end(), term_less);

  HarmonicSeries out;
  out.n_angles = n_angles;
  for (auto& term : terms) {
    if (!out.terms.empty() && same_slot(out.terms.back(), term)) {
      merge_into(out.terms.back(), term);
    } else {
      out.terms.push_back(std::move(term));
    }
  }
  std::erase_if(out.terms,
                [drop_tol](const HarmonicTerm& t) { return std::abs(t.amp) < drop_tol; });
  out.real_closed = is_real_closed(out);
  return out;
}

bool is_real_closed(const HarmonicSeries& series, double tol) {
  for (const auto& term : series.terms) {
    const double scale = std::max(1.0, std::abs(term.amp));
    bool found = false;
    for (const auto& other : series.terms) {
      if (other.wavevector != -term.wavevector) continue;
      const double nu_scale = std::max({1.0, std::abs(term.nu), std::abs(other.nu)});
      if (std::abs(other.nu + term.nu) > kIncommensurateTol * nu_scale) continue;
      if (std::abs(other.amp - std::conj(term.amp)) <= tol * scale) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

void check_frequency_consistency(const HarmonicSeries& series,
                                 const Eigen::VectorXd& omega, double rel_tol) {
  if (omega.size() != series.n_angles) {
    throw DimensionError("check_frequency_consistency: frequency vector dimension mismatch");
  }
  const double scale = std::max(1.0, omega.cwiseAbs().maxCoeff());
  for (const auto& term : series.terms) {
    const double expected = term.wavevector.cast<double>().dot(omega);
    if (std::abs(term.nu - expected) > rel_tol * std::max(scale, std::abs(expected))) {
      throw IncommensurateFrequencyError(
          "term frequency " + std::to_string(term.nu) +
          " is not the lattice value k.Omega = " + std::to_string(expected));
    }
  }
}

namespace {

GeometricTensor make_tensor(GeometricTensor::Kind kind, const Eigen::MatrixXd& m,
                            ParameterPoint point, ActionVector actions,
                            TensorMeta meta, double shape_tol) {
  if (m.rows() != m.cols()) throw DimensionError("geometric tensor must be square");
  if (!m.allFinite()) throw NumericalQualityError("geometric tensor has non-finite entries");
  const double sign = (kind == GeometricTensor::Kind::Metric) ? 1.0 : -1.0;
  const double defect = (m - sign * m.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (defect > shape_tol * scale) {
    throw NumericalQualityError(
        (kind == GeometricTensor::Kind::Metric ? std::string("metric symmetry defect ")
                                               : std::string("curvature antisymmetry defect ")) +
        std::to_string(defect) + " exceeds tolerance");
  }
  GeometricTensor t;
  t.kind = kind;
  t.matrix = 0.5 * (m + sign * m.transpose());
  t.point = std::move(point);
  t.actions = std::move(actions);
  t.meta = std::move(meta);
  return t;
}

}  // namespace

GeometricTensor make_metric(const Eigen::MatrixXd& m, ParameterPoint point,
                            ActionVector actions, TensorMeta meta, double shape_tol) {
  return make_tensor(GeometricTensor::Kind::Metric, m, std::move(point),
                     std::move(actions), std::move(meta), shape_tol);
}

GeometricTensor make_curvature(const Eigen::MatrixXd& f, ParameterPoint point,
                               ActionVector actions, TensorMeta meta, double shape_tol) {
  return make_tensor(GeometricTensor::Kind::Curvature, f, std::move(point),
                     std::move(actions), std::move(meta), shape_tol);
}

double QuantizationRegistry::rule_for(const std::string& monomial) const {
  const auto it = rules.find(monomial);
  if (it == rules.end()) {
    throw RegistryError("no quantization rule for monomial " + monomial);
  }
  return it->second;
}

}  // namespace psgeo
