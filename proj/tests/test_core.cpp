#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

#include "psgeo/kernels.hpp"
#include "psgeo/types.hpp"

#include "test_helpers.hpp"

using namespace psgeo;

namespace {

Eigen::VectorXi kvec(int k) {
  Eigen::VectorXi v(1);
  v << k;
  return v;
}

HarmonicTerm term(int k, double nu, Complex amp) {
  HarmonicTerm t;
  t.wavevector = kvec(k);
  t.nu = nu;
  t.amp = amp;
  return t;
}

}  // namespace

TEST_CASE("make_series canonicalizes: sort, merge, drop") {
  std::vector<HarmonicTerm> terms = {
      term(2, 2.0, {0.25, 0.0}),
      term(-2, -2.0, {0.25, 0.0}),
      term(2, 2.0, {0.25, 0.0}),          // duplicates: amps add on both
      term(-2, -2.0, {0.25, 0.0}),        // sides, keeping conjugate closure
      term(0, 0.0, {1e-18, 0.0}),         // below the drop tolerance
  };
  const HarmonicSeries s = make_series(terms, 1);
  REQUIRE(s.terms.size() == 2);
  CHECK(s.terms[0].wavevector(0) == -2);
  CHECK(s.terms[1].wavevector(0) == 2);
  CHECK(s.terms[1].amp.real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.real_closed);
  CHECK(s.max_abs_wavevector() == 2);
  CHECK(s.max_abs_frequency() == doctest::Approx(2.0));
}

TEST_CASE("make_series merge adds action derivatives only when both sides carry them") {
  HarmonicTerm a = term(1, 1.0, {1.0, 0.0});
  a.amp_dI = Eigen::VectorXcd::Constant(1, Complex{2.0, 0.0});
  HarmonicTerm b = term(1, 1.0, {1.0, 0.0});
  b.amp_dI = Eigen::VectorXcd::Constant(1, Complex{3.0, 0.0});
  HarmonicSeries merged = make_series({a, b}, 1);
  REQUIRE(merged.terms.size() == 1);
  REQUIRE(merged.terms[0].amp_dI.has_value());
  CHECK((*merged.terms[0].amp_dI)(0).real() == doctest::Approx(5.0));
  CHECK(merged.has_action_derivatives());

  HarmonicTerm c = term(1, 1.0, {1.0, 0.0});  // no amp_dI
  HarmonicSeries dropped = make_series({a, c}, 1);
  REQUIRE(dropped.terms.size() == 1);
  CHECK(!dropped.terms[0].amp_dI.has_value());
  CHECK(!dropped.has_action_derivatives());
}

TEST_CASE("make_series validates dimensions") {
  CHECK_THROWS_AS(make_series({term(1, 1.0, {1.0, 0.0})}, 0), DimensionError);
  CHECK_THROWS_AS(make_series({term(1, 1.0, {1.0, 0.0})}, 2), DimensionError);
  HarmonicTerm bad = term(1, 1.0, {1.0, 0.0});
  bad.amp_dI = Eigen::VectorXcd::Zero(0);
  CHECK_THROWS_AS(make_series({bad}, 1), DimensionError);
}

TEST_CASE("series eval sums the harmonics") {
  // 2 cos(phi + t) = e^{i(phi+t)} + c.c.
  const HarmonicSeries s =
      make_series({term(1, 1.0, {1.0, 0.0}), term(-1, -1.0, {1.0, 0.0})}, 1);
  Eigen::VectorXd phi(1);
  phi << 0.3;
  const Complex v = s.eval(phi, 0.8);
  CHECK(v.real() == doctest::Approx(2.0 * std::cos(1.1)).epsilon(1e-14));
  CHECK(std::abs(v.imag()) < 1e-14);

  Eigen::VectorXd wrong(2);
  wrong << 0.1, 0.2;
  CHECK_THROWS_AS(s.eval(wrong, 0.0), DimensionError);
}

TEST_CASE("is_real_closed detects missing conjugate partners") {
  const HarmonicSeries closed =
      make_series({term(1, 1.0, {0.0, 1.0}), term(-1, -1.0, {0.0, -1.0})}, 1);
  CHECK(is_real_closed(closed));
  const HarmonicSeries open = make_series({term(1, 1.0, {0.0, 1.0})}, 1);
  CHECK(!is_real_closed(open));
}

TEST_CASE("check_frequency_consistency enforces nu = k . Omega") {
  Eigen::VectorXd omega(1);
  omega << 1.7;
  const HarmonicSeries ok = make_series({term(2, 3.4, {1.0, 0.0})}, 1);
  CHECK_NOTHROW(check_frequency_consistency(ok, omega));
  const HarmonicSeries off = make_series({term(2, 3.3, {1.0, 0.0})}, 1);
  CHECK_THROWS_AS(check_frequency_consistency(off, omega), IncommensurateFrequencyError);
  Eigen::VectorXd wrong(2);
  wrong << 1.0, 2.0;
  CHECK_THROWS_AS(check_frequency_consistency(ok, wrong), DimensionError);
}

TEST_CASE("make_metric symmetrizes within tolerance and rejects beyond it") {
  Eigen::Matrix2d nearly;
  nearly << 1.0, 0.5 + 1e-12, 0.5 - 1e-12, 2.0;
  const GeometricTensor g = make_metric(nearly, {}, {}, {});
  CHECK(g.matrix(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g.matrix(0, 1) == g.matrix(1, 0));

  Eigen::Matrix2d skewed;
  skewed << 1.0, 0.6, 0.4, 2.0;
  CHECK_THROWS_AS(make_metric(skewed, {}, {}, {}), NumericalQualityError);

  Eigen::MatrixXd rect = Eigen::MatrixXd::Zero(2, 3);
  CHECK_THROWS_AS(make_metric(rect, {}, {}, {}), DimensionError);
  Eigen::Matrix2d infected = Eigen::Matrix2d::Zero();
  infected(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(make_metric(infected, {}, {}, {}), NumericalQualityError);
}

TEST_CASE("make_curvature antisymmetrizes within tolerance and rejects beyond it") {
  Eigen::Matrix2d nearly;
  nearly << 0.0, 0.5, -0.5 + 1e-12, 0.0;
  const GeometricTensor f = make_curvature(nearly, {}, {}, {});
  // Antisymmetrizing shifts the entry by half the skew, so compare at the
  // skew scale rather than machine precision.
  CHECK(f.matrix(0, 1) == doctest::Approx(0.5).epsilon(1e-11));
  CHECK(f.matrix(1, 0) == -f.matrix(0, 1));

  Eigen::Matrix2d symmetric;
  symmetric << 0.0, 0.5, 0.5, 0.0;
  CHECK_THROWS_AS(make_curvature(symmetric, {}, {}, {}), NumericalQualityError);
}

TEST_CASE("ParameterPoint and QuantizationRegistry lookups") {
  ParameterPoint p;
  p.names = {"X", "Y"};
  p.values = Eigen::Vector2d(1.5, -2.0);
  CHECK(p.value("Y") == doctest::Approx(-2.0));
  CHECK_THROWS_AS(p.value("Z"), ParameterError);

  QuantizationRegistry reg;
  reg.hbar = 0.5;
  reg.rules = {{"I^2", 0.25}};
  CHECK(reg.rule_for("I^2") == doctest::Approx(0.25));
  CHECK_THROWS_AS(reg.rule_for("I"), RegistryError);
}

TEST_CASE("extrapolate_to_zero recovers polynomial limits") {
  // f(h) = 3 - 2 h + h^2 sampled at three nodes: Neville is exact.
  const std::vector<double> h = {0.4, 0.2, 0.1};
  std::vector<double> f;
  for (const double x : h) f.push_back(3.0 - 2.0 * x + x * x);
  CHECK(extrapolate_to_zero<double>(h, f) == doctest::Approx(3.0).epsilon(1e-13));

  // Single node passes through.
  const std::vector<double> h1 = {0.3};
  CHECK(extrapolate_to_zero<double>(h1, {7.0}) == doctest::Approx(7.0));

  // Matrix-valued samples extrapolate entrywise.
  std::vector<Eigen::MatrixXd> fm;
  Eigen::Matrix2d base;
  base << 1.0, 2.0, 3.0, 4.0;
  for (const double x : h) fm.push_back(base * (1.0 + x * (2.0 + x)));
  const Eigen::MatrixXd limit = extrapolate_to_zero<Eigen::MatrixXd>(h, fm);
  CHECK(rel_dev(limit, base) < 1e-12);

  CHECK_THROWS_AS(extrapolate_to_zero<double>(h, {1.0}), DimensionError);
  CHECK_THROWS_AS(extrapolate_to_zero<double>({}, std::vector<double>{}), DimensionError);
}
