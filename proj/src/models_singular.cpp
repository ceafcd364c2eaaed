#include <cmath>
#include <functional>
#include <vector>

#include "psgeo/models.hpp"
#include "psgeo/quantum_ref.hpp"

namespace psgeo {

namespace {

// Orbit data of the radial torus at fixed actions: effective angular
// momentum ptheta = sqrt(Itheta^2 + alpha^2), energy E = w (2 Ir + ptheta),
// eccentricity-like parameter a = sqrt(1 - w^2 ptheta^2 / E^2) in (0,1).
struct RadialOrbit {
  double ptheta = 0, E = 0, a = 0;
  Eigen::Vector2d dE;  // dE / d(Ir, Itheta)
  Eigen::Vector2d da;
};

RadialOrbit radial_orbit(double w, double alpha, const Eigen::VectorXd& I) {
  RadialOrbit orb;
  orb.ptheta = std::hypot(I(1), alpha);
  orb.E = w * (2 * I(0) + orb.ptheta);
  const double ratio = w * orb.ptheta / orb.E;
  orb.a = std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
  orb.dE = Eigen::Vector2d(2 * w, w * I(1) / orb.ptheta);
  orb.da = Eigen::Vector2d(
      2 * w * (1 - orb.a * orb.a) / (orb.a * orb.E),
      -w * w * I(1) * (orb.E - w * orb.ptheta) / (orb.a * orb.E * orb.E * orb.E));
  return orb;
}

// Fourier coefficients c_m for m = 0..m_max of a real 2 pi periodic
// function, from fft_size equispaced samples. For an analytic function the
// trapezoid transform is spectrally exact, and on this orbit the
// coefficients decay geometrically with ratio a / (1 + sqrt(1 - a^2)).
std::vector<Complex> fourier_side(const std::function<double(double)>& f, int n,
                                  int m_max) {
  std::vector<double> samples(n);
  for (int j = 0; j < n; ++j) samples[j] = f(2 * M_PI * j / n);
  std::vector<Complex> coeffs(m_max + 1);
  for (int m = 0; m <= m_max; ++m) {
    Complex acc(0, 0);
    for (int j = 0; j < n; ++j) {
      const double phase = -2 * M_PI * m * static_cast<double>(j) / n;
      acc += samples[j] * Complex(std::cos(phase), std::sin(phase));
    }
    coeffs[m] = acc / static_cast<double>(n);
  }
  return coeffs;
}

// Ascending transform of the reference sequence with early stopping: quit
// once the coefficients have sat below trunc_tol * max for eight orders in
// a row, trimming the quiet tail. Throws when the sequence never settles
// within the resolvable band (orbit too close to the a -> 1 edge).
std::vector<Complex> fourier_truncated(const std::function<double(double)>& f,
                                       int n, double trunc_tol) {
  std::vector<double> samples(n);
  for (int j = 0; j < n; ++j) samples[j] = f(2 * M_PI * j / n);
  std::vector<Complex> coeffs;
  double scale = 0.0;
  int quiet = 0;
  for (int m = 0; m <= n / 2 - 1; ++m) {
    Complex acc(0, 0);
    for (int j = 0; j < n; ++j) {
      const double phase = -2 * M_PI * m * static_cast<double>(j) / n;
      acc += samples[j] * Complex(std::cos(phase), std::sin(phase));
    }
    const Complex c = acc / static_cast<double>(n);
    coeffs.push_back(c);
    scale = std::max(scale, std::abs(c));
    if (std::abs(c) < trunc_tol * scale) {
      if (++quiet >= 8) {
        coeffs.resize(coeffs.size() - quiet);
        return coeffs;
      }
    } else {
      quiet = 0;
    }
  }
  throw DomainError(
      "singular: harmonic expansion did not converge at this orbit (a too "
      "close to 1); raise fft_size or lower the actions");
}

}  // namespace

ModelSpec singular_model(double omega, double alpha, double trunc_tol, int fft_size) {
  if (!(omega > 0.0)) {
    throw ParameterError("singular: omega must be positive");
  }
  if (alpha == 0.0) {
    throw ParameterError("singular: alpha must be nonzero");
  }
  if (!(trunc_tol > 0.0) || trunc_tol >= 1.0) {
    throw ParameterError("singular: trunc_tol must lie in (0, 1)");
  }
  if (fft_size < 64 || fft_size % 2 != 0) {
    throw ParameterError("singular: fft_size must be an even number >= 64");
  }
  const double w = omega;

  ModelSpec spec;
  spec.id = "singular";
  spec.point.names = {"omega", "alpha"};
  spec.point.values = Eigen::Vector2d(omega, alpha);
  spec.action_names = {"Ir", "Itheta"};
  spec.n_angles = 2;
  spec.bracket_capable = true;

  spec.make_actions = [w, alpha](const Eigen::VectorXd& raw) {
    if (raw.size() != 2) {
      throw DimensionError("singular: expected 2 action values, got " +
                           std::to_string(raw.size()));
    }
    if (!raw.allFinite()) {
      throw ParameterError("singular: action values must be finite");
    }
    if (raw(1) < 0.0) {
      throw ParameterError("singular: angular action must be nonnegative");
    }
    if (!(raw(0) > 0.0)) {
      throw DomainError("singular: radial action must be positive so the orbit parameter a lies in (0, 1)");
    }
    ActionVector av;
    av.actions = raw;
    const double ptheta = std::hypot(raw(1), alpha);
    av.frequencies = Eigen::Vector2d(2 * w, w * raw(1) / ptheta);
    return av;
  };

  // The angular frequency depends on Itheta, but every observable harmonic
  // has k_theta = 0, so the bracket never meets a secular term.
  spec.frequency_jacobian = [w, alpha](const ActionVector& av) {
    const double ptheta = std::hypot(av.actions(1), alpha);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(1, 1) = w * alpha * alpha / (ptheta * ptheta * ptheta);
    return d;
  };

  spec.observable_series = [w, alpha, trunc_tol, fft_size](const ActionVector& av) {
    const RadialOrbit orb = radial_orbit(w, alpha, av.actions);
    const double E = orb.E, a = orb.a;
    const Complex i01(0, 1);
    std::vector<HarmonicSeries> out;

    // lambda_1 = w r^2 = (E / w) (1 + a sin u), u = phi_r0 + 2 w t: exact
    // three-term expansion.
    {
      std::vector<HarmonicTerm> terms;
      HarmonicTerm dc;
      dc.wavevector = Eigen::VectorXi::Zero(2);
      dc.nu = 0.0;
      dc.amp = E / w;
      dc.amp_dI = orb.dE.cast<Complex>() / w;
      terms.push_back(dc);
      const Eigen::Vector2d dEa = orb.dE * a + orb.da * E;  // gradient of E a
      for (int m : {1, -1}) {
        HarmonicTerm t;
        t.wavevector = Eigen::VectorXi::Zero(2);
        t.wavevector(0) = m;
        t.nu = 2 * w * m;
        const Complex pref = -i01 * static_cast<double>(m) / (2 * w);
        t.amp = pref * (E * a);
        t.amp_dI = pref * dEa.cast<Complex>();
        terms.push_back(t);
      }
      out.push_back(make_series(std::move(terms), 2));
    }

    // lambda_2 = alpha / r^2 = (alpha w^2 / E) / (1 + a sin u): infinite
    // series, expanded by discrete Fourier transform together with its
    // action derivatives.
    {
      auto base = [&](double u) { return (alpha * w * w / E) / (1 + a * std::sin(u)); };
      auto d_ir = [&](double u) {
        const double den = 1 + a * std::sin(u);
        return -(2 * alpha * w * w * w / (a * E * E)) * (a + std::sin(u)) / (den * den);
      };
      auto d_itheta = [&](double u) {
        const double den = 1 + a * std::sin(u);
        const double s = std::sin(u);
        return -(alpha * w * w * orb.dE(1) / (E * E)) / den -
               (alpha * w * w / E) * s * orb.da(1) / (den * den);
      };
      const auto c0 = fourier_truncated(base, fft_size, trunc_tol);
      const int kept = static_cast<int>(c0.size()) - 1;
      const auto cr = fourier_side(d_ir, fft_size, kept);
      const auto ct = fourier_side(d_itheta, fft_size, kept);
      std::vector<HarmonicTerm> terms;
      for (int m = 0; m <= kept; ++m) {
        HarmonicTerm t;
        t.wavevector = Eigen::VectorXi::Zero(2);
        t.wavevector(0) = m;
        t.nu = 2 * w * m;
        t.amp = c0[m];
        Eigen::Vector2cd dI(cr[m], ct[m]);
        t.amp_dI = dI;
        terms.push_back(t);
        if (m > 0) {
          HarmonicTerm tc = t;
          tc.wavevector(0) = -m;
          tc.nu = -t.nu;
          tc.amp = std::conj(t.amp);
          tc.amp_dI = dI.conjugate();
          terms.push_back(tc);
        }
      }
      // Truncation already applied; keep every retained coefficient.
      out.push_back(make_series(std::move(terms), 2, 0.0));
    }
    return out;
  };

  spec.closed_metric = [w, alpha](const ActionVector& av) {
    const double Ir = av.actions(0);
    const double ptheta = std::hypot(av.actions(1), alpha);
    Eigen::Matrix2d g;
    g(0, 0) = (Ir * Ir + Ir * ptheta) / (2 * w * w);
    g(0, 1) = g(1, 0) = -alpha * Ir / (2 * w * ptheta);
    g(1, 1) = alpha * alpha / (2 * ptheta * ptheta) * dilog(Ir / (Ir + ptheta));
    return Eigen::MatrixXd(g);
  };
  spec.closed_curvature = [](const ActionVector&) { return Eigen::MatrixXd::Zero(2, 2).eval(); };

  // Taylor expansion of the closed metric about Itheta = 0 (where
  // ptheta = |alpha|), through second order in Ir.
  {
    const double pa = std::abs(alpha);
    const double sign = alpha > 0 ? 1.0 : -1.0;
    Eigen::Matrix2d c1, c2;
    c1 << pa / (2 * w * w), -sign / (2 * w), -sign / (2 * w), 1 / (2 * pa);
    c2 << 1 / (2 * w * w), 0, 0, -3 / (8 * alpha * alpha);
    spec.metric_monomials["Ir"] = c1;
    spec.metric_monomials["Ir^2"] = c2;
  }

  spec.registry = [](double hbar, const std::string&) {
    QuantizationRegistry reg;
    reg.hbar = hbar;
    reg.rules = {{"Ir", hbar / 2}, {"Ir^2", hbar * hbar / 2}};
    return reg;
  };

  spec.phase_space = [w, alpha](const ActionVector& av) {
    const RadialOrbit orb = radial_orbit(w, alpha, av.actions);
    const double E = orb.E, a = orb.a, ptheta = orb.ptheta;
    PhaseSpaceHooks hooks;
    hooks.n_dof = 1;
    hooks.grid_default = 64;
    hooks.tensor_capable = false;  // trajectory runs only
    hooks.from_angles = [E, a, w, ptheta](const Eigen::VectorXd& angles) {
      const double lam1 = (E / w) * (1 + a * std::sin(angles(0)));
      const double r = std::sqrt(lam1 / w);
      Eigen::VectorXd z(2);
      z << r, (E * a / w) * std::cos(angles(0)) / r;
      return z;
    };
    hooks.hamiltonian = [w, ptheta](const Eigen::VectorXd& z) {
      return 0.5 * z(1) * z(1) + ptheta * ptheta / (2 * z(0) * z(0)) +
             0.5 * w * w * z(0) * z(0);
    };
    hooks.flow = [w, ptheta](const Eigen::VectorXd& z) {
      Eigen::VectorXd dz(2);
      dz << z(1), ptheta * ptheta / (z(0) * z(0) * z(0)) - w * w * z(0);
      return dz;
    };
    hooks.observables = [w, alpha](const Eigen::VectorXd& z) {
      Eigen::VectorXd v(2);
      v << w * z(0) * z(0), alpha / (z(0) * z(0));
      return v;
    };
    return hooks;
  };

  return spec;
}

}  // namespace psgeo
