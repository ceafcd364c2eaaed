#include "psgeo/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace psgeo {

Complex CorrelatorSeries::eval(double t12) const {
  Complex sum{0.0, 0.0};
  for (const auto& term : terms) sum += term.amp * std::polar(1.0, term.nu * t12);
  return sum;
}

CorrelatorSeries make_correlator(std::vector<CorrelatorTerm> terms, double drop_tol) {
  std::sort(terms.begin(), terms.end(),
            [](const CorrelatorTerm& a, const CorrelatorTerm& b) { return a.nu < b.nu; });
  CorrelatorSeries out;
  for (const auto& term : terms) {
    if (!out.terms.empty()) {
      auto& last = out.terms.back();
      const double scale = std::max({1.0, std::abs(last.nu), std::abs(term.nu)});
      if (std::abs(term.nu - last.nu) <= kIncommensurateTol * scale) {
        last.amp += term.amp;
        continue;
      }
    }
    out.terms.push_back(term);
  }
  std::erase_if(out.terms,
                [drop_tol](const CorrelatorTerm& t) { return std::abs(t.amp) < drop_tol; });

  out.real_closed = true;
  for (const auto& term : out.terms) {
    bool found = false;
    for (const auto& other : out.terms) {
      const double scale = std::max({1.0, std::abs(term.nu)});
      if (std::abs(other.nu + term.nu) > kIncommensurateTol * scale) continue;
      if (std::abs(other.amp - std::conj(term.amp)) <=
          kConjClosureTol * std::max(1.0, std::abs(term.amp))) {
        found = true;
        break;
      }
    }
    if (!found) {
      out.real_closed = false;
      break;
    }
  }
  return out;
}

HarmonicSeries angle_average(const HarmonicSeries& s) {
  std::vector<HarmonicTerm> kept;
  for (const auto& term : s.terms) {
    if (term.wavevector.isZero()) kept.push_back(term);
  }
  return make_series(std::move(kept), s.n_angles);
}

HarmonicSeries series_product(const HarmonicSeries& a, const HarmonicSeries& b) {
  if (a.n_angles != b.n_angles) {
    throw DimensionError("series_product: operands live on different tori");
  }
  std::vector<HarmonicTerm> terms;
  terms.reserve(a.terms.size() * b.terms.size());
  for (const auto& ta : a.terms) {
    for (const auto& tb : b.terms) {
      HarmonicTerm t;
      t.wavevector = ta.wavevector + tb.wavevector;
      t.nu = ta.nu + tb.nu;
      t.amp = ta.amp * tb.amp;
      if (ta.amp_dI && tb.amp_dI) {
        t.amp_dI = ta.amp * (*tb.amp_dI) + tb.amp * (*ta.amp_dI);
      }
      if (ta.degree && tb.degree) t.degree = *ta.degree + *tb.degree;
      terms.push_back(std::move(t));
    }
  }
  return make_series(std::move(terms), a.n_angles);
}

HarmonicSeries scale(const HarmonicSeries& s, Complex c) {
  HarmonicSeries out = s;
  for (auto& term : out.terms) {
    term.amp *= c;
    if (term.amp_dI) *term.amp_dI *= c;
  }
  return make_series(std::move(out.terms), s.n_angles);
}

HarmonicSeries phase_shift(const HarmonicSeries& s, const Eigen::VectorXd& c) {
  if (c.size() != s.n_angles) {
    throw DimensionError("phase_shift: offset dimension does not match n_angles");
  }
  HarmonicSeries out = s;
  for (auto& term : out.terms) {
    const Complex phase = std::polar(1.0, term.wavevector.cast<double>().dot(c));
    term.amp *= phase;
    if (term.amp_dI) *term.amp_dI *= phase;
  }
  return make_series(std::move(out.terms), s.n_angles);
}

namespace {

// Index the terms of a series by exact wavevector for O(log n) partner
// lookup. Wavevectors are unique per canonical series at fixed frequencies,
// but we keep a multimap to stay correct for hand-built inputs.
std::multimap<std::vector<int>, const HarmonicTerm*> index_by_wavevector(
    const HarmonicSeries& s) {
  std::multimap<std::vector<int>, const HarmonicTerm*> index;
  for (const auto& term : s.terms) {
    std::vector<int> key(term.wavevector.data(),
                         term.wavevector.data() + term.wavevector.size());
    index.emplace(std::move(key), &term);
  }
  return index;
}

void require_cancelling_frequencies(const HarmonicTerm& r, const HarmonicTerm& s) {
  const double scale = std::max(std::abs(r.nu), 1.0);
  if (std::abs(r.nu + s.nu) > kIncommensurateTol * scale) {
    throw IncommensurateFrequencyError(
        "paired wavevectors carry non-cancelling frequencies " +
        std::to_string(r.nu) + " and " + std::to_string(s.nu) +
        "; the two series do not share a frequency map");
  }
}

}  // namespace

CorrelatorSeries connected_correlator(const HarmonicSeries& a, const HarmonicSeries& b) {
  if (a.n_angles != b.n_angles) {
    throw DimensionError("connected_correlator: operands live on different tori");
  }
  const auto index = index_by_wavevector(b);
  std::vector<CorrelatorTerm> terms;
  for (const auto& ta : a.terms) {
    if (ta.wavevector.isZero()) continue;  // DC x DC is the disconnected part
    std::vector<int> key(ta.wavevector.size());
    for (Eigen::Index i = 0; i < ta.wavevector.size(); ++i) key[i] = -ta.wavevector[i];
    const auto [lo, hi] = index.equal_range(key);
    for (auto it = lo; it != hi; ++it) {
      const HarmonicTerm& tb = *it->second;
      require_cancelling_frequencies(ta, tb);
      terms.push_back({ta.nu, ta.amp * tb.amp});
    }
  }
  return make_correlator(std::move(terms));
}

CorrelatorSeries poisson_bracket(const HarmonicSeries& a, const HarmonicSeries& b,
                                 const Eigen::MatrixXd& domega_dI) {
  if (a.n_angles != b.n_angles) {
    throw DimensionError("poisson_bracket: operands live on different tori");
  }
  if (!a.has_action_derivatives() || !b.has_action_derivatives()) {
    throw CapabilityError(
        "poisson_bracket: both series need amp_dI on every term; "
        "the model does not provide action derivatives here");
  }
  if (domega_dI.size() != 0) {
    // With action-dependent frequencies, d/dI of exp(i nu t) grows linearly
    // in t whenever k . dOmega/dI != 0 and the finite series form breaks.
    for (const auto* series : {&a, &b}) {
      for (const auto& term : series->terms) {
        const Eigen::VectorXd drift =
            domega_dI.transpose() * term.wavevector.cast<double>();
        if (drift.cwiseAbs().maxCoeff() > kNuConsistencyTol) {
          throw SecularTermError(
              "poisson_bracket: term frequency depends on the actions "
              "(k . dOmega/dI != 0); the angle-action bracket is secular");
        }
      }
    }
  }

  const auto index = index_by_wavevector(b);
  std::vector<CorrelatorTerm> terms;
  for (const auto& ta : a.terms) {
    std::vector<int> key(ta.wavevector.size());
    for (Eigen::Index i = 0; i < ta.wavevector.size(); ++i) key[i] = -ta.wavevector[i];
    const auto [lo, hi] = index.equal_range(key);
    for (auto it = lo; it != hi; ++it) {
      const HarmonicTerm& tb = *it->second;
      require_cancelling_frequencies(ta, tb);
      // sum_m [ (i k_m amp_a) dI_m amp_b - dI_m amp_a (i (-k_m) amp_b) ]
      //   = i sum_m k_m (amp_a dI_m amp_b + dI_m amp_a amp_b)
      Complex coeff{0.0, 0.0};
      for (Eigen::Index m = 0; m < ta.wavevector.size(); ++m) {
        coeff += static_cast<double>(ta.wavevector[m]) *
                 (ta.amp * (*tb.amp_dI)[m] + (*ta.amp_dI)[m] * tb.amp);
      }
      terms.push_back({ta.nu, Complex{0.0, 1.0} * coeff});
    }
  }
  return make_correlator(std::move(terms));
}

}  // namespace psgeo
