#include "psgeo/sampler.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "psgeo/kernels.hpp"
#include "psgeo/parallel.hpp"

namespace psgeo {
namespace {

// Tolerance for the optional grid-doubling consistency check.
constexpr double kGridDoublingTol = 1e-6;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// One time step of fixed magnitude for a batch of states (one per column).
// Linear flows use the Cayley form of the implicit midpoint rule, applied to
// the whole batch at once; general flows fall back to a columnwise
// fixed-point iteration.  Both are second order and symplectic.
class BatchStepper {
 public:
  BatchStepper(const PhaseSpaceHooks& hooks, double dt) : hooks_(&hooks), dt_(dt) {
    if (hooks.linear_flow) {
      const Eigen::MatrixXd& a = *hooks.linear_flow;
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(a.rows(), a.cols());
      cayley_ = (id - 0.5 * dt * a).partialPivLu().solve(id + 0.5 * dt * a);
    }
  }

  bool linear() const { return cayley_.size() > 0; }
  const Eigen::MatrixXd& propagator() const { return cayley_; }

  void advance(Eigen::MatrixXd& states, Eigen::MatrixXd& scratch) const {
    if (linear()) {
      scratch.noalias() = cayley_ * states;
      states.swap(scratch);
      return;
    }
    for (Eigen::Index c = 0; c < states.cols(); ++c) {
      states.col(c) = midpoint_step(states.col(c));
    }
  }

 private:
  Eigen::VectorXd midpoint_step(const Eigen::VectorXd& z) const {
    Eigen::VectorXd y = z + dt_ * hooks_->flow(z);
    for (int iter = 0; iter < 100; ++iter) {
      const Eigen::VectorXd next = z + dt_ * hooks_->flow(0.5 * (z + y));
      const double delta = (next - y).norm();
      y = next;
      if (delta <= 1e-13 * std::max(1.0, y.norm())) return y;
    }
    throw NumericalQualityError("sampler: implicit midpoint iteration did not converge");
  }

  const PhaseSpaceHooks* hooks_;
  double dt_ = 0.0;
  Eigen::MatrixXd cayley_;
};

Eigen::MatrixXd batch_observables(const PhaseSpaceHooks& hooks, const Eigen::MatrixXd& states) {
  if (hooks.observables_batch) return hooks.observables_batch(states);
  Eigen::MatrixXd out;
  for (Eigen::Index c = 0; c < states.cols(); ++c) {
    const Eigen::VectorXd column = hooks.observables(states.col(c));
    if (c == 0) out.resize(column.size(), states.cols());
    out.col(c) = column;
  }
  return out;
}

Eigen::MatrixXd batch_gradients(const PhaseSpaceHooks& hooks, int index,
                                const Eigen::MatrixXd& states) {
  if (hooks.gradients_batch) return hooks.gradients_batch(index, states);
  Eigen::MatrixXd out(states.rows(), states.cols());
  for (Eigen::Index c = 0; c < states.cols(); ++c) {
    out.col(c) = hooks.observable_gradients(states.col(c)).col(index);
  }
  return out;
}

// Time grid shared by all damping values: one step size, one node set per
// damping value (the stronger the damping, the shorter the horizon).
struct SweepPlan {
  double dt = 0.0;
  std::vector<double> epsilons;  // strictly decreasing
  std::vector<int> node_count;   // Simpson interval count per damping value
  int max_steps = 0;
};

SweepPlan make_plan(const ActionVector& av, const SamplerOptions& options) {
  if (!(options.horizon_factor > 0.0) || !std::isfinite(options.horizon_factor)) {
    throw ParameterError("sampler: horizon_factor must be positive");
  }
  if (!(options.max_phase_step > 0.0) || !std::isfinite(options.max_phase_step)) {
    throw ParameterError("sampler: max_phase_step must be positive");
  }
  if (!(options.drift_bound > 0.0)) {
    throw ParameterError("sampler: drift_bound must be positive");
  }
  if (options.epsilons.empty()) {
    throw ParameterError("sampler: need at least one damping value");
  }
  SweepPlan plan;
  plan.epsilons = options.epsilons;
  for (double e : plan.epsilons) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      throw ParameterError("sampler: damping values must be positive");
    }
  }
  std::sort(plan.epsilons.begin(), plan.epsilons.end(), std::greater<>());
  for (std::size_t j = 1; j < plan.epsilons.size(); ++j) {
    if (plan.epsilons[j - 1] - plan.epsilons[j] <= 1e-12 * plan.epsilons.front()) {
      throw ParameterError("sampler: damping values must be distinct");
    }
  }

  const double omega_max = av.frequencies.size() > 0 ? av.frequencies.cwiseAbs().maxCoeff() : 0.0;
  if (!(omega_max > 0.0)) {
    throw DomainError("sampler: torus has no nonzero frequency");
  }
  // Quadratic observables oscillate at up to twice the fastest angle rate.
  const double nu_max = 2.0 * omega_max;
  plan.dt = options.max_phase_step / nu_max;
  for (double e : plan.epsilons) {
    const double horizon = options.horizon_factor / e;
    int intervals = static_cast<int>(std::ceil(horizon / plan.dt));
    intervals += intervals % 2;  // composite Simpson needs an even count
    plan.node_count.push_back(intervals);
    plan.max_steps = std::max(plan.max_steps, intervals);
  }
  return plan;
}

double simpson_coefficient(int node, int last) {
  if (node == 0 || node == last) return 1.0;
  return node % 2 == 1 ? 4.0 : 2.0;
}

// Columns of the uniform product grid over the torus, angle step 2 pi / m in
// every dimension; the plain column mean is then the trapezoid angle average,
// exact on harmonics with |k| < m.
Eigen::MatrixXd angle_grid(int n_angles, int m) {
  Eigen::Index points = 1;
  for (int a = 0; a < n_angles; ++a) points *= m;
  Eigen::MatrixXd grid(n_angles, points);
  const double step = 2.0 * std::numbers::pi / m;
  for (Eigen::Index c = 0; c < points; ++c) {
    Eigen::Index rest = c;
    for (int a = n_angles - 1; a >= 0; --a) {
      grid(a, c) = step * static_cast<double>(rest % m);
      rest /= m;
    }
  }
  return grid;
}

Eigen::MatrixXd initial_states(const PhaseSpaceHooks& hooks, const Eigen::MatrixXd& angles) {
  Eigen::MatrixXd states(2 * hooks.n_dof, angles.cols());
  for (Eigen::Index c = 0; c < angles.cols(); ++c) {
    states.col(c) = hooks.from_angles(angles.col(c));
  }
  return states;
}

void check_drift(std::span<const double> block_worst, double bound) {
  const double drift = *std::max_element(block_worst.begin(), block_worst.end());
  if (!(drift <= bound)) {
    throw NumericalQualityError("sampler: relative energy drift " + format_double(drift) +
                                " exceeds bound " + format_double(bound));
  }
}

// Integrates the batch in one time direction and accumulates, per damping
// value, the Simpson-weighted damped integral of every observable along each
// trajectory: entry (i, c) of the result is int_0^{T_e} e^{-eps s}
// lambda_i(z_c(direction * s)) ds.
std::vector<Eigen::MatrixXd> observable_sweep(const PhaseSpaceHooks& hooks,
                                              const Eigen::MatrixXd& z0, const SweepPlan& plan,
                                              int direction, double drift_bound) {
  const Eigen::Index points = z0.cols();
  const int n_eps = static_cast<int>(plan.epsilons.size());
  const int n_obs = static_cast<int>(batch_observables(hooks, z0.leftCols(1)).rows());
  std::vector<Eigen::MatrixXd> acc(n_eps, Eigen::MatrixXd::Zero(n_obs, points));

  const int workers = thread_budget();
  std::vector<double> block_worst(static_cast<std::size_t>(std::max(workers, 1)), 0.0);
  parallel_blocks(points, workers, [&](int block, std::ptrdiff_t c0, std::ptrdiff_t c1) {
    const Eigen::Index cols = c1 - c0;
    Eigen::MatrixXd z = z0.middleCols(c0, cols);
    Eigen::MatrixXd scratch(z.rows(), cols);
    Eigen::VectorXd h0(cols);
    for (Eigen::Index c = 0; c < cols; ++c) h0[c] = hooks.hamiltonian(z.col(c));

    const BatchStepper stepper(hooks, direction * plan.dt);
    const double base = plan.dt / 3.0;
    {
      const Eigen::MatrixXd values = batch_observables(hooks, z);
      for (int e = 0; e < n_eps; ++e) acc[e].middleCols(c0, cols) = base * values;
    }
    for (int n = 1; n <= plan.max_steps; ++n) {
      stepper.advance(z, scratch);
      const Eigen::MatrixXd values = batch_observables(hooks, z);
      const double t = n * plan.dt;
      for (int e = 0; e < n_eps; ++e) {
        if (n > plan.node_count[e]) continue;
        const double w = base * simpson_coefficient(n, plan.node_count[e]) *
                         std::exp(-plan.epsilons[e] * t);
        acc[e].middleCols(c0, cols) += w * values;
      }
    }
    double worst = 0.0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double h = hooks.hamiltonian(z.col(c));
      worst = std::max(worst, std::abs(h - h0[c]) / std::max(1.0, std::abs(h0[c])));
    }
    block_worst[static_cast<std::size_t>(block)] = worst;
  });
  check_drift(block_worst, drift_bound);
  return acc;
}

// Same sweep, but accumulating observable gradients pulled back to t = 0
// through the tangent propagator of the (linear) flow; result[e][i] holds
// int_0^{T_e} e^{-eps s} Phi(direction * s)^T grad lambda_i ds per column.
std::vector<std::vector<Eigen::MatrixXd>> gradient_sweep(const PhaseSpaceHooks& hooks,
                                                         const Eigen::MatrixXd& z0, int n_obs,
                                                         const SweepPlan& plan, int direction,
                                                         double drift_bound) {
  const Eigen::Index points = z0.cols();
  const Eigen::Index dim = z0.rows();
  const int n_eps = static_cast<int>(plan.epsilons.size());
  std::vector<std::vector<Eigen::MatrixXd>> acc(
      n_eps, std::vector<Eigen::MatrixXd>(n_obs, Eigen::MatrixXd::Zero(dim, points)));

  const int workers = thread_budget();
  std::vector<double> block_worst(static_cast<std::size_t>(std::max(workers, 1)), 0.0);
  parallel_blocks(points, workers, [&](int block, std::ptrdiff_t c0, std::ptrdiff_t c1) {
    const Eigen::Index cols = c1 - c0;
    Eigen::MatrixXd z = z0.middleCols(c0, cols);
    Eigen::MatrixXd scratch(z.rows(), cols);
    Eigen::VectorXd h0(cols);
    for (Eigen::Index c = 0; c < cols; ++c) h0[c] = hooks.hamiltonian(z.col(c));

    const BatchStepper stepper(hooks, direction * plan.dt);
    Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(dim, dim);
    const double base = plan.dt / 3.0;
    for (int i = 0; i < n_obs; ++i) {
      const Eigen::MatrixXd g = batch_gradients(hooks, i, z);
      for (int e = 0; e < n_eps; ++e) acc[e][i].middleCols(c0, cols) = base * g;
    }
    for (int n = 1; n <= plan.max_steps; ++n) {
      stepper.advance(z, scratch);
      phi = (stepper.propagator() * phi).eval();
      const double t = n * plan.dt;
      for (int i = 0; i < n_obs; ++i) {
        const Eigen::MatrixXd pulled = phi.transpose() * batch_gradients(hooks, i, z);
        for (int e = 0; e < n_eps; ++e) {
          if (n > plan.node_count[e]) continue;
          const double w = base * simpson_coefficient(n, plan.node_count[e]) *
                           std::exp(-plan.epsilons[e] * t);
          acc[e][i].middleCols(c0, cols) += w * pulled;
        }
      }
    }
    double worst = 0.0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double h = hooks.hamiltonian(z.col(c));
      worst = std::max(worst, std::abs(h - h0[c]) / std::max(1.0, std::abs(h0[c])));
    }
    block_worst[static_cast<std::size_t>(block)] = worst;
  });
  check_drift(block_worst, drift_bound);
  return acc;
}

struct SampleSetup {
  ActionVector av;
  PhaseSpaceHooks hooks;
  SweepPlan plan;
  int grid = 0;
  Eigen::MatrixXd z0;
};

SampleSetup prepare(const ModelSpec& model, const Eigen::VectorXd& actions,
                    const SamplerOptions& options) {
  if (!model.make_actions) {
    throw CapabilityError(model.id + ": model has no action validator");
  }
  if (!model.phase_space) {
    throw CapabilityError(model.id + ": no phase-space map available for sampling");
  }
  if (options.grid < 0 || (options.grid > 0 && options.grid < 4)) {
    throw ParameterError("sampler: angle grid needs at least 4 points per dimension");
  }
  SampleSetup s;
  s.av = model.make_actions(actions);
  s.hooks = model.phase_space(s.av);
  s.plan = make_plan(s.av, options);
  s.grid = options.grid > 0 ? options.grid : s.hooks.grid_default;
  s.z0 = initial_states(s.hooks, angle_grid(model.n_angles, s.grid));
  return s;
}

TensorMeta sampler_meta(const SweepPlan& plan, const SamplerOptions& options, int grid) {
  TensorMeta meta;
  meta.backend = "sampler";
  meta.kernel_mode = "damped-numeric";
  meta.epsilon = plan.epsilons.back();
  meta.richardson_orders = static_cast<int>(plan.epsilons.size());
  meta.grid = grid;
  meta.horizon = options.horizon_factor;
  return meta;
}

void check_grid_doubling(const ModelSpec& model, const Eigen::VectorXd& actions,
                         const SamplerOptions& options, int grid, const Eigen::MatrixXd& coarse,
                         GeometricTensor (*sample)(const ModelSpec&, const Eigen::VectorXd&,
                                                   const SamplerOptions&)) {
  SamplerOptions doubled = options;
  doubled.grid = 2 * grid;
  doubled.check_grid_doubling = false;
  const GeometricTensor fine = sample(model, actions, doubled);
  const double scale = std::max(1.0, fine.matrix.cwiseAbs().maxCoeff());
  const double dev = (fine.matrix - coarse).cwiseAbs().maxCoeff();
  if (dev > 10.0 * kGridDoublingTol * scale) {
    throw NumericalQualityError("sampler: angle grid " + std::to_string(grid) +
                                " is too coarse: doubling it moves an entry by " +
                                format_double(dev));
  }
}

}  // namespace

GeometricTensor sample_tensor(const ModelSpec& model, const Eigen::VectorXd& actions,
                              const SamplerOptions& options) {
  SampleSetup s = prepare(model, actions, options);
  if (!s.hooks.tensor_capable) {
    throw CapabilityError(model.id + ": phase-space tensor sampling is not supported");
  }

  // u_i: damped time integral over the past; v_j: over the future.
  const auto u = observable_sweep(s.hooks, s.z0, s.plan, -1, options.drift_bound);
  const auto v = observable_sweep(s.hooks, s.z0, s.plan, +1, options.drift_bound);

  const double points = static_cast<double>(s.z0.cols());
  std::vector<Eigen::MatrixXd> per_eps;
  std::vector<double> h;
  for (std::size_t e = 0; e < s.plan.epsilons.size(); ++e) {
    // Centered products implement the disconnected subtraction exactly.
    const Eigen::VectorXd u_mean = u[e].rowwise().mean();
    const Eigen::VectorXd v_mean = v[e].rowwise().mean();
    Eigen::MatrixXd uc = u[e];
    uc.colwise() -= u_mean;
    Eigen::MatrixXd vc = v[e];
    vc.colwise() -= v_mean;
    const Eigen::MatrixXd cov = -(uc * vc.transpose()) / points;
    // The antisymmetric residue of the one-sided damping is odd in eps;
    // averaging the two index orders removes it, leaving a pure eps^2 series
    // for the extrapolation.
    per_eps.push_back(0.5 * (cov + cov.transpose()));
    h.push_back(s.plan.epsilons[e] * s.plan.epsilons[e]);
  }
  const Eigen::MatrixXd g = extrapolate_to_zero<Eigen::MatrixXd>(h, per_eps);
  GeometricTensor out =
      make_metric(g, model.point, s.av, sampler_meta(s.plan, options, s.grid));
  if (options.check_grid_doubling) {
    check_grid_doubling(model, actions, options, s.grid, out.matrix, &sample_tensor);
  }
  return out;
}

GeometricTensor sample_curvature(const ModelSpec& model, const Eigen::VectorXd& actions,
                                 const SamplerOptions& options) {
  SampleSetup s = prepare(model, actions, options);
  if (!s.hooks.curvature_capable || !s.hooks.linear_flow) {
    throw CapabilityError(model.id +
                          ": curvature sampling needs tangent dynamics of a linear flow");
  }
  if (!s.hooks.gradients_batch && !s.hooks.observable_gradients) {
    throw CapabilityError(model.id + ": curvature sampling needs observable gradients");
  }

  const int n_obs = model.n_params();
  const auto u = gradient_sweep(s.hooks, s.z0, n_obs, s.plan, -1, options.drift_bound);
  const auto v = gradient_sweep(s.hooks, s.z0, n_obs, s.plan, +1, options.drift_bound);

  const Eigen::Index dim = s.z0.rows();
  Eigen::MatrixXd symplectic = Eigen::MatrixXd::Zero(dim, dim);
  for (int d = 0; d < s.hooks.n_dof; ++d) {
    symplectic(d, s.hooks.n_dof + d) = 1.0;
    symplectic(s.hooks.n_dof + d, d) = -1.0;
  }

  const double points = static_cast<double>(s.z0.cols());
  std::vector<Eigen::MatrixXd> per_eps;
  std::vector<double> h;
  for (std::size_t e = 0; e < s.plan.epsilons.size(); ++e) {
    Eigen::MatrixXd f(n_obs, n_obs);
    for (int j = 0; j < n_obs; ++j) {
      const Eigen::MatrixXd jv = symplectic * v[e][static_cast<std::size_t>(j)];
      for (int i = 0; i < n_obs; ++i) {
        f(i, j) = u[e][static_cast<std::size_t>(i)].cwiseProduct(jv).sum() / points;
      }
    }
    // As with the metric, keep the part even in eps: here the antisymmetric
    // half, which is what the curvature limit consists of.
    per_eps.push_back(0.5 * (f - f.transpose()));
    h.push_back(s.plan.epsilons[e] * s.plan.epsilons[e]);
  }
  const Eigen::MatrixXd f = extrapolate_to_zero<Eigen::MatrixXd>(h, per_eps);
  GeometricTensor out =
      make_curvature(f, model.point, s.av, sampler_meta(s.plan, options, s.grid));
  if (options.check_grid_doubling) {
    check_grid_doubling(model, actions, options, s.grid, out.matrix, &sample_curvature);
  }
  return out;
}

Trajectory integrate_trajectory(const PhaseSpaceHooks& hooks, const Eigen::VectorXd& z0,
                                double t_end, double dt, double drift_bound) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ParameterError("trajectory: dt must be positive");
  }
  if (!std::isfinite(t_end) || t_end == 0.0) {
    throw ParameterError("trajectory: t_end must be nonzero");
  }
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t_end) / dt - 1e-9)));
  const double dt_eff = t_end / steps;

  Trajectory out;
  out.times.resize(steps + 1);
  out.states.resize(z0.size(), steps + 1);
  out.times[0] = 0.0;
  out.states.col(0) = z0;

  const double h0 = hooks.hamiltonian ? hooks.hamiltonian(z0) : 0.0;
  const BatchStepper stepper(hooks, dt_eff);
  Eigen::MatrixXd z = z0;
  Eigen::MatrixXd scratch(z.rows(), 1);
  for (int k = 1; k <= steps; ++k) {
    stepper.advance(z, scratch);
    out.times[k] = dt_eff * k;
    out.states.col(k) = z.col(0);
    if (hooks.hamiltonian) {
      const double energy = hooks.hamiltonian(z.col(0));
      const double drift = std::abs(energy - h0) / std::max(1.0, std::abs(h0));
      out.max_drift = std::max(out.max_drift, drift);
      if (drift > drift_bound) {
        throw NumericalQualityError("trajectory: relative energy drift " + format_double(drift) +
                                    " exceeds bound " + format_double(drift_bound) + " at t = " +
                                    format_double(out.times[k]));
      }
    }
  }
  return out;
}

HarmonicFit extract_harmonics(const Eigen::VectorXd& times, const Eigen::VectorXd& values,
                              const Eigen::VectorXd& frequencies) {
  if (times.size() != values.size()) {
    throw DimensionError("extract_harmonics: times and values must have equal length");
  }
  if (frequencies.size() == 0) {
    throw DimensionError("extract_harmonics: need at least one frequency");
  }
  if (times.size() < frequencies.size()) {
    throw DimensionError("extract_harmonics: more frequencies than samples");
  }
  const Eigen::Index n = times.size();
  const Eigen::Index k = frequencies.size();
  Eigen::MatrixXcd design(n, k);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      design(r, c) = std::exp(Complex(0.0, frequencies[c] * times[r]));
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  const double largest = sigma(0);
  const double smallest = sigma(sigma.size() - 1);

  HarmonicFit fit;
  fit.condition =
      smallest > 0.0 ? largest / smallest : std::numeric_limits<double>::infinity();
  if (!(fit.condition < 1e12)) {
    throw ConditioningError("extract_harmonics: design matrix condition " +
                            format_double(fit.condition) +
                            "; frequencies are too close to resolve");
  }
  const Eigen::VectorXcd rhs = values.cast<Complex>();
  fit.amplitudes = svd.solve(rhs);
  fit.residual = (design * fit.amplitudes - rhs).norm() / std::sqrt(static_cast<double>(n));
  return fit;
}

}  // namespace psgeo
