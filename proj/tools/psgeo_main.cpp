// Command-line front end: compute geometric tensors at a point, run the
// built-in verification suite, or sweep tensors over a parameter grid.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or inadmissible
// parameters, 3 numerical-quality failure.

#include <CLI11.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psgeo/engine.hpp"
#include "psgeo/models.hpp"
#include "psgeo/parallel.hpp"
#include "psgeo/run_record.hpp"
#include "psgeo/sampler.hpp"
#include "psgeo/types.hpp"
#include "psgeo/verification.hpp"

namespace {

using psgeo::Error;
using psgeo::ModelSpec;
using psgeo::RunRecord;

using Assignments = std::vector<std::pair<std::string, double>>;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = s.find(sep, begin);
    parts.push_back(s.substr(begin, end - begin));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  return parts;
}

std::string trimmed(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

// Numeric literal with an optional pi suffix: "0.75", "pi", "-pi", "0.5pi".
double parse_value(const std::string& raw) {
  const std::string s = trimmed(raw);
  if (s == "pi" || s == "+pi") return std::numbers::pi;
  if (s == "-pi") return -std::numbers::pi;
  std::size_t pos = 0;
  double value = 0;
  try {
    value = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw psgeo::ParameterError("could not parse number '" + raw + "'");
  }
  const std::string rest = s.substr(pos);
  if (rest == "pi") return value * std::numbers::pi;
  if (!rest.empty()) throw psgeo::ParameterError("could not parse number '" + raw + "'");
  return value;
}

// "name=value" tokens, each possibly carrying several comma-separated pairs.
Assignments parse_assignments(const std::vector<std::string>& tokens, const char* what) {
  Assignments out;
  for (const auto& token : tokens) {
    for (const auto& piece : split(token, ',')) {
      if (trimmed(piece).empty()) continue;
      const std::size_t eq = piece.find('=');
      if (eq == std::string::npos || trimmed(piece.substr(0, eq)).empty()) {
        throw psgeo::ParameterError(std::string(what) + ": expected name=value, got '" +
                                    piece + "'");
      }
      out.emplace_back(trimmed(piece.substr(0, eq)), parse_value(piece.substr(eq + 1)));
    }
  }
  return out;
}

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

// "name=start:stop:count" with an inclusive, evenly spaced grid.
SweepAxis parse_axis(const std::string& token) {
  const std::size_t eq = token.find('=');
  if (eq == std::string::npos || trimmed(token.substr(0, eq)).empty()) {
    throw psgeo::ParameterError("sweep: expected name=start:stop:count, got '" + token + "'");
  }
  SweepAxis axis;
  axis.name = trimmed(token.substr(0, eq));
  const auto parts = split(token.substr(eq + 1), ':');
  if (parts.size() != 3) {
    throw psgeo::ParameterError("sweep: expected name=start:stop:count, got '" + token + "'");
  }
  const double start = parse_value(parts[0]);
  const double stop = parse_value(parts[1]);
  long count = 0;
  try {
    std::size_t pos = 0;
    count = std::stol(trimmed(parts[2]), &pos);
    if (pos != trimmed(parts[2]).size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw psgeo::ParameterError("sweep: grid count must be an integer, got '" + parts[2] + "'");
  }
  if (count < 1) throw psgeo::ParameterError("sweep: grid count must be at least 1");
  axis.values.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    axis.values.push_back(start);
  } else {
    for (long i = 0; i < count; ++i) {
      axis.values.push_back(start + (stop - start) * static_cast<double>(i) /
                                        static_cast<double>(count - 1));
    }
  }
  return axis;
}

std::string join_command(int argc, char** argv) {
  std::string out = std::filesystem::path(argv[0]).filename().string();
  for (int i = 1; i < argc; ++i) {
    out += ' ';
    out += argv[i];
  }
  return out;
}

bool is_usage_error(const Error& e) {
  return dynamic_cast<const psgeo::ParameterError*>(&e) != nullptr ||
         dynamic_cast<const psgeo::DomainError*>(&e) != nullptr ||
         dynamic_cast<const psgeo::DimensionError*>(&e) != nullptr ||
         dynamic_cast<const psgeo::RegistryError*>(&e) != nullptr ||
         dynamic_cast<const psgeo::CapabilityError*>(&e) != nullptr;
}

std::string backend_label(const std::string& backend) {
  return backend == "closed" ? "closed-form" : backend;
}

struct ComputeConfig {
  std::string backend = "harmonic";  // harmonic | sampler | closed
  std::optional<double> epsilon;
  int grid = 0;
  std::optional<double> horizon;
  bool check_grid = false;
  bool timing = false;
};

// Builds the model at `params`, computes metric and curvature with the chosen
// backend and re-indexes both tensors to the order the parameters were given.
RunRecord compute_record(const std::string& model_id, const Assignments& params,
                         const Assignments& actions, const ComputeConfig& cfg) {
  std::map<std::string, double> pmap;
  for (const auto& [name, value] : params) {
    if (!pmap.emplace(name, value).second) {
      throw psgeo::ParameterError("duplicate parameter '" + name + "'");
    }
  }
  const ModelSpec model = psgeo::model_from_params(model_id, pmap);

  const auto n_actions = static_cast<Eigen::Index>(model.action_names.size());
  Eigen::VectorXd raw_actions = Eigen::VectorXd::Zero(n_actions);
  std::vector<bool> seen(model.action_names.size(), false);
  for (const auto& [name, value] : actions) {
    const auto it = std::find(model.action_names.begin(), model.action_names.end(), name);
    if (it == model.action_names.end()) {
      throw psgeo::ParameterError("unknown action '" + name + "' for model '" + model.id + "'");
    }
    const auto idx = static_cast<std::size_t>(it - model.action_names.begin());
    if (seen[idx]) throw psgeo::ParameterError("duplicate action '" + name + "'");
    seen[idx] = true;
    raw_actions[static_cast<Eigen::Index>(idx)] = value;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw psgeo::ParameterError("missing action '" + model.action_names[i] + "'");
  }

  RunRecord record;
  record.model = model.id;
  record.params = params;
  for (Eigen::Index i = 0; i < n_actions; ++i) {
    record.actions.emplace_back(model.action_names[static_cast<std::size_t>(i)],
                                raw_actions[i]);
  }

  // Tensor indices follow the phase-space parameters in the order they were
  // given on the command line; extra numerical knobs are not tensor indices.
  std::vector<Eigen::Index> perm;
  perm.reserve(static_cast<std::size_t>(model.n_params()));
  for (const auto& [name, value] : params) {
    std::string canonical = name;
    if (model.id == "sco" && name == "k'") canonical = "kp";
    const auto it = std::find(model.point.names.begin(), model.point.names.end(), canonical);
    if (it != model.point.names.end()) perm.push_back(it - model.point.names.begin());
  }
  if (static_cast<int>(perm.size()) != model.n_params()) {
    throw psgeo::DimensionError("tensor: could not match parameters to the model's chart");
  }
  const auto permuted = [&perm](const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(perm[static_cast<std::size_t>(r)],
                                                                perm[static_cast<std::size_t>(c)]);
    }
    return out;
  };

  const auto t0 = std::chrono::steady_clock::now();
  Eigen::MatrixXd metric, curvature;
  psgeo::TensorMeta meta;
  if (cfg.backend == "closed") {
    const psgeo::ActionVector av = model.make_actions(raw_actions);
    metric = model.closed_metric(av);
    curvature = model.closed_curvature(av);
    meta.backend = "closed-form";
    meta.kernel_mode = "none";
  } else if (cfg.backend == "sampler") {
    psgeo::SamplerOptions options;
    if (cfg.epsilon) {
      options.epsilons = {*cfg.epsilon, *cfg.epsilon / 2, *cfg.epsilon / 4};
    }
    if (cfg.grid > 0) options.grid = cfg.grid;
    if (cfg.horizon) options.horizon_factor = *cfg.horizon;
    options.check_grid_doubling = cfg.check_grid;
    const psgeo::GeometricTensor sampled = psgeo::sample_tensor(model, raw_actions, options);
    metric = sampled.matrix;
    meta = sampled.meta;
    try {
      curvature = psgeo::sample_curvature(model, raw_actions, options).matrix;
    } catch (const psgeo::CapabilityError&) {
      curvature = psgeo::classical_curvature(model, raw_actions).matrix;
      record.notes.push_back(
          "curvature from the harmonic backend; sampled tangent flows are unavailable for "
          "this model");
    }
  } else {
    psgeo::KernelConfig kernel;
    if (cfg.epsilon) {
      kernel.mode = psgeo::KernelConfig::Mode::DampedNumeric;
      kernel.epsilon = *cfg.epsilon;
    }
    const psgeo::GeometricTensor computed = psgeo::classical_metric(model, raw_actions, kernel);
    metric = computed.matrix;
    meta = computed.meta;
    curvature = psgeo::classical_curvature(model, raw_actions, kernel).matrix;
  }
  const std::chrono::duration<double, std::milli> elapsed =
      std::chrono::steady_clock::now() - t0;

  record.metric = permuted(metric);
  record.curvature = permuted(curvature);
  record.meta = meta;
  record.backend = meta.backend;
  if (cfg.timing) record.wall_time_ms = elapsed.count();
  return record;
}

int run_tensor(const std::string& model_id, const Assignments& params,
               const Assignments& actions, const ComputeConfig& cfg, const std::string& out,
               const std::string& command) {
  RunRecord record = compute_record(model_id, params, actions, cfg);
  record.command = command;
  if (out == "csv") {
    std::cout << psgeo::to_csv({std::move(record)});
  } else {
    std::cout << psgeo::to_json(record);
  }
  return 0;
}

int run_verify(const std::vector<std::string>& model_tokens, const std::string& backend,
               double tol) {
  psgeo::VerifyOptions options;
  for (const auto& token : model_tokens) {
    for (const auto& piece : split(token, ',')) {
      if (!trimmed(piece).empty()) options.models.push_back(trimmed(piece));
    }
  }
  options.backend = backend;
  options.tol = tol;
  const auto results = psgeo::run_verification(options);

  std::printf("%-10s %-46s %-6s %-10s %-10s %s\n", "model", "check", "status", "max dev",
              "tol", "note");
  int passed = 0, failed = 0, skipped = 0;
  for (const auto& r : results) {
    const char* status = r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL");
    char dev[32];
    if (r.skipped) {
      std::snprintf(dev, sizeof dev, "-");
    } else {
      std::snprintf(dev, sizeof dev, "%.3g", r.max_dev);
    }
    char tol_text[32];
    std::snprintf(tol_text, sizeof tol_text, "%.3g", r.tol);
    std::printf("%-10s %-46s %-6s %-10s %-10s %s\n", r.model.c_str(), r.name.c_str(), status,
                dev, r.skipped ? "-" : tol_text, r.detail.c_str());
    if (r.skipped) {
      ++skipped;
    } else if (r.pass) {
      ++passed;
    } else {
      ++failed;
    }
  }
  std::printf("%zu checks: %d passed, %d failed, %d skipped\n", results.size(), passed,
              failed, skipped);
  return psgeo::all_passed(results) ? 0 : 1;
}

int run_sweep(const std::string& model_id, const Assignments& fixed,
              const std::vector<std::string>& grid_tokens, const Assignments& actions,
              const ComputeConfig& cfg, const std::string& command) {
  std::vector<SweepAxis> axes;
  axes.reserve(grid_tokens.size());
  for (const auto& token : grid_tokens) axes.push_back(parse_axis(token));

  std::vector<std::string> names;
  for (const auto& [name, value] : fixed) names.push_back(name);
  for (const auto& axis : axes) names.push_back(axis.name);
  std::sort(names.begin(), names.end());
  const auto dup = std::adjacent_find(names.begin(), names.end());
  if (dup != names.end()) {
    throw psgeo::ParameterError("sweep: parameter '" + *dup + "' given more than once");
  }

  std::size_t total = 1;
  for (const auto& axis : axes) total *= axis.values.size();

  // Rows enumerate the cartesian product with the first grid axis outermost
  // and the last one varying fastest.
  std::vector<RunRecord> records(total);
  const auto compute_row = [&](std::size_t row) {
    Assignments params = fixed;
    std::size_t rem = row;
    std::vector<std::size_t> index(axes.size(), 0);
    for (std::size_t a = axes.size(); a-- > 0;) {
      index[a] = rem % axes[a].values.size();
      rem /= axes[a].values.size();
    }
    for (std::size_t a = 0; a < axes.size(); ++a) {
      params.emplace_back(axes[a].name, axes[a].values[index[a]]);
    }
    try {
      records[row] = compute_record(model_id, params, actions, cfg);
    } catch (const Error& e) {
      RunRecord& record = records[row];
      record.model = model_id;
      record.params = params;
      record.actions = actions;
      record.backend = backend_label(cfg.backend);
      record.meta.backend = record.backend;
      record.status = std::string("skipped:") + e.what();
    }
    records[row].command = command;
  };
  psgeo::parallel_blocks(static_cast<std::ptrdiff_t>(total), psgeo::thread_budget(),
                         [&](int, std::ptrdiff_t begin, std::ptrdiff_t end) {
                           for (std::ptrdiff_t i = begin; i < end; ++i) {
                             compute_row(static_cast<std::size_t>(i));
                           }
                         });
  std::cout << psgeo::to_csv(records);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric tensors (metric and curvature) of classical integrable models"};
  app.set_version_flag("--version", std::string(psgeo::kVersion));
  app.require_subcommand(1);

  std::string model_id;
  std::vector<std::string> param_tokens, action_tokens, grid_tokens, verify_models;
  std::string backend = "harmonic";
  std::string out_format = "json";
  std::string verify_backend = "harmonic";
  double epsilon = 0, horizon = 0, tol = 0;
  int grid = 0;
  bool timing = false;

  auto* tensor_cmd =
      app.add_subcommand("tensor", "Compute the metric and curvature at one point");
  tensor_cmd->add_option("--model", model_id, "Model id: gho, sco, lco, singular, spin")
      ->required();
  tensor_cmd->add_option("--params", param_tokens,
                         "Model parameters as name=value[,name=value...]");
  tensor_cmd->add_option("--actions", action_tokens, "Actions as name=value[,name=value...]");
  tensor_cmd->add_option("--backend", backend, "Computation backend")
      ->check(CLI::IsMember({"harmonic", "sampler", "closed"}))
      ->capture_default_str();
  tensor_cmd->add_option("--out", out_format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  auto* epsilon_opt = tensor_cmd->add_option(
      "--epsilon", epsilon,
      "Damping for the kernel (harmonic) or largest damping of the ladder (sampler)");
  auto* grid_opt =
      tensor_cmd->add_option("--grid", grid, "Sampler angle-grid points per dimension");
  auto* horizon_opt = tensor_cmd->add_option(
      "--horizon", horizon, "Sampler horizon factor: integrate to t = horizon/damping");
  auto* check_grid_opt = tensor_cmd->add_flag(
      "--check-grid", "Fail (exit 3) if doubling the sampler's angle grid moves the result");
  tensor_cmd->add_flag("--timing", timing, "Record wall-clock time in the output");

  auto* verify_cmd =
      app.add_subcommand("verify", "Check computed tensors against reference values");
  verify_cmd->add_option("--models", verify_models,
                         "Models to verify (default: all), comma-separated or repeated");
  verify_cmd->add_option("--backend", verify_backend, "Backend to verify")
      ->check(CLI::IsMember({"harmonic", "closed", "sampler"}))
      ->capture_default_str();
  verify_cmd->add_option("--tol", tol, "Override the backend's default tolerance");

  auto* sweep_cmd =
      app.add_subcommand("sweep", "Sweep tensors over a parameter grid, emitting CSV");
  sweep_cmd->add_option("--model", model_id, "Model id: gho, sco, lco, singular, spin")
      ->required();
  sweep_cmd->add_option("--params", param_tokens, "Fixed parameters as name=value[,...]");
  sweep_cmd
      ->add_option("--param-grid", grid_tokens,
                   "Swept parameter as name=start:stop:count (repeatable; 'pi' literals "
                   "allowed; first axis outermost)")
      ->required();
  sweep_cmd->add_option("--actions", action_tokens, "Actions as name=value[,name=value...]");
  auto* sweep_backend_opt =
      sweep_cmd->add_option("--backend", backend, "Computation backend")
          ->check(CLI::IsMember({"harmonic", "sampler", "closed"}));
  auto* sweep_epsilon_opt = sweep_cmd->add_option("--epsilon", epsilon, "As in tensor");
  auto* sweep_grid_opt = sweep_cmd->add_option("--grid", grid, "As in tensor");
  auto* sweep_horizon_opt = sweep_cmd->add_option("--horizon", horizon, "As in tensor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ComputeConfig cfg;
    cfg.backend = backend;
    cfg.grid = grid;
    cfg.timing = timing;
    if (sweep_cmd->parsed() && sweep_backend_opt->count() == 0) cfg.backend = "closed";
    const bool epsilon_given = epsilon_opt->count() > 0 || sweep_epsilon_opt->count() > 0;
    const bool grid_given = grid_opt->count() > 0 || sweep_grid_opt->count() > 0;
    const bool horizon_given = horizon_opt->count() > 0 || sweep_horizon_opt->count() > 0;
    if (epsilon_given) {
      if (cfg.backend == "closed") {
        throw psgeo::ParameterError("--epsilon does not apply to the closed backend");
      }
      if (!(epsilon > 0)) throw psgeo::ParameterError("--epsilon must be positive");
      cfg.epsilon = epsilon;
    }
    if (grid_given && cfg.backend != "sampler") {
      throw psgeo::ParameterError("--grid applies only to the sampler backend");
    }
    cfg.check_grid = check_grid_opt->count() > 0;
    if (cfg.check_grid && cfg.backend != "sampler") {
      throw psgeo::ParameterError("--check-grid applies only to the sampler backend");
    }
    if (horizon_given) {
      if (cfg.backend != "sampler") {
        throw psgeo::ParameterError("--horizon applies only to the sampler backend");
      }
      if (!(horizon > 0)) throw psgeo::ParameterError("--horizon must be positive");
      cfg.horizon = horizon;
    }

    const std::string command = join_command(argc, argv);
    if (tensor_cmd->parsed()) {
      return run_tensor(model_id, parse_assignments(param_tokens, "params"),
                        parse_assignments(action_tokens, "actions"), cfg, out_format, command);
    }
    if (verify_cmd->parsed()) {
      return run_verify(verify_models, verify_backend, tol);
    }
    return run_sweep(model_id, parse_assignments(param_tokens, "params"), grid_tokens,
                     parse_assignments(action_tokens, "actions"), cfg, command);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_usage_error(e) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
