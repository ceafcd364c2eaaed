#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psgeo/types.hpp"

namespace psgeo {

// Everything one CLI invocation produced, in a serializable form.  Tensors
// are stored as plain matrices; the row/column order follows the model's
// canonical parameter order, which is also the order of `params`.
struct RunRecord {
  std::string model;
  std::vector<std::pair<std::string, double>> params;
  std::vector<std::pair<std::string, double>> actions;
  std::string backend;
  std::optional<Eigen::MatrixXd> metric;
  std::optional<Eigen::MatrixXd> curvature;

  TensorMeta meta;                      // numeric knobs of the run
  std::string command;                  // argv echo
  std::string version = kVersion;
  std::vector<std::string> notes;       // e.g. backend fallbacks
  std::map<std::string, double> relations;  // named residuals, when computed
  std::optional<double> wall_time_ms;   // filled only on request

  // Sweep bookkeeping: "ok" or "skipped:<reason>"; only the CSV shows it.
  std::string status = "ok";
};

// Stable JSON: top-level keys {model, params, actions, backend, metric,
// curvature, meta}, in that order; doubles at 17 significant digits; no
// locale dependence.  Identical records serialize to identical bytes.
// Optional fields (notes, relations, wall time) live inside "meta" and are
// emitted only when present, so default runs stay byte-reproducible.
std::string to_json(const RunRecord& record);

// Parses exactly the schema to_json emits; round-trips losslessly.
RunRecord run_record_from_json(const std::string& text);

// CSV with the same float formatting: header, then one row per record with
// the parameters, the flattened tensors (row-major), the metric determinant
// and its eigenvalues (ascending), and a status column.  Skipped records
// leave their numeric cells empty.
std::string to_csv(const std::vector<RunRecord>& records);

// One double, formatted the way both emitters format numbers.
std::string format_number(double value);

}  // namespace psgeo
