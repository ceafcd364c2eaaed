#include "psgeo/run_record.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

namespace psgeo {
namespace {

std::string escape_json(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void emit_pairs(std::ostringstream& out,
                const std::vector<std::pair<std::string, double>>& pairs) {
  out << '{';
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) out << ", ";
    out << '"' << escape_json(pairs[i].first) << "\": " << format_number(pairs[i].second);
  }
  out << '}';
}

void emit_matrix(std::ostringstream& out, const std::optional<Eigen::MatrixXd>& m,
                 const char* indent) {
  if (!m) {
    out << "null";
    return;
  }
  out << "[\n";
  for (Eigen::Index r = 0; r < m->rows(); ++r) {
    out << indent << "  [";
    for (Eigen::Index c = 0; c < m->cols(); ++c) {
      if (c) out << ", ";
      out << format_number((*m)(r, c));
    }
    out << ']' << (r + 1 < m->rows() ? ",\n" : "\n");
  }
  out << indent << ']';
}

Eigen::MatrixXd parse_matrix(const nlohmann::ordered_json& node) {
  if (!node.is_array() || node.empty()) {
    throw ParameterError("run record: tensor must be a non-empty array of arrays");
  }
  const auto rows = static_cast<Eigen::Index>(node.size());
  const auto cols = static_cast<Eigen::Index>(node[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = node[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParameterError("run record: ragged tensor rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

std::vector<std::pair<std::string, double>> parse_pairs(const nlohmann::ordered_json& node,
                                                        const char* what) {
  if (!node.is_object()) {
    throw ParameterError(std::string("run record: ") + what + " must be an object");
  }
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [key, value] : node.items()) {
    out.emplace_back(key, value.get<double>());
  }
  return out;
}

}  // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) {
    throw NumericalQualityError("run record: refusing to serialize a non-finite number");
  }
  if (value == 0.0) value = 0.0;  // collapse negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string to_json(const RunRecord& record) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"model\": \"" << escape_json(record.model) << "\",\n";
  out << "  \"params\": ";
  emit_pairs(out, record.params);
  out << ",\n  \"actions\": ";
  emit_pairs(out, record.actions);
  out << ",\n  \"backend\": \"" << escape_json(record.backend) << "\",\n";
  out << "  \"metric\": ";
  emit_matrix(out, record.metric, "  ");
  out << ",\n  \"curvature\": ";
  emit_matrix(out, record.curvature, "  ");
  out << ",\n  \"meta\": {\n";
  out << "    \"version\": \"" << escape_json(record.version) << "\",\n";
  out << "    \"command\": \"" << escape_json(record.command) << "\",\n";
  out << "    \"kernel_mode\": \"" << escape_json(record.meta.kernel_mode) << "\",\n";
  out << "    \"epsilon\": " << format_number(record.meta.epsilon) << ",\n";
  out << "    \"richardson_orders\": " << record.meta.richardson_orders << ",\n";
  out << "    \"truncation_order\": " << record.meta.truncation_order << ",\n";
  out << "    \"grid\": " << record.meta.grid << ",\n";
  out << "    \"horizon\": " << format_number(record.meta.horizon);
  if (!record.notes.empty()) {
    out << ",\n    \"notes\": [";
    for (std::size_t i = 0; i < record.notes.size(); ++i) {
      if (i) out << ", ";
      out << '"' << escape_json(record.notes[i]) << '"';
    }
    out << ']';
  }
  if (!record.relations.empty()) {
    out << ",\n    \"relations\": {";
    bool first = true;
    for (const auto& [name, value] : record.relations) {
      if (!first) out << ", ";
      first = false;
      out << '"' << escape_json(name) << "\": " << format_number(value);
    }
    out << '}';
  }
  if (record.wall_time_ms) {
    out << ",\n    \"wall_time_ms\": " << format_number(*record.wall_time_ms);
  }
  out << "\n  }\n}\n";
  return out.str();
}

RunRecord run_record_from_json(const std::string& text) {
  nlohmann::ordered_json root;
  try {
    root = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("run record: invalid JSON: ") + e.what());
  }
  for (const char* key : {"model", "params", "actions", "backend", "metric", "curvature", "meta"}) {
    if (!root.contains(key)) {
      throw ParameterError(std::string("run record: missing key \"") + key + '"');
    }
  }
  RunRecord record;
  record.model = root["model"].get<std::string>();
  record.params = parse_pairs(root["params"], "params");
  record.actions = parse_pairs(root["actions"], "actions");
  record.backend = root["backend"].get<std::string>();
  record.meta.backend = record.backend;
  if (!root["metric"].is_null()) record.metric = parse_matrix(root["metric"]);
  if (!root["curvature"].is_null()) record.curvature = parse_matrix(root["curvature"]);

  const auto& meta = root["meta"];
  record.version = meta.at("version").get<std::string>();
  record.command = meta.at("command").get<std::string>();
  record.meta.kernel_mode = meta.at("kernel_mode").get<std::string>();
  record.meta.epsilon = meta.at("epsilon").get<double>();
  record.meta.richardson_orders = meta.at("richardson_orders").get<int>();
  record.meta.truncation_order = meta.at("truncation_order").get<int>();
  record.meta.grid = meta.at("grid").get<int>();
  record.meta.horizon = meta.at("horizon").get<double>();
  if (meta.contains("notes")) {
    for (const auto& note : meta["notes"]) record.notes.push_back(note.get<std::string>());
  }
  if (meta.contains("relations")) {
    for (const auto& [name, value] : meta["relations"].items()) {
      record.relations[name] = value.get<double>();
    }
  }
  if (meta.contains("wall_time_ms")) {
    record.wall_time_ms = meta["wall_time_ms"].get<double>();
  }
  return record;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string to_csv(const std::vector<RunRecord>& records) {
  if (records.empty()) return "";
  std::ostringstream out;
  const auto& first = records.front();
  const int n = static_cast<int>(first.params.size());

  // Tensor columns are sized by the tensors themselves, not by the parameter
  // list: optional numerical knobs may ride along as extra parameters.
  Eigen::Index dim = 0;
  for (const auto& record : records) {
    if (record.metric) dim = record.metric->rows();
    if (!dim && record.curvature) dim = record.curvature->rows();
    if (dim) break;
  }

  for (int i = 0; i < n; ++i)
    out << (i ? "," : "") << csv_cell(first.params[static_cast<std::size_t>(i)].first);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) out << ",g_" << r << c;
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) out << ",F_" << r << c;
  out << ",det_g";
  for (Eigen::Index i = 0; i < dim; ++i) out << ",eig_" << i;
  out << ",status\n";

  for (const auto& record : records) {
    if (static_cast<int>(record.params.size()) != n) {
      throw DimensionError("run record csv: records disagree on the parameter list");
    }
    for (int i = 0; i < n; ++i) {
      if (record.params[static_cast<std::size_t>(i)].first !=
          first.params[static_cast<std::size_t>(i)].first) {
        throw DimensionError("run record csv: records disagree on the parameter order");
      }
      out << (i ? "," : "") << format_number(record.params[static_cast<std::size_t>(i)].second);
    }
    const bool have_g = record.metric && record.metric->rows() == dim;
    const bool have_f = record.curvature && record.curvature->rows() == dim;
    if ((record.metric && !have_g) || (record.curvature && !have_f)) {
      throw DimensionError("run record csv: records disagree on the tensor dimension");
    }
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        out << ',';
        if (have_g) out << format_number((*record.metric)(r, c));
      }
    }
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        out << ',';
        if (have_f) out << format_number((*record.curvature)(r, c));
      }
    }
    out << ',';
    if (have_g) out << format_number(record.metric->determinant());
    if (have_g) {
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(*record.metric);
      for (Eigen::Index i = 0; i < dim; ++i) out << ',' << format_number(eig.eigenvalues()(i));
    } else {
      for (Eigen::Index i = 0; i < dim; ++i) out << ',';
    }
    out << ',' << csv_cell(record.status) << '\n';
  }
  return out.str();
}

}  // namespace psgeo
