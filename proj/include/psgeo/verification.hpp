#pragma once

#include <string>
#include <vector>

namespace psgeo {

// One row of the verification table.
struct CheckResult {
  std::string model;
  std::string name;
  bool pass = false;
  bool skipped = false;    // e.g. backend cannot run this model
  std::string detail;      // context, or the reason when skipped
  double max_dev = 0.0;    // worst deviation, relative to max(1, |reference|)
  double tol = 0.0;
};

struct VerifyOptions {
  // Subset of {"gho", "sco", "lco", "singular", "spin"}; empty means all.
  std::vector<std::string> models;
  // "harmonic" (engine vs closed forms), "closed" (closed forms vs pinned
  // values), or "sampler" (trajectory sampling vs closed forms).
  std::string backend = "harmonic";
  // 0 picks the backend default: 1e-8 for closed/harmonic, 1e-4 for sampler.
  double tol = 0.0;
};

// Runs the per-model verification suite for one backend and returns the
// table.  Skipped rows never count as failures.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

// True when every non-skipped row passed.
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace psgeo
