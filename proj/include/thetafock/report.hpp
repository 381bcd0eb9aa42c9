#pragma once

#include <map>
#include <string>
#include <vector>

#include "thetafock/geometry.hpp"
#include "thetafock/kernel.hpp"
#include "thetafock/serialize.hpp"

namespace thetafock {

// One verification check. Pass iff residual < tolerance; residual and
// tolerance belong to the binding (least-margin) part of a multi-part check,
// with the other parts recorded in details. Wall time is shown in the table
// renderer only and never serialized (the JSON report is byte-stable).
struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  double wall_ms = 0.0;
  Json details;
};

struct CalibrationBlock {
  double fitted_constant = 0.0;
  double printed_constant = 0.0;
  Complex fitted_tau{};
  Complex printed_tau{};
  double probe_max_rel_dev = 0.0;
  // canonical / printed, averaged over the index window, per variant,
  // plus the worst relative spread of the ratio across indices.
  std::map<std::string, double> norm_variant_ratios;
  double norm_ratio_spread = 0.0;
};

struct RunReport {
  SpaceConfig cfg;
  std::vector<CheckResult> checks;
  CalibrationBlock calibration;

  bool all_passed() const;
};

// Runs the full property suite for one configuration. The determinism check
// re-executes the suite with a different worker count and compares the
// serialized bytes.
RunReport verify_all(const SpaceConfig& cfg, unsigned threads = 1);

// Printed-versus-resolved constants only (norm variant ratios, kernel
// constant and tau).
RunReport report_discrepancies(const SpaceConfig& cfg);

Json report_to_json(const RunReport& report);
std::string report_to_table(const RunReport& report);

}  // namespace thetafock
