#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace radsum {

/// Result of one mechanical check: pass/fail plus the worst-case margin and
/// where it occurred. Serializes to the stable shape
/// {claim_id, pass, margin, worst_point, grid_spec, details}.
struct VerificationReport {
  std::string claim_id;
  bool pass = false;
  double margin = 0.0;          // worst-case margin; >= 0 on the passing side
  nlohmann::json worst_point;   // witness: grid point, instance, trial id, ...
  std::string grid_spec;        // grid / trial-count / seed description
  std::map<std::string, double> details;
  bool applicable = true;       // false when a precondition made the check a skip

  nlohmann::json to_json() const;
};

nlohmann::json reports_to_json(const std::vector<VerificationReport>& reports);

}  // namespace radsum
