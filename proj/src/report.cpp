#include "radsum/report.hpp"

#include <vector>

namespace radsum {

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j{
      {"claim_id", claim_id}, {"pass", pass},           {"margin", margin},
      {"worst_point", worst_point}, {"grid_spec", grid_spec},
  };
  if (!applicable) j["applicable"] = false;
  if (!details.empty()) j["details"] = details;
  return j;
}

nlohmann::json reports_to_json(const std::vector<VerificationReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(r.to_json());
  return arr;
}

}  // namespace radsum
