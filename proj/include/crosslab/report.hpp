#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace crosslab {

/// One verified or measured quantity. Serialized keys are fixed so that a
/// fixed config reproduces byte-identical output apart from wall_time_ms.
struct ReportRecord {
  std::string quantity;
  double value = 0.0;
  std::optional<double> std_error;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> closed_form;
  std::optional<double> gap;
  nlohmann::json tolerances = nlohmann::json::object();
  double wall_time_ms = 0.0;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["quantity"] = quantity;
    j["value"] = value;
    if (std_error) j["std_error"] = *std_error;
    if (samples) j["samples"] = *samples;
    if (seed) j["seed"] = *seed;
    if (closed_form) j["closed_form"] = *closed_form;
    if (gap) j["gap"] = *gap;
    j["tolerances"] = tolerances;
    j["wall_time_ms"] = wall_time_ms;
    return j;
  }
};

inline std::string records_to_json(const std::vector<ReportRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ReportRecord& r : records) arr.push_back(r.to_json());
  return arr.dump(2);
}

/// One sweep point. The CSV column order is fixed:
/// variable,value,target,gap,std_error,samples,seed
struct SweepRow {
  std::string variable;
  double value = 0.0;
  double target = 0.0;
  double gap = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

inline std::string sweep_csv_header() { return "variable,value,target,gap,std_error,samples,seed"; }

std::string sweep_to_csv(const std::vector<SweepRow>& rows);
std::string records_to_csv(const std::vector<ReportRecord>& records);

}  // namespace crosslab
