#pragma once

#include <string>

#include "json.hpp"

#include "sqss/analysis.hpp"
#include "sqss/claims.hpp"

namespace sqss {

/// JSON forms. nlohmann objects keep keys sorted, so identical inputs
/// serialize to identical bytes; reports carry a schema_version field.

nlohmann::json run_report_json(const RunReport& report);
nlohmann::json aggregate_report_json(const AggregateReport& report);
nlohmann::json checklist_json(const Checklist& checklist);
nlohmann::json distribution_json(const std::string& name,
                                 const std::vector<MeasureStep>& plan,
                                 const Distribution& distribution);

/// CSV forms: aggregate reports flatten to one row per run.

std::string aggregate_report_csv(const AggregateReport& report);
std::string checklist_csv(const Checklist& checklist);
std::string distribution_csv(const std::vector<MeasureStep>& plan,
                             const Distribution& distribution);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sqss
