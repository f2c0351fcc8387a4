#include "sqss/report_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sqss {

namespace {

constexpr int kSchemaVersion = 1;

std::string csv_quote(const std::string& value) {
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

nlohmann::json solution1_json(const Solution1Report& s) {
  return {{"enabled", s.enabled}, {"p_value", s.p_value}, {"pass", s.pass}};
}

nlohmann::json solution2_json(const Solution2Report& s) {
  return {{"enabled", s.enabled},
          {"flagged_photons", s.flagged_photons},
          {"missing_primary", s.missing_primary},
          {"max_multi_photon_rate", s.max_multi_photon_rate},
          {"pass", s.pass}};
}

nlohmann::json plan_json(const ExperimentPlan& plan) {
  return {{"protocol", to_string(plan.protocol)},
          {"n_triplets", plan.config.n_triplets},
          {"runs", plan.runs},
          {"seed", plan.seed},
          {"share_probability", plan.config.share_probability},
          {"error_threshold", plan.config.error_threshold},
          {"solution1",
           {{"enabled", plan.config.solution1.enabled},
            {"significance", plan.config.solution1.significance}}},
          {"solution2",
           {{"enabled", plan.config.solution2.enabled},
            {"multi_photon_threshold",
             plan.config.solution2.multi_photon_threshold}}},
          {"adversary",
           {{"kind", to_string(plan.adversary.kind)},
            {"allowed_case3", plan.adversary.allowed_case3},
            {"delay_spies_per_slot", plan.adversary.delay_spies_per_slot},
            {"taps_enabled", plan.adversary.taps_enabled}}}};
}

nlohmann::json summary_json(const Summary& s) {
  return {{"runs", s.runs},
          {"aborted_runs", s.aborted_runs},
          {"completed_runs", s.completed_runs},
          {"abort_reasons",
           {{"error_rate_exceeded", s.abort_reasons[0]},
            {"case3_deficient", s.abort_reasons[1]},
            {"multi_photon_exceeded", s.abort_reasons[2]}}},
          {"triplets", s.triplets},
          {"case_counts", s.case_counts},
          {"checked", s.checked},
          {"inconsistent", s.inconsistent},
          {"key_bits", s.key_bits},
          {"flagged_photons", s.flagged_photons},
          {"key_relation_runs", s.key_relation_runs},
          {"succeeded_runs", s.succeeded_runs},
          {"detection_rate", s.detection_rate},
          {"success_rate", s.success_rate},
          {"pooled_error_rate", s.pooled_error_rate},
          {"pooled_case3_occurrence", s.pooled_case3_occurrence},
          {"case_frequency", s.case_frequency}};
}

nlohmann::json checks_json(const std::vector<ClaimCheck>& checks) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ClaimCheck& c : checks) {
    arr.push_back({{"name", c.name},
                   {"claim", c.claim},
                   {"expected", c.expected},
                   {"observed", c.observed},
                   {"pass", c.pass}});
  }
  return arr;
}

}  // namespace

nlohmann::json run_report_json(const RunReport& report) {
  nlohmann::json j{
      {"protocol", to_string(report.protocol)},
      {"n_triplets", report.n_triplets},
      {"seed", report.seed},
      {"aborted", report.aborted},
      {"abort_reason", report.abort_reason.has_value()
                           ? nlohmann::json(to_string(*report.abort_reason))
                           : nlohmann::json()},
      {"case_counts", report.case_counts},
      {"checked", report.checked},
      {"inconsistent", report.inconsistent},
      {"error_rate", report.error_rate},
      {"case3_occurrence", report.case3_occurrence},
      {"solution1", solution1_json(report.solution1)},
      {"solution2", solution2_json(report.solution2)},
      {"keys",
       {{"k_a", report.keys.k_a},
        {"k_b", report.keys.k_b},
        {"k_c", report.keys.k_c},
        {"relation_holds", report.key_relation_holds}}},
      {"adversary",
       {{"kind", report.adversary.kind},
        {"active", report.adversary.active},
        {"bits_recovered", report.adversary.bits_recovered},
        {"recovered_k_c", report.adversary.recovered_k_c},
        {"recovered_mismatches", report.adversary.recovered_mismatches},
        {"detected", report.adversary.detected},
        {"succeeded", report.adversary.succeeded}}},
  };
  if (!report.events.empty()) {
    nlohmann::json events = nlohmann::json::array();
    for (const Event& e : report.events) {
      events.push_back({{"seq", e.seq},
                        {"kind", to_string(e.kind)},
                        {"actor", to_string(e.actor)},
                        {"note", e.note}});
    }
    j["events"] = std::move(events);
  }
  return j;
}

nlohmann::json aggregate_report_json(const AggregateReport& report) {
  nlohmann::json runs = nlohmann::json::array();
  for (const RunReport& run : report.runs) runs.push_back(run_report_json(run));
  return {{"schema_version", kSchemaVersion},
          {"plan", plan_json(report.plan)},
          {"summary", summary_json(report.summary)},
          {"checks", checks_json(report.checks)},
          {"runs", std::move(runs)}};
}

nlohmann::json checklist_json(const Checklist& checklist) {
  nlohmann::json items = nlohmann::json::array();
  for (const ChecklistItem& item : checklist.items) {
    items.push_back({{"id", item.id},
                     {"name", item.name},
                     {"claim", item.claim},
                     {"expected", item.expected},
                     {"observed", item.observed},
                     {"pass", item.pass}});
  }
  return {{"schema_version", kSchemaVersion},
          {"seed", checklist.seed},
          {"all_pass", checklist.all_pass},
          {"items", std::move(items)}};
}

nlohmann::json distribution_json(const std::string& name,
                                 const std::vector<MeasureStep>& plan,
                                 const Distribution& distribution) {
  nlohmann::json outcomes = nlohmann::json::array();
  for (const auto& [tuple, prob] : distribution) {
    outcomes.push_back(
        {{"outcome", outcome_label(plan, tuple)}, {"probability", prob}});
  }
  return {{"schema_version", kSchemaVersion},
          {"distribution", name},
          {"outcomes", std::move(outcomes)}};
}

std::string aggregate_report_csv(const AggregateReport& report) {
  std::string out =
      "run_index,seed,protocol,n_triplets,aborted,abort_reason,case1,case2,"
      "case3,case4,checked,inconsistent,error_rate,case3_occurrence,"
      "solution1_p_value,solution2_flagged,solution2_rate,key_bits,"
      "key_relation_holds,adversary_kind,bits_recovered,recovered_mismatches,"
      "detected,succeeded\n";
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    const RunReport& r = report.runs[i];
    out += std::to_string(i) + ',' + std::to_string(r.seed) + ',' +
           to_string(r.protocol) + ',' + std::to_string(r.n_triplets) + ',' +
           (r.aborted ? "1" : "0") + ',' +
           (r.abort_reason.has_value() ? to_string(*r.abort_reason) : "") + ',' +
           std::to_string(r.case_counts[0]) + ',' +
           std::to_string(r.case_counts[1]) + ',' +
           std::to_string(r.case_counts[2]) + ',' +
           std::to_string(r.case_counts[3]) + ',' + std::to_string(r.checked) +
           ',' + std::to_string(r.inconsistent) + ',' + num(r.error_rate) +
           ',' + num(r.case3_occurrence) + ',' + num(r.solution1.p_value) +
           ',' + std::to_string(r.solution2.flagged_photons) + ',' +
           num(r.solution2.max_multi_photon_rate) + ',' +
           std::to_string(r.keys.k_a.size()) + ',' +
           (r.key_relation_holds ? "1" : "0") + ',' + r.adversary.kind + ',' +
           std::to_string(r.adversary.bits_recovered) + ',' +
           std::to_string(r.adversary.recovered_mismatches) + ',' +
           (r.adversary.detected ? "1" : "0") + ',' +
           (r.adversary.succeeded ? "1" : "0") + '\n';
  }
  return out;
}

std::string checklist_csv(const Checklist& checklist) {
  std::string out = "id,name,pass,claim,expected,observed\n";
  for (const ChecklistItem& item : checklist.items) {
    out += std::to_string(item.id) + ',' + csv_quote(item.name) + ',' +
           (item.pass ? "1" : "0") + ',' + csv_quote(item.claim) + ',' +
           csv_quote(item.expected) + ',' + csv_quote(item.observed) + '\n';
  }
  return out;
}

std::string distribution_csv(const std::vector<MeasureStep>& plan,
                             const Distribution& distribution) {
  std::string out = "outcome,probability\n";
  for (const auto& [tuple, prob] : distribution) {
    out += csv_quote(outcome_label(plan, tuple)) + ',' + num(prob) + '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  file << content;
  if (!file) throw std::runtime_error("failed while writing " + path);
}

}  // namespace sqss
