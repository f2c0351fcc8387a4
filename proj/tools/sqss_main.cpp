// Command-line front end: `run` executes experiment batches, `suite` runs
// the quantitative validation checklist, `oracle` prints exact outcome
// distributions. Exit codes: 0 success, 1 usage error, 2 when a run
// aborted (attack detected) or the suite failed.

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sqss/analysis.hpp"
#include "sqss/claims.hpp"
#include "sqss/report_io.hpp"

namespace {

struct OracleEntry {
  const char* description;
  std::vector<sqss::MeasureStep> plan;
};

const std::map<std::string, OracleEntry>& oracle_catalog() {
  using namespace sqss;
  static const std::map<std::string, OracleEntry> catalog = {
      {"ghz-like-zzz",
       {"computational-basis measurement of all three qubits",
        {ZStep{1}, ZStep{2}, ZStep{3}}}},
      {"case2-conditional",
       {"agent 2 measures, dealer then measures qubits (1,3) in the Bell basis",
        {ZStep{2}, BellStep{1, 3}}}},
      {"case3-conditional",
       {"agent 3 measures, dealer then measures qubits (1,2) in the Bell basis",
        {ZStep{3}, BellStep{1, 2}}}},
      {"joint-on-psi-prime",
       {"three-qubit joint-basis measurement of the undisturbed state",
        {JointStep{}}}},
  };
  return catalog;
}

sqss::Protocol parse_protocol(const std::string& name) {
  if (name == "measure-resend") return sqss::Protocol::MeasureResend;
  return sqss::Protocol::RandomizationBased;
}

sqss::AdversaryKind parse_adversary(const std::string& name) {
  if (name == "intercept-resend") return sqss::AdversaryKind::InterceptResend;
  if (name == "trojan-horse") return sqss::AdversaryKind::TrojanHorse;
  return sqss::AdversaryKind::None;
}

void emit(const std::string& payload, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << payload;
  } else {
    sqss::write_text_file(output_path, payload);
    std::cout << "wrote " << output_path << "\n";
  }
}

int cmd_run(const sqss::ExperimentPlan& plan, const std::string& format,
            const std::string& output_path) {
  sqss::AggregateReport report = sqss::run_experiment(plan);
  sqss::verify_claims(report);

  const std::string payload =
      format == "csv" ? sqss::aggregate_report_csv(report)
                      : sqss::aggregate_report_json(report).dump(2) + "\n";
  emit(payload, output_path);

  if (!output_path.empty()) {
    const sqss::Summary& s = report.summary;
    std::cout << sqss::to_string(plan.protocol) << ", adversary "
              << sqss::to_string(plan.adversary.kind) << ": " << s.runs
              << " runs, " << s.aborted_runs << " aborted, pooled error rate "
              << s.pooled_error_rate << ", detection rate " << s.detection_rate
              << "\n";
  }
  return report.summary.aborted_runs > 0 ? 2 : 0;
}

int cmd_suite(std::uint64_t seed, const std::string& format,
              const std::string& output_path) {
  const sqss::Checklist list = sqss::run_claim_suite(seed);
  for (const sqss::ChecklistItem& item : list.items) {
    std::printf("%s %2d %-28s %s\n", item.pass ? "PASS" : "FAIL", item.id,
                item.name.c_str(), item.observed.c_str());
  }
  int failed = 0;
  for (const sqss::ChecklistItem& item : list.items) {
    if (!item.pass) ++failed;
  }
  std::printf("%d/%zu passed\n", static_cast<int>(list.items.size()) - failed,
              list.items.size());

  if (!output_path.empty()) {
    const std::string payload = format == "csv"
                                    ? sqss::checklist_csv(list)
                                    : sqss::checklist_json(list).dump(2) + "\n";
    sqss::write_text_file(output_path, payload);
    std::cout << "wrote " << output_path << "\n";
  }
  return list.all_pass ? 0 : 2;
}

int cmd_oracle(const std::string& entry, const std::string& format,
               const std::string& output_path) {
  const OracleEntry& item = oracle_catalog().at(entry);
  const sqss::Distribution dist =
      sqss::outcome_distribution(sqss::make_ghz_like(), item.plan);
  const std::string payload =
      format == "csv"
          ? sqss::distribution_csv(item.plan, dist)
          : sqss::distribution_json(entry, item.plan, dist).dump(2) + "\n";
  emit(payload, output_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-quantum secret sharing simulator"};
  app.require_subcommand(1);

  std::string protocol_name = "randomization";
  std::string adversary_name = "none";
  int n_triplets = 1000;
  int runs = 100;
  std::uint64_t seed = 42;
  int allowed_case3 = 0;
  int spies_per_slot = 1;
  bool solution1 = false;
  double significance = 1e-3;
  bool solution2 = false;
  double threshold = 0.01;
  double error_threshold = 0.0;
  double share_probability = 0.5;
  bool trace = false;
  std::string format = "json";
  std::string output_path;

  CLI::App* run_cmd = app.add_subcommand("run", "Execute a batch of protocol runs");
  run_cmd->add_option("--protocol", protocol_name, "Protocol variant")
      ->check(CLI::IsMember({"randomization", "randomization-based", "measure-resend"}))
      ->capture_default_str();
  run_cmd->add_option("--adversary", adversary_name, "Dishonest-agent strategy")
      ->check(CLI::IsMember({"none", "intercept-resend", "trojan-horse"}))
      ->capture_default_str();
  run_cmd->add_option("--N,--triplets", n_triplets, "Entangled triplets per run")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_option("--runs", runs, "Independent runs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_option("--seed", seed, "Plan seed")->capture_default_str();
  run_cmd->add_option("--m,--allowed-case3", allowed_case3,
                      "Intercept-resend: forced case-3 positions")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  run_cmd->add_option("--spies-per-slot", spies_per_slot,
                      "Trojan-horse: delay probes per slot")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_flag("--solution1", solution1,
                    "Enable the case-3 occurrence test");
  run_cmd->add_option("--significance", significance,
                      "Occurrence-test significance level")
      ->capture_default_str();
  run_cmd->add_flag("--solution2", solution2,
                    "Enable wavelength filters and photon-number splitters");
  run_cmd->add_option("--threshold", threshold, "Multi-photon rate threshold")
      ->capture_default_str();
  run_cmd->add_option("--error-threshold", error_threshold,
                      "Tolerated eavesdropping-check error rate")
      ->capture_default_str();
  run_cmd->add_option("--share-probability", share_probability,
                      "Per-position probability of SHARE")
      ->capture_default_str();
  run_cmd->add_flag("--trace", trace, "Keep per-run event logs in the report");
  run_cmd->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  run_cmd->add_option("--output,-o", output_path, "Write the report here");

  std::uint64_t suite_seed = 42;
  std::string suite_format = "json";
  std::string suite_output;
  CLI::App* suite_cmd =
      app.add_subcommand("suite", "Run the quantitative validation suite");
  suite_cmd->add_option("--seed", suite_seed, "Suite seed")->capture_default_str();
  suite_cmd->add_option("--format", suite_format, "Checklist format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  suite_cmd->add_option("--output,-o", suite_output, "Write the checklist here");

  std::string oracle_entry;
  std::string oracle_format = "json";
  std::string oracle_output;
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "Print an exact outcome distribution of the resource state");
  std::vector<std::string> entry_names;
  for (const auto& [name, entry] : oracle_catalog()) entry_names.push_back(name);
  oracle_cmd->add_option("entry", oracle_entry, "Distribution name")
      ->required()
      ->check(CLI::IsMember(entry_names));
  oracle_cmd->add_option("--format", oracle_format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  oracle_cmd->add_option("--output,-o", oracle_output, "Write the table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run_cmd->parsed()) {
      sqss::ExperimentPlan plan;
      plan.protocol = parse_protocol(protocol_name);
      plan.adversary.kind = parse_adversary(adversary_name);
      plan.adversary.allowed_case3 = allowed_case3;
      plan.adversary.delay_spies_per_slot = spies_per_slot;
      plan.config.n_triplets = n_triplets;
      plan.config.share_probability = share_probability;
      plan.config.error_threshold = error_threshold;
      plan.config.solution1.enabled = solution1;
      plan.config.solution1.significance = significance;
      plan.config.solution2.enabled = solution2;
      plan.config.solution2.multi_photon_threshold = threshold;
      plan.config.trace = trace;
      plan.runs = runs;
      plan.seed = seed;
      return cmd_run(plan, format, output_path);
    }
    if (suite_cmd->parsed()) {
      return cmd_suite(suite_seed, suite_format, suite_output);
    }
    if (oracle_cmd->parsed()) {
      return cmd_oracle(oracle_entry, oracle_format, oracle_output);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
