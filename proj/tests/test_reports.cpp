#include "doctest.h"

#include "sqss/analysis.hpp"
#include "sqss/claims.hpp"
#include "sqss/report_io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace sqss;

namespace {

std::size_t line_count(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

AggregateReport small_experiment(std::uint64_t seed) {
    ExperimentPlan plan;
    plan.protocol = Protocol::MeasureResend;
    plan.config.n_triplets = 120;
    plan.runs = 3;
    plan.seed = seed;
    return run_experiment(plan);
}

}  // namespace

TEST_CASE("run reports serialize with every field present") {
    const AggregateReport report = small_experiment(31);
    const nlohmann::json j = run_report_json(report.runs[0]);
    for (const char* key :
         {"protocol", "n_triplets", "seed", "aborted", "abort_reason",
          "case_counts", "checked", "inconsistent", "error_rate",
          "case3_occurrence", "solution1", "solution2", "keys", "adversary"}) {
        CAPTURE(key);
        CHECK(j.contains(key));
    }
    CHECK(j["abort_reason"].is_null());
    CHECK(j["keys"]["relation_holds"] == true);
    CHECK_FALSE(j.contains("events"));  // tracing was off
}

TEST_CASE("aggregate JSON is byte-deterministic for a fixed plan") {
    const AggregateReport a = small_experiment(5);
    const AggregateReport b = small_experiment(5);
    CHECK(aggregate_report_json(a).dump(2) == aggregate_report_json(b).dump(2));

    const nlohmann::json j = aggregate_report_json(a);
    CHECK(j["schema_version"] == 1);
    CHECK(j["plan"]["n_triplets"] == 120);
    CHECK(j["runs"].size() == 3);
    CHECK(j["summary"]["runs"] == 3);
}

TEST_CASE("aggregate CSV has a header plus one row per run") {
    const AggregateReport report = small_experiment(8);
    const std::string csv = aggregate_report_csv(report);
    CHECK(line_count(csv) == 1 + report.runs.size());
    CHECK(csv.rfind("run_index,seed,protocol", 0) == 0);
    CHECK(csv.find("measure-resend") != std::string::npos);
}

TEST_CASE("distribution tables serialize from the oracle") {
    const std::vector<MeasureStep> plan{ZStep{2}, BellStep{1, 3}};
    const Distribution dist = outcome_distribution(make_ghz_like(), plan);

    const nlohmann::json j = distribution_json("conditional", plan, dist);
    CHECK(j["distribution"] == "conditional");
    REQUIRE(j["outcomes"].size() == 2);
    CHECK(j["outcomes"][0]["outcome"] == "0,PhiPlus");
    CHECK(j["outcomes"][0]["probability"] == doctest::Approx(0.5));
    CHECK(j["outcomes"][1]["outcome"] == "1,PsiPlus");

    const std::string csv = distribution_csv(plan, dist);
    CHECK(line_count(csv) == 3);
    CHECK(csv.find("\"0,PhiPlus\"") != std::string::npos);
}

TEST_CASE("checklist serializations carry one entry per item") {
    Checklist list;
    list.seed = 9;
    list.all_pass = false;
    list.items.push_back(ChecklistItem{1, "alpha", "claim, with comma",
                                       "expected \"quote\"", "observed", true});
    list.items.push_back(ChecklistItem{2, "beta", "c", "e", "o", false});

    const nlohmann::json j = checklist_json(list);
    CHECK(j["seed"] == 9);
    CHECK(j["all_pass"] == false);
    REQUIRE(j["items"].size() == 2);
    CHECK(j["items"][0]["name"] == "alpha");

    const std::string csv = checklist_csv(list);
    CHECK(line_count(csv) == 3);
    CHECK(csv.find("\"claim, with comma\"") != std::string::npos);
    CHECK(csv.find("\"expected \"\"quote\"\"\"") != std::string::npos);
}

TEST_CASE("text files round-trip through the writer") {
    const std::string path =
        (std::filesystem::temp_directory_path() / "sqss_report_io_test.txt").string();
    write_text_file(path, "payload\n");
    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    CHECK(content == "payload\n");
    std::remove(path.c_str());

    CHECK_THROWS_AS(write_text_file("/nonexistent-dir/x/y.txt", "z"),
                    std::runtime_error);
}
