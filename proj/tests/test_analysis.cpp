#include "doctest.h"

#include "sqss/analysis.hpp"

#include <cmath>
#include <stdexcept>

using namespace sqss;

TEST_CASE("run seeds are pure and distinct per index") {
    CHECK(run_seed(42, 0) == run_seed(42, 0));
    CHECK(run_seed(42, 0) != run_seed(42, 1));
    CHECK(run_seed(42, 0) != run_seed(43, 0));
    CHECK_THROWS_AS(run_seed(42, -1), std::invalid_argument);
}

TEST_CASE("summaries pool integer counters and derive the ratios") {
    RunReport completed;
    completed.n_triplets = 100;
    completed.case_counts = {25, 25, 25, 25};
    completed.checked = 75;
    completed.inconsistent = 3;
    completed.keys = KeyTriple{"101", "011", "110"};
    completed.key_relation_holds = true;
    completed.adversary.succeeded = true;

    RunReport aborted;
    aborted.n_triplets = 100;
    aborted.aborted = true;
    aborted.abort_reason = AbortReason::Case3Deficient;
    aborted.case_counts = {40, 30, 0, 30};
    aborted.solution2.flagged_photons = 7;

    const Summary s = summarize({completed, aborted});
    CHECK(s.runs == 2);
    CHECK(s.completed_runs == 1);
    CHECK(s.aborted_runs == 1);
    CHECK(s.abort_reasons[static_cast<std::size_t>(AbortReason::Case3Deficient)] == 1);
    CHECK(s.triplets == 200);
    CHECK(s.case_counts[0] == 65);
    CHECK(s.checked == 75);
    CHECK(s.inconsistent == 3);
    CHECK(s.key_bits == 3);
    CHECK(s.flagged_photons == 7);
    CHECK(s.key_relation_runs == 1);
    CHECK(s.succeeded_runs == 1);
    CHECK(s.detection_rate == doctest::Approx(0.5));
    CHECK(s.success_rate == doctest::Approx(0.5));
    CHECK(s.pooled_error_rate == doctest::Approx(3.0 / 75.0));
    CHECK(s.case_frequency[0] == doctest::Approx(65.0 / 200.0));
    CHECK(s.pooled_case3_occurrence == doctest::Approx(25.0 / 200.0));

    CHECK(summarize({}).runs == 0);
}

TEST_CASE("binomial lower tail matches hand-computed values") {
    CHECK(binomial_lower_pvalue(0, 4, 0.25) ==
          doctest::Approx(0.31640625).epsilon(1e-12));
    CHECK(binomial_lower_pvalue(4, 4, 0.25) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(binomial_lower_pvalue(0, 100, 0.25) ==
          doctest::Approx(std::pow(0.75, 100)).epsilon(1e-9));
    CHECK(binomial_lower_pvalue(1, 2, 0.5) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK_THROWS_AS(binomial_lower_pvalue(0, 0, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(binomial_lower_pvalue(3, 2, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(binomial_lower_pvalue(0, 4, 0.0), std::invalid_argument);
}

TEST_CASE("chi-square fit flags support violations and scores exact fits") {
    Distribution expected;
    expected[{0}] = 0.5;
    expected[{1}] = 0.5;

    std::map<OutcomeTuple, long long> perfect;
    perfect[{0}] = 500;
    perfect[{1}] = 500;
    const ChiSquareResult fit = chi_square_fit(perfect, expected);
    CHECK(fit.statistic == doctest::Approx(0.0));
    CHECK(fit.p_value == doctest::Approx(1.0));
    CHECK(fit.dof == 1);
    CHECK_FALSE(fit.support_violation);

    std::map<OutcomeTuple, long long> outside;
    outside[{0}] = 400;
    outside[{7}] = 100;
    CHECK(chi_square_fit(outside, expected).support_violation);

    std::map<OutcomeTuple, long long> skewed;
    skewed[{0}] = 900;
    skewed[{1}] = 100;
    const ChiSquareResult bad = chi_square_fit(skewed, expected);
    CHECK(bad.statistic == doctest::Approx(640.0));
    CHECK(bad.p_value < 1e-6);

    CHECK_THROWS_AS(chi_square_fit({}, expected), std::invalid_argument);

    Distribution point;
    point[{0}] = 1.0;
    std::map<OutcomeTuple, long long> single;
    single[{0}] = 10;
    CHECK(chi_square_fit(single, point).p_value == doctest::Approx(1.0));
}

TEST_CASE("sampling agrees with the exact oracle on the protocol plans") {
    RandomSource rng(2718);
    const StateVector3 state = make_ghz_like();
    for (const std::vector<MeasureStep>& plan :
         {std::vector<MeasureStep>{ZStep{2}, BellStep{1, 3}},
          std::vector<MeasureStep>{ZStep{3}, BellStep{1, 2}},
          std::vector<MeasureStep>{JointStep{}}}) {
        const EquivalenceResult result =
            sampling_matches_oracle(state, plan, 20000, 1e-3, rng);
        CHECK(result.support_equal);
        CHECK_FALSE(result.chi.support_violation);
        CHECK(result.pass);
    }
}

TEST_CASE("experiment plans validate and honest claims verify") {
    ExperimentPlan plan;
    plan.config.n_triplets = 300;
    plan.runs = 5;
    plan.seed = 1;

    ExperimentPlan empty = plan;
    empty.runs = 0;
    CHECK_THROWS_AS(run_experiment(empty), std::invalid_argument);

    AggregateReport report = run_experiment(plan);
    CHECK(report.runs.size() == 5);
    CHECK(report.summary.runs == 5);
    CHECK(report.checks.empty());
    CHECK(verify_claims(report));
    CHECK_FALSE(report.checks.empty());
    for (const ClaimCheck& check : report.checks) {
        CAPTURE(check.name);
        CHECK(check.pass);
    }
}

TEST_CASE("attack claims verify for the undefended configurations") {
    ExperimentPlan trojan;
    trojan.protocol = Protocol::MeasureResend;
    trojan.config.n_triplets = 300;
    trojan.adversary.kind = AdversaryKind::TrojanHorse;
    trojan.runs = 4;
    trojan.seed = 2;
    AggregateReport report = run_experiment(trojan);
    CHECK(verify_claims(report));
    bool recovered_claim = false;
    for (const ClaimCheck& check : report.checks) {
        if (check.name == "key-share-recovered") recovered_claim = true;
    }
    CHECK(recovered_claim);
}
