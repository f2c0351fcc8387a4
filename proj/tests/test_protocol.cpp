#include "doctest.h"

#include "sqss/adversary.hpp"
#include "sqss/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

using namespace sqss;

namespace {

CaseRecord make_case2(int bob_bit, BellOutcome bell) {
    CaseRecord r;
    r.case_id = CaseId::BobShareCharlieCheck;
    r.bob_announced = bob_bit;
    r.alice_bell = bell;
    return r;
}

CaseRecord make_case3(int charlie_bit, BellOutcome bell) {
    CaseRecord r;
    r.case_id = CaseId::BobCheckCharlieShare;
    r.charlie_announced = charlie_bit;
    r.alice_bell = bell;
    return r;
}

CaseRecord make_case4(int joint) {
    CaseRecord r;
    r.case_id = CaseId::BothCheck;
    r.alice_joint = joint;
    return r;
}

CaseRecord make_case1(int a, int b, int c) {
    CaseRecord r;
    r.case_id = CaseId::BothShare;
    r.alice_bit = a;
    r.bob_share_bit = b;
    r.charlie_share_bit = c;
    return r;
}

std::vector<CaseRecord> records_with_case3_count(int n, int case3) {
    std::vector<CaseRecord> records;
    for (int i = 0; i < case3; ++i) records.push_back(make_case3(0, BellOutcome::PhiPlus));
    for (int i = case3; i < n; ++i) records.push_back(make_case1(0, 0, 0));
    return records;
}

RunReport honest_run(Protocol protocol, const RunConfig& config,
                     std::uint64_t seed) {
    auto adversary = make_adversary(AdversarySpec{});
    RandomSource rng(seed);
    return run_protocol(protocol, config, *adversary, rng);
}

int seq_of(const std::vector<Event>& events, EventKind kind, Actor actor,
           const std::string& note) {
    for (const Event& e : events) {
        if (e.kind == kind && e.actor == actor && e.note == note) return e.seq;
    }
    return -1;
}

}  // namespace

TEST_CASE("the four mode combinations map to their case ids") {
    CHECK(classify_case(Mode::Share, Mode::Share) == CaseId::BothShare);
    CHECK(classify_case(Mode::Share, Mode::Check) == CaseId::BobShareCharlieCheck);
    CHECK(classify_case(Mode::Check, Mode::Share) == CaseId::BobCheckCharlieShare);
    CHECK(classify_case(Mode::Check, Mode::Check) == CaseId::BothCheck);
}

TEST_CASE("key relation is a bitwise XOR test") {
    CHECK(KeyTriple{"101", "011", "110"}.relation_holds());
    CHECK(KeyTriple{"", "", ""}.relation_holds());
    CHECK_FALSE(KeyTriple{"101", "011", "111"}.relation_holds());
    CHECK_FALSE(KeyTriple{"10", "011", "110"}.relation_holds());
}

TEST_CASE("eavesdrop check scores the announced correlations") {
    std::vector<CaseRecord> records{
        make_case1(0, 1, 1),
        make_case2(0, BellOutcome::PhiPlus),
        make_case2(1, BellOutcome::PsiPlus),
        make_case3(0, BellOutcome::PhiPlus),
        make_case3(1, BellOutcome::PhiPlus),  // should have been PsiPlus
        make_case4(0),
    };
    const CheckVerdict verdict = eavesdrop_check(records, 0.0);
    CHECK(verdict.checked == 5);
    CHECK(verdict.inconsistent == 1);
    CHECK(verdict.error_rate == doctest::Approx(0.2));
    CHECK(verdict.case3_occurrence == doctest::Approx(2.0 / 6.0));
    CHECK_FALSE(verdict.pass);
    CHECK(verdict.abort_reason == AbortReason::ErrorRateExceeded);

    const CheckVerdict lenient = eavesdrop_check(records, 0.25);
    CHECK(lenient.pass);
    CHECK_FALSE(lenient.abort_reason.has_value());

    std::vector<CaseRecord> clean{
        make_case2(1, BellOutcome::PsiPlus),
        make_case4(0),
    };
    CHECK(eavesdrop_check(clean, 0.0).pass);
    std::vector<CaseRecord> disturbed{make_case4(3)};
    const CheckVerdict bad = eavesdrop_check(disturbed, 0.0);
    CHECK(bad.inconsistent == 1);

    std::vector<CaseRecord> incomplete{CaseRecord{}};
    incomplete[0].case_id = CaseId::BobShareCharlieCheck;
    CHECK_THROWS_AS(eavesdrop_check(incomplete, 0.0), std::logic_error);
}

TEST_CASE("case-3 occurrence p-value is the exact lower binomial tail") {
    CHECK(case3_occurrence_pvalue(0, 4) == doctest::Approx(0.31640625).epsilon(1e-12));
    CHECK(case3_occurrence_pvalue(4, 4) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(case3_occurrence_pvalue(0, 64) ==
          doctest::Approx(std::pow(0.75, 64)).epsilon(1e-9));
    CHECK(case3_occurrence_pvalue(5, 64) < case3_occurrence_pvalue(6, 64));
    CHECK_THROWS_AS(case3_occurrence_pvalue(-1, 4), std::invalid_argument);
    CHECK_THROWS_AS(case3_occurrence_pvalue(5, 4), std::invalid_argument);
    CHECK_THROWS_AS(case3_occurrence_pvalue(0, 0), std::invalid_argument);
}

TEST_CASE("occurrence test separates starved from typical case-3 counts") {
    CHECK_FALSE(case3_occurrence_test(records_with_case3_count(64, 0), 1e-3));
    CHECK(case3_occurrence_test(records_with_case3_count(64, 16), 1e-3));
}

TEST_CASE("keys are the case-1 bits in triplet order") {
    std::vector<CaseRecord> records{
        make_case1(1, 0, 1),
        make_case2(0, BellOutcome::PhiPlus),
        make_case1(0, 1, 1),
        make_case1(1, 1, 0),
    };
    const KeyTriple keys = extract_keys(records);
    CHECK(keys.k_a == "101");
    CHECK(keys.k_b == "011");
    CHECK(keys.k_c == "110");
    CHECK(keys.relation_holds());

    std::vector<CaseRecord> broken{CaseRecord{}};
    broken[0].case_id = CaseId::BothShare;
    CHECK_THROWS_AS(extract_keys(broken), std::logic_error);
}

TEST_CASE("dealer actions demand the genuine returned qubits") {
    RandomSource rng(5);

    TripletRegister reg(3);
    const ActionResult key = alice_action(CaseId::BothShare, reg, {}, rng);
    CHECK(key.bit.has_value());
    CHECK_FALSE(key.bell.has_value());
    CHECK(reg.status(1) == SlotStatus::ZMeasured);

    TripletRegister reg2(4);
    BundleSlot charlie_slot;
    charlie_slot.primary = Photon::genuine(4, 3, 0);
    ReturnedQubits ret;
    ret.charlie = &charlie_slot;
    const ActionResult bell = alice_action(CaseId::BobShareCharlieCheck, reg2, ret, rng);
    CHECK(bell.bell.has_value());

    TripletRegister reg3(9);
    CHECK_THROWS_AS(alice_action(CaseId::BobShareCharlieCheck, reg3, {}, rng),
                    std::logic_error);
    BundleSlot wrong;
    wrong.primary = Photon::genuine(8, 3, 0);  // different register
    ReturnedQubits wrong_ret;
    wrong_ret.charlie = &wrong;
    CHECK_THROWS_AS(alice_action(CaseId::BobShareCharlieCheck, reg3, wrong_ret, rng),
                    std::logic_error);
    BundleSlot fake;
    fake.primary = Photon::fake(0, 2, 0);
    ReturnedQubits fake_ret;
    fake_ret.charlie = &fake;
    CHECK_THROWS_AS(alice_action(CaseId::BobShareCharlieCheck, reg3, fake_ret, rng),
                    std::logic_error);

    TripletRegister reg4(6);
    BundleSlot bob_slot;
    bob_slot.primary = Photon::genuine(6, 2, 0);
    BundleSlot charlie_slot4;
    charlie_slot4.primary = Photon::genuine(6, 3, 0);
    ReturnedQubits both;
    both.bob = &bob_slot;
    both.charlie = &charlie_slot4;
    const ActionResult joint = alice_action(CaseId::BothCheck, reg4, both, rng);
    CHECK(joint.joint_index == 0);
}

TEST_CASE("run configuration is validated") {
    auto adversary = make_adversary(AdversarySpec{});
    RandomSource rng(1);

    RunConfig bad_n;
    bad_n.n_triplets = 0;
    CHECK_THROWS_AS(run_randomization_based(bad_n, *adversary, rng),
                    std::invalid_argument);

    RunConfig bad_share;
    bad_share.share_probability = 0.0;
    CHECK_THROWS_AS(run_randomization_based(bad_share, *adversary, rng),
                    std::invalid_argument);

    RunConfig bad_threshold;
    bad_threshold.error_threshold = -0.1;
    CHECK_THROWS_AS(run_randomization_based(bad_threshold, *adversary, rng),
                    std::invalid_argument);

    RunConfig bad_sig;
    bad_sig.solution1.enabled = true;
    bad_sig.solution1.significance = 0.0;
    CHECK_THROWS_AS(run_randomization_based(bad_sig, *adversary, rng),
                    std::invalid_argument);
}

TEST_CASE("attacks only pair with the protocol they target") {
    RunConfig config;
    config.n_triplets = 10;
    RandomSource rng(3);

    AdversarySpec trojan;
    trojan.kind = AdversaryKind::TrojanHorse;
    auto trojan_adv = make_adversary(trojan);
    CHECK_THROWS_AS(
        run_protocol(Protocol::RandomizationBased, config, *trojan_adv, rng),
        std::invalid_argument);

    AdversarySpec ir;
    ir.kind = AdversaryKind::InterceptResend;
    auto ir_adv = make_adversary(ir);
    CHECK_THROWS_AS(run_protocol(Protocol::MeasureResend, config, *ir_adv, rng),
                    std::invalid_argument);
}

TEST_CASE("honest runs complete cleanly on both protocols") {
    for (const Protocol protocol :
         {Protocol::RandomizationBased, Protocol::MeasureResend}) {
        CAPTURE(to_string(protocol));
        RunConfig config;
        config.n_triplets = 400;
        const RunReport report = honest_run(protocol, config, 2026);

        CHECK_FALSE(report.aborted);
        CHECK(report.error_rate == 0.0);
        CHECK(report.inconsistent == 0);
        int total = 0;
        for (int c : report.case_counts) total += c;
        CHECK(total == 400);
        CHECK(report.checked ==
              report.case_counts[1] + report.case_counts[2] + report.case_counts[3]);
        CHECK(report.key_relation_holds);
        CHECK(report.keys.k_a.size() ==
              static_cast<std::size_t>(report.case_counts[0]));
        CHECK(report.adversary.kind == "none");
        CHECK_FALSE(report.adversary.active);
        CHECK_FALSE(report.adversary.succeeded);
        CHECK(report.events.empty());
    }
}

TEST_CASE("identical seeds reproduce a run exactly") {
    RunConfig config;
    config.n_triplets = 300;
    const RunReport a = honest_run(Protocol::RandomizationBased, config, 99);
    const RunReport b = honest_run(Protocol::RandomizationBased, config, 99);
    CHECK(a.keys.k_a == b.keys.k_a);
    CHECK(a.keys.k_b == b.keys.k_b);
    CHECK(a.keys.k_c == b.keys.k_c);
    CHECK(a.case_counts == b.case_counts);

    const RunReport c = honest_run(Protocol::RandomizationBased, config, 100);
    CHECK(a.keys.k_a != c.keys.k_a);  // 2^-75 coincidence odds at this length
}

TEST_CASE("countermeasures stay quiet on honest runs") {
    RunConfig config;
    config.n_triplets = 256;
    config.solution1.enabled = true;
    config.solution2.enabled = true;
    for (const Protocol protocol :
         {Protocol::RandomizationBased, Protocol::MeasureResend}) {
        CAPTURE(to_string(protocol));
        const RunReport report = honest_run(protocol, config, 4242);
        CHECK_FALSE(report.aborted);
        CHECK(report.solution1.enabled);
        CHECK(report.solution1.pass);
        CHECK(report.solution1.p_value >= 1e-3);
        CHECK(report.solution1.p_value <= 1.0);
        CHECK(report.solution2.enabled);
        CHECK(report.solution2.pass);
        CHECK(report.solution2.flagged_photons == 0);
        CHECK(report.solution2.missing_primary == 0);
        CHECK(report.solution2.max_multi_photon_rate == 0.0);
    }
}

TEST_CASE("announcements happen only after the dealer confirms reception") {
    RunConfig config;
    config.n_triplets = 40;
    config.trace = true;
    const RunReport report = honest_run(Protocol::RandomizationBased, config, 11);
    REQUIRE_FALSE(report.events.empty());
    const auto& ev = report.events;

    const int bob_mode = seq_of(ev, EventKind::ChooseMode, Actor::Bob,
                                "per-position SHARE/CHECK");
    const int confirm = seq_of(ev, EventKind::Confirm, Actor::Alice,
                               "both returned sequences stored");
    const int charlie_positions =
        seq_of(ev, EventKind::Announce, Actor::Charlie, "returned positions");
    const int bob_positions =
        seq_of(ev, EventKind::Announce, Actor::Bob, "returned positions");
    const int charlie_modes = seq_of(ev, EventKind::Announce, Actor::Charlie, "modes");
    const int bob_modes = seq_of(ev, EventKind::Announce, Actor::Bob, "modes");
    const int restore = seq_of(ev, EventKind::RestoreOrder, Actor::Alice,
                               "original order rebuilt");

    REQUIRE(bob_mode >= 0);
    REQUIRE(confirm >= 0);
    REQUIRE(charlie_positions >= 0);
    REQUIRE(restore >= 0);
    CHECK(bob_mode < confirm);
    CHECK(confirm < charlie_positions);
    CHECK(charlie_positions < bob_positions);
    CHECK(bob_positions < charlie_modes);
    CHECK(charlie_modes < bob_modes);
    CHECK(bob_modes < restore);
}

TEST_CASE("measure-resend announces modes only after confirmation") {
    RunConfig config;
    config.n_triplets = 40;
    config.trace = true;
    const RunReport report = honest_run(Protocol::MeasureResend, config, 12);
    REQUIRE_FALSE(report.events.empty());
    const auto& ev = report.events;
    const int confirm = seq_of(ev, EventKind::Confirm, Actor::Alice,
                               "both returned sequences stored");
    const int charlie_modes = seq_of(ev, EventKind::Announce, Actor::Charlie,
                                     "measured and reflected positions");
    const int bob_modes = seq_of(ev, EventKind::Announce, Actor::Bob,
                                 "measured and reflected positions");
    REQUIRE(confirm >= 0);
    REQUIRE(charlie_modes >= 0);
    REQUIRE(bob_modes >= 0);
    CHECK(confirm < charlie_modes);
    CHECK(charlie_modes < bob_modes);
}
