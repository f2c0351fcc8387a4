#include "doctest.h"

#include "sqss/quantum.hpp"
#include "sqss/random.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

using namespace sqss;

namespace {

double prob_of(const Distribution& dist, const OutcomeTuple& outcome) {
    const auto it = dist.find(outcome);
    return it == dist.end() ? 0.0 : it->second;
}

}  // namespace

TEST_CASE("resource state has weight 1/2 on 000, 011, 101, 110") {
    const StateVector3 psi = make_ghz_like();
    const std::set<int> support{0, 3, 5, 6};
    for (int i = 0; i < 8; ++i) {
        const double expected = support.count(i) ? 0.5 : 0.0;
        CHECK(std::abs(psi.amplitudes[i] - Complex(expected, 0.0)) < 1e-12);
    }
    CHECK(psi.is_normalized());
}

TEST_CASE("resource state equals Hadamards on every GHZ slot") {
    StateVector3 state = make_ghz();
    for (int slot = 1; slot <= 3; ++slot) state = apply_hadamard(state, slot);
    CHECK(state.approx_equal(make_ghz_like()));
}

TEST_CASE("hadamard is an involution") {
    StateVector3 state = make_ghz_like();
    const StateVector3 twice = apply_hadamard(apply_hadamard(state, 2), 2);
    CHECK(twice.approx_equal(state));
    CHECK_THROWS_AS(apply_hadamard(state, 0), std::invalid_argument);
    CHECK_THROWS_AS(apply_hadamard(state, 4), std::invalid_argument);
}

TEST_CASE("joint basis is orthonormal and starts with the resource state") {
    const auto& basis = joint_basis();
    CHECK(basis[0].approx_equal(make_ghz_like()));
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            Complex inner{0.0, 0.0};
            for (int k = 0; k < 8; ++k) {
                inner += std::conj(basis[i].amplitudes[k]) * basis[j].amplitudes[k];
            }
            const double expected = i == j ? 1.0 : 0.0;
            CHECK(std::abs(inner - Complex(expected, 0.0)) < 1e-9);
        }
    }
}

TEST_CASE("computational measurements obey the parity rule on every triplet") {
    RandomSource rng(314);
    std::set<OutcomeTuple> seen;
    for (int i = 0; i < 4000; ++i) {
        TripletRegister reg(i);
        const int a = measure_z(reg, 1, rng);
        const int b = measure_z(reg, 2, rng);
        const int c = measure_z(reg, 3, rng);
        CHECK(a == (b ^ c));
        seen.insert({a, b, c});
    }
    const std::set<OutcomeTuple> even{{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
    CHECK(seen == even);
}

TEST_CASE("measurement bookkeeping tracks slot status") {
    RandomSource rng(1);
    TripletRegister reg(7);
    CHECK(reg.id == 7);
    CHECK_FALSE(reg.collapsed(1));
    CHECK_FALSE(reg.recorded_outcome(1).has_value());

    const int bit = measure_z(reg, 2, rng);
    CHECK(reg.status(2) == SlotStatus::ZMeasured);
    CHECK(reg.collapsed(2));
    CHECK(reg.recorded_outcome(2) == bit);
    CHECK_FALSE(reg.collapsed(1));
    CHECK(reg.state.is_normalized());

    CHECK_THROWS_AS(measure_z(reg, 2, rng), std::logic_error);

    const BellOutcome outcome = measure_bell(reg, 1, 3, rng);
    CHECK(reg.status(1) == SlotStatus::BellMeasured);
    CHECK(reg.status(3) == SlotStatus::BellMeasured);
    CHECK_FALSE(reg.recorded_outcome(1).has_value());
    CHECK((outcome == BellOutcome::PhiPlus || outcome == BellOutcome::PsiPlus));

    CHECK_THROWS_AS(measure_bell(reg, 1, 3, rng), std::logic_error);
    CHECK_THROWS_AS(measure_joint(reg, rng), std::logic_error);
}

TEST_CASE("bell measurements reject bad slots") {
    RandomSource rng(2);
    TripletRegister reg;
    CHECK_THROWS_AS(measure_bell(reg, 2, 2, rng), std::invalid_argument);
    CHECK_THROWS_AS(measure_bell(reg, 0, 1, rng), std::invalid_argument);
}

TEST_CASE("agent bit fixes the dealer-pair Bell outcome") {
    RandomSource rng(55);
    // Charlie measured: slots 1 and 3 end in PhiPlus for bit 0, PsiPlus for 1.
    for (int i = 0; i < 500; ++i) {
        TripletRegister reg;
        const int bit = measure_z(reg, 2, rng);
        const BellOutcome bell = measure_bell(reg, 1, 3, rng);
        CHECK(bell == (bit == 0 ? BellOutcome::PhiPlus : BellOutcome::PsiPlus));
    }
    // Bob measured: same correlation on slots 1 and 2.
    for (int i = 0; i < 500; ++i) {
        TripletRegister reg;
        const int bit = measure_z(reg, 3, rng);
        const BellOutcome bell = measure_bell(reg, 1, 2, rng);
        CHECK(bell == (bit == 0 ? BellOutcome::PhiPlus : BellOutcome::PsiPlus));
    }
}

TEST_CASE("joint measurement of an undisturbed triplet always lands on index 0") {
    RandomSource rng(77);
    for (int i = 0; i < 200; ++i) {
        TripletRegister reg;
        CHECK(measure_joint(reg, rng) == 0);
        CHECK(reg.status(1) == SlotStatus::JointMeasured);
    }
}

TEST_CASE("oracle: triple computational measurement gives the quarter table") {
    const Distribution dist = outcome_distribution(
        make_ghz_like(), {ZStep{1}, ZStep{2}, ZStep{3}});
    REQUIRE(dist.size() == 4);
    for (const OutcomeTuple& outcome :
         {OutcomeTuple{0, 0, 0}, OutcomeTuple{0, 1, 1}, OutcomeTuple{1, 0, 1},
          OutcomeTuple{1, 1, 0}}) {
        CHECK(prob_of(dist, outcome) == doctest::Approx(0.25).epsilon(1e-9));
    }
}

TEST_CASE("oracle: conditional dealer-pair Bell outcomes after one agent measures") {
    const Distribution bob_checks = outcome_distribution(
        make_ghz_like(), {ZStep{2}, BellStep{1, 3}});
    REQUIRE(bob_checks.size() == 2);
    CHECK(prob_of(bob_checks, {0, 0}) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(prob_of(bob_checks, {1, 2}) == doctest::Approx(0.5).epsilon(1e-9));

    const Distribution charlie_checks = outcome_distribution(
        make_ghz_like(), {ZStep{3}, BellStep{1, 2}});
    REQUIRE(charlie_checks.size() == 2);
    CHECK(prob_of(charlie_checks, {0, 0}) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(prob_of(charlie_checks, {1, 2}) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("oracle: agent-pair Bell marginal splits evenly") {
    const Distribution dist = outcome_distribution(make_ghz_like(), {BellStep{2, 3}});
    REQUIRE(dist.size() == 2);
    CHECK(prob_of(dist, {0}) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(prob_of(dist, {2}) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("oracle: joint measurement is deterministic on the resource state") {
    const Distribution dist = outcome_distribution(make_ghz_like(), {JointStep{}});
    REQUIRE(dist.size() == 1);
    CHECK(prob_of(dist, {0}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oracle rejects slot reuse and unnormalized states") {
    CHECK_THROWS_AS(
        outcome_distribution(make_ghz_like(), {ZStep{1}, BellStep{1, 2}}),
        std::invalid_argument);
    StateVector3 bad;
    bad.amplitudes[0] = Complex(2.0, 0.0);
    CHECK_THROWS_AS(outcome_distribution(bad, {ZStep{1}}), std::invalid_argument);
}

TEST_CASE("outcome labels name Bell results") {
    const std::vector<MeasureStep> plan{ZStep{2}, BellStep{1, 3}};
    CHECK(outcome_label(plan, {1, 2}) == "1,PsiPlus");
    CHECK(outcome_label(plan, {0, 0}) == "0,PhiPlus");
    CHECK(outcome_label({JointStep{}}, {0}) == "0");
}
