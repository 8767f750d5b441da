#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <doctest.h>

#include "awgnbandit/infotheory.hpp"
#include "awgnbandit/link.hpp"
#include "awgnbandit/policies.hpp"
#include "awgnbandit/random.hpp"

using namespace awgnbandit;

namespace {

// Feeds one sample per arm so the index equals the sample when eta = 0.
UcbState state_with_means(const std::vector<double>& means, double eta, std::int64_t horizon) {
    UcbState state(static_cast<int>(means.size()), eta, horizon);
    for (std::size_t i = 0; i < means.size(); ++i) {
        state.add_sample(static_cast<int>(i), means[i]);
    }
    return state;
}

} // namespace

TEST_SUITE("policies") {

TEST_CASE("algorithm names round-trip") {
    for (Algorithm a : {Algorithm::Ucb0, Algorithm::UeUcb, Algorithm::UeUcbPp}) {
        CHECK(algorithm_from_name(algorithm_name(a)) == a);
    }
    CHECK_THROWS_AS(algorithm_from_name("thompson"), std::invalid_argument);
}

TEST_CASE("ucb index formula") {
    UcbState state(2, 1.0, 3);
    CHECK(std::isinf(ucb_index(state, 0)));

    // mean + sqrt(4 * eta * ln T / N), independent recomputation
    for (int i = 0; i < 4; ++i) {
        state.add_sample(0, 0.5);
    }
    const double expected = 0.5 + std::sqrt(4.0 * 1.0 * std::log(3.0) / 4.0);
    CHECK(ucb_index(state, 0) == doctest::Approx(expected).epsilon(1e-14));

    // eta = 0 degenerates to the empirical mean
    UcbState flat(1, 0.0, 100);
    flat.add_sample(0, 0.0);
    CHECK(ucb_index(flat, 0) == 0.0);

    CHECK_THROWS_AS(UcbState(2, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(UcbState(0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(UcbState(2, -0.5, 10), std::invalid_argument);
}

TEST_CASE("ucb state tracks exact means and counts") {
    UcbState state(2, 1.0, 10);
    state.add_sample(1, 1.0);
    state.add_sample(1, 3.0);
    state.add_sample(0, -2.0);
    CHECK(state.pulls(0) == 1);
    CHECK(state.pulls(1) == 2);
    CHECK(state.total_pulls() == 3);
    CHECK(state.mean_estimate(1) == 2.0);
    CHECK(state.mean_estimate(0) == -2.0);
    CHECK_THROWS_AS(UcbState(2, 1.0, 10).mean_estimate(0), std::logic_error);
}

TEST_CASE("select_arm and tie-breaking") {
    // all arms unpulled: tie among +inf, lowest index
    CHECK(select_arm(UcbState(3, 1.0, 10)) == 0);
    // indices (1.2, 3.4, 3.4): tie toward the lower of the two maxima
    CHECK(select_arm(state_with_means({1.2, 3.4, 3.4}, 0.0, 10)) == 1);
    // unique argmax
    CHECK(select_arm(state_with_means({0.1, 0.9}, 0.0, 10)) == 1);
}

TEST_CASE("argmax is invariant to shifting all means") {
    RandomSource rng(20, 0);
    for (int trial = 0; trial < 500; ++trial) {
        const int k = 2 + static_cast<int>(rng.next_u64() % 6);
        UcbState base(k, 0.5 + rng.uniform(), 1000);
        UcbState shifted(k, base.eta(), 1000);
        const double shift = trial % 2 == 0 ? -3.0 : 4096.0;
        for (int arm = 0; arm < k; ++arm) {
            const int pulls = static_cast<int>(rng.next_u64() % 4);
            for (int i = 0; i < pulls; ++i) {
                const double r = -1.0 + 2.0 * rng.uniform();
                base.add_sample(arm, r);
                shifted.add_sample(arm, r + shift);
            }
        }
        CHECK(select_arm(base) == select_arm(shifted));
    }
}

TEST_CASE("ucb0 schedule parameters") {
    const Schedule s = build_schedule(Algorithm::Ucb0, 2, 100, 1.0, ChannelParams(1.0, 1.0));
    CHECK(s.theta().size() == 1);
    CHECK(s.theta()[0] == 1.0);
    CHECK(s.ucb_eta() == 2.0);
    CHECK(s.sub_phases() == 0);
    CHECK(s.exploration_rounds() == 0);
}

TEST_CASE("ue-ucb schedule parameters") {
    const Schedule s =
        build_schedule(Algorithm::UeUcb, 2, 1000, 4.0, ChannelParams(1.0, 1.0));
    CHECK(s.tau() == 17); // ceil(B^2/SNR + 1)
    CHECK(s.sub_phases() == 1);
    CHECK(s.exploration_rounds() == 34);
    CHECK(s.b_squared() == std::vector<double>{16.0, 2.0});
    CHECK(s.theta()[0] == doctest::Approx(0.25).epsilon(1e-14));          // sqrt(P)/B
    CHECK(s.theta()[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14)); // sqrt(P/2)
    CHECK(s.ucb_eta() == 3.0);                                             // 2/SNR + 1
}

TEST_CASE("ue-ucb++ schedule parameters and recursion") {
    const Schedule s =
        build_schedule(Algorithm::UeUcbPp, 5, 1000, 4.0, ChannelParams(1.0, 1.0));
    CHECK(s.sub_phases() == 4); // ceil(2*log2(4))
    CHECK(s.tau() == 2);        // max(ceil(2/SNR), 2)
    CHECK(s.exploration_rounds() == 40);

    // Frozen sequence, cross-checked against a direct iteration oracle.
    const std::vector<double> frozen = {16.0, 9.5, 6.25, 4.625, 3.8125};
    CHECK(s.b_squared() == frozen);
    std::vector<double> oracle = {16.0};
    for (int l = 0; l < 4; ++l) {
        oracle.push_back((oracle.back() / 1.0 + 1.0) / 2.0 + 1.0);
    }
    CHECK(s.b_squared() == oracle);

    for (std::size_t i = 0; i < s.theta().size(); ++i) {
        CHECK(s.theta()[i] ==
              doctest::Approx(std::sqrt(1.0 / s.b_squared()[i])).epsilon(1e-14));
    }
    CHECK(s.ucb_eta() == doctest::Approx(3.8125 / 1.0 + 1.0).epsilon(1e-14));
}

TEST_CASE("schedule agrees with the standalone recursion over a grid") {
    for (double b : {2.0, 4.0, 8.0, 64.0, 1024.0}) {
        for (double snr : {0.01, 0.1, 1.0, 10.0, 100.0}) {
            const Schedule s = build_schedule(Algorithm::UeUcbPp, 2, 10000000, b,
                                              ChannelParams::from_snr(snr));
            const auto oracle = b_recursion(b, snr);
            REQUIRE(s.b_squared().size() == oracle.size());
            for (std::size_t i = 0; i < oracle.size(); ++i) {
                CHECK(s.b_squared()[i] == oracle[i]);
            }
            CHECK(s.b_squared().back() <= 4.0);
        }
    }
}

TEST_CASE("horizon too small for exploration is rejected with the minimum") {
    // UE-UCB, K=2, tau=17: needs T > 34
    CHECK_THROWS_WITH_AS(
        build_schedule(Algorithm::UeUcb, 2, 34, 4.0, ChannelParams(1.0, 1.0)),
        doctest::Contains("35"), std::invalid_argument);
    // UE-UCB++, K=5: needs T > 40
    CHECK_THROWS_WITH_AS(
        build_schedule(Algorithm::UeUcbPp, 5, 40, 4.0, ChannelParams(1.0, 1.0)),
        doctest::Contains("41"), std::invalid_argument);
    CHECK_THROWS_AS(build_schedule(Algorithm::Ucb0, 2, 1, 1.0, ChannelParams(1.0, 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_schedule(Algorithm::Ucb0, 0, 100, 1.0, ChannelParams(1.0, 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_schedule(Algorithm::Ucb0, 2, 100, 0.5, ChannelParams(1.0, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("noiseless channel clamps the schedule snr") {
    const Schedule s = build_schedule(Algorithm::UeUcbPp, 3, 100, 2.0, ChannelParams(1.0, 0.0));
    CHECK(s.snr() == ChannelParams::kSnrCap);
    CHECK(s.tau() == 2);
    CHECK(s.sub_phases() == 2);
    CHECK(s.ucb_eta() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("learner_step: ucb0 sends zero side information with fixed theta") {
    const Schedule s = build_schedule(Algorithm::Ucb0, 2, 100, 4.0, ChannelParams(1.0, 1.0));
    PolicyState state(s);
    for (std::int64_t t = 1; t <= 5; ++t) {
        const StepPlan plan = learner_step(s, state, t);
        CHECK(plan.cas.side_info == 0.0);
        CHECK(plan.cas.theta == s.theta()[0]);
        learner_update(s, state, t, plan.arm, 0.25);
    }
}

TEST_CASE("learner_step: exploration is round-robin in tau blocks with stored side info") {
    const Schedule s =
        build_schedule(Algorithm::UeUcbPp, 3, 1000, 4.0, ChannelParams(1.0, 1.0));
    PolicyState state(s);
    // Sub-phase 1: arms 0,0,1,1,2,2 with side info 0 and theta_1.
    std::vector<double> decoded = {1.0, 3.0, -1.0, 5.0, 0.5, 1.5};
    for (std::int64_t t = 1; t <= 6; ++t) {
        const StepPlan plan = learner_step(s, state, t);
        CHECK(plan.arm == static_cast<int>((t - 1) / 2));
        CHECK(plan.cas.side_info == 0.0);
        CHECK(plan.cas.theta == s.theta()[0]);
        learner_update(s, state, t, plan.arm, decoded[static_cast<std::size_t>(t - 1)]);
    }
    // Mean estimates after sub-phase 1 are the block means.
    CHECK(state.mean_table[1][0] == 2.0);
    CHECK(state.mean_table[1][1] == 2.0);
    CHECK(state.mean_table[1][2] == 1.0);

    // Sub-phase 2 sends those estimates as side info, with theta_2.
    const StepPlan plan7 = learner_step(s, state, 7);
    CHECK(plan7.arm == 0);
    CHECK(plan7.cas.side_info == 2.0);
    CHECK(plan7.cas.theta == s.theta()[1]);
}

TEST_CASE("learner_update rejects out-of-order rounds and wrong arms") {
    const Schedule s = build_schedule(Algorithm::UeUcbPp, 2, 100, 2.0, ChannelParams(1.0, 1.0));
    PolicyState state(s);
    const StepPlan plan = learner_step(s, state, 1);
    CHECK_THROWS_AS(learner_update(s, state, 2, plan.arm, 0.0), std::logic_error);
    CHECK_THROWS_AS(learner_update(s, state, 1, plan.arm + 1, 0.0), std::logic_error);
    learner_update(s, state, 1, plan.arm, 0.0);
    CHECK(state.next_round == 2);
    CHECK_THROWS_AS(learner_step(s, state, 0), std::invalid_argument);
    CHECK_THROWS_AS(learner_step(s, state, 101), std::invalid_argument);
}

TEST_CASE("ucb phase statistics update only in the ucb phase") {
    const Schedule s = build_schedule(Algorithm::UeUcb, 2, 100, 1.0, ChannelParams(1.0, 1.0));
    PolicyState state(s);
    for (std::int64_t t = 1; t <= s.exploration_rounds(); ++t) {
        const StepPlan plan = learner_step(s, state, t);
        learner_update(s, state, t, plan.arm, 1.0);
    }
    CHECK(state.ucb.total_pulls() == 0); // exploration feeds the mean table only
    const StepPlan plan = learner_step(s, state, s.exploration_rounds() + 1);
    learner_update(s, state, s.exploration_rounds() + 1, plan.arm, 0.5);
    CHECK(state.ucb.total_pulls() == 1);
    CHECK(state.ucb.pulls(plan.arm) == 1);
}

} // TEST_SUITE
