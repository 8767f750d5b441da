#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "awgnbandit/core.hpp"
#include "awgnbandit/random.hpp"

using namespace awgnbandit;

TEST_SUITE("core") {

TEST_CASE("deterministic family returns its value exactly") {
    RandomSource rng(1, 0);
    const RewardFamily family = RewardFamily::deterministic(3.0);
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_reward(family, rng) == 3.0);
    }
    CHECK(family.mean() == 3.0);
    CHECK(family.second_moment() == 9.0);
}

TEST_CASE("rademacher samples are +-1 with the requested mean") {
    RandomSource rng(2, 0);
    const RewardFamily family = RewardFamily::shifted_rademacher(0.0);
    const int n = 1000000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sample_reward(family, rng);
        REQUIRE((x == 1.0 || x == -1.0));
        sum += x;
    }
    CHECK(std::abs(sum / n) <= 0.01);
}

TEST_CASE("gaussian family has unit variance") {
    RandomSource rng(3, 0);
    const RewardFamily family = RewardFamily::unit_gaussian(2.0);
    const int n = 1000000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sample_reward(family, rng);
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(std::abs(var - 1.0) <= 0.01);
}

TEST_CASE("empirical means match declared means within 5 standard errors") {
    const int n = 1000000;
    struct Case {
        RewardFamily family;
        double se; // standard error of the sample mean
    };
    const std::vector<Case> cases = {
        {RewardFamily::unit_gaussian(2.0), 1.0 / std::sqrt(double(n))},
        {RewardFamily::shifted_rademacher(0.3), std::sqrt(1.0 - 0.09) / std::sqrt(double(n))},
        {RewardFamily::deterministic(-1.5), 0.0},
    };
    std::uint64_t stream = 0;
    for (const auto& c : cases) {
        RandomSource rng(4, stream++);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            sum += sample_reward(c.family, rng);
        }
        CHECK(std::abs(sum / n - c.family.mean()) <= 5.0 * c.se + 1e-15);
    }
}

TEST_CASE("family validation") {
    CHECK_THROWS_AS(RewardFamily::shifted_rademacher(1.2), std::invalid_argument);
    CHECK_THROWS_AS(RewardFamily::shifted_rademacher(-1.0000001), std::invalid_argument);
    CHECK_THROWS_AS(RewardFamily::unit_gaussian(std::nan("")), std::invalid_argument);
    CHECK_NOTHROW(RewardFamily::shifted_rademacher(1.0));
}

TEST_CASE("gap_instance layout and constraints") {
    const BanditInstance inst = gap_instance(2, 0.1);
    CHECK(inst.num_arms() == 2);
    CHECK(inst.mean(0) == 0.1);
    CHECK(inst.mean(1) == 0.0);
    CHECK(inst.second_moment_bound() == 1.0);
    CHECK(gap_instance(5, 0.2).best_arm() == 0);

    CHECK_THROWS_AS(gap_instance(2, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(gap_instance(2, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(gap_instance(2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gap_instance(1, 0.1), std::invalid_argument);
}

TEST_CASE("deterministic_hard_instance layout") {
    const BanditInstance inst = deterministic_hard_instance(3, 2.0, 1);
    CHECK(inst.mean(0) == -2.0);
    CHECK(inst.mean(1) == 2.0);
    CHECK(inst.mean(2) == -2.0);
    CHECK(inst.best_arm() == 1);
    CHECK(inst.second_moment_bound() == 2.0);

    const BanditInstance single = deterministic_hard_instance(1, 1.0, 0);
    CHECK(single.num_arms() == 1);
    CHECK(single.mean(0) == 1.0);

    CHECK_THROWS_AS(deterministic_hard_instance(3, 2.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(deterministic_hard_instance(3, 2.0, -1), std::invalid_argument);
    CHECK_THROWS_AS(deterministic_hard_instance(3, 0.5, 0), std::invalid_argument);
}

TEST_CASE("second-moment bound is enforced analytically per family") {
    // Gaussian: mean^2 + 1 <= B^2
    CHECK_THROWS_AS(BanditInstance({RewardFamily::unit_gaussian(2.0)}, 2.0),
                    std::invalid_argument);
    CHECK_NOTHROW(BanditInstance({RewardFamily::unit_gaussian(2.0)}, 2.5));
    // Rademacher: 1 <= B^2 always holds for B >= 1
    CHECK_NOTHROW(BanditInstance({RewardFamily::shifted_rademacher(0.9)}, 1.0));
    // Deterministic: v^2 <= B^2
    CHECK_THROWS_AS(BanditInstance({RewardFamily::deterministic(3.0)}, 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(BanditInstance({RewardFamily::deterministic(1.0)}, 0.9),
                    std::invalid_argument);

    // Property: every constructible instance satisfies the bound arm-wise.
    RandomSource rng(5, 0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<RewardFamily> arms;
        double worst = 1.0;
        const int k = 1 + static_cast<int>(rng.next_u64() % 5);
        for (int i = 0; i < k; ++i) {
            const double mu = -2.0 + 4.0 * rng.uniform();
            switch (rng.next_u64() % 3) {
            case 0:
                arms.push_back(RewardFamily::unit_gaussian(mu));
                break;
            case 1:
                arms.push_back(RewardFamily::shifted_rademacher(mu / 2.0));
                break;
            default:
                arms.push_back(RewardFamily::deterministic(mu));
                break;
            }
            worst = std::max(worst, arms.back().second_moment());
        }
        const double b = std::sqrt(worst) + 0.01;
        const BanditInstance inst(arms, b);
        for (int i = 0; i < inst.num_arms(); ++i) {
            CHECK(inst.arm(i).second_moment() <= b * b);
        }
    }
}

TEST_CASE("best_arm breaks ties toward the lowest index") {
    const BanditInstance inst(
        {RewardFamily::deterministic(1.0), RewardFamily::deterministic(2.0),
         RewardFamily::deterministic(2.0)},
        2.0);
    CHECK(inst.best_arm() == 1);
    const BanditInstance all_equal(
        {RewardFamily::shifted_rademacher(0.0), RewardFamily::shifted_rademacher(0.0)}, 1.0);
    CHECK(all_equal.best_arm() == 0);
}

TEST_CASE("random source is reproducible and stream-separated") {
    RandomSource a(42, 7);
    RandomSource b(42, 7);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
    const RewardFamily family = RewardFamily::unit_gaussian(0.0);
    RandomSource c(42, 7);
    RandomSource d(42, 7);
    for (int i = 0; i < 1000; ++i) {
        CHECK(sample_reward(family, c) == sample_reward(family, d));
    }

    RandomSource e(42, 8);
    RandomSource f(42, 7);
    int diff = 0;
    for (int i = 0; i < 64; ++i) {
        diff += e.next_u64() != f.next_u64() ? 1 : 0;
    }
    CHECK(diff > 60);
}

TEST_CASE("instance digest separates different instances") {
    const auto a = gap_instance(2, 0.1);
    const auto b = gap_instance(2, 0.2);
    const auto c = gap_instance(2, 0.1);
    CHECK(a.digest() == c.digest());
    CHECK(a.digest() != b.digest());
}

} // TEST_SUITE
