#pragma once

#include <cstdint>
#include <vector>

#include "awgnbandit/random.hpp"

namespace awgnbandit {

enum class RewardKind {
    UnitGaussian,      // mean + standard normal
    ShiftedRademacher, // {-1, +1} with the given expectation, |mean| <= 1
    Deterministic,     // every draw equals the stored value
};

/// One arm's reward distribution. All three families have centered tails
/// that are subgaussian with variance factor 1, which is what the UCB
/// confidence radii and the encoder power analysis assume. Other subgaussian
/// families would slot in here, but these three cover every shipped
/// experiment and hard-instance construction.
class RewardFamily {
public:
    static RewardFamily unit_gaussian(double mean);
    static RewardFamily shifted_rademacher(double mean);
    static RewardFamily deterministic(double value);

    RewardKind kind() const noexcept { return kind_; }
    double mean() const noexcept;

    /// Closed-form E[X^2] for the family.
    double second_moment() const noexcept;

    double sample(RandomSource& rng) const;

    bool operator==(const RewardFamily&) const = default;

private:
    RewardFamily(RewardKind kind, double param) : kind_(kind), param_(param) {}

    RewardKind kind_;
    double param_; // mean (Gaussian/Rademacher) or value (Deterministic)
};

/// A K-armed bandit instance together with its second-moment bound B.
/// Construction verifies E[X^2] <= B^2 analytically for every arm, so the
/// encoder scaling derived from B is sound for any sample path.
class BanditInstance {
public:
    BanditInstance(std::vector<RewardFamily> arms, double second_moment_bound);

    int num_arms() const noexcept { return static_cast<int>(arms_.size()); }
    const RewardFamily& arm(int index) const { return arms_.at(static_cast<std::size_t>(index)); }
    double mean(int index) const { return arm(index).mean(); }

    double second_moment_bound() const noexcept { return second_moment_bound_; }

    /// Arm with the largest mean; ties break toward the lowest index.
    int best_arm() const noexcept { return best_arm_; }
    double best_mean() const { return mean(best_arm_); }

    /// Stable hash of the arm list and bound, for trace metadata.
    std::uint64_t digest() const noexcept;

private:
    std::vector<RewardFamily> arms_;
    double second_moment_bound_;
    int best_arm_;
};

double sample_reward(const RewardFamily& family, RandomSource& rng);

/// K Rademacher arms: arm 0 has mean `delta`, the rest mean 0; B = 1.
/// Requires K >= 2 and delta in (0, 1/4).
BanditInstance gap_instance(int num_arms, double delta);

/// One arm pays B deterministically, every other arm pays -B; the bound is
/// exactly B. `good_arm` is a 0-based index.
BanditInstance deterministic_hard_instance(int num_arms, double b, int good_arm);

} // namespace awgnbandit
