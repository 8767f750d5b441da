#include "awgnbandit/core.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

namespace awgnbandit {

RewardFamily RewardFamily::unit_gaussian(double mean) {
    if (!std::isfinite(mean)) {
        throw std::invalid_argument("unit_gaussian: mean must be finite");
    }
    return {RewardKind::UnitGaussian, mean};
}

RewardFamily RewardFamily::shifted_rademacher(double mean) {
    if (!std::isfinite(mean) || mean < -1.0 || mean > 1.0) {
        throw std::invalid_argument("shifted_rademacher: mean must lie in [-1, 1]");
    }
    return {RewardKind::ShiftedRademacher, mean};
}

RewardFamily RewardFamily::deterministic(double value) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument("deterministic: value must be finite");
    }
    return {RewardKind::Deterministic, value};
}

double RewardFamily::mean() const noexcept {
    return param_;
}

double RewardFamily::second_moment() const noexcept {
    switch (kind_) {
    case RewardKind::UnitGaussian:
        return param_ * param_ + 1.0;
    case RewardKind::ShiftedRademacher:
        return 1.0;
    case RewardKind::Deterministic:
        return param_ * param_;
    }
    return 0.0; // unreachable
}

double RewardFamily::sample(RandomSource& rng) const {
    switch (kind_) {
    case RewardKind::UnitGaussian:
        return param_ + rng.normal();
    case RewardKind::ShiftedRademacher:
        // P(+1) = (1 + mean) / 2 gives expectation `mean` exactly.
        return rng.uniform() < 0.5 * (1.0 + param_) ? 1.0 : -1.0;
    case RewardKind::Deterministic:
        return param_;
    }
    return 0.0; // unreachable
}

BanditInstance::BanditInstance(std::vector<RewardFamily> arms, double second_moment_bound)
    : arms_(std::move(arms)), second_moment_bound_(second_moment_bound), best_arm_(0) {
    if (arms_.empty()) {
        throw std::invalid_argument("BanditInstance: needs at least one arm");
    }
    if (!std::isfinite(second_moment_bound_) || second_moment_bound_ < 1.0) {
        throw std::invalid_argument("BanditInstance: second moment bound B must be >= 1");
    }
    const double b_sq = second_moment_bound_ * second_moment_bound_;
    for (std::size_t i = 0; i < arms_.size(); ++i) {
        if (arms_[i].second_moment() > b_sq) {
            throw std::invalid_argument("BanditInstance: arm " + std::to_string(i) +
                                        " has E[X^2] > B^2");
        }
        if (arms_[i].mean() > arms_[static_cast<std::size_t>(best_arm_)].mean()) {
            best_arm_ = static_cast<int>(i);
        }
    }
}

std::uint64_t BanditInstance::digest() const noexcept {
    // FNV-1a over the family tags, parameters, and bound.
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001B3ULL;
    };
    auto mix_double = [&](double d) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(d));
        std::memcpy(&bits, &d, sizeof(bits));
        mix(bits);
    };
    for (const auto& arm : arms_) {
        mix(static_cast<std::uint64_t>(arm.kind()));
        mix_double(arm.mean());
    }
    mix_double(second_moment_bound_);
    return h;
}

double sample_reward(const RewardFamily& family, RandomSource& rng) {
    return family.sample(rng);
}

BanditInstance gap_instance(int num_arms, double delta) {
    if (num_arms < 2) {
        throw std::invalid_argument("gap_instance: needs K >= 2");
    }
    if (!(delta > 0.0) || !(delta < 0.25)) {
        throw std::invalid_argument("gap_instance: delta must lie in (0, 1/4)");
    }
    std::vector<RewardFamily> arms;
    arms.reserve(static_cast<std::size_t>(num_arms));
    arms.push_back(RewardFamily::shifted_rademacher(delta));
    for (int i = 1; i < num_arms; ++i) {
        arms.push_back(RewardFamily::shifted_rademacher(0.0));
    }
    return {std::move(arms), 1.0};
}

BanditInstance deterministic_hard_instance(int num_arms, double b, int good_arm) {
    if (num_arms < 1) {
        throw std::invalid_argument("deterministic_hard_instance: needs K >= 1");
    }
    if (good_arm < 0 || good_arm >= num_arms) {
        throw std::invalid_argument("deterministic_hard_instance: good_arm out of range");
    }
    if (!std::isfinite(b) || b < 1.0) {
        throw std::invalid_argument("deterministic_hard_instance: B must be >= 1");
    }
    std::vector<RewardFamily> arms;
    arms.reserve(static_cast<std::size_t>(num_arms));
    for (int i = 0; i < num_arms; ++i) {
        arms.push_back(RewardFamily::deterministic(i == good_arm ? b : -b));
    }
    return {std::move(arms), b};
}

} // namespace awgnbandit
