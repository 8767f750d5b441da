#include "awgnbandit/policies.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "awgnbandit/infotheory.hpp"

namespace awgnbandit {

std::string algorithm_name(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::Ucb0:
        return "ucb0";
    case Algorithm::UeUcb:
        return "ue-ucb";
    case Algorithm::UeUcbPp:
        return "ue-ucb++";
    }
    return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "ucb0") {
        return Algorithm::Ucb0;
    }
    if (name == "ue-ucb") {
        return Algorithm::UeUcb;
    }
    if (name == "ue-ucb++") {
        return Algorithm::UeUcbPp;
    }
    throw std::invalid_argument("unknown algorithm '" + name +
                                "' (expected ucb0, ue-ucb, or ue-ucb++)");
}

UcbState::UcbState(int num_arms, double eta, std::int64_t horizon)
    : counts_(static_cast<std::size_t>(num_arms), 0),
      sums_(static_cast<std::size_t>(num_arms), 0.0),
      eta_(eta),
      horizon_(horizon),
      log_horizon_(std::log(static_cast<double>(horizon))) {
    if (num_arms < 1) {
        throw std::invalid_argument("UcbState: needs at least one arm");
    }
    if (eta < 0.0) {
        throw std::invalid_argument("UcbState: eta must be >= 0");
    }
    if (horizon < 2) {
        throw std::invalid_argument("UcbState: horizon must be >= 2 so ln T > 0");
    }
}

void UcbState::add_sample(int arm, double reward) {
    counts_.at(static_cast<std::size_t>(arm)) += 1;
    sums_[static_cast<std::size_t>(arm)] += reward;
    ++total_;
}

double UcbState::mean_estimate(int arm) const {
    const auto i = static_cast<std::size_t>(arm);
    if (counts_.at(i) == 0) {
        throw std::logic_error("UcbState: mean of an unpulled arm");
    }
    return sums_[i] / static_cast<double>(counts_[i]);
}

double ucb_index(const UcbState& state, int arm) {
    if (state.pulls(arm) == 0) {
        return std::numeric_limits<double>::infinity();
    }
    const double radius = std::sqrt(4.0 * state.eta() * state.log_horizon() /
                                    static_cast<double>(state.pulls(arm)));
    return state.mean_estimate(arm) + radius;
}

int select_arm(const UcbState& state) {
    int best = 0;
    double best_index = ucb_index(state, 0);
    for (int arm = 1; arm < state.num_arms(); ++arm) {
        const double index = ucb_index(state, arm);
        if (index > best_index) {
            best = arm;
            best_index = index;
        }
    }
    return best;
}

Schedule::Schedule(Algorithm algorithm, int num_arms, std::int64_t horizon,
                   double second_moment_bound, const ChannelParams& channel)
    : algorithm_(algorithm),
      num_arms_(num_arms),
      horizon_(horizon),
      second_moment_bound_(second_moment_bound),
      channel_(channel),
      snr_(channel.clamped_snr()) {}

Schedule build_schedule(Algorithm algorithm, int num_arms, std::int64_t horizon,
                        double second_moment_bound, const ChannelParams& channel) {
    if (num_arms < 1) {
        throw std::invalid_argument("build_schedule: K must be >= 1");
    }
    if (horizon < 2) {
        throw std::invalid_argument("build_schedule: T must be >= 2");
    }
    if (!std::isfinite(second_moment_bound) || second_moment_bound < 1.0) {
        throw std::invalid_argument("build_schedule: B must be >= 1");
    }

    Schedule s(algorithm, num_arms, horizon, second_moment_bound, channel);
    const double b_sq = second_moment_bound * second_moment_bound;

    switch (algorithm) {
    case Algorithm::Ucb0:
        s.b_sq_ = {b_sq};
        break;
    case Algorithm::UeUcb:
        s.tau_ = static_cast<std::int64_t>(std::ceil(b_sq / s.snr_ + 1.0));
        s.sub_phases_ = 1;
        s.b_sq_ = {b_sq, 2.0};
        break;
    case Algorithm::UeUcbPp:
        s.tau_ = recursion_block_length(s.snr_);
        s.sub_phases_ = recursion_sub_phases(second_moment_bound);
        s.b_sq_.push_back(b_sq);
        for (int l = 0; l < s.sub_phases_; ++l) {
            s.b_sq_.push_back((s.b_sq_.back() / s.snr_ + 1.0) / static_cast<double>(s.tau_) +
                              1.0);
        }
        break;
    }

    if (s.exploration_rounds() >= horizon) {
        throw std::invalid_argument(
            "build_schedule: horizon " + std::to_string(horizon) + " too small for " +
            algorithm_name(algorithm) + " exploration; minimum feasible T is " +
            std::to_string(s.exploration_rounds() + 1));
    }

    s.theta_.reserve(s.b_sq_.size());
    for (double v : s.b_sq_) {
        s.theta_.push_back(std::sqrt(channel.power_budget / v));
    }
    s.ucb_eta_ = s.b_sq_.back() / s.snr_ + 1.0;
    return s;
}

PolicyState::PolicyState(const Schedule& schedule)
    : mean_table(static_cast<std::size_t>(schedule.sub_phases()) + 1,
                 std::vector<double>(static_cast<std::size_t>(schedule.num_arms()), 0.0)),
      ucb(schedule.num_arms(), schedule.ucb_eta(), schedule.horizon()) {}

namespace {

struct ExplorationPos {
    int sub_phase_idx; // 0-based: sub-phase l-1
    int arm;
    std::int64_t block_offset; // 0 .. tau-1
};

ExplorationPos locate(const Schedule& schedule, std::int64_t t) {
    const std::int64_t e = t - 1;
    const std::int64_t block = e / schedule.tau();
    return {static_cast<int>(block / schedule.num_arms()),
            static_cast<int>(block % schedule.num_arms()), e % schedule.tau()};
}

} // namespace

StepPlan learner_step(const Schedule& schedule, const PolicyState& state, std::int64_t t) {
    if (t < 1 || t > schedule.horizon()) {
        throw std::invalid_argument("learner_step: round out of range");
    }
    if (schedule.algorithm() != Algorithm::Ucb0 && t <= schedule.exploration_rounds()) {
        const ExplorationPos pos = locate(schedule, t);
        const double side =
            state.mean_table[static_cast<std::size_t>(pos.sub_phase_idx)]
                            [static_cast<std::size_t>(pos.arm)];
        return {pos.arm, CasParams(schedule.theta()[static_cast<std::size_t>(pos.sub_phase_idx)],
                                   side)};
    }
    const int arm = select_arm(state.ucb);
    const double side =
        schedule.algorithm() == Algorithm::Ucb0
            ? 0.0
            : state.mean_table[static_cast<std::size_t>(schedule.sub_phases())]
                              [static_cast<std::size_t>(arm)];
    return {arm, CasParams(schedule.theta().back(), side)};
}

void learner_update(const Schedule& schedule, PolicyState& state, std::int64_t t, int arm,
                    double decoded) {
    if (t != state.next_round) {
        throw std::logic_error("learner_update: rounds must be fed in order");
    }
    const StepPlan plan = learner_step(schedule, state, t);
    if (arm != plan.arm) {
        throw std::logic_error("learner_update: arm does not match the emitted plan");
    }

    if (schedule.algorithm() != Algorithm::Ucb0 && t <= schedule.exploration_rounds()) {
        const ExplorationPos pos = locate(schedule, t);
        state.block_accum += decoded;
        if (pos.block_offset == schedule.tau() - 1) {
            state.mean_table[static_cast<std::size_t>(pos.sub_phase_idx) + 1]
                            [static_cast<std::size_t>(pos.arm)] =
                state.block_accum / static_cast<double>(schedule.tau());
            state.block_accum = 0.0;
        }
    } else {
        state.ucb.add_sample(arm, decoded);
    }
    ++state.next_round;
}

} // namespace awgnbandit
