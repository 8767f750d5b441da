#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "awgnbandit/link.hpp"

namespace awgnbandit {

enum class Algorithm { Ucb0, UeUcb, UeUcbPp };

std::string algorithm_name(Algorithm algorithm);
Algorithm algorithm_from_name(const std::string& name);

/// Running UCB statistics: exact per-arm sample means plus pull counts, with
/// the exploration parameter eta and the horizon baked in so indices can be
/// computed without extra context.
class UcbState {
public:
    UcbState(int num_arms, double eta, std::int64_t horizon);

    void add_sample(int arm, double reward);

    int num_arms() const noexcept { return static_cast<int>(counts_.size()); }
    std::int64_t pulls(int arm) const { return counts_.at(static_cast<std::size_t>(arm)); }
    double mean_estimate(int arm) const;
    std::int64_t total_pulls() const noexcept { return total_; }
    double eta() const noexcept { return eta_; }
    std::int64_t horizon() const noexcept { return horizon_; }
    double log_horizon() const noexcept { return log_horizon_; }

private:
    std::vector<std::int64_t> counts_;
    std::vector<double> sums_;
    std::int64_t total_ = 0;
    double eta_;
    std::int64_t horizon_;
    double log_horizon_;
};

/// mean + sqrt(4 * eta * ln T / N); +infinity for an unpulled arm.
double ucb_index(const UcbState& state, int arm);

/// Arm with the largest index; ties (including several +infinity entries)
/// break toward the lowest arm index.
int select_arm(const UcbState& state);

/// All round-invariant parameters of one algorithm run: exploration layout,
/// per-sub-phase second-moment bounds and encoder scalings, and the UCB
/// phase's exploration parameter.
///
/// The three algorithms share one shape. Sub-phase l (1-based) covers
/// K*tau rounds, arm by arm in blocks of tau; the UCB phase fills the rest.
///   UCB0:     no exploration;       b_sq = {B^2}
///   UE-UCB:   1 sub-phase;          b_sq = {B^2, 2},  tau = ceil(B^2/SNR + 1)
///   UE-UCB++: ceil(2*log2 B) phases; b_sq = recursion, tau = max(ceil(2/SNR), 2)
/// theta[i] = sqrt(P / b_sq[i]) throughout, and the UCB phase runs with
/// eta = b_sq.back() / SNR + 1.
class Schedule {
public:
    Algorithm algorithm() const noexcept { return algorithm_; }
    int num_arms() const noexcept { return num_arms_; }
    std::int64_t horizon() const noexcept { return horizon_; }
    double second_moment_bound() const noexcept { return second_moment_bound_; }
    const ChannelParams& channel() const noexcept { return channel_; }

    /// SNR after the noiseless-channel clamp; every derived formula uses this.
    double snr() const noexcept { return snr_; }

    std::int64_t tau() const noexcept { return tau_; }
    int sub_phases() const noexcept { return sub_phases_; }
    std::int64_t exploration_rounds() const noexcept {
        return static_cast<std::int64_t>(sub_phases_) * num_arms_ * tau_;
    }

    /// B^2_1 .. B^2_{L+1}: analytic bounds on E[(X - S)^2] per sub-phase,
    /// the last entry covering the UCB phase.
    const std::vector<double>& b_squared() const noexcept { return b_sq_; }

    /// Encoder scaling per sub-phase, last entry for the UCB phase.
    const std::vector<double>& theta() const noexcept { return theta_; }

    double ucb_eta() const noexcept { return ucb_eta_; }

private:
    friend Schedule build_schedule(Algorithm, int, std::int64_t, double, const ChannelParams&);
    Schedule(Algorithm algorithm, int num_arms, std::int64_t horizon, double second_moment_bound,
             const ChannelParams& channel);

    Algorithm algorithm_;
    int num_arms_;
    std::int64_t horizon_;
    double second_moment_bound_;
    ChannelParams channel_;
    double snr_;
    std::int64_t tau_ = 0;
    int sub_phases_ = 0;
    std::vector<double> b_sq_;
    std::vector<double> theta_;
    double ucb_eta_ = 0.0;
};

/// Derives every schedule parameter for the given algorithm and problem
/// size. Throws when the horizon cannot fit the exploration phase; the
/// message carries the minimum feasible T.
Schedule build_schedule(Algorithm algorithm, int num_arms, std::int64_t horizon,
                        double second_moment_bound, const ChannelParams& channel);

/// What the learner tells the client for one round: the arm to pull and the
/// CAS parameters (theta and side information) for encoding its reward.
struct StepPlan {
    int arm;
    CasParams cas;
};

/// Mutable per-episode learner state. Owned by exactly one episode; all
/// mutation goes through learner_update.
struct PolicyState {
    explicit PolicyState(const Schedule& schedule);

    /// mean_table[l][k] = estimate for arm k after sub-phase l; row 0 is the
    /// all-zero initial side information.
    std::vector<std::vector<double>> mean_table;
    UcbState ucb;
    double block_accum = 0.0;
    std::int64_t next_round = 1;
};

/// Round t's decision (t is 1-based). Pure in (schedule, state, t).
StepPlan learner_step(const Schedule& schedule, const PolicyState& state, std::int64_t t);

/// Feeds round t's decoded reward back into the state. Rejects out-of-order
/// rounds and arms that differ from what learner_step prescribed.
void learner_update(const Schedule& schedule, PolicyState& state, std::int64_t t, int arm,
                    double decoded);

} // namespace awgnbandit
