#pragma once

#include <cstdint>
#include <vector>

#include "awgnbandit/core.hpp"
#include "awgnbandit/link.hpp"
#include "awgnbandit/policies.hpp"

namespace awgnbandit {

/// Full log of one protocol round: what the learner asked for, what the
/// client saw and sent, and what came back through the channel.
struct RoundRecord {
    std::int64_t t; // 1-based round index
    int arm;
    double raw_reward;
    double side_info;
    double encoded;
    double channel_output;
    double decoded;
};

/// Cumulative pseudo-regret sum_{s<=t} (mu* - mu_{A_s}) sampled on a
/// retained round grid whose last entry is always the horizon.
struct RegretTrace {
    std::vector<std::int64_t> rounds;
    std::vector<double> cumulative;
    double final_regret = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    Algorithm algorithm = Algorithm::Ucb0;
    std::uint64_t instance_digest = 0;
};

struct EpisodeOptions {
    bool retain_full_transcript = false;
    std::int64_t trace_stride = 0; // 0 = ceil(T / 1000)
    double audit_tolerance = 0.1;
};

struct EpisodeResult {
    std::vector<RoundRecord> transcript; // empty unless retained
    RegretTrace regret;
    AuditReport audit;
};

/// Runs the four-step round protocol for T rounds:
///   learner_step -> sample_reward -> cas_encode -> transmit -> cas_decode
///   -> learner_update.
/// Fully deterministic given (seed, stream).
EpisodeResult run_episode(const BanditInstance& instance, const Schedule& schedule,
                          const ChannelParams& channel, std::int64_t horizon,
                          std::uint64_t seed, std::uint64_t stream = 0,
                          const EpisodeOptions& options = {});

struct McOptions {
    EpisodeOptions episode;
    int parallel = 1;
};

/// Monte Carlo aggregate over replications r = 1..R, each run on stream r of
/// the base seed, so extending R never perturbs earlier replications.
struct McSummary {
    std::int64_t replications = 0;
    std::vector<std::int64_t> rounds; // shared retained grid
    std::vector<double> mean_regret;
    std::vector<double> stderr_regret;
    std::vector<double> final_regrets; // by replication index
    double mean_final_regret = 0.0;
    double stderr_final_regret = 0.0;
    double final_regret_p5 = 0.0;
    double final_regret_p50 = 0.0;
    double final_regret_p95 = 0.0;
    /// Squared encoded values pooled over every round of every replication;
    /// the Monte Carlo estimate of the population second moment the power
    /// constraint bounds.
    double pooled_empirical_moment = 0.0;
    /// Worst single-episode moment. For schedules that center on a stored
    /// mean estimate this fluctuates episode to episode (the estimate's
    /// squared error is one chi-square-like draw shared by the whole
    /// episode), so it can sit well above the pooled value.
    double max_empirical_moment = 0.0;
    double power_budget = 0.0;
    /// Pooled moment within tolerance of the budget.
    bool audit_pass = true;
    std::vector<RegretTrace> traces; // per replication, retained grid
};

McSummary run_monte_carlo(const BanditInstance& instance, Algorithm algorithm,
                          const ChannelParams& channel, std::int64_t horizon,
                          std::int64_t replications, std::uint64_t base_seed,
                          const McOptions& options = {});

/// Plug-in estimate of the KL divergence between the binned transcript laws
/// of two instances, against the per-round decomposition
/// E[N_j(T)] * KL(binned round laws) evaluated in closed form. Tiny horizons
/// only: the transcript alphabet grows as (K * bins)^T.
struct DivergenceProbeResult {
    double transcript_kl_nats;
    double decomposition_rhs_nats;
    double expected_differing_pulls;
    int differing_arm;
    std::int64_t replications;
    bool enough_replications; // false below 1e5: plug-in bias warning
    int bins;
};

/// Both instances share the arm-selection rule (the UCB0 index with
/// eta = B^2/SNR + 1) and the fixed CAS encoder `cas`. Channel outputs are
/// binned into `bins` cells spanning +-6 sigma around 0, edge cells
/// unbounded. Requires K = 2, 1 <= T <= 6, sigma^2 > 0, and instances that
/// differ in exactly one arm.
DivergenceProbeResult transcript_divergence_probe(const BanditInstance& nu,
                                                  const BanditInstance& nu_prime,
                                                  const ChannelParams& channel,
                                                  std::int64_t horizon, const CasParams& cas,
                                                  std::int64_t replications,
                                                  std::uint64_t base_seed, int bins = 32);

} // namespace awgnbandit
