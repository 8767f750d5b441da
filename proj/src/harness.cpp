#include "awgnbandit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "awgnbandit/infotheory.hpp"

namespace awgnbandit {

namespace {

std::int64_t default_stride(std::int64_t horizon) {
    return (horizon + 999) / 1000;
}

// Type-7 quantile (linear interpolation between order statistics).
double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) {
        return 0.0;
    }
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = static_cast<std::size_t>(std::ceil(h));
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

} // namespace

EpisodeResult run_episode(const BanditInstance& instance, const Schedule& schedule,
                          const ChannelParams& channel, std::int64_t horizon,
                          std::uint64_t seed, std::uint64_t stream,
                          const EpisodeOptions& options) {
    if (schedule.num_arms() != instance.num_arms()) {
        throw std::invalid_argument("run_episode: schedule and instance disagree on K");
    }
    if (schedule.horizon() != horizon) {
        throw std::invalid_argument("run_episode: schedule built for a different horizon");
    }
    if (schedule.channel().power_budget != channel.power_budget ||
        schedule.channel().noise_variance != channel.noise_variance) {
        throw std::invalid_argument("run_episode: schedule built for a different channel");
    }
    const std::int64_t stride =
        options.trace_stride > 0 ? options.trace_stride : default_stride(horizon);

    RandomSource rng(seed, stream);
    PolicyState state(schedule);
    PowerAudit audit(channel.power_budget);

    EpisodeResult result;
    result.regret.seed = seed;
    result.regret.stream = stream;
    result.regret.algorithm = schedule.algorithm();
    result.regret.instance_digest = instance.digest();
    if (options.retain_full_transcript) {
        result.transcript.reserve(static_cast<std::size_t>(horizon));
    }

    const double best_mean = instance.best_mean();
    double cumulative = 0.0;
    for (std::int64_t t = 1; t <= horizon; ++t) {
        const StepPlan plan = learner_step(schedule, state, t);
        const double reward = sample_reward(instance.arm(plan.arm), rng);
        const double encoded = cas_encode(reward, plan.cas, audit);
        const double output = transmit(encoded, channel, rng);
        const double decoded = cas_decode(output, plan.cas);
        learner_update(schedule, state, t, plan.arm, decoded);

        cumulative += best_mean - instance.mean(plan.arm);
        if (options.retain_full_transcript) {
            result.transcript.push_back(
                {t, plan.arm, reward, plan.cas.side_info, encoded, output, decoded});
        }
        if (t % stride == 0 || t == horizon) {
            result.regret.rounds.push_back(t);
            result.regret.cumulative.push_back(cumulative);
        }
    }
    result.regret.final_regret = cumulative;
    result.audit = audit.check(options.audit_tolerance);
    return result;
}

McSummary run_monte_carlo(const BanditInstance& instance, Algorithm algorithm,
                          const ChannelParams& channel, std::int64_t horizon,
                          std::int64_t replications, std::uint64_t base_seed,
                          const McOptions& options) {
    if (replications < 1) {
        throw std::invalid_argument("run_monte_carlo: needs at least one replication");
    }
    const Schedule schedule =
        build_schedule(algorithm, instance.num_arms(), horizon, instance.second_moment_bound(),
                       channel);

    EpisodeOptions episode_options = options.episode;
    episode_options.retain_full_transcript = false; // per-round records stay episode-local

    std::vector<RegretTrace> traces(static_cast<std::size_t>(replications));
    std::vector<AuditReport> audits(static_cast<std::size_t>(replications));

    auto run_range = [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t r = begin; r < end; ++r) {
            EpisodeResult episode =
                run_episode(instance, schedule, channel, horizon, base_seed,
                            static_cast<std::uint64_t>(r + 1), episode_options);
            traces[static_cast<std::size_t>(r)] = std::move(episode.regret);
            audits[static_cast<std::size_t>(r)] = episode.audit;
        }
    };

    const int workers = std::max(1, std::min<int>(options.parallel,
                                                   static_cast<int>(replications)));
    if (workers == 1) {
        run_range(0, replications);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        const std::int64_t chunk = (replications + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::int64_t begin = static_cast<std::int64_t>(w) * chunk;
            const std::int64_t end = std::min(replications, begin + chunk);
            if (begin < end) {
                pool.emplace_back(run_range, begin, end);
            }
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    McSummary summary;
    summary.replications = replications;
    summary.rounds = traces.front().rounds;
    summary.power_budget = channel.power_budget;

    // Reduce in replication order with compensated sums, so the result does
    // not depend on how the episodes were scheduled across threads.
    const std::size_t points = summary.rounds.size();
    summary.mean_regret.assign(points, 0.0);
    std::vector<double> comp(points, 0.0);
    for (const auto& trace : traces) {
        for (std::size_t i = 0; i < points; ++i) {
            const double term = trace.cumulative[i] - comp[i];
            const double next = summary.mean_regret[i] + term;
            comp[i] = (next - summary.mean_regret[i]) - term;
            summary.mean_regret[i] = next;
        }
    }
    for (std::size_t i = 0; i < points; ++i) {
        summary.mean_regret[i] /= static_cast<double>(replications);
    }

    summary.stderr_regret.assign(points, 0.0);
    if (replications >= 2) {
        for (const auto& trace : traces) {
            for (std::size_t i = 0; i < points; ++i) {
                const double d = trace.cumulative[i] - summary.mean_regret[i];
                summary.stderr_regret[i] += d * d;
            }
        }
        for (std::size_t i = 0; i < points; ++i) {
            summary.stderr_regret[i] = std::sqrt(
                summary.stderr_regret[i] /
                static_cast<double>((replications - 1) * replications));
        }
    }

    summary.final_regrets.reserve(static_cast<std::size_t>(replications));
    for (const auto& trace : traces) {
        summary.final_regrets.push_back(trace.final_regret);
    }
    summary.mean_final_regret = summary.mean_regret.back();
    summary.stderr_final_regret = summary.stderr_regret.back();

    std::vector<double> sorted_finals = summary.final_regrets;
    std::sort(sorted_finals.begin(), sorted_finals.end());
    summary.final_regret_p5 = quantile(sorted_finals, 0.05);
    summary.final_regret_p50 = quantile(sorted_finals, 0.50);
    summary.final_regret_p95 = quantile(sorted_finals, 0.95);

    double pooled_sum = 0.0;
    double pooled_count = 0.0;
    for (const auto& audit : audits) {
        summary.max_empirical_moment = std::max(summary.max_empirical_moment,
                                                audit.empirical_moment);
        pooled_sum += audit.empirical_moment * static_cast<double>(audit.count);
        pooled_count += static_cast<double>(audit.count);
    }
    summary.pooled_empirical_moment = pooled_sum / pooled_count;
    summary.audit_pass = summary.pooled_empirical_moment <=
                         channel.power_budget * (1.0 + options.episode.audit_tolerance);
    summary.traces = std::move(traces);
    return summary;
}

namespace {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Probability mass of each bin under Normal(mean, var), for a grid of
// interior edges with unbounded first and last cells.
void accumulate_binned_normal(std::vector<double>& out, const std::vector<double>& edges,
                              double weight, double mean, double var) {
    const double sd = std::sqrt(var);
    double prev = 0.0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const double cdf = normal_cdf((edges[i] - mean) / sd);
        out[i] += weight * (cdf - prev);
        prev = cdf;
    }
    out.back() += weight * (1.0 - prev);
}

// Law of the binned channel output when `arm` is pulled once with the given
// encoder, as a probability vector over the bins.
std::vector<double> binned_round_law(const RewardFamily& arm, const CasParams& cas,
                                     double noise_variance, const std::vector<double>& edges) {
    std::vector<double> law(edges.size() + 1, 0.0);
    switch (arm.kind()) {
    case RewardKind::Deterministic:
        accumulate_binned_normal(law, edges, 1.0, cas.theta * (arm.mean() - cas.side_info),
                                 noise_variance);
        break;
    case RewardKind::ShiftedRademacher: {
        const double w_plus = 0.5 * (1.0 + arm.mean());
        accumulate_binned_normal(law, edges, w_plus, cas.theta * (1.0 - cas.side_info),
                                 noise_variance);
        accumulate_binned_normal(law, edges, 1.0 - w_plus, cas.theta * (-1.0 - cas.side_info),
                                 noise_variance);
        break;
    }
    case RewardKind::UnitGaussian:
        accumulate_binned_normal(law, edges, 1.0, cas.theta * (arm.mean() - cas.side_info),
                                 noise_variance + cas.theta * cas.theta);
        break;
    }
    return law;
}

struct ProbeCounts {
    std::map<std::uint64_t, std::int64_t> transcripts;
    double differing_pulls_sum = 0.0;
};

ProbeCounts sample_transcripts(const BanditInstance& instance, const ChannelParams& channel,
                               std::int64_t horizon, const CasParams& cas, int bins,
                               const std::vector<double>& edges, int differing_arm,
                               std::int64_t replications, std::uint64_t base_seed,
                               std::uint64_t stream_offset) {
    const double b = instance.second_moment_bound();
    const double eta = b * b / channel.clamped_snr() + 1.0;
    ProbeCounts counts;
    for (std::int64_t r = 0; r < replications; ++r) {
        RandomSource rng(base_seed, stream_offset + static_cast<std::uint64_t>(r));
        UcbState ucb(instance.num_arms(), eta, std::max<std::int64_t>(horizon, 2));
        std::uint64_t key = 0;
        std::int64_t differing_pulls = 0;
        for (std::int64_t t = 1; t <= horizon; ++t) {
            const int arm = select_arm(ucb);
            const double reward = sample_reward(instance.arm(arm), rng);
            const double output = transmit(cas_encode(reward, cas), channel, rng);
            ucb.add_sample(arm, cas_decode(output, cas));

            const double width = edges[1] - edges.front();
            const double raw_bin =
                std::clamp(std::floor((output - edges.front()) / width) + 1.0, 0.0,
                           static_cast<double>(bins - 1));
            const auto bin = static_cast<std::int64_t>(raw_bin);
            key = key * static_cast<std::uint64_t>(instance.num_arms() * bins) +
                  static_cast<std::uint64_t>(arm * bins + bin);
            differing_pulls += arm == differing_arm ? 1 : 0;
        }
        counts.transcripts[key] += 1;
        counts.differing_pulls_sum += static_cast<double>(differing_pulls);
    }
    return counts;
}

// Add-half smoothed plug-in KL over the union of observed transcripts.
double plugin_kl(const ProbeCounts& p, const ProbeCounts& q, std::int64_t replications) {
    std::vector<std::uint64_t> support;
    support.reserve(p.transcripts.size() + q.transcripts.size());
    for (const auto& entry : p.transcripts) {
        support.push_back(entry.first);
    }
    for (const auto& entry : q.transcripts) {
        if (p.transcripts.find(entry.first) == p.transcripts.end()) {
            support.push_back(entry.first);
        }
    }
    std::sort(support.begin(), support.end());

    const double denom =
        static_cast<double>(replications) + 0.5 * static_cast<double>(support.size());
    double kl = 0.0;
    for (std::uint64_t key : support) {
        auto count_of = [key](const ProbeCounts& c) {
            const auto it = c.transcripts.find(key);
            return it == c.transcripts.end() ? 0.0 : static_cast<double>(it->second);
        };
        const double ph = (count_of(p) + 0.5) / denom;
        const double qh = (count_of(q) + 0.5) / denom;
        kl += ph * std::log(ph / qh);
    }
    return kl;
}

} // namespace

DivergenceProbeResult transcript_divergence_probe(const BanditInstance& nu,
                                                  const BanditInstance& nu_prime,
                                                  const ChannelParams& channel,
                                                  std::int64_t horizon, const CasParams& cas,
                                                  std::int64_t replications,
                                                  std::uint64_t base_seed, int bins) {
    if (nu.num_arms() != 2 || nu_prime.num_arms() != 2) {
        throw std::invalid_argument("transcript_divergence_probe: requires K = 2");
    }
    if (horizon < 1 || horizon > 6) {
        throw std::invalid_argument("transcript_divergence_probe: requires 1 <= T <= 6");
    }
    if (!(channel.noise_variance > 0.0)) {
        throw std::invalid_argument("transcript_divergence_probe: requires sigma^2 > 0");
    }
    if (bins < 4 || bins > 128) {
        throw std::invalid_argument("transcript_divergence_probe: bins must lie in [4, 128]");
    }
    if (replications < 1) {
        throw std::invalid_argument("transcript_divergence_probe: needs replications >= 1");
    }

    int differing_arm = -1;
    for (int arm = 0; arm < nu.num_arms(); ++arm) {
        if (!(nu.arm(arm) == nu_prime.arm(arm))) {
            if (differing_arm >= 0) {
                throw std::invalid_argument(
                    "transcript_divergence_probe: instances must differ in exactly one arm");
            }
            differing_arm = arm;
        }
    }
    if (differing_arm < 0) {
        differing_arm = 0; // identical instances: the decomposition is 0 either way
    }

    // Interior bin edges over +-6 sigma; first and last cells catch the tails.
    const double sigma = std::sqrt(channel.noise_variance);
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(bins) - 1);
    for (int i = 1; i < bins; ++i) {
        edges.push_back(-6.0 * sigma + 12.0 * sigma * static_cast<double>(i) /
                                            static_cast<double>(bins));
    }

    const ProbeCounts p_counts = sample_transcripts(nu, channel, horizon, cas, bins, edges,
                                                    differing_arm, replications, base_seed, 1);
    const ProbeCounts q_counts =
        sample_transcripts(nu_prime, channel, horizon, cas, bins, edges, differing_arm,
                           replications, base_seed,
                           static_cast<std::uint64_t>(replications) + 1);

    const DiscreteDistribution p_round(
        binned_round_law(nu.arm(differing_arm), cas, channel.noise_variance, edges));
    const DiscreteDistribution q_round(
        binned_round_law(nu_prime.arm(differing_arm), cas, channel.noise_variance, edges));

    DivergenceProbeResult result;
    result.transcript_kl_nats = plugin_kl(p_counts, q_counts, replications);
    result.expected_differing_pulls =
        p_counts.differing_pulls_sum / static_cast<double>(replications);
    result.decomposition_rhs_nats =
        result.expected_differing_pulls * kl_divergence(p_round, q_round);
    result.differing_arm = differing_arm;
    result.replications = replications;
    result.enough_replications = replications >= 100000;
    result.bins = bins;
    return result;
}

} // namespace awgnbandit
