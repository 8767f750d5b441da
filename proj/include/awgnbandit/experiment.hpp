#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "awgnbandit/core.hpp"
#include "awgnbandit/harness.hpp"
#include "awgnbandit/link.hpp"
#include "awgnbandit/policies.hpp"

namespace awgnbandit {

/// One experiment description, parsed from a flat key = value document (see
/// docs/config-schema.txt). Every field is validated against the modules it
/// feeds before any simulation starts.
struct ExperimentConfig {
    // instance
    std::string instance = "gap"; // gap | gaussian | rademacher | hard
    int num_arms = 2;
    double delta = 0.2;          // gap only
    std::vector<double> means;   // gaussian / rademacher only
    double b = 1.0;              // second-moment bound; gap forces 1
    int good_arm = 0;            // hard only, 0-based

    // channel: either snr (sugar for P = 1, sigma^2 = 1/snr) or (P, sigma^2)
    bool has_snr = false;
    double snr_value = 1.0;
    double power = 1.0;
    double noise_variance = 1.0;

    // run
    std::string algorithm = "ucb0";
    std::int64_t horizon = 1000;
    std::int64_t replications = 10;
    std::uint64_t seed = 1;
    double audit_tolerance = 0.1;
    bool retain_full_transcript = false;
    int parallel = 1;
    std::string out_dir = "results";

    // sweep axes; empty means "not swept"
    std::vector<double> sweep_snr;
    std::vector<double> sweep_b;
    std::vector<std::int64_t> sweep_horizon;

    bool operator==(const ExperimentConfig&) const = default;

    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig parse_file(const std::string& path);

    /// Canonical flat-document form; parse(serialize()) reproduces *this.
    std::string serialize() const;

    /// Apply one key = value pair (used for CLI flag overrides).
    void set(const std::string& key, const std::string& value);

    ChannelParams build_channel() const;
    BanditInstance build_instance() const { return build_instance(b); }
    BanditInstance build_instance(double effective_b) const;

    /// Builds channel, instance, and schedule once, surfacing any
    /// precondition violation before a run starts.
    void validate() const;
};

/// Shortest round-trip decimal form of a double ("inf" for infinities);
/// used everywhere output must be byte-stable.
std::string format_double(double value);

/// CSV rows: algorithm,snr,b,k,t_horizon,replication,round,cumulative_regret.
/// Appends one row per replication per retained round.
void append_trace_csv(std::string& out, const std::string& algorithm, double snr, double b,
                      int num_arms, std::int64_t horizon, const McSummary& summary);

std::string trace_csv_header();

/// The summary document for one Monte Carlo run (config echo, effective
/// cell parameters, moments, quantiles, audit, and the four bound values).
std::string summary_json(const ExperimentConfig& config, const ChannelParams& channel,
                         double effective_b, std::int64_t effective_horizon,
                         const McSummary& summary);

struct RunOutcome {
    bool audit_pass;
    std::string csv_path;
    std::string summary_path;
};

/// Executes the configured Monte Carlo run and writes trace.csv plus
/// summary.json under config.out_dir.
RunOutcome run_experiment(const ExperimentConfig& config);

/// Cartesian product over the configured sweep axes, one Monte Carlo run per
/// cell, writing one combined trace.csv and a summary.json array. Throws if
/// no axis is set.
RunOutcome run_sweep(const ExperimentConfig& config);

} // namespace awgnbandit
