#pragma once

#include <cstdint>

#include "awgnbandit/random.hpp"

namespace awgnbandit {

/// AWGN channel description: a power budget P on the second moment of the
/// encoded input, plus the noise variance sigma^2.
struct ChannelParams {
    double power_budget;   // P > 0
    double noise_variance; // sigma^2 >= 0

    ChannelParams(double power_budget, double noise_variance);

    /// P / sigma^2. +infinity when the channel is noiseless.
    double snr() const noexcept;

    /// SNR with the noiseless case clamped to `cap`, so schedule formulas
    /// like tau = 2/SNR stay finite in the sigma^2 = 0 debug mode.
    double clamped_snr(double cap = kSnrCap) const noexcept;

    /// Sugar for configs that give SNR directly: P = 1, sigma^2 = 1/SNR.
    static ChannelParams from_snr(double snr);

    static constexpr double kSnrCap = 1e12;
};

/// Center-and-scale encoder parameters: transmit theta * (x - side_info),
/// invert with y / theta + side_info.
struct CasParams {
    double theta;
    double side_info;

    CasParams(double theta, double side_info);
};

struct AuditReport {
    bool pass;
    double empirical_moment;
    std::int64_t count;
    double budget;
    double tolerance;
};

/// Accumulates the squared encoded values of one episode so the power
/// constraint, which only binds in expectation, can be checked empirically
/// after the fact.
class PowerAudit {
public:
    explicit PowerAudit(double budget);

    void record(double encoded_value) noexcept;

    std::int64_t count() const noexcept { return count_; }
    double budget() const noexcept { return budget_; }

    /// sum of squares / count. Throws when nothing was recorded.
    double empirical_second_moment() const;

    /// Passes iff the empirical second moment is <= budget * (1 + tolerance).
    AuditReport check(double tolerance) const;

private:
    double sum_squares_ = 0.0;
    double compensation_ = 0.0; // Kahan carry for long episodes
    std::int64_t count_ = 0;
    double budget_;
};

double cas_encode(double x, const CasParams& params);
double cas_encode(double x, const CasParams& params, PowerAudit& audit);
double cas_decode(double y, const CasParams& params);

/// One channel use: encoded + Z with Z ~ Normal(0, sigma^2), drawn from rng.
double transmit(double encoded, const ChannelParams& channel, RandomSource& rng);

} // namespace awgnbandit
