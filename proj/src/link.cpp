#include "awgnbandit/link.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace awgnbandit {

ChannelParams::ChannelParams(double power_budget, double noise_variance)
    : power_budget(power_budget), noise_variance(noise_variance) {
    if (!std::isfinite(power_budget) || power_budget <= 0.0) {
        throw std::invalid_argument("ChannelParams: power budget must be > 0");
    }
    if (!std::isfinite(noise_variance) || noise_variance < 0.0) {
        throw std::invalid_argument("ChannelParams: noise variance must be >= 0");
    }
}

double ChannelParams::snr() const noexcept {
    if (noise_variance == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return power_budget / noise_variance;
}

double ChannelParams::clamped_snr(double cap) const noexcept {
    const double s = snr();
    return s < cap ? s : cap;
}

ChannelParams ChannelParams::from_snr(double snr) {
    if (!std::isfinite(snr) || snr <= 0.0) {
        throw std::invalid_argument("ChannelParams::from_snr: SNR must be > 0");
    }
    return {1.0, 1.0 / snr};
}

CasParams::CasParams(double theta, double side_info)
    : theta(theta), side_info(side_info) {
    if (!std::isfinite(theta) || theta <= 0.0) {
        throw std::invalid_argument("CasParams: theta must be positive and finite");
    }
    if (!std::isfinite(side_info)) {
        throw std::invalid_argument("CasParams: side info must be finite");
    }
}

PowerAudit::PowerAudit(double budget) : budget_(budget) {
    if (!std::isfinite(budget) || budget <= 0.0) {
        throw std::invalid_argument("PowerAudit: budget must be > 0");
    }
}

void PowerAudit::record(double encoded_value) noexcept {
    const double term = encoded_value * encoded_value - compensation_;
    const double next = sum_squares_ + term;
    compensation_ = (next - sum_squares_) - term;
    sum_squares_ = next;
    ++count_;
}

double PowerAudit::empirical_second_moment() const {
    if (count_ == 0) {
        throw std::logic_error("PowerAudit: no transmissions recorded");
    }
    return sum_squares_ / static_cast<double>(count_);
}

AuditReport PowerAudit::check(double tolerance) const {
    const double moment = empirical_second_moment();
    return {moment <= budget_ * (1.0 + tolerance), moment, count_, budget_, tolerance};
}

double cas_encode(double x, const CasParams& params) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("cas_encode: input must be finite");
    }
    return params.theta * (x - params.side_info);
}

double cas_encode(double x, const CasParams& params, PowerAudit& audit) {
    const double encoded = cas_encode(x, params);
    audit.record(encoded);
    return encoded;
}

double cas_decode(double y, const CasParams& params) {
    return y / params.theta + params.side_info;
}

double transmit(double encoded, const ChannelParams& channel, RandomSource& rng) {
    if (!std::isfinite(encoded)) {
        throw std::invalid_argument("transmit: input must be finite");
    }
    // sigma = 0 still consumes a draw, keeping streams aligned across noise
    // levels for a fixed seed.
    return encoded + std::sqrt(channel.noise_variance) * rng.normal();
}

} // namespace awgnbandit
