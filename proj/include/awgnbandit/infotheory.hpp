#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace awgnbandit {

struct BoundTerm {
    std::string name;
    double value;
};

/// One evaluated regret bound, with its additive term breakdown. `value` is
/// always the sum of the terms.
struct BoundReport {
    std::string algorithm;
    int num_arms;
    std::int64_t horizon;
    double second_moment_bound;
    double snr;
    double value;
    std::vector<BoundTerm> terms;
    std::string warning; // empty when none
};

/// Generic UCB regret bound for subgaussian feedback with variance factor
/// alpha^2 and second moment at most B:
///   8 * sqrt(alpha^2 * K * T * ln T) + 6 * K * B.
double ucb_lemma_bound(double alpha_sq, int num_arms, std::int64_t horizon, double b);

/// UCB0 over the channel: the lemma bound with alpha^2 = B^2/SNR + 1.
BoundReport ucb0_bound(int num_arms, std::int64_t horizon, double b, double snr);

/// UE-UCB: 2KB^3/SNR + 8KB + 8*sqrt((2/SNR + 1) * K * T * ln T).
BoundReport ue_ucb_bound(int num_arms, std::int64_t horizon, double b, double snr);

/// UE-UCB++: 8KB log2(B)/(SNR ^ 1) + 6KB + 8*sqrt((4/SNR + 1) * K * T * ln T).
/// For B < 2 the exploration term is reported as 0 with a warning, since the
/// sub-phase count 2*log2(B) degenerates.
BoundReport ue_ucb_pp_bound(int num_arms, std::int64_t horizon, double b, double snr);

/// Minimax lower bound c1 * (sqrt(KT / (SNR ^ 1)) + K*B). The universal
/// constant c1 is configuration, not a claim about its true value.
double minimax_lower_bound(int num_arms, std::int64_t horizon, double b, double snr,
                           double c1 = 0.05);

/// The lower bound's validity condition T >= c2*K / (0.5*log2(1+SNR) ^ 1).
bool minimax_horizon_ok(int num_arms, std::int64_t horizon, double snr, double c2 = 1.0);

/// The squared-bound recursion behind the UE-UCB++ sub-phases:
///   B^2_1 = B^2,   B^2_{l+1} = ((B^2_l / SNR + 1) / tau) + 1,
/// with tau = max(ceil(2/SNR), 2) and L = ceil(2*log2(B)) steps. Returns the
/// L+1 values and certifies that the last one is <= 4; a larger final value
/// indicates an implementation bug and throws.
std::vector<double> b_recursion(double b, double snr);

/// The exploration block length max(ceil(2/SNR), 2) used by the recursion.
std::int64_t recursion_block_length(double snr);

/// Sub-phase count ceil(2*log2(B)); 0 for B = 1.
int recursion_sub_phases(double b);

/// Probability vector over a finite alphabet: entries >= 0, sum within
/// 1e-12 of 1.
class DiscreteDistribution {
public:
    explicit DiscreteDistribution(std::vector<double> probabilities);

    int size() const noexcept { return static_cast<int>(p_.size()); }
    double operator[](int i) const { return p_.at(static_cast<std::size_t>(i)); }
    const std::vector<double>& probabilities() const noexcept { return p_; }

private:
    std::vector<double> p_;
};

/// KL divergence in nats; p(x) > 0 where q(x) = 0 gives +infinity.
double kl_divergence(const DiscreteDistribution& p, const DiscreteDistribution& q);

/// Chi-square distance sum((p-q)^2 / q); a zero-q atom where p differs
/// gives +infinity.
double chi_square(const DiscreteDistribution& p, const DiscreteDistribution& q);

/// Total variation distance, in [0, 1].
double total_variation(const DiscreteDistribution& p, const DiscreteDistribution& q);

/// AWGN channel capacity 0.5 * log2(1 + SNR), in bits.
double awgn_capacity(double snr);

/// Mutual information I(V; Y) in bits for V uniform on {-a, +a} and
/// Y = V + Normal(0, sigma^2), computed by trapezoidal quadrature of the
/// two-component mixture entropy on a grid spanning +-(a + 8*sigma).
/// Deterministic given the node count; fewer than 100 nodes is rejected.
double binary_input_mi(double amplitude, double noise_variance, int nodes = 10000);

} // namespace awgnbandit
