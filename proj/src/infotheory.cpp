#include "awgnbandit/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace awgnbandit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_bound_args(int num_arms, std::int64_t horizon, double b, double snr) {
    if (num_arms < 1) {
        throw std::invalid_argument("bound: K must be >= 1");
    }
    if (horizon < 2) {
        throw std::invalid_argument("bound: T must be >= 2 so ln T > 0");
    }
    if (b < 1.0) {
        throw std::invalid_argument("bound: B must be >= 1");
    }
    if (!(snr > 0.0)) {
        throw std::invalid_argument("bound: SNR must be > 0");
    }
}

double sqrt_term(double alpha_sq, int num_arms, std::int64_t horizon) {
    const double t = static_cast<double>(horizon);
    return 8.0 * std::sqrt(alpha_sq * static_cast<double>(num_arms) * t * std::log(t));
}

BoundReport make_report(std::string algorithm, int num_arms, std::int64_t horizon, double b,
                        double snr, std::vector<BoundTerm> terms, std::string warning = {}) {
    double total = 0.0;
    for (const auto& term : terms) {
        total += term.value;
    }
    return {std::move(algorithm), num_arms, horizon, b, snr, total, std::move(terms),
            std::move(warning)};
}

} // namespace

double ucb_lemma_bound(double alpha_sq, int num_arms, std::int64_t horizon, double b) {
    if (alpha_sq < 0.0) {
        throw std::invalid_argument("ucb_lemma_bound: alpha^2 must be >= 0");
    }
    if (horizon < 2) {
        throw std::invalid_argument("ucb_lemma_bound: T must be >= 2");
    }
    return sqrt_term(alpha_sq, num_arms, horizon) + 6.0 * static_cast<double>(num_arms) * b;
}

BoundReport ucb0_bound(int num_arms, std::int64_t horizon, double b, double snr) {
    require_bound_args(num_arms, horizon, b, snr);
    const double k = static_cast<double>(num_arms);
    const double alpha_sq = b * b / snr + 1.0;
    return make_report("ucb0", num_arms, horizon, b, snr,
                       {{"ucb", sqrt_term(alpha_sq, num_arms, horizon)}, {"linear", 6.0 * k * b}});
}

BoundReport ue_ucb_bound(int num_arms, std::int64_t horizon, double b, double snr) {
    require_bound_args(num_arms, horizon, b, snr);
    const double k = static_cast<double>(num_arms);
    const double alpha_sq = 2.0 / snr + 1.0;
    return make_report("ue-ucb", num_arms, horizon, b, snr,
                       {{"exploration", 2.0 * k * b * b * b / snr},
                        {"linear", 8.0 * k * b},
                        {"ucb", sqrt_term(alpha_sq, num_arms, horizon)}});
}

BoundReport ue_ucb_pp_bound(int num_arms, std::int64_t horizon, double b, double snr) {
    require_bound_args(num_arms, horizon, b, snr);
    const double k = static_cast<double>(num_arms);
    const double alpha_sq = 4.0 / snr + 1.0;
    double exploration = 0.0;
    std::string warning;
    if (b >= 2.0) {
        exploration = 8.0 * k * b * std::log2(b) / std::min(snr, 1.0);
    } else {
        warning = "B < 2: the 2*log2(B) sub-phase count degenerates; exploration term "
                  "reported as 0";
    }
    return make_report("ue-ucb++", num_arms, horizon, b, snr,
                       {{"exploration", exploration},
                        {"linear", 6.0 * k * b},
                        {"ucb", sqrt_term(alpha_sq, num_arms, horizon)}},
                       std::move(warning));
}

double minimax_lower_bound(int num_arms, std::int64_t horizon, double b, double snr, double c1) {
    require_bound_args(num_arms, horizon, b, snr);
    const double k = static_cast<double>(num_arms);
    const double t = static_cast<double>(horizon);
    return c1 * (std::sqrt(k * t / std::min(snr, 1.0)) + k * b);
}

bool minimax_horizon_ok(int num_arms, std::int64_t horizon, double snr, double c2) {
    const double rate = std::min(0.5 * std::log2(1.0 + snr), 1.0);
    if (rate <= 0.0) {
        return false;
    }
    return static_cast<double>(horizon) >= c2 * static_cast<double>(num_arms) / rate;
}

std::int64_t recursion_block_length(double snr) {
    if (!(snr > 0.0)) {
        throw std::invalid_argument("recursion_block_length: SNR must be > 0");
    }
    const auto from_snr = static_cast<std::int64_t>(std::ceil(2.0 / snr));
    return std::max<std::int64_t>(from_snr, 2);
}

int recursion_sub_phases(double b) {
    if (b < 1.0) {
        throw std::invalid_argument("recursion_sub_phases: B must be >= 1");
    }
    return static_cast<int>(std::ceil(2.0 * std::log2(b)));
}

std::vector<double> b_recursion(double b, double snr) {
    if (b < 2.0) {
        throw std::invalid_argument("b_recursion: B must be >= 2");
    }
    if (!(snr > 0.0)) {
        throw std::invalid_argument("b_recursion: SNR must be > 0");
    }
    const std::int64_t tau = recursion_block_length(snr);
    const int sub_phases = recursion_sub_phases(b);
    std::vector<double> b_sq;
    b_sq.reserve(static_cast<std::size_t>(sub_phases) + 1);
    b_sq.push_back(b * b);
    for (int l = 0; l < sub_phases; ++l) {
        b_sq.push_back((b_sq.back() / snr + 1.0) / static_cast<double>(tau) + 1.0);
    }
    // The contraction argument guarantees the final value is below 4 for
    // every B >= 2, SNR > 0; anything else means the recursion is wrong.
    if (b_sq.back() > 4.0) {
        throw std::logic_error("b_recursion: final value exceeds 4");
    }
    return b_sq;
}

DiscreteDistribution::DiscreteDistribution(std::vector<double> probabilities)
    : p_(std::move(probabilities)) {
    if (p_.empty()) {
        throw std::invalid_argument("DiscreteDistribution: empty alphabet");
    }
    double sum = 0.0;
    for (double v : p_) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("DiscreteDistribution: entries must be >= 0");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("DiscreteDistribution: entries must sum to 1");
    }
}

namespace {

void require_same_alphabet(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("divergence: alphabet sizes differ");
    }
}

} // namespace

double kl_divergence(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    require_same_alphabet(p, q);
    double sum = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) {
            continue; // 0 * ln(0/q) = 0
        }
        if (q[i] == 0.0) {
            return kInf;
        }
        sum += p[i] * std::log(p[i] / q[i]);
    }
    return sum;
}

double chi_square(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    require_same_alphabet(p, q);
    double sum = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        const double diff = p[i] - q[i];
        if (diff == 0.0) {
            continue;
        }
        if (q[i] == 0.0) {
            return kInf;
        }
        sum += diff * diff / q[i];
    }
    return sum;
}

double total_variation(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    require_same_alphabet(p, q);
    double sum = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        sum += std::abs(p[i] - q[i]);
    }
    return 0.5 * sum;
}

double awgn_capacity(double snr) {
    if (!(snr >= 0.0)) {
        throw std::invalid_argument("awgn_capacity: SNR must be >= 0");
    }
    return 0.5 * std::log2(1.0 + snr);
}

double binary_input_mi(double amplitude, double noise_variance, int nodes) {
    if (amplitude < 0.0) {
        throw std::invalid_argument("binary_input_mi: amplitude must be >= 0");
    }
    if (!(noise_variance > 0.0)) {
        throw std::invalid_argument("binary_input_mi: noise variance must be > 0");
    }
    if (nodes < 100) {
        throw std::invalid_argument("binary_input_mi: need at least 100 quadrature nodes");
    }
    const double sigma = std::sqrt(noise_variance);
    const double half_width = amplitude + 8.0 * sigma;
    const double step = 2.0 * half_width / static_cast<double>(nodes - 1);
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * 3.14159265358979323846));

    auto mixture = [&](double y) {
        const double zp = (y - amplitude) / sigma;
        const double zm = (y + amplitude) / sigma;
        return 0.5 * norm * (std::exp(-0.5 * zp * zp) + std::exp(-0.5 * zm * zm));
    };

    // h(Y) = -integral f log2 f; trapezoid on a uniform grid. The integrand
    // decays like a Gaussian, so the 8-sigma margin keeps the truncation
    // error far below the quadrature tolerance.
    double entropy = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double y = -half_width + step * static_cast<double>(i);
        const double f = mixture(y);
        const double contrib = f > 0.0 ? -f * std::log2(f) : 0.0;
        const double weight = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
        entropy += weight * contrib;
    }
    entropy *= step;

    // h(Y | V) is the Gaussian differential entropy 0.5*log2(2*pi*e*sigma^2).
    const double cond_entropy =
        0.5 * std::log2(2.0 * 3.14159265358979323846 * 2.71828182845904523536 * noise_variance);
    return entropy - cond_entropy;
}

} // namespace awgnbandit
