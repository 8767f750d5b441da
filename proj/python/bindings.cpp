#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "awgnbandit/core.hpp"
#include "awgnbandit/harness.hpp"
#include "awgnbandit/infotheory.hpp"
#include "awgnbandit/link.hpp"
#include "awgnbandit/policies.hpp"
#include "awgnbandit/random.hpp"

namespace py = pybind11;
using namespace awgnbandit;

namespace {

DiscreteDistribution make_distribution(const std::vector<double>& p) {
    return DiscreteDistribution(p);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bandit-over-AWGN simulator core";
    m.attr("__version__") = "0.1.0";

    py::class_<RandomSource>(m, "RandomSource")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream") = 0)
        .def_property_readonly("seed", &RandomSource::seed)
        .def_property_readonly("stream", &RandomSource::stream)
        .def("uniform", &RandomSource::uniform)
        .def("normal", &RandomSource::normal);

    py::class_<RewardFamily>(m, "RewardFamily")
        .def_static("unit_gaussian", &RewardFamily::unit_gaussian, py::arg("mean"))
        .def_static("shifted_rademacher", &RewardFamily::shifted_rademacher, py::arg("mean"))
        .def_static("deterministic", &RewardFamily::deterministic, py::arg("value"))
        .def_property_readonly("mean", &RewardFamily::mean)
        .def_property_readonly("second_moment", &RewardFamily::second_moment)
        .def("sample", &RewardFamily::sample, py::arg("rng"));

    py::class_<BanditInstance>(m, "BanditInstance")
        .def(py::init<std::vector<RewardFamily>, double>(), py::arg("arms"),
             py::arg("second_moment_bound"))
        .def_property_readonly("num_arms", &BanditInstance::num_arms)
        .def_property_readonly("second_moment_bound", &BanditInstance::second_moment_bound)
        .def_property_readonly("best_arm", &BanditInstance::best_arm)
        .def_property_readonly("best_mean", &BanditInstance::best_mean)
        .def("mean", &BanditInstance::mean, py::arg("arm"))
        .def("digest", &BanditInstance::digest);

    m.def("gap_instance", &gap_instance, py::arg("num_arms"), py::arg("delta"));
    m.def("deterministic_hard_instance", &deterministic_hard_instance, py::arg("num_arms"),
          py::arg("b"), py::arg("good_arm"));
    m.def("sample_reward", &sample_reward, py::arg("family"), py::arg("rng"));

    py::class_<ChannelParams>(m, "ChannelParams")
        .def(py::init<double, double>(), py::arg("power_budget"), py::arg("noise_variance"))
        .def_static("from_snr", &ChannelParams::from_snr, py::arg("snr"))
        .def_readonly("power_budget", &ChannelParams::power_budget)
        .def_readonly("noise_variance", &ChannelParams::noise_variance)
        .def_property_readonly("snr", &ChannelParams::snr);

    py::class_<CasParams>(m, "CasParams")
        .def(py::init<double, double>(), py::arg("theta"), py::arg("side_info"))
        .def_readonly("theta", &CasParams::theta)
        .def_readonly("side_info", &CasParams::side_info);

    py::class_<AuditReport>(m, "AuditReport")
        .def_readonly("pass_", &AuditReport::pass)
        .def_readonly("empirical_moment", &AuditReport::empirical_moment)
        .def_readonly("count", &AuditReport::count)
        .def_readonly("budget", &AuditReport::budget)
        .def_readonly("tolerance", &AuditReport::tolerance);

    py::class_<PowerAudit>(m, "PowerAudit")
        .def(py::init<double>(), py::arg("budget"))
        .def("record", &PowerAudit::record, py::arg("encoded_value"))
        .def_property_readonly("count", &PowerAudit::count)
        .def_property_readonly("budget", &PowerAudit::budget)
        .def("empirical_second_moment", &PowerAudit::empirical_second_moment)
        .def("check", &PowerAudit::check, py::arg("tolerance"));

    m.def("cas_encode", py::overload_cast<double, const CasParams&>(&cas_encode), py::arg("x"),
          py::arg("params"));
    m.def("cas_encode_audited",
          py::overload_cast<double, const CasParams&, PowerAudit&>(&cas_encode), py::arg("x"),
          py::arg("params"), py::arg("audit"));
    m.def("cas_decode", &cas_decode, py::arg("y"), py::arg("params"));
    m.def("transmit", &transmit, py::arg("encoded"), py::arg("channel"), py::arg("rng"));

    py::class_<Schedule>(m, "Schedule")
        .def_property_readonly("algorithm",
                               [](const Schedule& s) { return algorithm_name(s.algorithm()); })
        .def_property_readonly("num_arms", &Schedule::num_arms)
        .def_property_readonly("horizon", &Schedule::horizon)
        .def_property_readonly("snr", &Schedule::snr)
        .def_property_readonly("tau", &Schedule::tau)
        .def_property_readonly("sub_phases", &Schedule::sub_phases)
        .def_property_readonly("exploration_rounds", &Schedule::exploration_rounds)
        .def_property_readonly("b_squared", &Schedule::b_squared)
        .def_property_readonly("theta", &Schedule::theta)
        .def_property_readonly("ucb_eta", &Schedule::ucb_eta);

    m.def(
        "build_schedule",
        [](const std::string& algorithm, int num_arms, std::int64_t horizon, double b,
           const ChannelParams& channel) {
            return build_schedule(algorithm_from_name(algorithm), num_arms, horizon, b,
                                  channel);
        },
        py::arg("algorithm"), py::arg("num_arms"), py::arg("horizon"),
        py::arg("second_moment_bound"), py::arg("channel"));

    py::class_<BoundTerm>(m, "BoundTerm")
        .def_readonly("name", &BoundTerm::name)
        .def_readonly("value", &BoundTerm::value);

    py::class_<BoundReport>(m, "BoundReport")
        .def_readonly("algorithm", &BoundReport::algorithm)
        .def_readonly("value", &BoundReport::value)
        .def_readonly("terms", &BoundReport::terms)
        .def_readonly("warning", &BoundReport::warning);

    m.def("ucb_lemma_bound", &ucb_lemma_bound, py::arg("alpha_sq"), py::arg("num_arms"),
          py::arg("horizon"), py::arg("b"));
    m.def("ucb0_bound", &ucb0_bound, py::arg("num_arms"), py::arg("horizon"), py::arg("b"),
          py::arg("snr"));
    m.def("ue_ucb_bound", &ue_ucb_bound, py::arg("num_arms"), py::arg("horizon"), py::arg("b"),
          py::arg("snr"));
    m.def("ue_ucb_pp_bound", &ue_ucb_pp_bound, py::arg("num_arms"), py::arg("horizon"),
          py::arg("b"), py::arg("snr"));
    m.def("minimax_lower_bound", &minimax_lower_bound, py::arg("num_arms"), py::arg("horizon"),
          py::arg("b"), py::arg("snr"), py::arg("c1") = 0.05);
    m.def("minimax_horizon_ok", &minimax_horizon_ok, py::arg("num_arms"), py::arg("horizon"),
          py::arg("snr"), py::arg("c2") = 1.0);
    m.def("b_recursion", &b_recursion, py::arg("b"), py::arg("snr"));
    m.def("awgn_capacity", &awgn_capacity, py::arg("snr"));
    m.def("binary_input_mi", &binary_input_mi, py::arg("amplitude"), py::arg("noise_variance"),
          py::arg("nodes") = 10000);

    m.def(
        "kl_divergence",
        [](const std::vector<double>& p, const std::vector<double>& q) {
            return kl_divergence(make_distribution(p), make_distribution(q));
        },
        py::arg("p"), py::arg("q"));
    m.def(
        "chi_square",
        [](const std::vector<double>& p, const std::vector<double>& q) {
            return chi_square(make_distribution(p), make_distribution(q));
        },
        py::arg("p"), py::arg("q"));
    m.def(
        "total_variation",
        [](const std::vector<double>& p, const std::vector<double>& q) {
            return total_variation(make_distribution(p), make_distribution(q));
        },
        py::arg("p"), py::arg("q"));

    py::class_<RoundRecord>(m, "RoundRecord")
        .def_readonly("t", &RoundRecord::t)
        .def_readonly("arm", &RoundRecord::arm)
        .def_readonly("raw_reward", &RoundRecord::raw_reward)
        .def_readonly("side_info", &RoundRecord::side_info)
        .def_readonly("encoded", &RoundRecord::encoded)
        .def_readonly("channel_output", &RoundRecord::channel_output)
        .def_readonly("decoded", &RoundRecord::decoded);

    py::class_<RegretTrace>(m, "RegretTrace")
        .def_readonly("rounds", &RegretTrace::rounds)
        .def_readonly("cumulative", &RegretTrace::cumulative)
        .def_readonly("final_regret", &RegretTrace::final_regret)
        .def_readonly("seed", &RegretTrace::seed)
        .def_readonly("stream", &RegretTrace::stream);

    py::class_<EpisodeResult>(m, "EpisodeResult")
        .def_readonly("transcript", &EpisodeResult::transcript)
        .def_readonly("regret", &EpisodeResult::regret)
        .def_readonly("audit", &EpisodeResult::audit);

    m.def(
        "run_episode",
        [](const BanditInstance& instance, const Schedule& schedule,
           const ChannelParams& channel, std::int64_t horizon, std::uint64_t seed,
           std::uint64_t stream, bool retain_full_transcript, double audit_tolerance) {
            EpisodeOptions options;
            options.retain_full_transcript = retain_full_transcript;
            options.audit_tolerance = audit_tolerance;
            return run_episode(instance, schedule, channel, horizon, seed, stream, options);
        },
        py::arg("instance"), py::arg("schedule"), py::arg("channel"), py::arg("horizon"),
        py::arg("seed"), py::arg("stream") = 0, py::arg("retain_full_transcript") = false,
        py::arg("audit_tolerance") = 0.1);

    py::class_<McSummary>(m, "McSummary")
        .def_readonly("replications", &McSummary::replications)
        .def_readonly("rounds", &McSummary::rounds)
        .def_readonly("mean_regret", &McSummary::mean_regret)
        .def_readonly("stderr_regret", &McSummary::stderr_regret)
        .def_readonly("final_regrets", &McSummary::final_regrets)
        .def_readonly("mean_final_regret", &McSummary::mean_final_regret)
        .def_readonly("stderr_final_regret", &McSummary::stderr_final_regret)
        .def_readonly("final_regret_p5", &McSummary::final_regret_p5)
        .def_readonly("final_regret_p50", &McSummary::final_regret_p50)
        .def_readonly("final_regret_p95", &McSummary::final_regret_p95)
        .def_readonly("pooled_empirical_moment", &McSummary::pooled_empirical_moment)
        .def_readonly("max_empirical_moment", &McSummary::max_empirical_moment)
        .def_readonly("audit_pass", &McSummary::audit_pass);

    m.def(
        "run_monte_carlo",
        [](const BanditInstance& instance, const std::string& algorithm,
           const ChannelParams& channel, std::int64_t horizon, std::int64_t replications,
           std::uint64_t base_seed, int parallel, double audit_tolerance) {
            McOptions options;
            options.parallel = parallel;
            options.episode.audit_tolerance = audit_tolerance;
            return run_monte_carlo(instance, algorithm_from_name(algorithm), channel, horizon,
                                   replications, base_seed, options);
        },
        py::arg("instance"), py::arg("algorithm"), py::arg("channel"), py::arg("horizon"),
        py::arg("replications"), py::arg("base_seed"), py::arg("parallel") = 1,
        py::arg("audit_tolerance") = 0.1);

    py::class_<DivergenceProbeResult>(m, "DivergenceProbeResult")
        .def_readonly("transcript_kl_nats", &DivergenceProbeResult::transcript_kl_nats)
        .def_readonly("decomposition_rhs_nats",
                      &DivergenceProbeResult::decomposition_rhs_nats)
        .def_readonly("expected_differing_pulls",
                      &DivergenceProbeResult::expected_differing_pulls)
        .def_readonly("differing_arm", &DivergenceProbeResult::differing_arm)
        .def_readonly("replications", &DivergenceProbeResult::replications)
        .def_readonly("enough_replications", &DivergenceProbeResult::enough_replications)
        .def_readonly("bins", &DivergenceProbeResult::bins);

    m.def("transcript_divergence_probe", &transcript_divergence_probe, py::arg("nu"),
          py::arg("nu_prime"), py::arg("channel"), py::arg("horizon"), py::arg("cas"),
          py::arg("replications"), py::arg("base_seed"), py::arg("bins") = 32);
}
