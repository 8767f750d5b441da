#include "awgnbandit/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "awgnbandit/infotheory.hpp"

namespace awgnbandit {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' expects a number, got '" +
                                    value + "'");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    std::int64_t v = 0;
    const auto* first = value.data();
    const auto* last = value.data() + value.size();
    const auto result = std::from_chars(first, last, v);
    if (result.ec != std::errc{} || result.ptr != last) {
        throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" +
                                    value + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") {
        return true;
    }
    if (value == "false" || value == "0") {
        return false;
    }
    throw std::invalid_argument("config: key '" + key + "' expects true/false, got '" + value +
                                "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream stream(value);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            items.push_back(item);
        }
    }
    return items;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const auto& item : split_list(value)) {
        out.push_back(parse_double(key, item));
    }
    return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<std::int64_t> out;
    for (const auto& item : split_list(value)) {
        out.push_back(parse_int(key, item));
    }
    return out;
}

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += format_double(values[i]);
    }
    return out;
}

std::string join_ints(const std::vector<std::int64_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += std::to_string(values[i]);
    }
    return out;
}

} // namespace

std::string format_double(double value) {
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return {buffer, result.ptr};
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key == "instance") {
        instance = value;
    } else if (key == "k") {
        num_arms = static_cast<int>(parse_int(key, value));
    } else if (key == "delta") {
        delta = parse_double(key, value);
    } else if (key == "means") {
        means = parse_double_list(key, value);
    } else if (key == "b") {
        b = parse_double(key, value);
    } else if (key == "good_arm") {
        good_arm = static_cast<int>(parse_int(key, value));
    } else if (key == "snr") {
        has_snr = true;
        snr_value = parse_double(key, value);
        power = 1.0;
        noise_variance = 1.0 / snr_value;
    } else if (key == "power") {
        power = parse_double(key, value);
        has_snr = false;
    } else if (key == "noise_variance") {
        noise_variance = parse_double(key, value);
        has_snr = false;
    } else if (key == "algorithm") {
        algorithm = value;
    } else if (key == "horizon") {
        horizon = parse_int(key, value);
    } else if (key == "replications") {
        replications = parse_int(key, value);
    } else if (key == "seed") {
        seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "audit_tolerance") {
        audit_tolerance = parse_double(key, value);
    } else if (key == "retain_full_transcript") {
        retain_full_transcript = parse_bool(key, value);
    } else if (key == "parallel") {
        parallel = static_cast<int>(parse_int(key, value));
    } else if (key == "out_dir") {
        out_dir = value;
    } else if (key == "sweep_snr") {
        sweep_snr = parse_double_list(key, value);
    } else if (key == "sweep_b") {
        sweep_b = parse_double_list(key, value);
    } else if (key == "sweep_horizon") {
        sweep_horizon = parse_int_list(key, value);
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig config;
    std::stringstream stream(text);
    std::string line;
    int line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        const auto comment = line.find('#');
        if (comment != std::string::npos) {
            line = line.substr(0, comment);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(line_number) +
                                        " is not 'key = value'");
        }
        config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot read '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::string ExperimentConfig::serialize() const {
    std::string out;
    auto emit = [&out](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    emit("instance", instance);
    emit("k", std::to_string(num_arms));
    if (instance == "gap") {
        emit("delta", format_double(delta));
    }
    if (!means.empty()) {
        emit("means", join_doubles(means));
    }
    emit("b", format_double(b));
    if (instance == "hard") {
        emit("good_arm", std::to_string(good_arm));
    }
    if (has_snr) {
        emit("snr", format_double(snr_value));
    } else {
        emit("power", format_double(power));
        emit("noise_variance", format_double(noise_variance));
    }
    emit("algorithm", algorithm);
    emit("horizon", std::to_string(horizon));
    emit("replications", std::to_string(replications));
    emit("seed", std::to_string(seed));
    emit("audit_tolerance", format_double(audit_tolerance));
    emit("retain_full_transcript", retain_full_transcript ? "true" : "false");
    emit("parallel", std::to_string(parallel));
    emit("out_dir", out_dir);
    if (!sweep_snr.empty()) {
        emit("sweep_snr", join_doubles(sweep_snr));
    }
    if (!sweep_b.empty()) {
        emit("sweep_b", join_doubles(sweep_b));
    }
    if (!sweep_horizon.empty()) {
        emit("sweep_horizon", join_ints(sweep_horizon));
    }
    return out;
}

ChannelParams ExperimentConfig::build_channel() const {
    if (has_snr) {
        return ChannelParams::from_snr(snr_value);
    }
    return {power, noise_variance};
}

BanditInstance ExperimentConfig::build_instance(double effective_b) const {
    if (instance == "gap") {
        if (effective_b != 1.0) {
            throw std::invalid_argument("config: the gap instance fixes b = 1");
        }
        return gap_instance(num_arms, delta);
    }
    if (instance == "gaussian" || instance == "rademacher") {
        if (means.empty()) {
            throw std::invalid_argument("config: instance '" + instance + "' needs means");
        }
        std::vector<RewardFamily> arms;
        arms.reserve(means.size());
        for (double mean : means) {
            arms.push_back(instance == "gaussian" ? RewardFamily::unit_gaussian(mean)
                                                  : RewardFamily::shifted_rademacher(mean));
        }
        return {std::move(arms), effective_b};
    }
    if (instance == "hard") {
        return deterministic_hard_instance(num_arms, effective_b, good_arm);
    }
    throw std::invalid_argument("config: unknown instance family '" + instance +
                                "' (expected gap, gaussian, rademacher, or hard)");
}

void ExperimentConfig::validate() const {
    if ((instance == "gaussian" || instance == "rademacher") &&
        num_arms != static_cast<int>(means.size())) {
        throw std::invalid_argument("config: k must equal the number of means");
    }
    if (replications < 1) {
        throw std::invalid_argument("config: replications must be >= 1");
    }
    if (audit_tolerance < 0.0) {
        throw std::invalid_argument("config: audit_tolerance must be >= 0");
    }
    if (parallel < 1) {
        throw std::invalid_argument("config: parallel must be >= 1");
    }
    const ChannelParams channel = build_channel();
    const Algorithm algo = algorithm_from_name(algorithm);

    auto check_cell = [&](double cell_snr, bool snr_swept, double cell_b,
                          std::int64_t cell_horizon) {
        const ChannelParams cell_channel =
            snr_swept ? ChannelParams::from_snr(cell_snr) : channel;
        const BanditInstance cell_instance = build_instance(cell_b);
        build_schedule(algo, cell_instance.num_arms(), cell_horizon,
                       cell_instance.second_moment_bound(), cell_channel);
    };

    const std::vector<double> snrs = sweep_snr.empty() ? std::vector<double>{0.0} : sweep_snr;
    const std::vector<double> bs = sweep_b.empty() ? std::vector<double>{b} : sweep_b;
    const std::vector<std::int64_t> horizons =
        sweep_horizon.empty() ? std::vector<std::int64_t>{horizon} : sweep_horizon;
    for (double cell_snr : snrs) {
        for (double cell_b : bs) {
            for (std::int64_t cell_horizon : horizons) {
                check_cell(cell_snr, !sweep_snr.empty(), cell_b, cell_horizon);
            }
        }
    }
}

std::string trace_csv_header() {
    return "algorithm,snr,b,k,t_horizon,replication,round,cumulative_regret\n";
}

void append_trace_csv(std::string& out, const std::string& algorithm, double snr, double b,
                      int num_arms, std::int64_t horizon, const McSummary& summary) {
    const std::string prefix = algorithm + ',' + format_double(snr) + ',' + format_double(b) +
                               ',' + std::to_string(num_arms) + ',' + std::to_string(horizon) +
                               ',';
    for (std::size_t r = 0; r < summary.traces.size(); ++r) {
        const RegretTrace& trace = summary.traces[r];
        const std::string rep_prefix = prefix + std::to_string(r + 1) + ',';
        for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
            out += rep_prefix;
            out += std::to_string(trace.rounds[i]);
            out += ',';
            out += format_double(trace.cumulative[i]);
            out += '\n';
        }
    }
}

namespace {

nlohmann::ordered_json config_echo(const ExperimentConfig& config) {
    nlohmann::ordered_json j;
    j["instance"] = config.instance;
    j["k"] = config.num_arms;
    if (config.instance == "gap") {
        j["delta"] = config.delta;
    }
    if (!config.means.empty()) {
        j["means"] = config.means;
    }
    j["b"] = config.b;
    if (config.instance == "hard") {
        j["good_arm"] = config.good_arm;
    }
    if (config.has_snr) {
        j["snr"] = config.snr_value;
    }
    j["power"] = config.power;
    j["noise_variance"] = config.noise_variance;
    j["algorithm"] = config.algorithm;
    j["horizon"] = config.horizon;
    j["replications"] = config.replications;
    j["seed"] = config.seed;
    j["audit_tolerance"] = config.audit_tolerance;
    j["retain_full_transcript"] = config.retain_full_transcript;
    j["parallel"] = config.parallel;
    j["out_dir"] = config.out_dir;
    return j;
}

nlohmann::ordered_json summary_object(const ExperimentConfig& config,
                                      const ChannelParams& channel, double effective_b,
                                      std::int64_t effective_horizon,
                                      const McSummary& summary) {
    const double effective_snr = channel.snr();
    const Schedule schedule =
        build_schedule(algorithm_from_name(config.algorithm), config.num_arms,
                       effective_horizon, effective_b, channel);
    nlohmann::ordered_json j;
    j["config"] = config_echo(config);
    j["effective"] = {{"snr", effective_snr},
                      {"b", effective_b},
                      {"horizon", effective_horizon},
                      {"exploration_rounds", schedule.exploration_rounds()}};
    j["mean_final_regret"] = summary.mean_final_regret;
    j["stderr_final_regret"] = summary.stderr_final_regret;
    j["quantiles"] = {{"p5", summary.final_regret_p5},
                      {"p50", summary.final_regret_p50},
                      {"p95", summary.final_regret_p95}};
    j["power_audit"] = {{"empirical_moment", summary.pooled_empirical_moment},
                        {"worst_episode_moment", summary.max_empirical_moment},
                        {"budget", summary.power_budget},
                        {"pass", summary.audit_pass}};
    const int k = config.num_arms;
    j["bound_values"] = {
        {"ucb0", ucb0_bound(k, effective_horizon, effective_b, effective_snr).value},
        {"ue_ucb", ue_ucb_bound(k, effective_horizon, effective_b, effective_snr).value},
        {"ue_ucb_pp", ue_ucb_pp_bound(k, effective_horizon, effective_b, effective_snr).value},
        {"lower", minimax_lower_bound(k, effective_horizon, effective_b, effective_snr)}};
    return j;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << contents;
    if (!out) {
        throw std::runtime_error("short write to '" + path + "'");
    }
}

McSummary run_cell(const ExperimentConfig& config, const ChannelParams& channel, double cell_b,
                   std::int64_t cell_horizon) {
    const BanditInstance instance = config.build_instance(cell_b);
    McOptions options;
    options.episode.audit_tolerance = config.audit_tolerance;
    options.episode.trace_stride = config.retain_full_transcript ? 1 : 0;
    options.parallel = config.parallel;
    return run_monte_carlo(instance, algorithm_from_name(config.algorithm), channel,
                           cell_horizon, config.replications, config.seed, options);
}

} // namespace

std::string summary_json(const ExperimentConfig& config, const ChannelParams& channel,
                         double effective_b, std::int64_t effective_horizon,
                         const McSummary& summary) {
    return summary_object(config, channel, effective_b, effective_horizon, summary).dump(2) +
           "\n";
}

RunOutcome run_experiment(const ExperimentConfig& config) {
    config.validate();
    const ChannelParams channel = config.build_channel();
    const McSummary summary = run_cell(config, channel, config.b, config.horizon);

    std::string csv = trace_csv_header();
    append_trace_csv(csv, config.algorithm, channel.snr(), config.b, config.num_arms,
                     config.horizon, summary);

    std::filesystem::create_directories(config.out_dir);
    RunOutcome outcome;
    outcome.audit_pass = summary.audit_pass;
    outcome.csv_path = (std::filesystem::path(config.out_dir) / "trace.csv").string();
    outcome.summary_path = (std::filesystem::path(config.out_dir) / "summary.json").string();
    write_file(outcome.csv_path, csv);
    write_file(outcome.summary_path,
               summary_json(config, channel, config.b, config.horizon, summary));
    return outcome;
}

RunOutcome run_sweep(const ExperimentConfig& config) {
    if (config.sweep_snr.empty() && config.sweep_b.empty() && config.sweep_horizon.empty()) {
        throw std::invalid_argument("sweep: no axis set (sweep_snr, sweep_b, sweep_horizon)");
    }
    config.validate();

    const std::vector<double> snrs =
        config.sweep_snr.empty() ? std::vector<double>{config.build_channel().snr()}
                                 : config.sweep_snr;
    const std::vector<double> bs =
        config.sweep_b.empty() ? std::vector<double>{config.b} : config.sweep_b;
    const std::vector<std::int64_t> horizons = config.sweep_horizon.empty()
                                                   ? std::vector<std::int64_t>{config.horizon}
                                                   : config.sweep_horizon;

    std::string csv = trace_csv_header();
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    bool audit_pass = true;
    for (double cell_snr : snrs) {
        for (double cell_b : bs) {
            for (std::int64_t cell_horizon : horizons) {
                const ChannelParams channel = config.sweep_snr.empty()
                                                  ? config.build_channel()
                                                  : ChannelParams::from_snr(cell_snr);
                const McSummary summary = run_cell(config, channel, cell_b, cell_horizon);
                append_trace_csv(csv, config.algorithm, channel.snr(), cell_b, config.num_arms,
                                 cell_horizon, summary);
                cells.push_back(
                    summary_object(config, channel, cell_b, cell_horizon, summary));
                audit_pass = audit_pass && summary.audit_pass;
            }
        }
    }

    std::filesystem::create_directories(config.out_dir);
    RunOutcome outcome;
    outcome.audit_pass = audit_pass;
    outcome.csv_path = (std::filesystem::path(config.out_dir) / "trace.csv").string();
    outcome.summary_path = (std::filesystem::path(config.out_dir) / "summary.json").string();
    write_file(outcome.csv_path, csv);
    write_file(outcome.summary_path, cells.dump(2) + "\n");
    return outcome;
}

} // namespace awgnbandit
