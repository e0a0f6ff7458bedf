// inddos command line tool.
//
// Subcommands:
//   detect    run interval detection on a CSV trace and score it against the
//             exact per-interval oracle
//   generate  produce a synthetic trace (plus planted ground truth) from a
//             JSON spec
//   sweep     repeat detection while varying one sketch parameter
//   bounds    run the Monte Carlo bound-violation and detection-regime suites
//
// Exit codes: 0 success, 1 input error, 2 config error, 3 invariant/bound
// violation.
//
// Machine reports are deterministic for fixed inputs and seed; wall-clock
// throughput is only written to report files when --timing is given.

#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "inddos/bounds.hpp"
#include "inddos/detector.hpp"
#include "inddos/generator.hpp"
#include "inddos/report.hpp"

namespace {

using nlohmann::json;
using namespace inddos;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitConfig = 2;
constexpr int kExitViolation = 3;

struct CliError : std::runtime_error {
    CliError(int code, const std::string& msg) : std::runtime_error(msg), exit_code(code) {}
    int exit_code;
};

KeyMode parse_key_mode(const std::string& s) {
    if (s == "ip") return KeyMode::Ip;
    if (s == "ip+port") return KeyMode::IpPort;
    throw CliError(kExitConfig, "key mode must be 'ip' or 'ip+port': " + s);
}

// Shared detection options; a JSON config file provides defaults, flags win.
struct DetectOptions {
    std::string config_path;
    double theta = 0.005;
    std::uint64_t n = 60000;
    std::uint64_t interval_us = 5'000'000;
    std::uint32_t d = 3, w = 1024, m = 1024;
    bool hardware_mode = false;
    std::string key_src = "ip", key_dst = "ip";

    void add_flags(CLI::App* app) {
        app->add_option("--config", config_path, "JSON config file (flags override)");
        app->add_option("--theta", theta, "DDoS threshold fraction");
        app->add_option("--n", n, "per-interval distinct-source budget");
        app->add_option("--interval-us", interval_us, "interval length in microseconds");
        app->add_option("--d", d, "sketch rows");
        app->add_option("--w", w, "segments per row");
        app->add_option("--m", m, "bits per segment");
        app->add_flag("--hardware-mode", hardware_mode, "switch-faithful addressing");
        app->add_option("--key-src", key_src, "source key: ip or ip+port");
        app->add_option("--key-dst", key_dst, "destination key: ip or ip+port");
    }

    DetectionConfig resolve(const CLI::App* app) const {
        DetectOptions merged = *this;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw CliError(kExitInput, "cannot open config file: " + config_path);
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw CliError(kExitConfig, std::string("bad config JSON: ") + e.what());
            }
            auto take = [&](const char* key, auto& field, const std::string& flag) {
                if (j.contains(key) && app->count(flag) == 0) field = j.at(key).get<std::decay_t<decltype(field)>>();
            };
            take("theta", merged.theta, "--theta");
            take("n", merged.n, "--n");
            take("interval_us", merged.interval_us, "--interval-us");
            take("d", merged.d, "--d");
            take("w", merged.w, "--w");
            take("m", merged.m, "--m");
            take("hardware_mode", merged.hardware_mode, "--hardware-mode");
            take("key_src", merged.key_src, "--key-src");
            take("key_dst", merged.key_dst, "--key-dst");
        }
        DetectionConfig cfg;
        cfg.theta = merged.theta;
        cfg.n = merged.n;
        cfg.interval_us = merged.interval_us;
        cfg.params = {merged.d, merged.w, merged.m, merged.hardware_mode};
        cfg.key_src_mode = parse_key_mode(merged.key_src);
        cfg.key_dst_mode = parse_key_mode(merged.key_dst);
        try {
            cfg.validate();
        } catch (const std::invalid_argument& e) {
            throw CliError(kExitConfig, e.what());
        }
        if (!cfg.theta_hypothesis_holds())
            std::cerr << "warning: theta < 4/w; the false-positive bound does not apply\n";
        return cfg;
    }
};

RunReport detect_on_records(std::vector<TraceRecord> records, const DetectionConfig& cfg, bool sort_input) {
    const auto intervals = split_intervals(records, cfg.interval_us, sort_input);
    std::vector<GroundTruth> truth;
    for (const auto& iv : intervals) truth.push_back(exact_cardinalities(iv.records));
    const auto t0 = std::chrono::steady_clock::now();
    DetectionRun run = run_detection(std::move(records), cfg, sort_input);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    return build_report(run, truth, cfg, dt.count());
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError(kExitInput, "cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

TraceSpec load_trace_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError(kExitInput, "cannot open spec file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw CliError(kExitConfig, std::string("bad spec JSON: ") + e.what());
    }
    TraceSpec spec;
    auto take = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    take("legit_sources", spec.legit_sources);
    take("legit_dest_count", spec.legit_dest_count);
    take("zipf_s", spec.zipf_s);
    take("heavy_dest_count", spec.heavy_dest_count);
    take("heavy_min", spec.heavy_min);
    take("max_cardinality", spec.max_cardinality);
    take("packets_per_interval", spec.packets_per_interval);
    take("intervals", spec.intervals);
    take("interval_us", spec.interval_us);
    if (j.contains("attacks")) {
        for (const auto& a : j.at("attacks")) {
            AttackSpec atk;
            const auto victim = parse_ipv4(a.at("victim").get<std::string>());
            if (!victim) throw CliError(kExitConfig, "bad victim IPv4 in attack spec");
            atk.victim = *victim;
            atk.bot_count = a.at("bot_count").get<std::uint32_t>();
            atk.start_interval = a.value("start_interval", 0u);
            atk.end_interval = a.value("end_interval", spec.intervals - 1);
            atk.packets_per_second = a.value("packets_per_second", std::uint64_t{0});
            spec.attacks.push_back(atk);
        }
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw CliError(kExitConfig, e.what());
    }
    return spec;
}

int run(int argc, char** argv) {
    CLI::App app{"BACON sketch / in-network DDoS victim identification toolkit"};
    app.require_subcommand(1);

    // detect
    auto* detect = app.add_subcommand("detect", "run detection on a CSV trace");
    DetectOptions dopt;
    std::string trace_path, out_path;
    bool sort_input = false, timing = false;
    detect->add_option("--trace", trace_path, "input CSV trace")->required();
    detect->add_option("--out", out_path, "JSON report output path");
    detect->add_flag("--sort", sort_input, "sort records by timestamp");
    detect->add_flag("--timing", timing, "include wall-clock throughput in the report file");
    dopt.add_flags(detect);

    // generate
    auto* generate_cmd = app.add_subcommand("generate", "generate a synthetic trace");
    std::string spec_path, gen_out, truth_out;
    std::uint64_t seed = 1;
    generate_cmd->add_option("--spec", spec_path, "JSON trace spec")->required();
    generate_cmd->add_option("--out", gen_out, "output CSV path")->required();
    generate_cmd->add_option("--truth-out", truth_out, "optional planted ground-truth JSON");
    generate_cmd->add_option("--seed", seed, "generator seed");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "vary one sketch parameter");
    DetectOptions sopt;
    std::string sweep_trace, sweep_axis, sweep_out;
    std::vector<std::uint32_t> sweep_values;
    sweep->add_option("--trace", sweep_trace, "input CSV trace")->required();
    sweep->add_option("--axis", sweep_axis, "one of d, w, m")->required();
    sweep->add_option("--values", sweep_values, "axis values")->required();
    sweep->add_option("--out", sweep_out, "JSON output path");
    sopt.add_flags(sweep);

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "Monte Carlo bound checks");
    DetectOptions bopt;
    std::uint64_t trials = 400, bseed = 1, bounds_n = 4096, tracked_card = 256;
    std::string bounds_out;
    bounds_cmd->add_option("--trials", trials, "trial count (>= 100)");
    bounds_cmd->add_option("--seed", bseed, "experiment seed");
    bounds_cmd->add_option("--cardinality", tracked_card, "tracked destination cardinality");
    bounds_cmd->add_option("--out", bounds_out, "JSON output path");
    bopt.add_flags(bounds_cmd);
    bounds_cmd->add_option("--bounds-n", bounds_n, "distinct sources per trial")->excludes("--n");

    CLI11_PARSE(app, argc, argv);

    if (detect->parsed()) {
        const DetectionConfig cfg = dopt.resolve(detect);
        ParseResult parsed;
        try {
            parsed = parse_trace(trace_path);
        } catch (const std::exception& e) {
            throw CliError(kExitInput, e.what());
        }
        RunReport rep = detect_on_records(std::move(parsed.records), cfg, sort_input);
        print_report_summary(std::cout, rep);
        if (!out_path.empty()) {
            if (!timing) rep.throughput_pps = 0.0;  // keep report files reproducible
            write_json(out_path, report_to_json(rep));
        }
        return kExitOk;
    }

    if (generate_cmd->parsed()) {
        const TraceSpec spec = load_trace_spec(spec_path);
        const GeneratedTrace trace = generate(spec, seed);
        write_trace(gen_out, trace.records);
        if (!truth_out.empty()) {
            json truth = json::array();
            for (std::size_t i = 0; i < trace.truth.size(); ++i) {
                json per = {{"interval", i}, {"n", trace.truth[i].n}};
                json cards = json::object();
                std::vector<std::pair<std::uint32_t, std::uint64_t>> sorted(
                    trace.truth[i].cardinality.begin(), trace.truth[i].cardinality.end());
                std::sort(sorted.begin(), sorted.end());
                for (const auto& [dst, e] : sorted) cards[ipv4_to_string(dst)] = e;
                per["cardinality"] = std::move(cards);
                truth.push_back(std::move(per));
            }
            write_json(truth_out, truth);
        }
        std::cout << "wrote " << trace.records.size() << " packets over " << spec.intervals
                  << " intervals to " << gen_out << "\n";
        return kExitOk;
    }

    if (sweep->parsed()) {
        if (sweep_axis != "d" && sweep_axis != "w" && sweep_axis != "m")
            throw CliError(kExitConfig, "sweep axis must be d, w or m");
        const DetectionConfig base = sopt.resolve(sweep);
        ParseResult parsed;
        try {
            parsed = parse_trace(sweep_trace);
        } catch (const std::exception& e) {
            throw CliError(kExitInput, e.what());
        }
        struct Row {
            std::uint32_t value;
            bool skipped;
            RunReport report;
        };
        std::vector<std::future<Row>> futures;
        for (std::uint32_t value : sweep_values) {
            futures.push_back(std::async(std::launch::async, [&, value]() -> Row {
                DetectionConfig cfg = base;
                if (sweep_axis == "d") cfg.params.d = value;
                if (sweep_axis == "w") cfg.params.w = value;
                if (sweep_axis == "m") cfg.params.m = value;
                try {
                    cfg.validate();
                } catch (const std::invalid_argument&) {
                    return {value, true, {}};
                }
                return {value, false, detect_on_records(parsed.records, cfg, false)};
            }));
        }
        json out = {{"schema", kReportSchemaVersion}, {"axis", sweep_axis}, {"rows", json::array()}};
        for (auto& f : futures) {
            Row row = f.get();
            if (row.skipped) {
                std::cerr << "warning: skipped infeasible " << sweep_axis << "=" << row.value << "\n";
                continue;
            }
            std::cout << sweep_axis << "=" << row.value << "  R=" << row.report.mean_recall
                      << " Pr=" << row.report.mean_precision << " F1=" << row.report.mean_f1 << "\n";
            out["rows"].push_back({{"value", row.value},
                                   {"recall", row.report.mean_recall},
                                   {"precision", row.report.mean_precision},
                                   {"f1", row.report.mean_f1}});
        }
        if (!sweep_out.empty()) write_json(sweep_out, out);
        return kExitOk;
    }

    // bounds
    const DetectionConfig cfg = bopt.resolve(bounds_cmd);
    ViolationRates rates;
    DetectionBoundReport det;
    try {
        rates = bound_violation_experiment(cfg.params, bounds_n, tracked_card, trials, bseed);
        det = detection_bound_check(cfg.params, cfg.theta, bounds_n, trials, bseed);
    } catch (const std::invalid_argument& e) {
        throw CliError(kExitConfig, e.what());
    }
    json out = {
        {"schema", kReportSchemaVersion},
        {"config", config_to_json(cfg)},
        {"trials", trials},
        {"seed", bseed},
        {"n", bounds_n},
        {"cardinality", tracked_card},
        {"bound", rates.bound},
        {"slack", rates.slack},
        {"lower_violation_rate", rates.lower_violation},
        {"upper_violation_rate", rates.upper_violation},
        {"r_violation_rate", rates.r_violation},
        {"high_regime",
         {{"feasible", det.high_regime_feasible},
          {"cardinality", det.high_regime_cardinality},
          {"detect_rate", det.high_detect_rate},
          {"digest_rate", det.high_digest_rate}}},
        {"low_regime",
         {{"applicable", det.low_regime_applicable},
          {"cardinality", det.low_regime_cardinality},
          {"flag_rate", det.low_flag_rate},
          {"digest_rate", det.low_digest_rate}}},
        {"pass", rates.pass() && det.pass()},
    };
    std::cout << "violation rates: lower=" << rates.lower_violation << " upper=" << rates.upper_violation
              << " R=" << rates.r_violation << " (limit " << rates.bound + rates.slack << ")\n";
    if (det.high_regime_feasible)
        std::cout << "high regime detect rate: " << det.high_detect_rate << " (need >= "
                  << 1.0 - det.bound - det.slack << ")\n";
    else
        std::cout << "high regime infeasible for these parameters\n";
    if (det.low_regime_applicable)
        std::cout << "low regime flag rate: " << det.low_flag_rate << " (limit " << det.bound + det.slack
                  << ")\n";
    else
        std::cout << "low regime skipped: theta < 4/w\n";
    if (!bounds_out.empty()) write_json(bounds_out, out);
    if (!(rates.pass() && det.pass())) throw CliError(kExitViolation, "bound violated");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
