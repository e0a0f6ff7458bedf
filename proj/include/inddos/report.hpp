#pragma once
// Run reports: per-interval detection results scored against the exact
// oracle, aggregate means across intervals, and JSON serialization. The
// machine-readable records and the human summary are rendered from the same
// struct so they cannot disagree.

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "inddos/detector.hpp"
#include "inddos/metrics.hpp"

namespace inddos {

inline constexpr int kReportSchemaVersion = 1;

struct IntervalReport {
    std::uint32_t interval_index = 0;
    std::vector<std::uint32_t> detected;
    std::vector<std::uint32_t> truth_victims;
    MetricsReport metrics;
    std::uint64_t digest_bytes = 0;
    std::uint64_t packet_count = 0;
};

struct RunReport {
    std::vector<IntervalReport> intervals;
    double mean_recall = 0.0;
    double mean_precision = 0.0;
    double mean_f1 = 0.0;
    std::uint64_t total_packets = 0;
    std::uint64_t total_digest_bytes = 0;
    double throughput_pps = 0.0;
    DetectionConfig config;
};

inline RunReport build_report(const DetectionRun& run, const std::vector<GroundTruth>& truth,
                              const DetectionConfig& cfg, double elapsed_seconds) {
    RunReport rep;
    rep.config = cfg;
    const std::uint64_t threshold = cfg.threshold();
    for (const auto& summary : run.summaries) {
        IntervalReport ir;
        ir.interval_index = summary.interval_index;
        ir.detected = summary.victims;
        ir.digest_bytes = summary.digest_bytes;
        ir.packet_count = summary.packet_count;
        std::unordered_set<std::uint32_t> detected(summary.victims.begin(), summary.victims.end());
        std::unordered_set<std::uint32_t> truth_set;
        if (summary.interval_index < truth.size())
            truth_set = truth[summary.interval_index].victims(threshold);
        ir.truth_victims.assign(truth_set.begin(), truth_set.end());
        std::sort(ir.truth_victims.begin(), ir.truth_victims.end());
        ir.metrics = score(detected, truth_set);
        rep.total_packets += ir.packet_count;
        rep.total_digest_bytes += ir.digest_bytes;
        rep.intervals.push_back(std::move(ir));
    }
    if (!rep.intervals.empty()) {
        for (const auto& ir : rep.intervals) {
            rep.mean_recall += ir.metrics.recall;
            rep.mean_precision += ir.metrics.precision;
            rep.mean_f1 += ir.metrics.f1;
        }
        const auto k = static_cast<double>(rep.intervals.size());
        rep.mean_recall /= k;
        rep.mean_precision /= k;
        rep.mean_f1 /= k;
    }
    if (elapsed_seconds > 0.0) rep.throughput_pps = static_cast<double>(rep.total_packets) / elapsed_seconds;
    return rep;
}

inline nlohmann::json config_to_json(const DetectionConfig& cfg) {
    return {
        {"theta", cfg.theta},
        {"n", cfg.n},
        {"interval_us", cfg.interval_us},
        {"d", cfg.params.d},
        {"w", cfg.params.w},
        {"m", cfg.params.m},
        {"hardware_mode", cfg.params.hardware_mode},
        {"key_src", cfg.key_src_mode == KeyMode::IpPort ? "ip+port" : "ip"},
        {"key_dst", cfg.key_dst_mode == KeyMode::IpPort ? "ip+port" : "ip"},
    };
}

inline nlohmann::json interval_to_json(const IntervalReport& ir) {
    auto ips = [](const std::vector<std::uint32_t>& v) {
        nlohmann::json arr = nlohmann::json::array();
        for (std::uint32_t ip : v) arr.push_back(ipv4_to_string(ip));
        return arr;
    };
    return {
        {"interval", ir.interval_index},
        {"detected", ips(ir.detected)},
        {"truth", ips(ir.truth_victims)},
        {"recall", ir.metrics.recall},
        {"precision", ir.metrics.precision},
        {"f1", ir.metrics.f1},
        {"digest_bytes", ir.digest_bytes},
        {"packets", ir.packet_count},
    };
}

inline nlohmann::json report_to_json(const RunReport& rep) {
    nlohmann::json j = {
        {"schema", kReportSchemaVersion},
        {"config", config_to_json(rep.config)},
        {"mean_recall", rep.mean_recall},
        {"mean_precision", rep.mean_precision},
        {"mean_f1", rep.mean_f1},
        {"total_packets", rep.total_packets},
        {"total_digest_bytes", rep.total_digest_bytes},
        {"throughput_pps", rep.throughput_pps},
    };
    j["intervals"] = nlohmann::json::array();
    for (const auto& ir : rep.intervals) j["intervals"].push_back(interval_to_json(ir));
    return j;
}

inline void print_report_summary(std::ostream& os, const RunReport& rep) {
    os << "intervals: " << rep.intervals.size() << "  packets: " << rep.total_packets
       << "  digest bytes: " << rep.total_digest_bytes << "\n";
    for (const auto& ir : rep.intervals) {
        os << "  interval " << ir.interval_index << ": detected " << ir.detected.size() << "/"
           << ir.truth_victims.size() << " victims, R=" << ir.metrics.recall
           << " Pr=" << ir.metrics.precision << " F1=" << ir.metrics.f1 << "\n";
    }
    os << "mean R=" << rep.mean_recall << " Pr=" << rep.mean_precision << " F1=" << rep.mean_f1
       << "  throughput=" << rep.throughput_pps << " pkt/s\n";
}

}  // namespace inddos
