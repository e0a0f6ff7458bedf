#pragma once
// Interval detection engine. Every packet updates the sketch and reads the
// fresh estimate in the same pass; a digest is emitted the moment the
// estimate for a destination equals floor(theta*n)+1, which happens at most
// once per destination per interval because the estimate is monotone and
// steps by at most one per packet. Registers reset at interval boundaries.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "inddos/bacon.hpp"
#include "inddos/flow_key.hpp"
#include "inddos/trace.hpp"

namespace inddos {

struct DetectionConfig {
    double theta = 0.005;             // threshold fraction
    std::uint64_t n = 60000;          // per-interval distinct-source budget
    std::uint64_t interval_us = 5'000'000;
    SketchParams params;
    KeyMode key_src_mode = KeyMode::Ip;
    KeyMode key_dst_mode = KeyMode::Ip;
    std::optional<std::uint32_t> salt;  // appended to every hashed key

    // Absolute threshold floor(theta*n); digest trigger is threshold()+1.
    std::uint64_t threshold() const { return static_cast<std::uint64_t>(std::floor(theta * static_cast<double>(n))); }

    void validate() const {
        if (theta <= 0.0 || theta >= 1.0) throw std::invalid_argument("DetectionConfig: require 0 < theta < 1");
        if (theta * static_cast<double>(n) < 1.0) throw std::invalid_argument("DetectionConfig: require theta*n >= 1");
        if (interval_us == 0) throw std::invalid_argument("DetectionConfig: interval length must be > 0");
        params.validate();
    }

    // Theorem 4's hypothesis; advisory only.
    bool theta_hypothesis_holds() const { return theta >= 4.0 / static_cast<double>(params.w); }
};

struct Digest {
    std::uint32_t victim = 0;  // destination IPv4
    std::uint32_t interval_index = 0;
    std::uint64_t detection_ts_us = 0;
    std::uint64_t estimate_at_detection = 0;  // == floor(theta*n)+1
};

struct IntervalSummary {
    std::uint32_t interval_index = 0;
    std::vector<std::uint32_t> victims;  // emission order
    std::uint64_t digest_bytes = 0;      // 4 bytes per digest
    std::uint64_t packet_count = 0;
};

class Detector {
public:
    explicit Detector(const DetectionConfig& cfg)
        : cfg_(cfg), sketch_(cfg.params, hash_family(cfg.params.d, true)) {
        cfg_.validate();
    }

    // rec must belong to the current interval; run() handles rollover.
    std::optional<Digest> process_packet(const TraceRecord& rec) {
        ++packet_count_;
        const FlowKey src = make_key(rec.src, cfg_.key_src_mode, rec.src_port, cfg_.salt);
        const FlowKey dst = make_key(rec.dst, cfg_.key_dst_mode, rec.dst_port, cfg_.salt);
        const UpdateOutcome out = sketch_.update(src.bytes(), dst.bytes());
        if (out.estimate == cfg_.threshold() + 1 && !flagged_.contains(rec.dst)) {
            flagged_.insert(rec.dst);
            victims_.push_back(rec.dst);
            Digest dg{rec.dst, interval_index_, rec.ts_us, out.estimate};
            return dg;
        }
        return std::nullopt;
    }

    IntervalSummary advance_interval() {
        IntervalSummary summary{interval_index_, victims_, 4 * static_cast<std::uint64_t>(victims_.size()),
                                packet_count_};
        sketch_.reset();
        flagged_.clear();
        victims_.clear();
        packet_count_ = 0;
        ++interval_index_;
        return summary;
    }

    std::uint32_t query(std::uint32_t dst_ip, std::uint16_t dst_port = 0) const {
        const FlowKey dst = make_key(dst_ip, cfg_.key_dst_mode, dst_port, cfg_.salt);
        return sketch_.query(dst.bytes());
    }

    const BaconSketch& sketch() const { return sketch_; }
    std::uint32_t interval_index() const { return interval_index_; }

private:
    DetectionConfig cfg_;
    BaconSketch sketch_;
    std::unordered_set<std::uint32_t> flagged_;
    std::vector<std::uint32_t> victims_;
    std::uint64_t packet_count_ = 0;
    std::uint32_t interval_index_ = 0;
};

struct DetectionRun {
    std::vector<IntervalSummary> summaries;
    std::vector<Digest> digests;
};

// Batch driver: records must be time-ordered (or sort_input set). Intervals
// with no packets still produce a summary so indices line up with the trace.
inline DetectionRun run_detection(std::vector<TraceRecord> records, const DetectionConfig& cfg,
                                  bool sort_input = false) {
    cfg.validate();
    const auto intervals = split_intervals(std::move(records), cfg.interval_us, sort_input);
    Detector det(cfg);
    DetectionRun run;
    for (const auto& iv : intervals) {
        while (det.interval_index() < iv.index) run.summaries.push_back(det.advance_interval());
        for (const auto& rec : iv.records)
            if (auto dg = det.process_packet(rec)) run.digests.push_back(*dg);
        run.summaries.push_back(det.advance_interval());
    }
    return run;
}

}  // namespace inddos
