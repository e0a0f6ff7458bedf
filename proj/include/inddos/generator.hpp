#pragma once
// Synthetic trace generation. The background is a Zipf-skewed population of
// destinations with a controllable band of high-cardinality destinations
// (stand-in for the heaviest legitimate services); attacks inject a block of
// distinct spoofed bot sources at a victim that never appears in the
// background destination pool. The generator returns the planted per-interval
// ground truth alongside the packets.
//
// Randomness comes from a self-contained splitmix64 stream so identical
// (spec, seed) pairs produce byte-identical traces on any platform.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "inddos/metrics.hpp"
#include "inddos/trace.hpp"

namespace inddos {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound).
    std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

struct AttackSpec {
    std::uint32_t victim = 0;  // IPv4, must not collide with background destinations
    std::uint32_t bot_count = 0;
    std::uint32_t start_interval = 0;
    std::uint32_t end_interval = 0;  // inclusive
    std::uint64_t packets_per_second = 0;
};

struct TraceSpec {
    std::uint64_t legit_sources = 60000;   // distinct background sources per interval (approx)
    std::uint32_t legit_dest_count = 8000;
    double zipf_s = 0.9;                   // tail skew
    std::uint32_t heavy_dest_count = 40;   // destinations with cardinality in [heavy_min, max_cardinality]
    std::uint32_t heavy_min = 250;
    std::uint32_t max_cardinality = 500;   // largest legitimate per-interval cardinality
    std::uint64_t packets_per_interval = 0;  // 0 = one packet per flow; larger adds duplicates
    std::uint32_t intervals = 10;
    std::uint64_t interval_us = 5'000'000;
    std::vector<AttackSpec> attacks;

    void validate() const {
        if (legit_dest_count == 0 || intervals == 0 || interval_us == 0)
            throw std::invalid_argument("TraceSpec: empty dimensions");
        if (heavy_dest_count > legit_dest_count)
            throw std::invalid_argument("TraceSpec: heavy_dest_count exceeds destination pool");
        if (heavy_min > max_cardinality)
            throw std::invalid_argument("TraceSpec: heavy_min exceeds max_cardinality");
        for (const auto& a : attacks) {
            if (a.bot_count < 1) throw std::invalid_argument("TraceSpec: attack needs bot_count >= 1");
            if (a.end_interval < a.start_interval || a.end_interval >= intervals)
                throw std::invalid_argument("TraceSpec: attack interval range out of bounds");
            if (a.victim >= 0xAC100000u && a.victim < 0xAC100000u + legit_dest_count)
                throw std::invalid_argument("TraceSpec: attack victim inside background destination pool");
        }
    }
};

struct GeneratedTrace {
    std::vector<TraceRecord> records;           // time-ordered
    std::vector<GroundTruth> truth;             // one per interval
};

namespace detail {

// Background addressing: destinations 172.16.0.0+k, sources 10.0.0.0+counter,
// bots 100.64.0.0+counter (disjoint from background sources by construction).
inline constexpr std::uint32_t kDestBase = 0xAC100000u;   // 172.16.0.0
inline constexpr std::uint32_t kSourceBase = 0x0A000000u; // 10.0.0.0
inline constexpr std::uint32_t kBotBase = 0x64400000u;    // 100.64.0.0

}  // namespace detail

inline GeneratedTrace generate(const TraceSpec& spec, std::uint64_t seed) {
    spec.validate();
    SplitMix64 rng(seed);

    // Per-destination cardinality profile, fixed across intervals.
    std::vector<std::uint32_t> card(spec.legit_dest_count, 0);
    std::uint64_t heavy_total = 0;
    for (std::uint32_t k = 0; k < spec.heavy_dest_count; ++k) {
        const std::uint64_t span = spec.max_cardinality - spec.heavy_min + 1;
        card[k] = spec.heavy_min + static_cast<std::uint32_t>(rng.below(span));
        heavy_total += card[k];
    }
    const std::uint32_t tail_count = spec.legit_dest_count - spec.heavy_dest_count;
    if (tail_count > 0) {
        double unscaled = 0.0;
        for (std::uint32_t k = 0; k < tail_count; ++k)
            unscaled += std::pow(static_cast<double>(k + 1), -spec.zipf_s);
        const double budget = heavy_total < spec.legit_sources
                                  ? static_cast<double>(spec.legit_sources - heavy_total)
                                  : static_cast<double>(tail_count);
        const double scale = budget / unscaled;
        for (std::uint32_t k = 0; k < tail_count; ++k) {
            const double c = scale * std::pow(static_cast<double>(k + 1), -spec.zipf_s);
            const auto v = static_cast<std::uint32_t>(std::lround(std::max(1.0, c)));
            card[spec.heavy_dest_count + k] = std::min(v, spec.heavy_min > 1 ? spec.heavy_min - 1 : 1);
        }
    }

    GeneratedTrace out;
    std::uint32_t source_counter = 0;
    std::uint32_t bot_counter = 0;

    for (std::uint32_t iv = 0; iv < spec.intervals; ++iv) {
        const std::uint64_t iv_start = static_cast<std::uint64_t>(iv) * spec.interval_us;
        GroundTruth gt;
        std::vector<TraceRecord> packets;

        // Background flows: one fresh distinct source per flow.
        for (std::uint32_t k = 0; k < spec.legit_dest_count; ++k) {
            const std::uint32_t dst = detail::kDestBase + k;
            for (std::uint32_t f = 0; f < card[k]; ++f) {
                TraceRecord rec;
                rec.ts_us = iv_start + rng.below(spec.interval_us);
                rec.src = detail::kSourceBase + source_counter++;
                rec.dst = dst;
                packets.push_back(rec);
            }
            gt.cardinality[dst] = card[k];
            gt.n += card[k];
        }

        // Duplicate packets up to the requested per-interval volume.
        if (spec.packets_per_interval > packets.size()) {
            const std::uint64_t extra = spec.packets_per_interval - packets.size();
            const std::size_t base = packets.size();
            for (std::uint64_t e = 0; e < extra; ++e) {
                TraceRecord rec = packets[rng.below(base)];
                rec.ts_us = iv_start + rng.below(spec.interval_us);
                packets.push_back(rec);
            }
        }

        // Attacks active in this interval.
        for (const auto& atk : spec.attacks) {
            if (iv < atk.start_interval || iv > atk.end_interval) continue;
            const std::uint32_t first_bot = bot_counter;
            const double seconds = static_cast<double>(spec.interval_us) / 1e6;
            std::uint64_t pkt_total = static_cast<std::uint64_t>(
                std::llround(static_cast<double>(atk.packets_per_second) * seconds));
            pkt_total = std::max<std::uint64_t>(pkt_total, atk.bot_count);
            for (std::uint64_t p = 0; p < pkt_total; ++p) {
                TraceRecord rec;
                rec.ts_us = iv_start + rng.below(spec.interval_us);
                rec.dst = atk.victim;
                rec.src = detail::kBotBase + first_bot +
                          (p < atk.bot_count ? static_cast<std::uint32_t>(p)
                                             : static_cast<std::uint32_t>(rng.below(atk.bot_count)));
                packets.push_back(rec);
            }
            bot_counter = first_bot + atk.bot_count;
            gt.cardinality[atk.victim] += atk.bot_count;
            gt.n += atk.bot_count;
        }

        std::stable_sort(packets.begin(), packets.end(),
                         [](const TraceRecord& a, const TraceRecord& b) { return a.ts_us < b.ts_us; });
        out.records.insert(out.records.end(), packets.begin(), packets.end());
        out.truth.push_back(std::move(gt));
    }
    return out;
}

}  // namespace inddos
