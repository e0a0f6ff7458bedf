#pragma once
// Exact per-interval ground truth and detection metrics.

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "inddos/trace.hpp"

namespace inddos {

struct GroundTruth {
    std::unordered_map<std::uint32_t, std::uint64_t> cardinality;  // dst -> E_dst
    std::uint64_t n = 0;                                           // distinct sources in interval

    std::unordered_set<std::uint32_t> victims(std::uint64_t threshold) const {
        std::unordered_set<std::uint32_t> out;
        for (const auto& [dst, e] : cardinality)
            if (e > threshold) out.insert(dst);
        return out;
    }
};

// Brute-force oracle: per-destination distinct-source sets.
inline GroundTruth exact_cardinalities(const std::vector<TraceRecord>& records) {
    std::unordered_map<std::uint32_t, std::unordered_set<std::uint32_t>> per_dst;
    std::unordered_set<std::uint32_t> sources;
    for (const auto& r : records) {
        per_dst[r.dst].insert(r.src);
        sources.insert(r.src);
    }
    GroundTruth gt;
    gt.n = sources.size();
    for (const auto& [dst, srcs] : per_dst) gt.cardinality[dst] = srcs.size();
    return gt;
}

struct MetricsReport {
    std::uint64_t true_positives = 0;
    std::uint64_t false_positives = 0;
    std::uint64_t false_negatives = 0;
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
};

// R = TP/(TP+FN), Pr = TP/(TP+FP), F1 = 2*Pr*R/(Pr+R).
// Degenerate conventions: no true victims -> recall 1; nothing detected ->
// precision 1 (no false accusations); Pr+R == 0 -> F1 = 0.
inline MetricsReport score(const std::unordered_set<std::uint32_t>& detected,
                           const std::unordered_set<std::uint32_t>& truth) {
    MetricsReport rep;
    for (std::uint32_t d : detected)
        truth.contains(d) ? ++rep.true_positives : ++rep.false_positives;
    for (std::uint32_t t : truth)
        if (!detected.contains(t)) ++rep.false_negatives;
    const auto tp = static_cast<double>(rep.true_positives);
    rep.recall = truth.empty() ? 1.0 : tp / static_cast<double>(rep.true_positives + rep.false_negatives);
    rep.precision = detected.empty() ? 1.0 : tp / static_cast<double>(rep.true_positives + rep.false_positives);
    rep.f1 = (rep.precision + rep.recall > 0.0)
                 ? 2.0 * rep.precision * rep.recall / (rep.precision + rep.recall)
                 : 0.0;
    return rep;
}

}  // namespace inddos
