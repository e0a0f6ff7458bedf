#pragma once
// Theoretical accuracy bounds and the Monte Carlo experiments that check
// their probability claims. Independent hash draws are obtained by salting
// the flow keys per trial rather than inventing new CRC polynomials, so the
// production hash path is exercised unchanged.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "inddos/bacon.hpp"
#include "inddos/flow_key.hpp"
#include "inddos/generator.hpp"

namespace inddos {

// Estimation gap of the Direct Bitmap side: 2(n - m(1 - e^{-n/m})).
// With this probability-(1/2)^d slack, E_dst - gap < estimate.
inline double lower_gap(double n, double m) {
    return 2.0 * (n - m * (1.0 - std::exp(-n / m)));
}

// Collision inflation of the Count-min side: 2m(1 - e^{-n/(m w)}).
// With the same probability, estimate <= E_dst + gap.
inline double upper_gap(double n, double m, double w) {
    return 2.0 * m * (1.0 - std::exp(-n / (m * w)));
}

namespace detail {

struct TrialOutcome {
    std::uint64_t estimate = 0;
    std::uint64_t r_min = 0;      // min over rows of foreign sources in the tracked segment
    bool est_exceeds = false;     // estimate > floor(theta*n)
    bool digest = false;          // equality-rule digest fired for the tracked dst
};

// One salted trial: n distinct sources, E of them contacting a tracked
// destination, the rest spread over a pool of foreign destinations. Packets
// are fed in shuffled order so the digest rule sees a realistic interleaving.
inline TrialOutcome run_trial(const SketchParams& params, std::uint64_t n, std::uint64_t E,
                              std::uint32_t foreign_dests, std::uint64_t threshold, SplitMix64& rng) {
    const std::uint32_t salt = static_cast<std::uint32_t>(rng.next());
    BaconSketch sketch(params, hash_family(params.d, true));

    constexpr std::uint32_t kTrackedDst = 0xC6336401u;  // 198.51.100.1
    const FlowKey tracked_key = make_key(kTrackedDst, KeyMode::Ip, 0, salt);

    struct Flow {
        std::uint32_t src;
        std::uint32_t dst;
    };
    std::vector<Flow> flows;
    flows.reserve(n);
    for (std::uint64_t i = 0; i < E; ++i)
        flows.push_back({static_cast<std::uint32_t>(i), kTrackedDst});
    for (std::uint64_t i = E; i < n; ++i)
        flows.push_back({static_cast<std::uint32_t>(i),
                         0xE0000000u + static_cast<std::uint32_t>(rng.below(foreign_dests))});
    for (std::size_t i = flows.size(); i > 1; --i)
        std::swap(flows[i - 1], flows[rng.below(i)]);

    // Foreign overflow R per row: distinct foreign sources whose destination
    // shares the tracked segment (sources are distinct by construction).
    std::vector<std::uint32_t> tracked_seg(params.d);
    for (std::uint32_t r = 0; r < params.d; ++r)
        tracked_seg[r] = sketch.row_segment(r, tracked_key.bytes());
    std::vector<std::uint64_t> r_per_row(params.d, 0);

    TrialOutcome out;
    for (const auto& f : flows) {
        const FlowKey src = make_key(f.src, KeyMode::Ip, 0, salt);
        const FlowKey dst = make_key(f.dst, KeyMode::Ip, 0, salt);
        const UpdateOutcome u = sketch.update(src.bytes(), dst.bytes());
        if (f.dst == kTrackedDst) {
            if (u.estimate == threshold + 1) out.digest = true;
        } else {
            for (std::uint32_t r = 0; r < params.d; ++r)
                if (sketch.row_segment(r, dst.bytes()) == tracked_seg[r]) ++r_per_row[r];
        }
    }
    out.estimate = sketch.query(tracked_key.bytes());
    out.est_exceeds = out.estimate > threshold;
    out.r_min = *std::min_element(r_per_row.begin(), r_per_row.end());
    return out;
}

inline double binomial_sigma(double p, std::uint64_t trials) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace detail

struct ViolationRates {
    std::uint64_t trials = 0;
    double lower_violation = 0.0;  // E - estimate >= lower_gap
    double upper_violation = 0.0;  // estimate - E >= upper_gap
    double r_violation = 0.0;      // R >= 2n/w
    double bound = 0.0;            // (1/2)^d
    double slack = 0.0;            // three-sigma binomial at the bound
    bool pass() const {
        const double limit = bound + slack;
        return lower_violation <= limit && upper_violation <= limit && r_violation <= limit;
    }
};

inline ViolationRates bound_violation_experiment(const SketchParams& params, std::uint64_t n,
                                                 std::uint64_t tracked_cardinality,
                                                 std::uint64_t trials, std::uint64_t seed,
                                                 std::uint32_t foreign_dests = 4096) {
    if (trials < 100) throw std::invalid_argument("bound_violation_experiment: need >= 100 trials");
    if (tracked_cardinality > n)
        throw std::invalid_argument("bound_violation_experiment: cardinality exceeds n");
    SplitMix64 rng(seed);
    const double lo = lower_gap(static_cast<double>(n), params.m);
    const double hi = upper_gap(static_cast<double>(n), params.m, params.w);
    const double r_limit = 2.0 * static_cast<double>(n) / params.w;

    std::uint64_t lower_cnt = 0, upper_cnt = 0, r_cnt = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto out = detail::run_trial(params, n, tracked_cardinality, foreign_dests, n, rng);
        const double e = static_cast<double>(tracked_cardinality);
        const double est = static_cast<double>(out.estimate);
        if (e - est >= lo) ++lower_cnt;
        if (est - e >= hi) ++upper_cnt;
        if (static_cast<double>(out.r_min) >= r_limit) ++r_cnt;
    }
    ViolationRates rates;
    rates.trials = trials;
    rates.lower_violation = static_cast<double>(lower_cnt) / static_cast<double>(trials);
    rates.upper_violation = static_cast<double>(upper_cnt) / static_cast<double>(trials);
    rates.r_violation = static_cast<double>(r_cnt) / static_cast<double>(trials);
    rates.bound = std::pow(0.5, params.d);
    rates.slack = 3.0 * detail::binomial_sigma(rates.bound, trials);
    return rates;
}

struct DetectionBoundReport {
    std::uint64_t trials = 0;
    double bound = 0.0;  // (1/2)^d
    double slack = 0.0;

    bool high_regime_feasible = false;   // E_dst >= theta*n + lower_gap constructible
    std::uint64_t high_regime_cardinality = 0;
    double high_detect_rate = 0.0;       // estimate exceeds floor(theta*n)
    double high_digest_rate = 0.0;       // equality-rule digest fired

    bool low_regime_applicable = false;  // theta >= 4/w hypothesis
    std::uint64_t low_regime_cardinality = 0;
    double low_flag_rate = 0.0;
    double low_digest_rate = 0.0;

    bool pass() const {
        bool ok = true;
        if (high_regime_feasible) ok = ok && high_detect_rate >= 1.0 - bound - slack;
        if (low_regime_applicable) ok = ok && low_flag_rate <= bound + slack;
        return ok;
    }
};

// Monte Carlo check of the false-negative and false-positive regimes. The
// flag event (estimate above threshold) and the digest event are both
// reported; they can differ when a crossing happens between two packets of
// the tracked destination.
inline DetectionBoundReport detection_bound_check(const SketchParams& params, double theta,
                                                  std::uint64_t n, std::uint64_t trials,
                                                  std::uint64_t seed,
                                                  std::uint32_t foreign_dests = 4096) {
    if (trials < 100) throw std::invalid_argument("detection_bound_check: need >= 100 trials");
    DetectionBoundReport rep;
    rep.trials = trials;
    rep.bound = std::pow(0.5, params.d);
    rep.slack = 3.0 * detail::binomial_sigma(rep.bound, trials);
    const auto threshold = static_cast<std::uint64_t>(std::floor(theta * static_cast<double>(n)));

    const double high_needed = theta * static_cast<double>(n) + lower_gap(static_cast<double>(n), params.m);
    rep.high_regime_feasible = high_needed <= static_cast<double>(n);
    if (rep.high_regime_feasible) {
        rep.high_regime_cardinality = static_cast<std::uint64_t>(std::ceil(high_needed));
        SplitMix64 rng(seed);
        std::uint64_t detect = 0, digest = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            const auto out = detail::run_trial(params, n, rep.high_regime_cardinality, foreign_dests,
                                               threshold, rng);
            if (out.est_exceeds) ++detect;
            if (out.digest) ++digest;
        }
        rep.high_detect_rate = static_cast<double>(detect) / static_cast<double>(trials);
        rep.high_digest_rate = static_cast<double>(digest) / static_cast<double>(trials);
    }

    rep.low_regime_applicable = theta >= 4.0 / static_cast<double>(params.w);
    if (rep.low_regime_applicable) {
        rep.low_regime_cardinality = 2 * n / params.w;
        SplitMix64 rng(seed + 1);
        std::uint64_t flagged = 0, digest = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            const auto out = detail::run_trial(params, n, rep.low_regime_cardinality, foreign_dests,
                                               threshold, rng);
            if (out.est_exceeds) ++flagged;
            if (out.digest) ++digest;
        }
        rep.low_flag_rate = static_cast<double>(flagged) / static_cast<double>(trials);
        rep.low_digest_rate = static_cast<double>(digest) / static_cast<double>(trials);
    }
    return rep;
}

}  // namespace inddos
