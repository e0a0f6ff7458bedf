#include <catch2/catch_amalgamated.hpp>

#include "inddos/generator.hpp"
#include "inddos/metrics.hpp"
#include "inddos/trace.hpp"

using namespace inddos;

namespace {

TraceSpec tiny_spec() {
    TraceSpec spec;
    spec.legit_sources = 2000;
    spec.legit_dest_count = 200;
    spec.heavy_dest_count = 10;
    spec.heavy_min = 30;
    spec.max_cardinality = 60;
    spec.intervals = 3;
    spec.interval_us = 1'000'000;
    return spec;
}

}  // namespace

TEST_CASE("splitmix64 reference values") {
    // Stream for seed 1234567, pinned against the published reference output.
    SplitMix64 rng(1234567);
    CHECK(rng.next() == 6457827717110365317ull);
    CHECK(rng.next() == 3203168211198807973ull);
    CHECK(rng.next() == 9817491932198370423ull);

    SplitMix64 u(42);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.unit();
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
        REQUIRE(u.below(17) < 17);
    }
}

TEST_CASE("spec validation") {
    TraceSpec spec = tiny_spec();
    CHECK_NOTHROW(spec.validate());

    spec.heavy_dest_count = spec.legit_dest_count + 1;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = tiny_spec();
    spec.heavy_min = spec.max_cardinality + 1;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = tiny_spec();
    spec.attacks.push_back({0xAC100005u, 100, 0, 0, 0});  // victim inside background pool
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = tiny_spec();
    spec.attacks.push_back({0xC6336401u, 100, 0, 99, 0});  // interval out of range
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("same seed, same trace; different seed, different trace") {
    const auto spec = tiny_spec();
    const auto a = generate(spec, 7);
    const auto b = generate(spec, 7);
    const auto c = generate(spec, 8);
    CHECK(a.records == b.records);
    CHECK(a.records != c.records);
}

TEST_CASE("planted truth matches the brute-force oracle per interval") {
    auto spec = tiny_spec();
    spec.attacks.push_back({0xC6336401u, 500, 1, 2, 0});
    const auto trace = generate(spec, 11);
    const auto intervals = split_intervals(trace.records, spec.interval_us);

    REQUIRE(trace.truth.size() == spec.intervals);
    REQUIRE(intervals.size() == spec.intervals);
    for (std::uint32_t iv = 0; iv < spec.intervals; ++iv) {
        const auto oracle = exact_cardinalities(intervals[iv].records);
        CHECK(trace.truth[iv].n == oracle.n);
        REQUIRE(trace.truth[iv].cardinality.size() == oracle.cardinality.size());
        for (const auto& [dst, e] : oracle.cardinality) {
            INFO("interval " << iv << " dst " << ipv4_to_string(dst));
            REQUIRE(trace.truth[iv].cardinality.at(dst) == e);
        }
    }
}

TEST_CASE("attack appears only in its interval range with the planted cardinality") {
    auto spec = tiny_spec();
    const std::uint32_t victim = 0xC6336401u;
    spec.attacks.push_back({victim, 500, 1, 1, 0});
    const auto trace = generate(spec, 3);

    CHECK_FALSE(trace.truth[0].cardinality.contains(victim));
    CHECK(trace.truth[1].cardinality.at(victim) == 500);
    CHECK_FALSE(trace.truth[2].cardinality.contains(victim));
    CHECK(trace.truth[1].n == trace.truth[0].n + 500);
}

TEST_CASE("cardinality profile respects the heavy band") {
    const auto spec = tiny_spec();
    const auto trace = generate(spec, 21);
    std::uint32_t heavy = 0;
    for (const auto& [dst, e] : trace.truth[0].cardinality) {
        REQUIRE(e <= spec.max_cardinality);
        if (e >= spec.heavy_min) ++heavy;
    }
    CHECK(heavy == spec.heavy_dest_count);
}

TEST_CASE("records are time-ordered and inside their intervals") {
    auto spec = tiny_spec();
    spec.packets_per_interval = 5000;  // force duplicates
    const auto trace = generate(spec, 5);
    REQUIRE(trace.records.size() >= 3 * 5000);
    for (std::size_t i = 1; i < trace.records.size(); ++i)
        REQUIRE(trace.records[i].ts_us >= trace.records[i - 1].ts_us);
    CHECK(trace.records.back().ts_us < spec.intervals * spec.interval_us);

    // Duplicates add packets but not cardinality.
    const auto intervals = split_intervals(trace.records, spec.interval_us);
    const auto oracle = exact_cardinalities(intervals[0].records);
    CHECK(oracle.n == trace.truth[0].n);
}

TEST_CASE("attack packet volume follows packets_per_second") {
    auto spec = tiny_spec();
    const std::uint32_t victim = 0xC6336401u;
    spec.attacks.push_back({victim, 100, 0, 0, 2000});  // 2000 pps over a 1s interval
    const auto trace = generate(spec, 9);
    std::uint64_t atk_packets = 0;
    for (const auto& r : trace.records)
        if (r.dst == victim) ++atk_packets;
    CHECK(atk_packets == 2000);
    CHECK(trace.truth[0].cardinality.at(victim) == 100);  // spoofed pool stays bot_count wide
}
