#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "inddos/detector.hpp"

using namespace inddos;

namespace {

DetectionConfig small_config() {
    DetectionConfig cfg;
    cfg.theta = 0.1;
    cfg.n = 100;  // threshold 10, trigger 11
    cfg.interval_us = 1'000'000;
    cfg.params = {3, 1024, 1024, false};
    return cfg;
}

// One packet per distinct source aimed at dst, spread inside an interval.
std::vector<TraceRecord> fan_in(std::uint32_t dst, std::uint32_t sources, std::uint32_t interval,
                                std::uint64_t interval_us, std::uint32_t src_base = 0x0A000000u) {
    std::vector<TraceRecord> out;
    for (std::uint32_t s = 0; s < sources; ++s) {
        TraceRecord r;
        r.ts_us = static_cast<std::uint64_t>(interval) * interval_us + s;
        r.src = src_base + s;
        r.dst = dst;
        out.push_back(r);
    }
    return out;
}

}  // namespace

TEST_CASE("threshold arithmetic") {
    DetectionConfig cfg;
    cfg.theta = 0.005;
    cfg.n = 60000;
    CHECK(cfg.threshold() == 300);

    cfg.theta = 0.1;
    cfg.n = 105;  // floor(10.5) = 10
    CHECK(cfg.threshold() == 10);
}

TEST_CASE("config validation") {
    DetectionConfig cfg = small_config();
    CHECK_NOTHROW(cfg.validate());
    cfg.theta = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.theta = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config();
    cfg.n = 5;  // theta*n < 1
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config();
    cfg.interval_us = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    cfg = small_config();
    CHECK(cfg.theta_hypothesis_holds());  // 0.1 >= 4/1024
    cfg.theta = 0.002;
    CHECK_FALSE(cfg.theta_hypothesis_holds());
}

TEST_CASE("digest fires exactly once at threshold+1") {
    const auto cfg = small_config();
    const std::uint32_t victim = 0xC6336401u;
    const auto run = run_detection(fan_in(victim, 60, 0, cfg.interval_us), cfg);

    REQUIRE(run.digests.size() == 1);
    CHECK(run.digests[0].victim == victim);
    CHECK(run.digests[0].interval_index == 0);
    CHECK(run.digests[0].estimate_at_detection == cfg.threshold() + 1);

    REQUIRE(run.summaries.size() == 1);
    CHECK(run.summaries[0].victims == std::vector<std::uint32_t>{victim});
    CHECK(run.summaries[0].digest_bytes == 4);
    CHECK(run.summaries[0].packet_count == 60);
}

TEST_CASE("below-threshold destination stays silent") {
    const auto cfg = small_config();
    const auto run = run_detection(fan_in(0xC6336401u, 9, 0, cfg.interval_us), cfg);
    CHECK(run.digests.empty());
    CHECK(run.summaries[0].digest_bytes == 0);
}

TEST_CASE("interval reset re-arms detection") {
    const auto cfg = small_config();
    const std::uint32_t victim = 0xC6336401u;
    auto records = fan_in(victim, 60, 0, cfg.interval_us);
    const auto second = fan_in(victim, 60, 1, cfg.interval_us);
    records.insert(records.end(), second.begin(), second.end());

    const auto run = run_detection(records, cfg);
    REQUIRE(run.digests.size() == 2);
    CHECK(run.digests[0].interval_index == 0);
    CHECK(run.digests[1].interval_index == 1);
    REQUIRE(run.summaries.size() == 2);
    CHECK(run.summaries[1].victims == std::vector<std::uint32_t>{victim});
}

TEST_CASE("empty intervals still get summaries") {
    const auto cfg = small_config();
    auto records = fan_in(0xC6336401u, 5, 0, cfg.interval_us);
    const auto late = fan_in(0xC6336402u, 5, 3, cfg.interval_us);
    records.insert(records.end(), late.begin(), late.end());

    const auto run = run_detection(records, cfg);
    REQUIRE(run.summaries.size() == 4);
    for (std::uint32_t i = 0; i < 4; ++i) CHECK(run.summaries[i].interval_index == i);
    CHECK(run.summaries[1].packet_count == 0);
    CHECK(run.summaries[2].packet_count == 0);
}

TEST_CASE("two victims, two digests, emission order preserved") {
    const auto cfg = small_config();
    const std::uint32_t v1 = 0xC6336401u, v2 = 0xC6336402u;
    auto records = fan_in(v1, 40, 0, cfg.interval_us, 0x0A000000u);
    const auto more = fan_in(v2, 40, 0, cfg.interval_us, 0x0B000000u);
    records.insert(records.end(), more.begin(), more.end());
    // interleave by timestamp
    const auto run = run_detection(records, cfg, /*sort_input=*/true);
    REQUIRE(run.digests.size() == 2);
    CHECK(run.summaries[0].digest_bytes == 8);
    CHECK(run.summaries[0].victims.size() == 2);
    CHECK(run.digests[0].detection_ts_us <= run.digests[1].detection_ts_us);
}

TEST_CASE("duplicate packets never re-trigger") {
    const auto cfg = small_config();
    const std::uint32_t victim = 0xC6336401u;
    auto records = fan_in(victim, 30, 0, cfg.interval_us);
    auto dupes = records;  // replay the same flows
    for (auto& r : dupes) r.ts_us += 30;
    records.insert(records.end(), dupes.begin(), dupes.end());
    const auto run = run_detection(records, cfg, true);
    CHECK(run.digests.size() == 1);
}

TEST_CASE("unsorted input rejected unless sorting requested") {
    const auto cfg = small_config();
    std::vector<TraceRecord> records(2);
    records[0].ts_us = 10;
    records[1].ts_us = 5;
    CHECK_THROWS_AS(run_detection(records, cfg), TraceError);
    CHECK_NOTHROW(run_detection(records, cfg, true));
}

TEST_CASE("salt changes placement but not detection semantics") {
    auto cfg = small_config();
    const std::uint32_t victim = 0xC6336401u;
    const auto records = fan_in(victim, 60, 0, cfg.interval_us);

    cfg.salt = 0xDEADBEEFu;
    const auto salted = run_detection(records, cfg);
    REQUIRE(salted.digests.size() == 1);
    CHECK(salted.digests[0].victim == victim);

    Detector a(cfg);
    cfg.salt = std::nullopt;
    Detector b(cfg);
    for (const auto& r : records) {
        a.process_packet(r);
        b.process_packet(r);
    }
    CHECK(a.sketch().serialize() != b.sketch().serialize());
    // Both placements see 60 distinct sources with at most a few bit collisions.
    CHECK(a.query(victim) >= 55);
    CHECK(b.query(victim) >= 55);
}
