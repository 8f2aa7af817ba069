#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "core/rng.hpp"
#include "core/sim.hpp"

using namespace nanomac;
using namespace nanomac::sim;

TEST_CASE("splitmix64 matches the published reference sequence") {
    std::uint64_t state = 0;
    CHECK(splitmix64_next(state) == 0xe220a8397b1dcdafull);
    CHECK(splitmix64_next(state) == 0x6e789e6aa1b965f4ull);
    CHECK(splitmix64_next(state) == 0x06c45d188009454full);
}

TEST_CASE("random streams replay identically for identical (seed, id)") {
    RandomStream a(0x1234, 7);
    RandomStream b(0x1234, 7);
    for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());

    // different stream ids diverge immediately
    RandomStream c(0x1234, 8);
    CHECK(RandomStream(0x1234, 7).next_u64() != c.next_u64());
}

TEST_CASE("per-node draws do not depend on processing order") {
    auto take = [](RandomStream s, int n) {
        std::vector<std::uint64_t> out;
        for (int i = 0; i < n; ++i) out.push_back(s.next_u64());
        return out;
    };
    const auto alone = take(RandomStream(99, 1), 8);

    // interleave with a second stream; stream 1 must be unaffected
    RandomStream one(99, 1), two(99, 2);
    std::vector<std::uint64_t> interleaved;
    for (int i = 0; i < 8; ++i) {
        (void)two.next_u64();
        interleaved.push_back(one.next_u64());
        (void)two.next_u64();
    }
    CHECK(interleaved == alone);
}

TEST_CASE("uniform_int bound one always yields zero") {
    RandomStream rng(1, 0);
    for (int i = 0; i < 10; ++i) CHECK(rng.uniform_int(1) == 0);
}

TEST_CASE("uniform_int passes a frequency check at bound 8") {
    RandomStream rng(0xabcdef, 0);
    const int draws = 1000000;
    int counts[8] = {0};
    for (int i = 0; i < draws; ++i) ++counts[rng.uniform_int(8)];
    const double expected = draws / 8.0;
    const double three_sigma = 3.0 * std::sqrt(draws * (1.0 / 8.0) * (7.0 / 8.0));
    for (int v = 0; v < 8; ++v)
        CHECK(std::fabs(counts[v] - expected) <= three_sigma);
}

TEST_CASE("uniform_int stays unbiased for an awkward bound") {
    RandomStream rng(0xfeed, 0);
    const int draws = 300000;
    int counts[3] = {0};
    for (int i = 0; i < draws; ++i) ++counts[rng.uniform_int(3)];
    const double expected = draws / 3.0;
    const double four_sigma = 4.0 * std::sqrt(draws * (1.0 / 3.0) * (2.0 / 3.0));
    for (int v = 0; v < 3; ++v)
        CHECK(std::fabs(counts[v] - expected) <= four_sigma);
}

TEST_CASE("frozen golden sequence for a pinned (seed, stream)") {
    // generated once with this implementation and pinned; guards against
    // platform or refactoring drift
    RandomStream rng(0x00cafe, 3);
    const std::uint64_t expected[4] = {
        0xc8f7dfa82f15841cull,
        0x47e8715c6d4ae4eaull,
        0x2a65cc1681878143ull,
        0xc52e78437515cf35ull,
    };
    for (int i = 0; i < 4; ++i) CHECK(rng.next_u64() == expected[i]);
}

TEST_CASE("simtime arithmetic is exact and overflow is a hard fault") {
    const SimTime minute = SimTime::from_minutes(1);
    CHECK(minute.femtoseconds() == SimTime::rep(60000000000000000ull));

    // a 1000-superframe sweep at 12 minutes exceeds 64-bit femtoseconds
    const SimTime long_run = SimTime::from_minutes(12) * 1000;
    CHECK(long_run.femtoseconds() > SimTime::rep(~std::uint64_t(0)));
    CHECK(long_run.to_string() == "720000000000000000000");

    const SimTime huge(~SimTime::rep(0));
    CHECK_THROWS_AS(huge + SimTime::from_fs(1), std::overflow_error);
    CHECK_THROWS_AS(huge * 2, std::overflow_error);
    CHECK_THROWS_AS(SimTime::from_fs(1) - SimTime::from_fs(2), std::overflow_error);
}

TEST_CASE("events dispatch in time order with insertion-order ties") {
    Engine engine;
    REQUIRE(engine.schedule(SimTime::from_fs(5), EventKind::FrameArrival, 10) == Status::Ok);
    REQUIRE(engine.schedule(SimTime::from_fs(3), EventKind::SlotBoundary, 11) == Status::Ok);
    REQUIRE(engine.schedule(SimTime::from_fs(5), EventKind::HarvestSample, 12) == Status::Ok);

    std::vector<std::uint32_t> order;
    engine.run_until(SimTime::from_fs(100), [&](Engine&, const Event& ev) {
        order.push_back(ev.target);
    });
    CHECK(order == std::vector<std::uint32_t>{11, 10, 12});
    CHECK(engine.now() == SimTime::from_fs(100));
}

TEST_CASE("scheduling into the past is refused") {
    Engine engine;
    REQUIRE(engine.schedule(SimTime::from_fs(5), EventKind::BeaconDue, 0) == Status::Ok);
    engine.run_until(SimTime::from_fs(5), [](Engine&, const Event&) {});
    CHECK(engine.now() == SimTime::from_fs(5));
    CHECK(engine.schedule(SimTime::from_fs(4), EventKind::BeaconDue, 0) == Status::PastEvent);
    CHECK(engine.schedule(SimTime::from_fs(5), EventKind::BeaconDue, 0) == Status::Ok);
}

TEST_CASE("an empty queue returns immediately with the clock at the horizon") {
    Engine engine;
    const std::uint64_t dispatched =
        engine.run_until(SimTime::from_minutes(3), [](Engine&, const Event&) {});
    CHECK(dispatched == 0);
    CHECK(engine.now() == SimTime::from_minutes(3));
}

TEST_CASE("a periodic beacon dispatches exactly horizon/interval times") {
    Engine engine;
    const SimTime interval = SimTime::from_minutes(10);
    REQUIRE(engine.schedule(interval, EventKind::BeaconDue, 0) == Status::Ok);

    std::uint64_t beacons = 0;
    SimTime previous{};
    engine.run_until(SimTime::from_minutes(100), [&](Engine& eng, const Event& ev) {
        CHECK(previous <= eng.now());  // the clock never moves backward
        previous = eng.now();
        if (ev.kind != EventKind::BeaconDue) return;
        ++beacons;
        (void)eng.schedule(eng.now() + interval, EventKind::BeaconDue, 0);
    });
    CHECK(beacons == 10);  // at 10, 20, ..., 100 minutes
}

TEST_CASE("identical runs produce byte-identical traces") {
    auto run_once = [] {
        Engine engine;
        std::string trace;
        engine.set_trace(&trace);
        (void)engine.schedule(SimTime::from_fs(2), EventKind::BeaconDue, 1);
        (void)engine.schedule(SimTime::from_fs(2), EventKind::FrameArrival, 2);
        (void)engine.schedule(SimTime::from_fs(9), EventKind::ExperimentCheckpoint, 3);
        engine.run_until(SimTime::from_fs(50), [](Engine&, const Event&) {});
        return trace;
    };
    const std::string a = run_once();
    CHECK(a == run_once());
    CHECK(a == "2,0,BeaconDue,1\n2,1,FrameArrival,2\n9,2,ExperimentCheckpoint,3\n");
}
