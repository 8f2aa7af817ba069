#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/mac.hpp"

using namespace nanomac;
using namespace nanomac::mac;

namespace {

const PulseEnergyParams kParams{};

// Exact P(unique minimum of n draws over window W) by full enumeration.
double p_unique_minimum(int n, int window) {
    long total = 1;
    for (int i = 0; i < n; ++i) total *= window;
    long unique = 0;
    std::vector<int> draw(n);
    for (long t = 0; t < total; ++t) {
        long x = t;
        for (int i = 0; i < n; ++i) {
            draw[i] = int(x % window);
            x /= window;
        }
        int best = window, tied = 0;
        for (int v : draw) {
            if (v < best) {
                best = v;
                tied = 1;
            } else if (v == best) {
                ++tied;
            }
        }
        if (tied == 1) ++unique;
    }
    return double(unique) / double(total);
}

std::vector<ShortAddress> addresses(std::uint32_t n) {
    std::vector<ShortAddress> out(n);
    for (std::uint32_t i = 0; i < n; ++i) out[i] = ShortAddress(i + 1);
    return out;
}

SensorState make_sensor(ShortAddress address, SensorPhase phase = SensorPhase::Associated) {
    SensorState s;
    s.address = address;
    s.phase = phase;
    return s;
}

// pre-screened in development and pinned (see the seed search note in the
// test using it)
constexpr std::uint64_t kSeedDistinctMinima = 1;
constexpr std::uint64_t kSeedRequestCollision = 1;

} // namespace

TEST_CASE("frame costs and the coordinator budget") {
    const FrameCosts costs = FrameCosts::at_scale(kParams, 1.0);
    CHECK(costs.beacon_tx == 192000);
    CHECK(costs.beacon_rx == 3840);
    CHECK(costs.data_tx == 76000);
    CHECK(costs.data_rx == 1520);
    CHECK(costs.ack_tx == 44000);
    CHECK(costs.ack_rx == 880);
    CHECK(costs.command_tx == 80000);
    CHECK(costs.command_rx == 1600);

    CHECK(coordinator_budget_fj(15, kParams, 1.0) == 874800);  // 874.8 pJ
    CHECK(coordinator_budget_fj(12, kParams, 0.5) == 369120);  // 369.12 pJ
    CHECK(coordinator_budget_fj(2, kParams, 1.0) == 283040);
}

TEST_CASE("beacon construction") {
    CoordinatorState coordinator;
    coordinator.member_table = {1, 2, 3};
    coordinator.beacon_list = {1, 2, 3};

    SuperframeConfig config;
    frames::MacFrame beacon = build_beacon(coordinator, config);
    CHECK(coordinator.sequence == 1);  // incremented by the build

    frames::BeaconPayload body;
    REQUIRE(frames::beacon_payload(beacon, body) == Status::Ok);
    CHECK(body.pending_count == 0);
    CHECK(body.addresses[0] == 1);
    CHECK(body.addresses[1] == 2);
    CHECK(body.addresses[2] == 3);
    for (std::size_t i = 3; i < 15; ++i) CHECK(body.addresses[i] == frames::kBroadcastAddress);

    std::vector<std::uint8_t> octets;
    REQUIRE(frames::encode_frame(beacon, octets) == Status::Ok);
    CHECK(octets.size() * 8 == 384);

    // an empty list advertises only the padding sentinel
    CoordinatorState empty;
    frames::MacFrame idle_beacon = build_beacon(empty, config);
    REQUIRE(frames::beacon_payload(idle_beacon, body) == Status::Ok);
    for (const auto a : body.addresses) CHECK(a == frames::kBroadcastAddress);
}

TEST_CASE("beacon moves pending-data entries to the front") {
    CoordinatorState coordinator;
    coordinator.member_table = {1, 2, 3};
    coordinator.beacon_list = {1, 2, 3};
    REQUIRE(queue_downlink(coordinator, 3, {9, 9, 9, 9}) == Status::Ok);

    SuperframeConfig config;
    frames::BeaconPayload body;
    REQUIRE(frames::beacon_payload(build_beacon(coordinator, config), body) == Status::Ok);
    CHECK(body.pending_count == 1);
    CHECK(body.addresses[0] == 3);
    CHECK(body.addresses[1] == 1);
    CHECK(body.addresses[2] == 2);
}

TEST_CASE("contention: single node always wins, empty pool idles") {
    RandomStream rng(0x3a9, 0);
    const auto solo = addresses(1);
    for (int i = 0; i < 20; ++i) {
        const SlotOutcome outcome = csma_contend(solo, rng, {});
        CHECK(outcome.kind == SlotOutcomeKind::Success);
        CHECK(outcome.winner == 1);
    }
    CHECK(csma_contend({}, rng, {}).kind == SlotOutcomeKind::Idle);
}

TEST_CASE("contention success probability matches exact enumeration") {
    for (int n = 2; n <= 6; ++n) {
        const double exact = p_unique_minimum(n, 8);
        RandomStream rng(0x600d, std::uint64_t(n));
        const auto pool = addresses(std::uint32_t(n));
        const int trials = 100000;
        int successes = 0;
        for (int t = 0; t < trials; ++t)
            if (csma_contend(pool, rng, {}).kind == SlotOutcomeKind::Success) ++successes;
        const double observed = double(successes) / trials;
        const double standard_error = std::sqrt(exact * (1.0 - exact) / trials);
        CHECK(std::fabs(observed - exact) <= 3.0 * standard_error);
    }
    // two contenders: 56 of the 64 draw pairs have a unique minimum
    CHECK(p_unique_minimum(2, 8) == doctest::Approx(56.0 / 64.0));
}

TEST_CASE("eighteen contenders succeed about a quarter of the time") {
    RandomStream rng(0x18, 0);
    const auto pool = addresses(18);
    const int trials = 100000;
    int successes = 0;
    for (int t = 0; t < trials; ++t)
        if (csma_contend(pool, rng, {}).kind == SlotOutcomeKind::Success) ++successes;
    CHECK(std::fabs(double(successes) / trials - 0.25) <= 0.01);
}

TEST_CASE("contention outcomes replay under the same seed") {
    const auto pool = addresses(5);
    auto run = [&] {
        RandomStream rng(0xd5, 0);
        std::vector<SlotOutcome> outcomes;
        for (int i = 0; i < 50; ++i) outcomes.push_back(csma_contend(pool, rng, {}));
        return outcomes;
    };
    CHECK(run() == run());
}

TEST_CASE("slot allocation drains winners and carries the rest over") {
    SuperframeConfig config;

    RandomStream rng(7, 0);
    const SlotAllocation empty = allocate_slots({}, config, rng);
    REQUIRE(empty.slots.size() == 15);
    for (const SlotOutcome& o : empty.slots) CHECK(o.kind == SlotOutcomeKind::Idle);
    CHECK(empty.carried_over.empty());

    const auto twenty = addresses(20);
    RandomStream rng20(0x20, 0);
    const SlotAllocation crowded = allocate_slots(twenty, config, rng20);
    std::size_t successes = 0;
    for (const SlotOutcome& o : crowded.slots)
        if (o.kind == SlotOutcomeKind::Success) ++successes;
    CHECK(successes <= 15);
    CHECK(crowded.carried_over.size() >= 5);
    CHECK(successes + crowded.carried_over.size() == 20);
}

TEST_CASE("slot allocation with a clean seed: three straight wins") {
    // seed pre-screened so the three requesters draw distinct minima in each
    // of the first three slots
    RandomStream rng(kSeedDistinctMinima, 0);
    const SlotAllocation run = allocate_slots(addresses(3), SuperframeConfig{}, rng);
    for (int slot = 0; slot < 3; ++slot)
        CHECK(run.slots[slot].kind == SlotOutcomeKind::Success);
    for (int slot = 3; slot < 15; ++slot)
        CHECK(run.slots[slot].kind == SlotOutcomeKind::Idle);
    CHECK(run.carried_over.empty());
}

TEST_CASE("superframe completes when the budget is covered") {
    CoordinatorState coordinator;
    std::vector<SensorState> sensors;
    for (std::uint32_t i = 1; i <= 15; ++i) {
        sensors.push_back(make_sensor(ShortAddress(i)));
        coordinator.member_table.push_back(ShortAddress(i));
        sensors.back().pending_data = std::array<std::uint8_t, 4>{};
    }
    std::vector<SensorState*> active;
    for (auto& s : sensors) active.push_back(&s);

    SuperframeConfig config;
    RandomStream rng(3, 0);
    const SuperframeResult result =
        run_superframe(0, coordinator, active, config, kParams, rng);

    CHECK(result.status == SuperframeStatus::Completed);
    CHECK(result.budget_fj == 874800);
    CHECK(result.coordinator_spent_fj == 874800);
    CHECK(coordinator.energy.level_fj == 1600000 - 874800);

    std::size_t successes = 0;
    for (const SlotOutcome& o : result.slot_outcomes)
        if (o.kind == SlotOutcomeKind::Success) ++successes;
    CHECK(successes == 15);

    for (const auto& s : sensors)
        CHECK(s.energy.level_fj == 800000 - (3840 + 76000 + 880));
}

TEST_CASE("superframe is skipped outright on a thin battery") {
    CoordinatorState coordinator;
    coordinator.energy.level_fj = 100000;  // 100 pJ < 874.8 pJ budget
    std::vector<SensorState> sensors;
    for (std::uint32_t i = 1; i <= 15; ++i) {
        sensors.push_back(make_sensor(ShortAddress(i)));
        sensors.back().pending_data = std::array<std::uint8_t, 4>{};
    }
    std::vector<SensorState*> active;
    for (auto& s : sensors) active.push_back(&s);

    RandomStream rng(4, 0);
    const SuperframeResult result =
        run_superframe(0, coordinator, active, SuperframeConfig{}, kParams, rng);

    CHECK(result.status == SuperframeStatus::Skipped);
    CHECK(result.coordinator_spent_fj == 0);
    CHECK(result.slot_outcomes.empty());
    CHECK(coordinator.energy.level_fj == 100000);
    for (const auto& s : sensors) CHECK(s.energy.level_fj == 800000);
}

TEST_CASE("energy bookkeeping balances to the slot outcomes exactly") {
    RandomStream seeds(0xacc0, 0);
    for (int round = 0; round < 40; ++round) {
        const std::uint32_t m = 1 + std::uint32_t(seeds.uniform_int(15));
        const double scale = 0.5 + 0.1 * double(seeds.uniform_int(6));

        CoordinatorState coordinator;
        std::vector<SensorState> sensors;
        for (std::uint32_t i = 1; i <= m; ++i) {
            sensors.push_back(make_sensor(ShortAddress(i)));
            sensors.back().pending_data = std::array<std::uint8_t, 4>{};
            coordinator.member_table.push_back(ShortAddress(i));
        }
        std::vector<SensorState*> active;
        for (auto& s : sensors) active.push_back(&s);

        SuperframeConfig config;
        config.packet_scale = scale;
        RandomStream rng(seeds.next_u64(), 0);

        const Femtojoules coordinator_before = coordinator.energy.level_fj;
        const SuperframeResult result =
            run_superframe(0, coordinator, active, config, kParams, rng);
        REQUIRE(result.status == SuperframeStatus::Completed);

        const FrameCosts costs = FrameCosts::at_scale(kParams, scale);
        Femtojoules expected_coordinator = costs.beacon_tx;
        Femtojoules expected_sensors = 0;
        for (const SlotOutcome& o : result.slot_outcomes) {
            if (o.kind != SlotOutcomeKind::Success) continue;
            expected_coordinator += costs.data_rx + costs.ack_tx;
            expected_sensors += costs.beacon_rx + costs.data_tx + costs.ack_rx;
        }
        CHECK(result.coordinator_spent_fj == expected_coordinator);
        CHECK(coordinator_before - coordinator.energy.level_fj == expected_coordinator);

        Femtojoules sensor_delta = 0;
        for (const auto& s : sensors) sensor_delta += 800000 - s.energy.level_fj;
        CHECK(sensor_delta == expected_sensors);

        Femtojoules reported = 0;
        for (const auto& [address, spent] : result.sensor_spent_fj) reported += spent;
        CHECK(reported == expected_sensors);
    }
}

TEST_CASE("the coordinator level never goes negative across many intervals") {
    CoordinatorState coordinator;
    std::vector<SensorState> sensors;
    for (std::uint32_t i = 1; i <= 15; ++i) {
        sensors.push_back(make_sensor(ShortAddress(i)));
        coordinator.member_table.push_back(ShortAddress(i));
    }
    SuperframeConfig config;
    RandomStream rng(0x5afe, 0);

    for (int interval = 0; interval < 400; ++interval) {
        std::vector<SensorState*> active;
        for (auto& s : sensors) {
            s.pending_data = std::array<std::uint8_t, 4>{};
            active.push_back(&s);
        }
        const SuperframeResult result =
            run_superframe(std::uint64_t(interval), coordinator, active, config, kParams, rng);
        if (result.status == SuperframeStatus::Completed)
            CHECK(coordinator.energy.level_fj >= 0);
        CHECK(coordinator.energy.level_fj <= coordinator.energy.capacity_fj);
        coordinator.energy.harvest_for(config.duration());
        for (auto& s : sensors) s.energy.harvest_for(config.duration());
    }
}

TEST_CASE("association lifecycle") {
    CoordinatorState coordinator;
    SensorState sensor = make_sensor(0x0042, SensorPhase::Unassociated);
    const Femtojoules coordinator_before = coordinator.energy.level_fj;

    SUBCASE("request then beacon confirms membership") {
        REQUIRE(request_association(sensor, coordinator, kParams) == Status::Ok);
        CHECK(sensor.phase == SensorPhase::AwaitingAssociation);
        CHECK(sensor.energy.level_fj == 800000 - 80000);  // command transmission
        CHECK(coordinator_before - coordinator.energy.level_fj == 1600);  // command reception
        CHECK(coordinator.is_member(0x0042));

        const frames::MacFrame beacon = build_beacon(coordinator, SuperframeConfig{});
        CHECK_FALSE(deliver_beacon(sensor, beacon, kParams));  // nothing pending
        CHECK(sensor.phase == SensorPhase::Associated);
    }

    SUBCASE("one-call handshake") {
        REQUIRE(associate(sensor, coordinator, SuperframeConfig{}, kParams) == Status::Ok);
        CHECK(sensor.phase == SensorPhase::Associated);
        CHECK(coordinator.is_member(0x0042));
        CHECK(coordinator.beacon_list.empty());  // advertisement consumed
    }

    SUBCASE("the sixteenth simultaneous joiner is deferred") {
        for (std::uint32_t i = 1; i <= 15; ++i) {
            SensorState other = make_sensor(ShortAddress(i), SensorPhase::Unassociated);
            REQUIRE(request_association(other, coordinator, kParams) == Status::Ok);
        }
        CHECK(request_association(sensor, coordinator, kParams) == Status::TableFull);
        CHECK(sensor.phase == SensorPhase::Unassociated);
        CHECK(sensor.energy.level_fj == 800000);  // nothing spent on the deferral
    }

    SUBCASE("a sensor below the command cost defers") {
        sensor.energy.level_fj = 50000;  // 50 pJ < the 80 pJ command
        CHECK(request_association(sensor, coordinator, kParams) == Status::InsufficientEnergy);
        CHECK(sensor.phase == SensorPhase::Unassociated);
        CHECK(sensor.energy.level_fj == 50000);
    }

    SUBCASE("the broadcast sentinel is not a joinable address") {
        SensorState bogus = make_sensor(frames::kBroadcastAddress, SensorPhase::Unassociated);
        CHECK(request_association(bogus, coordinator, kParams) == Status::InvalidArgument);
    }
}

TEST_CASE("indirect transfer") {
    CoordinatorState coordinator;
    SensorState sensor = make_sensor(0x0007);
    coordinator.member_table = {0x0007};

    SUBCASE("no pending payload, nothing advertised") {
        frames::BeaconPayload body;
        REQUIRE(frames::beacon_payload(build_beacon(coordinator, SuperframeConfig{}), body) ==
                Status::Ok);
        CHECK(body.pending_count == 0);
    }

    SUBCASE("sole requester gets the payload in one exchange") {
        REQUIRE(queue_downlink(coordinator, 0x0007, {1, 2, 3, 4}) == Status::Ok);
        const frames::MacFrame beacon = build_beacon(coordinator, SuperframeConfig{});
        CHECK(deliver_beacon(sensor, beacon, kParams));  // pending advertised

        const Femtojoules coordinator_before = coordinator.energy.level_fj;
        RandomStream rng(11, 0);
        REQUIRE(transfer_indirect(coordinator, sensor, {}, kParams, rng) == Status::Ok);
        // command in, data out, ack back: 1.6 + 76 + 0.88 pJ
        CHECK(coordinator_before - coordinator.energy.level_fj == 1600 + 76000 + 880);
        CHECK(coordinator.pending_frames.empty());
        REQUIRE(sensor.pending_data.has_value());
        CHECK((*sensor.pending_data)[0] == 1);
    }

    SUBCASE("a collided request keeps the payload queued") {
        REQUIRE(queue_downlink(coordinator, 0x0007, {1, 2, 3, 4}) == Status::Ok);
        // seed pre-screened so the two requesters tie on their backoff draw
        RandomStream rng(kSeedRequestCollision, 0);
        const ShortAddress rival[] = {0x0009};
        const Status s = transfer_indirect(coordinator, sensor, rival, kParams, rng);
        CHECK(s == Status::ContentionLost);
        CHECK(coordinator.pending_frames.count(0x0007) == 1);
    }

    SUBCASE("transfer without a queued payload is a misuse") {
        RandomStream rng(12, 0);
        CHECK(transfer_indirect(coordinator, sensor, {}, kParams, rng) ==
              Status::InvalidArgument);
    }
}

TEST_CASE("disassociation and rejoin") {
    CoordinatorState coordinator;
    SensorState sensor = make_sensor(0x0042, SensorPhase::Unassociated);
    REQUIRE(associate(sensor, coordinator, SuperframeConfig{}, kParams) == Status::Ok);
    REQUIRE(coordinator.member_table.size() == 1);

    REQUIRE(disassociate(sensor, coordinator, kParams) == Status::Ok);
    CHECK(sensor.phase == SensorPhase::Disassociated);
    CHECK(coordinator.member_table.empty());

    SensorState stranger = make_sensor(0x0099);
    CHECK(disassociate(stranger, coordinator, kParams) == Status::NotMember);

    reset_for_rejoin(sensor);
    CHECK(sensor.phase == SensorPhase::Unassociated);
    REQUIRE(associate(sensor, coordinator, SuperframeConfig{}, kParams) == Status::Ok);
    CHECK(coordinator.is_member(0x0042));
}

TEST_CASE("a sensor that is not associated never transmits") {
    CoordinatorState coordinator;
    std::vector<SensorState> sensors;
    sensors.push_back(make_sensor(1, SensorPhase::Unassociated));
    sensors.push_back(make_sensor(2, SensorPhase::Associated));
    for (auto& s : sensors) s.pending_data = std::array<std::uint8_t, 4>{};
    coordinator.member_table = {2};

    std::vector<SensorState*> active{&sensors[0], &sensors[1]};
    RandomStream rng(5, 0);
    const SuperframeResult result =
        run_superframe(0, coordinator, active, SuperframeConfig{}, kParams, rng);

    REQUIRE(result.status == SuperframeStatus::Completed);
    for (const SlotOutcome& o : result.slot_outcomes)
        CHECK(o.winner != 1);
    CHECK(sensors[0].energy.level_fj == 800000);  // spent nothing
    CHECK(sensors[1].energy.level_fj < 800000);
}

TEST_CASE("round robin slot ownership") {
    const auto schedule = addresses(10);  // owners 1..10 cycling

    auto only = [](ShortAddress who) {
        return [who](ShortAddress a) { return a == who; };
    };
    CHECK(rr_slot_usable(1, schedule, only(1)));  // slot 1 owned by node 1
    CHECK_FALSE(rr_slot_usable(2, schedule, only(1)));
    CHECK_FALSE(rr_slot_usable(1, schedule, only(2)));  // fixed ownership
    CHECK(rr_slot_usable(2, schedule, only(2)));
    CHECK(rr_slot_usable(11, schedule, only(1)));  // the schedule cycles

    // activation probability p shows up directly as the usable rate
    RandomStream rng(0x22, 0);
    const double p = 0.2;
    std::uint64_t usable = 0;
    const int trials = 10000;
    for (int trial = 0; trial < trials; ++trial) {
        for (std::uint32_t slot = 1; slot <= 15; ++slot) {
            const bool owner_active = rng.uniform01() < p;
            if (rr_slot_usable(slot, schedule, [&](ShortAddress) { return owner_active; }))
                ++usable;
        }
    }
    CHECK(std::fabs(double(usable) / (15.0 * trials) - 0.2) <= 0.02);
}
