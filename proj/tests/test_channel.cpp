#include <doctest.h>

#include <algorithm>
#include <vector>

#include "core/channel.hpp"
#include "core/rng.hpp"

using namespace nanomac;
using namespace nanomac::channel;

namespace {

PulseTrain train_from(const char* bits, std::int64_t start, std::int64_t spacing = 100000,
                      std::int64_t width = 100) {
    PulseTrain t;
    t.start_fs = start;
    t.symbol_spacing_fs = spacing;
    t.pulse_width_fs = width;
    for (const char* c = bits; *c; ++c) t.bits.push_back(*c == '1');
    return t;
}

// Quadratic oracle: every pulse pair across distinct trains, interval
// intersection test, no sorting involved.
std::int64_t overlaps_brute_force(const std::vector<ArrivedTrain>& trains) {
    std::int64_t count = 0;
    for (std::size_t a = 0; a < trains.size(); ++a) {
        const auto pa = pulse_arrival_times(trains[a].train, trains[a].delay_fs);
        for (std::size_t b = a + 1; b < trains.size(); ++b) {
            const auto pb = pulse_arrival_times(trains[b].train, trains[b].delay_fs);
            for (std::int64_t x : pa)
                for (std::int64_t y : pb) {
                    const std::int64_t wa = trains[a].train.pulse_width_fs;
                    const std::int64_t wb = trains[b].train.pulse_width_fs;
                    if (x < y + wb && y < x + wa) ++count;
                }
        }
    }
    return count;
}

} // namespace

TEST_CASE("propagation delay is distance over speed in femtoseconds") {
    CHECK(propagation_delay_fs({10.0, 3.0e8}) == 33333);  // ~33.33 ps
    CHECK(propagation_delay_fs({5.0, 3.0e8}) == 16667);
    CHECK(propagation_delay_fs({0.0, 3.0e8}) == 0);
    CHECK(propagation_delay_fs({}) == 33333);  // defaults: 10 mm at light speed
}

TEST_CASE("pulse arrival times") {
    const PulseTrain t = train_from("101001", 0);
    CHECK(pulse_arrival_times(t, 0) ==
          std::vector<std::int64_t>{0, 200000, 500000});

    const PulseTrain silent = train_from("0000", 0);
    CHECK(pulse_arrival_times(silent, 0).empty());

    PulseTrain single = train_from("1", 7);
    CHECK(pulse_arrival_times(single, 3) == std::vector<std::int64_t>{10});
}

TEST_CASE("three staggered transmitters do not overlap at the receiver") {
    const std::int64_t delay = propagation_delay_fs({});
    const std::vector<ArrivedTrain> witness = {
        {train_from("101001", 0), delay},
        {train_from("110001", 10000), delay},   // +10 ps
        {train_from("100101", 20000), delay},   // +20 ps
    };
    CHECK(count_pulse_overlaps(witness) == 0);
    CHECK(overlaps_brute_force(witness) == 0);
}

TEST_CASE("coincident identical trains collide pulse for pulse") {
    const std::vector<ArrivedTrain> pair = {
        {train_from("101", 0), 0},
        {train_from("101", 0), 0},
    };
    CHECK(count_pulse_overlaps(pair) == 2);
}

TEST_CASE("a single train never collides with itself") {
    const std::vector<ArrivedTrain> alone = {{train_from("111111", 0), 0}};
    CHECK(count_pulse_overlaps(alone) == 0);
}

TEST_CASE("edge-touching pulses do not collide, closer ones do") {
    const std::vector<ArrivedTrain> touching = {
        {train_from("1", 0), 0},
        {train_from("1", 100), 0},  // gap equals the pulse width
    };
    CHECK(count_pulse_overlaps(touching) == 0);

    const std::vector<ArrivedTrain> overlapping = {
        {train_from("1", 0), 0},
        {train_from("1", 99), 0},
    };
    CHECK(count_pulse_overlaps(overlapping) == 1);
}

TEST_CASE("sweep detector agrees with the quadratic oracle on random instances") {
    RandomStream rng(0xc0111de, 0);
    for (int round = 0; round < 200; ++round) {
        std::vector<ArrivedTrain> trains;
        const std::size_t count = 2 + rng.uniform_int(4);
        for (std::size_t t = 0; t < count; ++t) {
            PulseTrain train;
            train.start_fs = std::int64_t(rng.uniform_int(2000));
            train.symbol_spacing_fs = 500 + std::int64_t(rng.uniform_int(1500));
            train.pulse_width_fs = 50 + std::int64_t(rng.uniform_int(400));
            const std::size_t nbits = 1 + rng.uniform_int(12);
            for (std::size_t i = 0; i < nbits; ++i)
                train.bits.push_back(std::uint8_t(rng.uniform_int(2)));
            REQUIRE(train.valid());
            trains.push_back({std::move(train), std::int64_t(rng.uniform_int(500))});
        }
        CHECK(count_pulse_overlaps(trains) == overlaps_brute_force(trains));
    }
}

TEST_CASE("collision count is invariant under permutation and time shift") {
    RandomStream rng(0x5317, 0);
    for (int round = 0; round < 50; ++round) {
        std::vector<ArrivedTrain> trains;
        for (std::size_t t = 0; t < 4; ++t) {
            PulseTrain train;
            train.start_fs = std::int64_t(rng.uniform_int(1000));
            train.symbol_spacing_fs = 1000;
            train.pulse_width_fs = 200;
            for (int i = 0; i < 8; ++i) train.bits.push_back(std::uint8_t(rng.uniform_int(2)));
            trains.push_back({std::move(train), 0});
        }
        const std::int64_t base = count_pulse_overlaps(trains);

        std::reverse(trains.begin(), trains.end());
        CHECK(count_pulse_overlaps(trains) == base);

        for (auto& t : trains) t.train.start_fs += 77777;
        CHECK(count_pulse_overlaps(trains) == base);
    }
}

TEST_CASE("slot transmit truth table") {
    CHECK(slot_transmit({}).kind == SlotOutcomeKind::Idle);

    const frames::ShortAddress solo[] = {5};
    const SlotOutcome won = slot_transmit(solo);
    CHECK(won.kind == SlotOutcomeKind::Success);
    CHECK(won.winner == 5);

    const frames::ShortAddress both[] = {3, 9};
    const SlotOutcome crash = slot_transmit(both);
    CHECK(crash.kind == SlotOutcomeKind::Collision);
    CHECK(crash.contenders == 2);
}
