#ifndef NANOMAC_CORE_CHANNEL_HPP
#define NANOMAC_CORE_CHANNEL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "core/frames.hpp"

namespace nanomac::channel {

// On-off keyed pulse train: a 1 is a pulse of pulse_width_fs at its symbol
// instant, a 0 is silence. Symbols are spaced symbol_spacing_fs apart, much
// wider than the pulse itself (spread ratio 1000 by default).
struct PulseTrain {
    std::int64_t start_fs = 0;
    std::int64_t symbol_spacing_fs = 100000;  // 100 ps
    std::int64_t pulse_width_fs = 100;
    std::vector<std::uint8_t> bits;

    bool valid() const { return symbol_spacing_fs > pulse_width_fs && pulse_width_fs > 0; }
};

struct PropagationModel {
    double distance_mm = 10.0;
    double speed_m_per_s = 3.0e8;
};

// distance / speed, rounded to the nearest femtosecond.
std::int64_t propagation_delay_fs(const PropagationModel& model);

// Arrival instants (start + delay + i * spacing) of the 1-symbols, ascending.
std::vector<std::int64_t> pulse_arrival_times(const PulseTrain& train, std::int64_t delay_fs);

struct ArrivedTrain {
    PulseTrain train;
    std::int64_t delay_fs = 0;
};

// Unordered pairs of pulses from distinct trains that land within a pulse
// width of each other at the receiver (strictly closer; edge-touching pulses
// do not collide). Sorted-sweep implementation.
std::int64_t count_pulse_overlaps(std::span<const ArrivedTrain> trains);

enum class SlotOutcomeKind : std::uint8_t { Idle = 0, Success = 1, Collision = 2 };

struct SlotOutcome {
    SlotOutcomeKind kind = SlotOutcomeKind::Idle;
    frames::ShortAddress winner = frames::kBroadcastAddress;  // Success only
    std::uint32_t contenders = 0;                             // Collision only, >= 2

    static SlotOutcome idle() { return {}; }
    static SlotOutcome success(frames::ShortAddress who) {
        return {SlotOutcomeKind::Success, who, 0};
    }
    static SlotOutcome collision(std::uint32_t n) {
        return {SlotOutcomeKind::Collision, frames::kBroadcastAddress, n};
    }
    bool operator==(const SlotOutcome&) const = default;
};

// Raw channel truth for one slot: nobody -> idle, one transmitter -> that
// node's frame goes through, several -> collision.
SlotOutcome slot_transmit(std::span<const frames::ShortAddress> transmitters);

} // namespace nanomac::channel

#endif
