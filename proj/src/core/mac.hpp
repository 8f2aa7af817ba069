#ifndef NANOMAC_CORE_MAC_HPP
#define NANOMAC_CORE_MAC_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "core/channel.hpp"
#include "core/energy.hpp"
#include "core/frames.hpp"
#include "core/rng.hpp"
#include "core/simtime.hpp"
#include "core/status.hpp"

namespace nanomac::mac {

using frames::ShortAddress;
using channel::SlotOutcome;
using channel::SlotOutcomeKind;
using energy::EnergyStore;
using energy::Femtojoules;
using energy::PulseEnergyParams;

// Beacon interval layout: 16 slots, the beacon itself in the first, 15
// contention-access slots behind it.
struct SuperframeConfig {
    double duration_min = 10.0;
    std::uint32_t total_slots = 16;
    std::uint32_t cap_slots = 15;
    double packet_scale = 1.0;

    SimTime duration() const {
        return SimTime::from_fs(
            std::uint64_t(std::llround(duration_min * double(SimTime::kFsPerMinute))));
    }
    bool valid() const {
        return duration_min > 0 && duration_min <= 100000 && total_slots == 16 &&
               cap_slots == 15 && packet_scale >= 0.5 && packet_scale <= 1.0;
    }
};

// Uniform backoff draw over a window of 2^BE slots; the unique minimum wins
// the slot, a shared minimum means the tied nodes transmit on top of each
// other.
struct BackoffConfig {
    std::uint32_t backoff_exponent = 3;

    std::uint64_t window() const { return std::uint64_t(1) << backoff_exponent; }
    bool valid() const { return backoff_exponent >= 1 && backoff_exponent <= 8; }
};

enum class SensorPhase : std::uint8_t {
    Unassociated = 0,
    AwaitingAssociation = 1,
    Associated = 2,
    AwaitingSlot = 3,
    Transmitting = 4,
    Disassociated = 5,
};

struct SensorState {
    ShortAddress address = 0;
    SensorPhase phase = SensorPhase::Unassociated;
    EnergyStore energy = EnergyStore::sensor_default();
    std::optional<std::array<std::uint8_t, 4>> pending_data;
    std::uint8_t sequence = 0;

    bool may_contend() const {
        return phase == SensorPhase::Associated || phase == SensorPhase::AwaitingSlot ||
               phase == SensorPhase::Transmitting;
    }
};

struct CoordinatorState {
    ShortAddress address = 0;
    std::vector<ShortAddress> member_table;  // sorted, unique
    std::vector<ShortAddress> beacon_list;   // advertised next beacon, <= 15
    std::map<ShortAddress, std::array<std::uint8_t, 4>> pending_frames;  // downlink queue
    EnergyStore energy = EnergyStore::coordinator_default();
    std::uint8_t sequence = 0;

    bool is_member(ShortAddress a) const;
};

// Per-frame energy debits at a given packet scale, in exact femtojoules.
struct FrameCosts {
    Femtojoules beacon_tx, beacon_rx;
    Femtojoules data_tx, data_rx;
    Femtojoules ack_tx, ack_rx;
    Femtojoules command_tx, command_rx;

    static FrameCosts at_scale(const PulseEnergyParams& params, double scale);
};

// Worst-case coordinator budget for one superframe serving m sensors:
// beacon out plus m data receptions and m acknowledgements.
Femtojoules coordinator_budget_fj(std::uint32_t m, const PulseEnergyParams& params, double scale);

// Builds the next beacon and advances the coordinator sequence. The address
// list is the beacon_list padded with 0xffff; entries with queued downlink
// data are moved to the front and counted in the pending octet so a listener
// can locate itself by list position.
frames::MacFrame build_beacon(CoordinatorState& coordinator, const SuperframeConfig& config);

// One contention round: every contender draws a uniform backoff, draws taken
// in ascending address order. A unique minimum wins; a shared minimum is a
// collision among the tied nodes; an empty set leaves the slot idle.
SlotOutcome csma_contend(std::span<const ShortAddress> contenders, RandomStream& rng,
                         const BackoffConfig& backoff);

struct SlotAllocation {
    std::vector<SlotOutcome> slots;         // exactly cap_slots entries
    std::vector<ShortAddress> carried_over; // wait for the next superframe
};

// Slot-by-slot allocation over the contention access period. A winner leaves
// the pool; after a collision everyone (colliders included) competes again in
// the next slot; whoever is left after the last slot carries over.
SlotAllocation allocate_slots(std::span<const ShortAddress> requesting,
                              const SuperframeConfig& config, RandomStream& rng,
                              const BackoffConfig& backoff = {});

enum class SuperframeStatus : std::uint8_t { Completed = 0, Skipped = 1 };

struct SuperframeResult {
    std::uint64_t index = 0;
    SuperframeStatus status = SuperframeStatus::Skipped;
    std::vector<SlotOutcome> slot_outcomes;  // empty when skipped
    Femtojoules budget_fj = 0;
    Femtojoules coordinator_spent_fj = 0;
    std::vector<std::pair<ShortAddress, Femtojoules>> sensor_spent_fj;
};

// One beacon interval. The coordinator pre-commits to the worst-case budget:
// with less energy on hand it skips the whole superframe and spends nothing.
// Otherwise it beacons and serves every listed sensor, one slot each, with
// ties re-drawn inside the slot so an admitted sensor never loses its slot to
// a backoff tie. Sensors that cannot afford their own round sit it out.
SuperframeResult run_superframe(std::uint64_t index, CoordinatorState& coordinator,
                                std::span<SensorState*> active_sensors,
                                const SuperframeConfig& config,
                                const PulseEnergyParams& params, RandomStream& rng,
                                const BackoffConfig& backoff = {});

// Association request: the sensor spends a command transmission, the
// coordinator receives it and queues the address for the next beacon.
// Refused (nothing spent) when the advertisement list is full or the sensor
// cannot afford the command.
Status request_association(SensorState& sensor, CoordinatorState& coordinator,
                           const PulseEnergyParams& params, double scale = 1.0);

// Beacon reception at one sensor. Completes a pending association when the
// sensor finds its address in the list. Returns true when the beacon signals
// queued downlink data for this sensor.
bool deliver_beacon(SensorState& sensor, const frames::MacFrame& beacon,
                    const PulseEnergyParams& params, double scale = 1.0);

// Full association handshake for a fresh sensor: request, then the next
// beacon confirms membership.
Status associate(SensorState& sensor, CoordinatorState& coordinator,
                 const SuperframeConfig& config, const PulseEnergyParams& params);

// Queue a downlink payload; the next beacon advertises it as pending.
Status queue_downlink(CoordinatorState& coordinator, ShortAddress dest,
                      const std::array<std::uint8_t, 4>& payload);

// Indirect transfer after a beacon that advertised pending data: the sensor
// requests via a contended slot, the coordinator answers with the data frame,
// the sensor acknowledges. Loses cleanly (payload stays queued) when the
// request slot collides.
Status transfer_indirect(CoordinatorState& coordinator, SensorState& sensor,
                         std::span<const ShortAddress> other_requesters,
                         const PulseEnergyParams& params, RandomStream& rng,
                         double scale = 1.0, const BackoffConfig& backoff = {});

// Membership withdrawal via a disassociation notification.
Status disassociate(SensorState& sensor, CoordinatorState& coordinator,
                    const PulseEnergyParams& params, double scale = 1.0);

// Rejoin path: a disassociated sensor may start over.
void reset_for_rejoin(SensorState& sensor);

// Round-robin baseline: the slot belongs to exactly one owner; it is usable
// iff that owner has data, regardless of anyone else.
bool rr_slot_usable(std::uint32_t slot_index, std::span<const ShortAddress> schedule,
                    const std::function<bool(ShortAddress)>& active);

// Star topology: reduced-function sensors, one full-function coordinator.
struct Topology {
    CoordinatorState coordinator;
    std::vector<SensorState> sensors;
    channel::PropagationModel propagation;
};

} // namespace nanomac::mac

#endif
