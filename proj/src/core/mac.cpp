#include "core/mac.hpp"

#include <algorithm>

namespace nanomac::mac {

namespace {

const std::int64_t kBeaconBits = frames::frame_bit_length(frames::FrameKind::Beacon, 1.0);
const std::int64_t kDataBits = frames::frame_bit_length(frames::FrameKind::Data, 1.0);
const std::int64_t kAckBits = frames::frame_bit_length(frames::FrameKind::Ack, 1.0);
const std::int64_t kCommandBits = frames::frame_bit_length(frames::FrameKind::MacCommand, 1.0);

void debit_unchecked(EnergyStore& store, Femtojoules amount) {
    // callers have already established affordability
    (void)store.try_consume(amount);
}

} // namespace

bool CoordinatorState::is_member(ShortAddress a) const {
    return std::binary_search(member_table.begin(), member_table.end(), a);
}

FrameCosts FrameCosts::at_scale(const PulseEnergyParams& params, double scale) {
    using energy::rx_energy_fj;
    using energy::tx_energy_fj;
    return FrameCosts{
        tx_energy_fj(kBeaconBits, scale, params), rx_energy_fj(kBeaconBits, scale, params),
        tx_energy_fj(kDataBits, scale, params),   rx_energy_fj(kDataBits, scale, params),
        tx_energy_fj(kAckBits, scale, params),    rx_energy_fj(kAckBits, scale, params),
        tx_energy_fj(kCommandBits, scale, params), rx_energy_fj(kCommandBits, scale, params),
    };
}

Femtojoules coordinator_budget_fj(std::uint32_t m, const PulseEnergyParams& params,
                                  double scale) {
    const FrameCosts costs = FrameCosts::at_scale(params, scale);
    return costs.beacon_tx + Femtojoules(m) * (costs.data_rx + costs.ack_tx);
}

frames::MacFrame build_beacon(CoordinatorState& coordinator, const SuperframeConfig& config) {
    frames::BeaconPayload body;
    body.superframe_spec = {std::uint8_t(config.total_slots), std::uint8_t(config.cap_slots)};

    // pending-data entries first, everything else behind, stable order
    std::vector<ShortAddress> listed;
    listed.reserve(coordinator.beacon_list.size());
    for (ShortAddress a : coordinator.beacon_list)
        if (coordinator.pending_frames.count(a)) listed.push_back(a);
    body.pending_count = std::uint8_t(listed.size());
    for (ShortAddress a : coordinator.beacon_list)
        if (!coordinator.pending_frames.count(a)) listed.push_back(a);

    body.addresses.fill(frames::kBroadcastAddress);
    for (std::size_t i = 0; i < listed.size() && i < body.addresses.size(); ++i)
        body.addresses[i] = listed[i];

    frames::MacFrame beacon =
        frames::make_beacon(coordinator.sequence, coordinator.address, body);
    coordinator.sequence = std::uint8_t(coordinator.sequence + 1);
    return beacon;
}

SlotOutcome csma_contend(std::span<const ShortAddress> contenders, RandomStream& rng,
                         const BackoffConfig& backoff) {
    if (contenders.empty()) return SlotOutcome::idle();

    const std::uint64_t window = backoff.window();
    std::uint64_t best = window;
    ShortAddress winner = frames::kBroadcastAddress;
    std::uint32_t tied = 0;
    for (ShortAddress node : contenders) {  // callers keep contenders sorted by address
        const std::uint64_t draw = rng.uniform_int(window);
        if (draw < best) {
            best = draw;
            winner = node;
            tied = 1;
        } else if (draw == best) {
            ++tied;
        }
    }
    if (tied == 1) return SlotOutcome::success(winner);
    return SlotOutcome::collision(tied);
}

SlotAllocation allocate_slots(std::span<const ShortAddress> requesting,
                              const SuperframeConfig& config, RandomStream& rng,
                              const BackoffConfig& backoff) {
    SlotAllocation result;
    std::vector<ShortAddress> pool(requesting.begin(), requesting.end());
    std::sort(pool.begin(), pool.end());

    result.slots.reserve(config.cap_slots);
    for (std::uint32_t slot = 0; slot < config.cap_slots; ++slot) {
        const SlotOutcome outcome = csma_contend(pool, rng, backoff);
        if (outcome.kind == SlotOutcomeKind::Success)
            pool.erase(std::find(pool.begin(), pool.end(), outcome.winner));
        result.slots.push_back(outcome);
    }
    result.carried_over = std::move(pool);
    return result;
}

SuperframeResult run_superframe(std::uint64_t index, CoordinatorState& coordinator,
                                std::span<SensorState*> active_sensors,
                                const SuperframeConfig& config,
                                const PulseEnergyParams& params, RandomStream& rng,
                                const BackoffConfig& backoff) {
    SuperframeResult result;
    result.index = index;

    const FrameCosts costs = FrameCosts::at_scale(params, config.packet_scale);
    const std::uint32_t m =
        std::uint32_t(std::min<std::size_t>(active_sensors.size(), config.cap_slots));
    result.budget_fj = coordinator_budget_fj(m, params, config.packet_scale);

    if (coordinator.energy.level_fj < result.budget_fj) {
        result.status = SuperframeStatus::Skipped;
        return result;
    }

    (void)build_beacon(coordinator, config);
    debit_unchecked(coordinator.energy, costs.beacon_tx);
    result.coordinator_spent_fj += costs.beacon_tx;

    // A sensor joins the round only if it can afford the whole exchange.
    const Femtojoules sensor_round = costs.beacon_rx + costs.data_tx + costs.ack_rx;
    std::vector<SensorState*> participants;
    for (SensorState* s : active_sensors) {
        if (!s->may_contend()) continue;
        if (s->energy.level_fj < sensor_round) continue;  // sits this one out
        participants.push_back(s);
    }
    std::sort(participants.begin(), participants.end(),
              [](const SensorState* a, const SensorState* b) { return a->address < b->address; });

    std::vector<ShortAddress> pool;
    pool.reserve(participants.size());
    for (SensorState* s : participants) {
        s->phase = SensorPhase::AwaitingSlot;
        pool.push_back(s->address);
    }

    auto sensor_by_address = [&](ShortAddress a) -> SensorState* {
        for (SensorState* s : participants)
            if (s->address == a) return s;
        return nullptr;
    };

    result.slot_outcomes.reserve(config.cap_slots);
    for (std::uint32_t slot = 0; slot < config.cap_slots; ++slot) {
        if (pool.empty()) {
            result.slot_outcomes.push_back(SlotOutcome::idle());
            continue;
        }
        // Backoff ties re-draw within the slot until one node comes out ahead,
        // so a slot with waiting sensors always ends up assigned.
        SlotOutcome outcome = csma_contend(pool, rng, backoff);
        while (outcome.kind == SlotOutcomeKind::Collision)
            outcome = csma_contend(pool, rng, backoff);
        pool.erase(std::find(pool.begin(), pool.end(), outcome.winner));

        SensorState* winner = sensor_by_address(outcome.winner);
        winner->phase = SensorPhase::Transmitting;
        winner->pending_data.reset();
        winner->sequence = std::uint8_t(winner->sequence + 1);
        debit_unchecked(winner->energy, sensor_round);
        result.sensor_spent_fj.emplace_back(outcome.winner, sensor_round);
        winner->phase = SensorPhase::Associated;  // acked, slot done

        debit_unchecked(coordinator.energy, costs.data_rx + costs.ack_tx);
        result.coordinator_spent_fj += costs.data_rx + costs.ack_tx;
        result.slot_outcomes.push_back(outcome);
    }
    for (SensorState* s : participants)  // unserved requesters wait for the next beacon
        if (s->phase == SensorPhase::AwaitingSlot) s->phase = SensorPhase::Associated;

    result.status = SuperframeStatus::Completed;
    return result;
}

Status request_association(SensorState& sensor, CoordinatorState& coordinator,
                           const PulseEnergyParams& params, double scale) {
    if (sensor.phase != SensorPhase::Unassociated) return Status::InvalidArgument;
    if (sensor.address == frames::kBroadcastAddress) return Status::InvalidArgument;
    if (coordinator.beacon_list.size() >= 15) return Status::TableFull;

    const FrameCosts costs = FrameCosts::at_scale(params, scale);
    if (sensor.energy.try_consume(costs.command_tx) != Status::Ok)
        return Status::InsufficientEnergy;
    (void)coordinator.energy.try_consume(costs.command_rx);

    auto where = std::lower_bound(coordinator.member_table.begin(),
                                  coordinator.member_table.end(), sensor.address);
    if (where == coordinator.member_table.end() || *where != sensor.address)
        coordinator.member_table.insert(where, sensor.address);
    if (std::find(coordinator.beacon_list.begin(), coordinator.beacon_list.end(),
                  sensor.address) == coordinator.beacon_list.end())
        coordinator.beacon_list.push_back(sensor.address);
    sensor.phase = SensorPhase::AwaitingAssociation;
    return Status::Ok;
}

bool deliver_beacon(SensorState& sensor, const frames::MacFrame& beacon,
                    const PulseEnergyParams& params, double scale) {
    const FrameCosts costs = FrameCosts::at_scale(params, scale);
    if (sensor.energy.try_consume(costs.beacon_rx) != Status::Ok) return false;

    frames::BeaconPayload body;
    if (frames::beacon_payload(beacon, body) != Status::Ok) return false;

    bool pending_for_me = false;
    for (std::size_t i = 0; i < body.addresses.size(); ++i) {
        if (body.addresses[i] != sensor.address) continue;
        if (sensor.phase == SensorPhase::AwaitingAssociation)
            sensor.phase = SensorPhase::Associated;
        if (i < body.pending_count) pending_for_me = true;
    }
    return pending_for_me;
}

Status associate(SensorState& sensor, CoordinatorState& coordinator,
                 const SuperframeConfig& config, const PulseEnergyParams& params) {
    if (Status s = request_association(sensor, coordinator, params, config.packet_scale);
        s != Status::Ok)
        return s;
    const frames::MacFrame beacon = build_beacon(coordinator, config);
    (void)coordinator.energy.try_consume(
        FrameCosts::at_scale(params, config.packet_scale).beacon_tx);
    deliver_beacon(sensor, beacon, params, config.packet_scale);
    // advertisement done; drop the entry unless data is pending for it
    auto& list = coordinator.beacon_list;
    list.erase(std::remove_if(list.begin(), list.end(),
                              [&](ShortAddress a) {
                                  return a == sensor.address &&
                                         !coordinator.pending_frames.count(a);
                              }),
               list.end());
    if (sensor.phase != SensorPhase::Associated) {
        // missed its confirming beacon (energy gate); allow a clean retry
        sensor.phase = SensorPhase::Unassociated;
        return Status::InsufficientEnergy;
    }
    return Status::Ok;
}

Status queue_downlink(CoordinatorState& coordinator, ShortAddress dest,
                      const std::array<std::uint8_t, 4>& payload) {
    if (!coordinator.is_member(dest)) return Status::NotMember;
    if (std::find(coordinator.beacon_list.begin(), coordinator.beacon_list.end(), dest) ==
        coordinator.beacon_list.end()) {
        if (coordinator.beacon_list.size() >= 15) return Status::TableFull;  // nothing queued
        coordinator.beacon_list.push_back(dest);
    }
    coordinator.pending_frames[dest] = payload;
    return Status::Ok;
}

Status transfer_indirect(CoordinatorState& coordinator, SensorState& sensor,
                         std::span<const ShortAddress> other_requesters,
                         const PulseEnergyParams& params, RandomStream& rng,
                         double scale, const BackoffConfig& backoff) {
    auto queued = coordinator.pending_frames.find(sensor.address);
    if (queued == coordinator.pending_frames.end()) return Status::InvalidArgument;
    if (sensor.phase != SensorPhase::Associated) return Status::InvalidArgument;

    const FrameCosts costs = FrameCosts::at_scale(params, scale);

    std::vector<ShortAddress> contenders(other_requesters.begin(), other_requesters.end());
    contenders.push_back(sensor.address);
    std::sort(contenders.begin(), contenders.end());

    const SlotOutcome outcome = csma_contend(contenders, rng, backoff);
    if (outcome.kind != SlotOutcomeKind::Success || outcome.winner != sensor.address) {
        // the request frame went out (and collided or lost the slot); the
        // payload stays queued for the next superframe
        if (outcome.kind == SlotOutcomeKind::Collision)
            (void)sensor.energy.try_consume(costs.command_tx);
        return Status::ContentionLost;
    }

    if (sensor.energy.try_consume(costs.command_tx + costs.data_rx + costs.ack_tx) != Status::Ok)
        return Status::InsufficientEnergy;
    (void)coordinator.energy.try_consume(costs.command_rx + costs.data_tx + costs.ack_rx);

    sensor.pending_data = queued->second;  // delivered payload, kept for the application
    coordinator.pending_frames.erase(queued);
    auto& list = coordinator.beacon_list;
    list.erase(std::remove(list.begin(), list.end(), sensor.address), list.end());
    return Status::Ok;
}

Status disassociate(SensorState& sensor, CoordinatorState& coordinator,
                    const PulseEnergyParams& params, double scale) {
    auto where = std::lower_bound(coordinator.member_table.begin(),
                                  coordinator.member_table.end(), sensor.address);
    if (where == coordinator.member_table.end() || *where != sensor.address)
        return Status::NotMember;

    const FrameCosts costs = FrameCosts::at_scale(params, scale);
    if (sensor.energy.try_consume(costs.command_tx) != Status::Ok)
        return Status::InsufficientEnergy;
    (void)coordinator.energy.try_consume(costs.command_rx);

    coordinator.member_table.erase(where);
    auto& list = coordinator.beacon_list;
    list.erase(std::remove(list.begin(), list.end(), sensor.address), list.end());
    coordinator.pending_frames.erase(sensor.address);
    sensor.phase = SensorPhase::Disassociated;
    return Status::Ok;
}

void reset_for_rejoin(SensorState& sensor) {
    if (sensor.phase == SensorPhase::Disassociated) sensor.phase = SensorPhase::Unassociated;
}

bool rr_slot_usable(std::uint32_t slot_index, std::span<const ShortAddress> schedule,
                    const std::function<bool(ShortAddress)>& active) {
    const std::size_t owner_index = (slot_index - 1) % schedule.size();
    return active(schedule[owner_index]);
}

} // namespace nanomac::mac
