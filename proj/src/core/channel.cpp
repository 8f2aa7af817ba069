#include "core/channel.hpp"

#include <algorithm>
#include <cmath>

namespace nanomac::channel {

std::int64_t propagation_delay_fs(const PropagationModel& model) {
    // d [mm] / c [m/s] in femtoseconds: d * 1e-3 / c * 1e15 = d * 1e12 / c.
    return std::llround(model.distance_mm * 1.0e12 / model.speed_m_per_s);
}

std::vector<std::int64_t> pulse_arrival_times(const PulseTrain& train, std::int64_t delay_fs) {
    std::vector<std::int64_t> arrivals;
    for (std::size_t i = 0; i < train.bits.size(); ++i)
        if (train.bits[i])
            arrivals.push_back(train.start_fs + delay_fs +
                               std::int64_t(i) * train.symbol_spacing_fs);
    return arrivals;
}

std::int64_t count_pulse_overlaps(std::span<const ArrivedTrain> trains) {
    struct Pulse {
        std::int64_t at;
        std::int64_t width;
        std::size_t train;
    };
    std::vector<Pulse> pulses;
    std::int64_t max_width = 0;
    for (std::size_t t = 0; t < trains.size(); ++t) {
        max_width = std::max(max_width, trains[t].train.pulse_width_fs);
        for (std::int64_t at : pulse_arrival_times(trains[t].train, trains[t].delay_fs))
            pulses.push_back({at, trains[t].train.pulse_width_fs, t});
    }
    std::sort(pulses.begin(), pulses.end(),
              [](const Pulse& a, const Pulse& b) { return a.at < b.at; });

    // Two pulses overlap iff their occupied intervals [at, at+width) intersect;
    // for equal widths that is |delta| < width. The forward scan stops once the
    // gap rules out any further partner.
    std::int64_t overlaps = 0;
    for (std::size_t i = 0; i < pulses.size(); ++i) {
        for (std::size_t j = i + 1; j < pulses.size(); ++j) {
            const std::int64_t gap = pulses[j].at - pulses[i].at;
            if (gap >= max_width) break;
            if (pulses[i].train == pulses[j].train) continue;
            if (gap < pulses[i].width) ++overlaps;
        }
    }
    return overlaps;
}

SlotOutcome slot_transmit(std::span<const frames::ShortAddress> transmitters) {
    if (transmitters.empty()) return SlotOutcome::idle();
    if (transmitters.size() == 1) return SlotOutcome::success(transmitters[0]);
    return SlotOutcome::collision(std::uint32_t(transmitters.size()));
}

} // namespace nanomac::channel
