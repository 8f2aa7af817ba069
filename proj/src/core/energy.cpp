#include "core/energy.hpp"

#include <algorithm>
#include <cmath>

namespace nanomac::energy {

const double HarvestConfig::kDefaultAlpha = -std::log(1.0 - std::sqrt(0.95)) / 2419.0;

Femtojoules tx_energy_fj(std::int64_t bits, double scale, const PulseEnergyParams& params) {
    return std::llround(scale * double(bits) * params.w * params.e_tx_pulse_pj * kFjPerPj);
}

Femtojoules rx_energy_fj(std::int64_t bits, double scale, const PulseEnergyParams& params) {
    const double per_bit_pj = params.rx_mode == RxMode::EquationTwo
                                  ? params.e_tx_pulse_pj / 10.0
                                  : params.rx_per_bit_pj;
    return std::llround(scale * double(bits) * per_bit_pj * kFjPerPj);
}

double tx_energy_pj(std::int64_t bits, double scale, const PulseEnergyParams& params) {
    return fj_to_pj(tx_energy_fj(bits, scale, params));
}

double rx_energy_pj(std::int64_t bits, double scale, const PulseEnergyParams& params) {
    return fj_to_pj(rx_energy_fj(bits, scale, params));
}

double harvested_level_pj(double elapsed_s, double starting_pj, const HarvestConfig& config,
                          double capacity_pj) {
    if (elapsed_s <= 0) return starting_pj;
    if (config.mode == HarvestMode::LinearRate) {
        return std::min(capacity_pj, starting_pj + config.rate_pj_per_min * elapsed_s / 60.0);
    }
    if (starting_pj >= capacity_pj) return capacity_pj;
    // Cycle count whose curve value equals the starting level; resuming from
    // n0 makes charging t1 then t2 identical to charging t1 + t2.
    double n0 = 0.0;
    if (starting_pj > 0)
        n0 = -std::log(1.0 - std::sqrt(starting_pj / capacity_pj)) / config.alpha;
    const double n = n0 + config.cycle_frequency_hz * elapsed_s;
    const double charged = 1.0 - std::exp(-config.alpha * n);
    return capacity_pj * charged * charged;
}

Femtojoules linear_harvest_fj(Femtojoules rate_fj_per_min, SimTime elapsed) {
    using u128 = unsigned __int128;
    const u128 numerator = u128(rate_fj_per_min) * elapsed.femtoseconds() +
                           u128(SimTime::kFsPerMinute) / 2;
    return Femtojoules(numerator / u128(SimTime::kFsPerMinute));
}

EnergyStore EnergyStore::sensor_default() {
    return EnergyStore{800 * kFjPerPj, 800 * kFjPerPj, HarvestConfig{}};
}

EnergyStore EnergyStore::coordinator_default() {
    // Twice the sensor capacity; the harvest rate stays the sensor's.
    return EnergyStore{1600 * kFjPerPj, 1600 * kFjPerPj, HarvestConfig{}};
}

Status EnergyStore::try_consume(Femtojoules amount_fj) {
    if (amount_fj < 0) return Status::InvalidArgument;
    if (amount_fj > level_fj) return Status::InsufficientEnergy;
    level_fj -= amount_fj;
    return Status::Ok;
}

void EnergyStore::harvest_for(SimTime elapsed) {
    if (harvest.mode == HarvestMode::LinearRate) {
        const Femtojoules rate_fj = std::llround(harvest.rate_pj_per_min * kFjPerPj);
        level_fj = std::min(capacity_fj, level_fj + linear_harvest_fj(rate_fj, elapsed));
    } else {
        const double next = harvested_level_pj(simtime_to_seconds(elapsed), fj_to_pj(level_fj),
                                               harvest, fj_to_pj(capacity_fj));
        level_fj = std::min(capacity_fj, Femtojoules(std::llround(next * kFjPerPj)));
    }
}

} // namespace nanomac::energy
