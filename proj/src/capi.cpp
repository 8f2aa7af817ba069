// extern-C surface over the C++ core. All entry points translate exceptions
// into status codes; no exception crosses the library boundary.
#include "nanomac.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <stdexcept>

#include "core/channel.hpp"
#include "core/energy.hpp"
#include "core/experiments.hpp"
#include "core/frames.hpp"
#include "core/mac.hpp"
#include "core/rng.hpp"

using namespace nanomac;

struct nm_frame {
    frames::MacFrame frame;
};

struct nm_rng {
    RandomStream stream;
};

namespace {

nm_status to_c(Status s) { return nm_status(int(s)); }

char* copy_string(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (!out) return nullptr;
    std::memcpy(out, text.data(), text.size() + 1);
    return out;
}

nm_status export_string(const std::string& text, char** out) {
    if (!out) return NM_OK;
    *out = copy_string(text);
    return *out ? NM_OK : NM_ERR_INTERNAL;
}

template <class Fn>
nm_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::overflow_error&) {
        return NM_ERR_OVERFLOW;
    } catch (const std::bad_alloc&) {
        return NM_ERR_INTERNAL;
    } catch (...) {
        return NM_ERR_INTERNAL;
    }
}

energy::PulseEnergyParams to_core(const nm_energy_params& p) {
    energy::PulseEnergyParams out;
    out.e_tx_pulse_pj = p.e_tx_pulse_pj;
    out.rx_per_bit_pj = p.rx_per_bit_pj;
    out.w = p.w;
    out.rx_mode = p.rx_mode == NM_RX_EQUATION_TWO ? energy::RxMode::EquationTwo
                                                  : energy::RxMode::TableCalibrated;
    return out;
}

nm_status fill_sweep_spec(const nm_sweep_spec* in, experiments::SweepSpec& out) {
    if (!in) return NM_ERR_INVALID_ARGUMENT;
    experiments::SweepSpec defaults;
    if (in->durations)
        out.durations.assign(in->durations, in->durations + in->n_durations);
    else
        out.durations = defaults.durations;
    if (in->packet_scales)
        out.packet_scales.assign(in->packet_scales, in->packet_scales + in->n_scales);
    else
        out.packet_scales = defaults.packet_scales;
    out.slots_min = in->slots_min;
    out.slots_max = in->slots_max;
    out.superframes_per_point = in->superframes_per_point;
    out.seed = in->seed;
    out.harvest_rate_pj_per_min = in->harvest_rate_pj_per_min;
    return to_c(out.validate());
}

nm_status fill_contention_spec(const nm_contention_spec* in, experiments::ContentionSpec& out) {
    if (!in) return NM_ERR_INVALID_ARGUMENT;
    out.population = in->population;
    if (in->request_rates)
        out.request_rates.assign(in->request_rates, in->request_rates + in->n_rates);
    out.trials_per_rate = in->trials_per_rate;
    out.backoff.backoff_exponent = in->backoff_exponent;
    out.seed = in->seed;
    return to_c(out.validate());
}

} // namespace

extern "C" {

const char* nm_status_str(nm_status status) {
    if (status == NM_ERR_INTERNAL) return "internal error";
    return status_name(Status(int(status)));
}

const char* nm_version(void) { return "0.1.0"; }

void nm_string_free(char* text) { std::free(text); }

/* ---- frames ---- */

nm_status nm_frame_make_beacon(uint8_t sequence, uint16_t src, const uint8_t superframe_spec[2],
                               uint8_t pending_count, const uint16_t addresses[15],
                               nm_frame** out) {
    if (!out || !superframe_spec || !addresses) return NM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        frames::BeaconPayload body;
        body.superframe_spec = {superframe_spec[0], superframe_spec[1]};
        body.pending_count = pending_count;
        for (std::size_t i = 0; i < body.addresses.size(); ++i)
            body.addresses[i] = addresses[i];
        *out = new nm_frame{frames::make_beacon(sequence, src, body)};
        return NM_OK;
    });
}

nm_status nm_frame_make_data(uint8_t sequence, uint16_t dest, uint16_t src,
                             const uint8_t msdu[4], int ack_request, nm_frame** out) {
    if (!out || !msdu) return NM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = new nm_frame{
            frames::make_data(sequence, dest, src, std::span(msdu, 4), ack_request != 0)};
        return NM_OK;
    });
}

nm_status nm_frame_make_ack(uint8_t sequence, nm_frame** out) {
    if (!out) return NM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = new nm_frame{frames::make_ack(sequence)};
        return NM_OK;
    });
}

nm_status nm_frame_make_command(uint8_t sequence, uint16_t dest, uint16_t src,
                                uint8_t command_id, const uint8_t msdu[4], int ack_request,
                                nm_frame** out) {
    if (!out || !msdu) return NM_ERR_INVALID_ARGUMENT;
    if (command_id < NM_CMD_ASSOCIATION_REQUEST || command_id > NM_CMD_DATA_REQUEST)
        return NM_ERR_UNKNOWN_FRAME_TYPE;
    return guarded([&] {
        *out = new nm_frame{frames::make_command(sequence, dest, src, command_id,
                                                 std::span(msdu, 4), ack_request != 0)};
        return NM_OK;
    });
}

nm_status nm_frame_make_canonical(nm_frame_kind kind, nm_frame** out) {
    if (!out || kind < NM_FRAME_BEACON || kind > NM_FRAME_MAC_COMMAND)
        return NM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = new nm_frame{experiments::canonical_frame(frames::FrameKind(kind))};
        return NM_OK;
    });
}

void nm_frame_free(nm_frame* frame) { delete frame; }

nm_status nm_frame_encode(const nm_frame* frame, uint8_t* buffer, size_t capacity,
                          size_t* written) {
    if (!frame || !buffer || !written) return NM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        std::vector<std::uint8_t> octets;
        if (Status s = frames::encode_frame(frame->frame, octets); s != Status::Ok)
            return to_c(s);
        if (octets.size() > capacity) return NM_ERR_INVALID_ARGUMENT;
        std::memcpy(buffer, octets.data(), octets.size());
        *written = octets.size();
        return NM_OK;
    });
}

nm_status nm_frame_decode(const uint8_t* octets, size_t count, nm_frame** out) {
    if (!octets || !out) return NM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        frames::MacFrame frame;
        if (Status s = frames::decode_frame(std::span(octets, count), frame); s != Status::Ok)
            return to_c(s);
        *out = new nm_frame{std::move(frame)};
        return NM_OK;
    });
}

int nm_frame_kind_of(const nm_frame* frame) { return frame ? int(frame->frame.kind) : -1; }
uint8_t nm_frame_sequence(const nm_frame* frame) { return frame ? frame->frame.sequence : 0; }
uint16_t nm_frame_dest(const nm_frame* frame) {
    return frame ? frame->frame.dest : NM_BROADCAST_ADDRESS;
}
uint16_t nm_frame_src(const nm_frame* frame) {
    return frame ? frame->frame.src : NM_BROADCAST_ADDRESS;
}
uint8_t nm_frame_command_id(const nm_frame* frame) {
    return frame ? frame->frame.command_id : 0;
}

nm_status nm_frame_payload(const nm_frame* frame, uint8_t* buffer, size_t capacity,
                           size_t* written) {
    if (!frame || !written) return NM_ERR_INVALID_ARGUMENT;
    const auto& payload = frame->frame.payload;
    *written = payload.size();
    if (!buffer) return NM_OK;  // size query
    if (payload.size() > capacity) return NM_ERR_INVALID_ARGUMENT;
    std::memcpy(buffer, payload.data(), payload.size());
    return NM_OK;
}

int64_t nm_frame_bit_length(nm_frame_kind kind, double scale) {
    if (kind < NM_FRAME_BEACON || kind > NM_FRAME_MAC_COMMAND || scale < 0.5 || scale > 1.0)
        return -1;
    return frames::frame_bit_length(frames::FrameKind(kind), scale);
}

uint16_t nm_compute_fcs(const uint8_t* octets, size_t count) {
    if (!octets) return 0;
    return frames::compute_fcs(std::span(octets, count));
}

/* ---- energy ---- */

void nm_energy_params_init(nm_energy_params* params) {
    if (!params) return;
    const energy::PulseEnergyParams defaults;
    params->e_tx_pulse_pj = defaults.e_tx_pulse_pj;
    params->rx_per_bit_pj = defaults.rx_per_bit_pj;
    params->w = defaults.w;
    params->rx_mode = NM_RX_TABLE_CALIBRATED;
}

int64_t nm_tx_energy_fj(int64_t bits, double scale, const nm_energy_params* params) {
    if (!params || bits < 0) return -1;
    return energy::tx_energy_fj(bits, scale, to_core(*params));
}

int64_t nm_rx_energy_fj(int64_t bits, double scale, const nm_energy_params* params) {
    if (!params || bits < 0) return -1;
    return energy::rx_energy_fj(bits, scale, to_core(*params));
}

double nm_tx_energy_pj(int64_t bits, double scale, const nm_energy_params* params) {
    if (!params || bits < 0) return -1;
    return energy::tx_energy_pj(bits, scale, to_core(*params));
}

double nm_rx_energy_pj(int64_t bits, double scale, const nm_energy_params* params) {
    if (!params || bits < 0) return -1;
    return energy::rx_energy_pj(bits, scale, to_core(*params));
}

double nm_harvested_level_pj(double elapsed_s, double starting_pj, nm_harvest_mode mode,
                             double rate_pj_per_min, double cycle_frequency_hz, double alpha,
                             double capacity_pj) {
    energy::HarvestConfig config;
    config.mode = mode == NM_HARVEST_SATURATING_CURVE ? energy::HarvestMode::SaturatingCurve
                                                      : energy::HarvestMode::LinearRate;
    config.rate_pj_per_min = rate_pj_per_min;
    config.cycle_frequency_hz = cycle_frequency_hz;
    if (alpha > 0) config.alpha = alpha;
    return energy::harvested_level_pj(elapsed_s, starting_pj, config, capacity_pj);
}

double nm_default_harvest_alpha(void) { return energy::HarvestConfig::kDefaultAlpha; }

/* ---- channel / contention ---- */

int64_t nm_propagation_delay_fs(double distance_mm, double speed_m_per_s) {
    if (distance_mm < 0 || speed_m_per_s <= 0) return -1;
    return channel::propagation_delay_fs({distance_mm, speed_m_per_s});
}

nm_rng* nm_rng_new(uint64_t seed, uint64_t stream_id) {
    return new (std::nothrow) nm_rng{RandomStream(seed, stream_id)};
}

void nm_rng_free(nm_rng* rng) { delete rng; }

uint64_t nm_rng_next(nm_rng* rng) { return rng ? rng->stream.next_u64() : 0; }

uint64_t nm_rng_uniform(nm_rng* rng, uint64_t bound) {
    if (!rng || bound == 0) return 0;
    return rng->stream.uniform_int(bound);
}

nm_status nm_csma_contend(const uint16_t* contenders, size_t count, uint32_t backoff_exponent,
                          nm_rng* rng, int* outcome, uint16_t* winner, uint32_t* colliders) {
    if ((!contenders && count > 0) || !rng || !outcome) return NM_ERR_INVALID_ARGUMENT;
    mac::BackoffConfig backoff{backoff_exponent};
    if (!backoff.valid()) return NM_ERR_INVALID_ARGUMENT;
    const mac::SlotOutcome result =
        mac::csma_contend(std::span(contenders, count), rng->stream, backoff);
    *outcome = int(result.kind);
    if (winner) *winner = result.winner;
    if (colliders) *colliders = result.contenders;
    return NM_OK;
}

/* ---- experiments ---- */

void nm_sweep_spec_init(nm_sweep_spec* spec) {
    if (!spec) return;
    const experiments::SweepSpec defaults;
    *spec = nm_sweep_spec{};
    spec->slots_min = defaults.slots_min;
    spec->slots_max = defaults.slots_max;
    spec->superframes_per_point = defaults.superframes_per_point;
    spec->harvest_rate_pj_per_min = defaults.harvest_rate_pj_per_min;
    spec->threads = 1;
}

nm_status nm_run_duration_sweep(const nm_sweep_spec* spec, char** out_csv, char** out_svg,
                                char** out_trace) {
    if (!out_csv) return NM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        experiments::SweepSpec core;
        if (nm_status s = fill_sweep_spec(spec, core); s != NM_OK) return s;
        std::string trace;
        const auto rows = experiments::run_duration_sweep(core, spec->threads,
                                                          out_trace ? &trace : nullptr);
        if (nm_status s = export_string(experiments::duration_sweep_csv(rows), out_csv);
            s != NM_OK)
            return s;
        if (out_svg &&
            export_string(experiments::duration_sweep_svg(rows), out_svg) != NM_OK)
            return NM_ERR_INTERNAL;
        if (out_trace && export_string(trace, out_trace) != NM_OK) return NM_ERR_INTERNAL;
        return NM_OK;
    });
}

nm_status nm_run_packet_size_sweep(const nm_sweep_spec* spec, char** out_csv, char** out_svg,
                                   char** out_trace) {
    if (!out_csv) return NM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        experiments::SweepSpec core;
        if (nm_status s = fill_sweep_spec(spec, core); s != NM_OK) return s;
        std::string trace;
        const auto rows = experiments::run_packet_size_sweep(core, spec->threads,
                                                             out_trace ? &trace : nullptr);
        if (nm_status s = export_string(experiments::packet_size_sweep_csv(rows), out_csv);
            s != NM_OK)
            return s;
        if (out_svg &&
            export_string(experiments::packet_size_sweep_svg(rows), out_svg) != NM_OK)
            return NM_ERR_INTERNAL;
        if (out_trace && export_string(trace, out_trace) != NM_OK) return NM_ERR_INTERNAL;
        return NM_OK;
    });
}

nm_status nm_run_oracle_check(const nm_sweep_spec* spec, char** out_csv,
                              double* out_max_deviation) {
    if (!out_csv && !out_max_deviation) return NM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        experiments::SweepSpec core;
        if (nm_status s = fill_sweep_spec(spec, core); s != NM_OK) return s;
        const auto rows = experiments::run_packet_size_sweep(core, spec->threads, nullptr);
        if (out_max_deviation) *out_max_deviation = experiments::max_oracle_deviation(rows);
        if (out_csv) return export_string(experiments::oracle_check_csv(rows), out_csv);
        return NM_OK;
    });
}

nm_status nm_run_superframe_ledger(const nm_sweep_spec* spec, double duration_min, double scale,
                                   uint32_t m, char** out_csv) {
    if (!out_csv) return NM_ERR_INVALID_ARGUMENT;
    if (duration_min <= 0 || scale < 0.5 || scale > 1.0 || m < 1 || m > 15)
        return NM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        experiments::SweepSpec core;
        if (nm_status s = fill_sweep_spec(spec, core); s != NM_OK) return s;
        return export_string(experiments::superframe_ledger_csv(duration_min, scale, m, core),
                             out_csv);
    });
}

double nm_analytic_success_rate(uint32_t m, double scale, double duration_min,
                                double rate_pj_per_min) {
    if (m < 1 || m > 15 || scale < 0.5 || scale > 1.0 || duration_min <= 0 ||
        rate_pj_per_min <= 0)
        return -1;
    return experiments::analytic_success_rate(m, scale, duration_min, rate_pj_per_min);
}

void nm_contention_spec_init(nm_contention_spec* spec) {
    if (!spec) return;
    const experiments::ContentionSpec defaults;
    *spec = nm_contention_spec{};
    spec->population = defaults.population;
    spec->trials_per_rate = defaults.trials_per_rate;
    spec->backoff_exponent = defaults.backoff.backoff_exponent;
    spec->threads = 1;
}

nm_status nm_run_contention_compare(const nm_contention_spec* spec, char** out_csv,
                                    char** out_svg) {
    if (!out_csv) return NM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        experiments::ContentionSpec core;
        if (nm_status s = fill_contention_spec(spec, core); s != NM_OK) return s;
        const auto rows = experiments::run_contention_compare(core, spec->threads);
        if (nm_status s = export_string(experiments::contention_compare_csv(rows), out_csv);
            s != NM_OK)
            return s;
        if (out_svg &&
            export_string(experiments::contention_compare_svg(rows), out_svg) != NM_OK)
            return NM_ERR_INTERNAL;
        return NM_OK;
    });
}

void nm_harvest_spec_init(nm_harvest_spec* spec) {
    if (!spec) return;
    const experiments::HarvestSpec defaults;
    *spec = nm_harvest_spec{};
    spec->horizon_s = defaults.horizon_s;
    spec->sample_step_s = defaults.sample_step_s;
    spec->capacity_pj = defaults.capacity_pj;
}

nm_status nm_run_harvest_curve(const nm_harvest_spec* spec, char** out_csv, char** out_svg) {
    if (!spec || !out_csv) return NM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        experiments::HarvestSpec core;
        if (spec->frequencies_hz)
            core.frequencies_hz.assign(spec->frequencies_hz,
                                       spec->frequencies_hz + spec->n_frequencies);
        core.horizon_s = spec->horizon_s;
        core.sample_step_s = spec->sample_step_s;
        core.capacity_pj = spec->capacity_pj;
        if (Status s = core.validate(); s != Status::Ok) return to_c(s);
        const auto rows = experiments::run_harvest_curve(core);
        if (nm_status s = export_string(experiments::harvest_curve_csv(core, rows), out_csv);
            s != NM_OK)
            return s;
        if (out_svg &&
            export_string(experiments::harvest_curve_svg(core, rows), out_svg) != NM_OK)
            return NM_ERR_INTERNAL;
        return NM_OK;
    });
}

void nm_tsook_spec_init(nm_tsook_spec* spec) {
    if (!spec) return;
    const experiments::TsookSpec defaults;
    *spec = nm_tsook_spec{};
    spec->symbol_spacing_fs = defaults.symbol_spacing_fs;
    spec->pulse_width_fs = defaults.pulse_width_fs;
    spec->distance_mm = defaults.propagation.distance_mm;
    spec->speed_m_per_s = defaults.propagation.speed_m_per_s;
}

nm_status nm_run_tsook_trace(const nm_tsook_spec* spec, char** out_csv, int64_t* out_overlaps) {
    if (!spec || (!out_csv && !out_overlaps)) return NM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        experiments::TsookSpec core;
        if (spec->bit_strings) {
            if (!spec->starts_fs) return NM_ERR_INVALID_ARGUMENT;
            core.trains.clear();
            for (std::size_t i = 0; i < spec->n_trains; ++i)
                core.trains.push_back({spec->bit_strings[i], spec->starts_fs[i]});
        }
        core.symbol_spacing_fs = spec->symbol_spacing_fs;
        core.pulse_width_fs = spec->pulse_width_fs;
        core.propagation.distance_mm = spec->distance_mm;
        core.propagation.speed_m_per_s = spec->speed_m_per_s;
        if (Status s = core.validate(); s != Status::Ok) return to_c(s);
        const auto result = experiments::run_tsook_trace(core);
        if (out_overlaps) *out_overlaps = result.overlaps;
        if (out_csv) return export_string(experiments::tsook_trace_csv(result), out_csv);
        return NM_OK;
    });
}

} // extern "C"
