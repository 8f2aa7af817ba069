/*
 * nanomac: deterministic simulator and protocol library for slotted
 * CSMA/CA medium access in energy-harvesting wireless nanosensor networks.
 *
 * C API over the C++ core. Conventions:
 *   - every fallible function returns an nm_status (NM_OK == 0);
 *   - objects behind opaque handles are created by nm_*_new/make and must be
 *     released with the matching nm_*_free;
 *   - strings returned through char** are heap-allocated UTF-8 and must be
 *     released with nm_string_free;
 *   - all multi-octet wire fields are little-endian; energies are picojoules
 *     (pJ) or integer femtojoules (fJ); times are integer femtoseconds (fs).
 */
#ifndef NANOMAC_H
#define NANOMAC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NANOMAC_API __declspec(dllexport)
#else
#define NANOMAC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nm_status {
    NM_OK = 0,
    NM_ERR_INVALID_ARGUMENT = 1,
    NM_ERR_INVALID_PAYLOAD_LENGTH = 2,
    NM_ERR_BAD_SFD = 3,
    NM_ERR_LENGTH_MISMATCH = 4,
    NM_ERR_FCS_MISMATCH = 5,
    NM_ERR_UNKNOWN_FRAME_TYPE = 6,
    NM_ERR_INSUFFICIENT_ENERGY = 7,
    NM_ERR_TABLE_FULL = 8,
    NM_ERR_NOT_MEMBER = 9,
    NM_ERR_CONTENTION_LOST = 10,
    NM_ERR_PAST_EVENT = 11,
    NM_ERR_IO = 12,
    NM_ERR_OVERFLOW = 13,
    NM_ERR_INTERNAL = 100
} nm_status;

NANOMAC_API const char* nm_status_str(nm_status status);
NANOMAC_API const char* nm_version(void);
NANOMAC_API void nm_string_free(char* text);

/* ------------------------------------------------------------------ */
/* Frames                                                              */

typedef enum nm_frame_kind {
    NM_FRAME_BEACON = 0,
    NM_FRAME_DATA = 1,
    NM_FRAME_ACK = 2,
    NM_FRAME_MAC_COMMAND = 3
} nm_frame_kind;

enum {
    NM_CMD_ASSOCIATION_REQUEST = 0x01,
    NM_CMD_ASSOCIATION_RESPONSE = 0x02,
    NM_CMD_DISASSOCIATION_NOTIFY = 0x03,
    NM_CMD_DATA_REQUEST = 0x04
};

#define NM_BROADCAST_ADDRESS 0xffffu

typedef struct nm_frame nm_frame;

/* addresses[15] is the advertised list; unused entries are 0xffff. The first
 * pending_count entries are the ones with queued downlink data. */
NANOMAC_API nm_status nm_frame_make_beacon(uint8_t sequence, uint16_t src,
                                           const uint8_t superframe_spec[2],
                                           uint8_t pending_count, const uint16_t addresses[15],
                                           nm_frame** out);
NANOMAC_API nm_status nm_frame_make_data(uint8_t sequence, uint16_t dest, uint16_t src,
                                         const uint8_t msdu[4], int ack_request,
                                         nm_frame** out);
NANOMAC_API nm_status nm_frame_make_ack(uint8_t sequence, nm_frame** out);
NANOMAC_API nm_status nm_frame_make_command(uint8_t sequence, uint16_t dest, uint16_t src,
                                            uint8_t command_id, const uint8_t msdu[4],
                                            int ack_request, nm_frame** out);
/* The reference frame of each kind (the one the CLI prints). */
NANOMAC_API nm_status nm_frame_make_canonical(nm_frame_kind kind, nm_frame** out);
NANOMAC_API void nm_frame_free(nm_frame* frame);

/* Full PHY encapsulation (preamble, SFD, length, PSDU with FCS). A beacon
 * needs 48 octets, data 19, ack 11, command 20. */
NANOMAC_API nm_status nm_frame_encode(const nm_frame* frame, uint8_t* buffer, size_t capacity,
                                      size_t* written);
NANOMAC_API nm_status nm_frame_decode(const uint8_t* octets, size_t count, nm_frame** out);

NANOMAC_API int nm_frame_kind_of(const nm_frame* frame);
NANOMAC_API uint8_t nm_frame_sequence(const nm_frame* frame);
NANOMAC_API uint16_t nm_frame_dest(const nm_frame* frame);
NANOMAC_API uint16_t nm_frame_src(const nm_frame* frame);
NANOMAC_API uint8_t nm_frame_command_id(const nm_frame* frame);
NANOMAC_API nm_status nm_frame_payload(const nm_frame* frame, uint8_t* buffer, size_t capacity,
                                       size_t* written);

/* Encoded size in bits at a packet scale in [0.5, 1.0]; base sizes are
 * beacon 384, data 152, ack 88, command 160. */
NANOMAC_API int64_t nm_frame_bit_length(nm_frame_kind kind, double scale);

/* CRC-16, generator x^16+x^12+x^5+1, init 0, LSB-first (check value 0x2189
 * over "123456789"). */
NANOMAC_API uint16_t nm_compute_fcs(const uint8_t* octets, size_t count);

/* ------------------------------------------------------------------ */
/* Energy                                                              */

typedef enum nm_rx_mode {
    NM_RX_TABLE_CALIBRATED = 0, /* rx_per_bit_pj per received bit */
    NM_RX_EQUATION_TWO = 1      /* e_tx_pulse_pj / 10 per received bit */
} nm_rx_mode;

typedef struct nm_energy_params {
    double e_tx_pulse_pj;  /* default 1.0  */
    double rx_per_bit_pj;  /* default 0.01 */
    double w;              /* probability of a 1 symbol, default 0.5 */
    int rx_mode;           /* nm_rx_mode, default NM_RX_TABLE_CALIBRATED */
} nm_energy_params;

NANOMAC_API void nm_energy_params_init(nm_energy_params* params);

/* scale * bits * w * e_tx, rounded to the nearest femtojoule. */
NANOMAC_API int64_t nm_tx_energy_fj(int64_t bits, double scale, const nm_energy_params* params);
NANOMAC_API int64_t nm_rx_energy_fj(int64_t bits, double scale, const nm_energy_params* params);
NANOMAC_API double nm_tx_energy_pj(int64_t bits, double scale, const nm_energy_params* params);
NANOMAC_API double nm_rx_energy_pj(int64_t bits, double scale, const nm_energy_params* params);

typedef enum nm_harvest_mode {
    NM_HARVEST_LINEAR_RATE = 0,
    NM_HARVEST_SATURATING_CURVE = 1
} nm_harvest_mode;

/* Capacitor level after elapsed_s seconds of harvesting. LinearRate adds
 * rate_pj_per_min per minute, capped at capacity. SaturatingCurve follows
 * capacity * (1 - exp(-alpha * cycles))^2; pass alpha <= 0 for the built-in
 * calibration (95% of an 800 pJ store after 2419 s at 1 Hz). */
NANOMAC_API double nm_harvested_level_pj(double elapsed_s, double starting_pj,
                                         nm_harvest_mode mode, double rate_pj_per_min,
                                         double cycle_frequency_hz, double alpha,
                                         double capacity_pj);
NANOMAC_API double nm_default_harvest_alpha(void);

/* ------------------------------------------------------------------ */
/* Channel and contention                                              */

NANOMAC_API int64_t nm_propagation_delay_fs(double distance_mm, double speed_m_per_s);

typedef struct nm_rng nm_rng;

/* Deterministic 64-bit stream; identical (seed, stream_id) pairs replay the
 * identical sequence on every platform. */
NANOMAC_API nm_rng* nm_rng_new(uint64_t seed, uint64_t stream_id);
NANOMAC_API void nm_rng_free(nm_rng* rng);
NANOMAC_API uint64_t nm_rng_next(nm_rng* rng);
NANOMAC_API uint64_t nm_rng_uniform(nm_rng* rng, uint64_t bound);

typedef enum nm_slot_outcome { NM_SLOT_IDLE = 0, NM_SLOT_SUCCESS = 1, NM_SLOT_COLLISION = 2 } nm_slot_outcome;

/* One contention round over a backoff window of 2^backoff_exponent slots.
 * Contender draws happen in ascending address order. On success *winner is
 * set; on collision *colliders counts the tied transmitters. */
NANOMAC_API nm_status nm_csma_contend(const uint16_t* contenders, size_t count,
                                      uint32_t backoff_exponent, nm_rng* rng, int* outcome,
                                      uint16_t* winner, uint32_t* colliders);

/* ------------------------------------------------------------------ */
/* Experiments                                                         */

/* Null array pointers select the built-in defaults (durations {8,10,12} min,
 * scales {1.0..0.5 step 0.1}, slots 1..15). */
typedef struct nm_sweep_spec {
    const double* durations;
    size_t n_durations;
    const double* packet_scales;
    size_t n_scales;
    uint32_t slots_min;
    uint32_t slots_max;
    uint32_t superframes_per_point;
    uint64_t seed;
    double harvest_rate_pj_per_min;
    unsigned threads;
} nm_sweep_spec;

NANOMAC_API void nm_sweep_spec_init(nm_sweep_spec* spec);

/* Completed-superframe fraction vs concurrent slots, one row per
 * (duration, m). out_svg and out_trace may be NULL. */
NANOMAC_API nm_status nm_run_duration_sweep(const nm_sweep_spec* spec, char** out_csv,
                                            char** out_svg, char** out_trace);
/* Same grid extended over the packet scales. */
NANOMAC_API nm_status nm_run_packet_size_sweep(const nm_sweep_spec* spec, char** out_csv,
                                               char** out_svg, char** out_trace);
/* Simulated vs analytic completion rate over the full grid; reports the
 * worst absolute deviation. */
NANOMAC_API nm_status nm_run_oracle_check(const nm_sweep_spec* spec, char** out_csv,
                                          double* out_max_deviation);
/* Per-superframe ledger for a single (duration, scale, m) point. */
NANOMAC_API nm_status nm_run_superframe_ledger(const nm_sweep_spec* spec, double duration_min,
                                               double scale, uint32_t m, char** out_csv);

/* Long-run completion fraction implied by the energy skip rule under the
 * default pulse energetics. */
NANOMAC_API double nm_analytic_success_rate(uint32_t m, double scale, double duration_min,
                                            double rate_pj_per_min);

typedef struct nm_contention_spec {
    uint32_t population;
    const double* request_rates; /* NULL: 0.01..0.50 step 0.01 */
    size_t n_rates;
    uint32_t trials_per_rate;
    uint32_t backoff_exponent;
    uint64_t seed;
    unsigned threads;
} nm_contention_spec;

NANOMAC_API void nm_contention_spec_init(nm_contention_spec* spec);
NANOMAC_API nm_status nm_run_contention_compare(const nm_contention_spec* spec, char** out_csv,
                                                char** out_svg);

typedef struct nm_harvest_spec {
    const double* frequencies_hz; /* NULL: {1, 50} */
    size_t n_frequencies;
    double horizon_s;
    double sample_step_s;
    double capacity_pj;
} nm_harvest_spec;

NANOMAC_API void nm_harvest_spec_init(nm_harvest_spec* spec);
NANOMAC_API nm_status nm_run_harvest_curve(const nm_harvest_spec* spec, char** out_csv,
                                           char** out_svg);

typedef struct nm_tsook_spec {
    const char* const* bit_strings; /* NULL: the three-train witness scenario */
    const int64_t* starts_fs;
    size_t n_trains;
    int64_t symbol_spacing_fs;
    int64_t pulse_width_fs;
    double distance_mm;
    double speed_m_per_s;
} nm_tsook_spec;

NANOMAC_API void nm_tsook_spec_init(nm_tsook_spec* spec);
/* Pulse arrival table plus the count of cross-train pulse overlaps. */
NANOMAC_API nm_status nm_run_tsook_trace(const nm_tsook_spec* spec, char** out_csv,
                                         int64_t* out_overlaps);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NANOMAC_H */
