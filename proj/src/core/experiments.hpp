#ifndef NANOMAC_CORE_EXPERIMENTS_HPP
#define NANOMAC_CORE_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/channel.hpp"
#include "core/mac.hpp"
#include "core/status.hpp"

namespace nanomac::experiments {

// Grid description for the superframe studies. Every point simulates
// superframes_per_point beacon intervals from fully charged stores.
struct SweepSpec {
    std::vector<double> durations = {8.0, 10.0, 12.0};              // minutes
    std::uint32_t slots_min = 1, slots_max = 15;                    // concurrent slots
    std::vector<double> packet_scales = {1.0, 0.9, 0.8, 0.7, 0.6, 0.5};
    std::uint32_t superframes_per_point = 1000;
    std::uint64_t seed = 0;
    double harvest_rate_pj_per_min = 29.943;

    Status validate() const;
};

struct ContentionSpec {
    std::uint32_t population = 100;
    std::vector<double> request_rates;  // default 0.01..0.50 step 0.01
    std::uint32_t trials_per_rate = 10000;
    mac::BackoffConfig backoff{};
    std::uint64_t seed = 0;

    ContentionSpec();
    Status validate() const;
};

struct HarvestSpec {
    std::vector<double> frequencies_hz = {1.0, 50.0};
    double horizon_s = 2500.0;
    double sample_step_s = 1.0;
    double capacity_pj = 800.0;

    Status validate() const;
};

struct TrainSpec {
    std::string bits;          // e.g. "101001"
    std::int64_t start_fs = 0;
};

// Defaults pin the three-transmitter witness scenario: staggered starts of
// 0/10/20 ps with 100 ps symbol spacing give every cross-train pulse pair a
// gap of at least 10 ps, far above the 100 fs pulse width, so nothing
// overlaps at the receiver.
struct TsookSpec {
    std::vector<TrainSpec> trains = {{"101001", 0}, {"110001", 10000}, {"100101", 20000}};
    std::int64_t symbol_spacing_fs = 100000;
    std::int64_t pulse_width_fs = 100;
    channel::PropagationModel propagation{};

    Status validate() const;
};

// Long-run completion fraction implied by the skip rule: the coordinator
// banks rate*duration per interval and a completed superframe costs
// scale * (192 + m * 45.52) pJ with the default pulse energetics.
double analytic_success_rate(std::uint32_t m, double scale, double duration_min,
                             double rate_pj_per_min);

struct SweepRow {
    double duration_min;
    double scale;
    std::uint32_t m;
    double success_rate;
    double analytic;
};

// Simulate one grid point; returns completed superframes. The world is a
// star of m pre-associated sensors plus the coordinator, driven through the
// event engine as one BeaconDue per interval.
std::uint32_t run_sweep_point(double duration_min, double scale, std::uint32_t m,
                              const SweepSpec& spec, std::uint64_t point_index,
                              std::string* trace);

std::vector<SweepRow> run_duration_sweep(const SweepSpec& spec, unsigned threads = 1,
                                         std::string* trace = nullptr);
std::vector<SweepRow> run_packet_size_sweep(const SweepSpec& spec, unsigned threads = 1,
                                            std::string* trace = nullptr);

std::string duration_sweep_csv(const std::vector<SweepRow>& rows);
std::string packet_size_sweep_csv(const std::vector<SweepRow>& rows);
std::string oracle_check_csv(const std::vector<SweepRow>& rows);
double max_oracle_deviation(const std::vector<SweepRow>& rows);

std::string duration_sweep_svg(const std::vector<SweepRow>& rows);
std::string packet_size_sweep_svg(const std::vector<SweepRow>& rows);

struct ContentionRow {
    double request_rate;
    double csma_usable_rate;
    double rr_usable_rate;
};

// Slot-usable-rate comparison over 15-slot trials. Slotted CSMA/CA: the
// request rate fixes the number of contenders competing in every slot
// (round(p * population)); a slot is usable when the backoff draw produces a
// single winner. Round robin: each slot has one cyclic owner and is usable
// when that owner happens to be active (probability p), contention-free.
std::vector<ContentionRow> run_contention_compare(const ContentionSpec& spec,
                                                  unsigned threads = 1);
std::string contention_compare_csv(const std::vector<ContentionRow>& rows);
std::string contention_compare_svg(const std::vector<ContentionRow>& rows);

struct HarvestRow {
    double time_s;
    std::vector<double> level_pj;  // one entry per requested frequency
};

std::vector<HarvestRow> run_harvest_curve(const HarvestSpec& spec);
std::string harvest_curve_csv(const HarvestSpec& spec, const std::vector<HarvestRow>& rows);
std::string harvest_curve_svg(const HarvestSpec& spec, const std::vector<HarvestRow>& rows);

struct TsookResult {
    // (train_id, symbol_index, arrival_fs) per transmitted pulse, plus the
    // count of cross-train pulse overlaps at the receiver
    std::vector<std::tuple<std::uint32_t, std::uint32_t, std::int64_t>> arrivals;
    std::int64_t overlaps = 0;
};

TsookResult run_tsook_trace(const TsookSpec& spec);
std::string tsook_trace_csv(const TsookResult& result);

// Per-superframe ledger for a single grid point.
std::string superframe_ledger_csv(double duration_min, double scale, std::uint32_t m,
                                  const SweepSpec& spec);

// Canonical frames for conformance inspection.
frames::MacFrame canonical_frame(frames::FrameKind kind);
std::string hex_dump(const std::vector<std::uint8_t>& octets);

} // namespace nanomac::experiments

#endif
