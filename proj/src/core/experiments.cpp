#include "core/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "core/sim.hpp"
#include "core/textio.hpp"

namespace nanomac::experiments {

using textio::append_csv_field;
using textio::format_number;

namespace {

// Run fn(0..n-1) on up to `threads` workers. Each index is independent and
// writes only its own output slot, so scheduling never changes results.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned count = std::min<unsigned>(threads, unsigned(n));
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

bool scales_valid(const std::vector<double>& scales) {
    return !scales.empty() && std::all_of(scales.begin(), scales.end(), [](double s) {
        return s >= 0.5 && s <= 1.0;
    });
}

} // namespace

Status SweepSpec::validate() const {
    if (durations.empty() || std::any_of(durations.begin(), durations.end(), [](double d) {
            return d <= 0 || d > 100000;
        }))
        return Status::InvalidArgument;
    if (!scales_valid(packet_scales)) return Status::InvalidArgument;
    if (slots_min < 1 || slots_max > 15 || slots_min > slots_max) return Status::InvalidArgument;
    if (superframes_per_point == 0) return Status::InvalidArgument;
    if (harvest_rate_pj_per_min <= 0) return Status::InvalidArgument;
    return Status::Ok;
}

ContentionSpec::ContentionSpec() {
    request_rates.reserve(50);
    for (int i = 1; i <= 50; ++i) request_rates.push_back(double(i) / 100.0);
}

Status ContentionSpec::validate() const {
    if (population == 0 || trials_per_rate == 0 || !backoff.valid())
        return Status::InvalidArgument;
    if (request_rates.empty()) return Status::InvalidArgument;
    for (double p : request_rates) {
        if (p <= 0 || p > 1) return Status::InvalidArgument;
        if (std::llround(p * population) < 1) return Status::InvalidArgument;
    }
    return Status::Ok;
}

Status HarvestSpec::validate() const {
    if (frequencies_hz.empty() ||
        std::any_of(frequencies_hz.begin(), frequencies_hz.end(),
                    [](double f) { return f <= 0; }))
        return Status::InvalidArgument;
    if (horizon_s <= 0 || sample_step_s <= 0 || capacity_pj <= 0)
        return Status::InvalidArgument;
    return Status::Ok;
}

Status TsookSpec::validate() const {
    if (trains.empty()) return Status::InvalidArgument;
    if (symbol_spacing_fs <= pulse_width_fs || pulse_width_fs <= 0)
        return Status::InvalidArgument;
    for (const TrainSpec& t : trains) {
        if (t.bits.empty()) return Status::InvalidArgument;
        for (char c : t.bits)
            if (c != '0' && c != '1') return Status::InvalidArgument;
    }
    if (propagation.distance_mm < 0 || propagation.distance_mm > 10 ||
        propagation.speed_m_per_s <= 0)
        return Status::InvalidArgument;
    return Status::Ok;
}

double analytic_success_rate(std::uint32_t m, double scale, double duration_min,
                             double rate_pj_per_min) {
    const double budget_pj = scale * (192.0 + double(m) * 45.52);
    return std::min(1.0, rate_pj_per_min * duration_min / budget_pj);
}

std::uint32_t run_sweep_point(double duration_min, double scale, std::uint32_t m,
                              const SweepSpec& spec, std::uint64_t point_index,
                              std::string* trace) {
    mac::SuperframeConfig config;
    config.duration_min = duration_min;
    config.packet_scale = scale;

    energy::HarvestConfig harvest;
    harvest.mode = energy::HarvestMode::LinearRate;
    harvest.rate_pj_per_min = spec.harvest_rate_pj_per_min;

    mac::Topology world;
    world.coordinator.address = 0;
    world.coordinator.energy = energy::EnergyStore::coordinator_default();
    world.coordinator.energy.harvest = harvest;
    world.sensors.resize(m);
    for (std::uint32_t i = 0; i < m; ++i) {
        mac::SensorState& s = world.sensors[i];
        s.address = frames::ShortAddress(i + 1);
        s.phase = mac::SensorPhase::Associated;
        s.energy = energy::EnergyStore::sensor_default();
        s.energy.harvest = harvest;
        world.coordinator.member_table.push_back(s.address);
    }

    const mac::PulseEnergyParams params{};
    RandomStream rng(spec.seed, point_index);

    const SimTime interval = config.duration();
    sim::Engine engine;
    if (trace) engine.set_trace(trace);
    (void)engine.schedule(SimTime{}, sim::EventKind::BeaconDue, world.coordinator.address);

    std::uint32_t completed = 0;
    std::uint64_t superframe_index = 0;
    SimTime last_beacon{};

    auto on_event = [&](sim::Engine& eng, const sim::Event& ev) {
        if (ev.kind != sim::EventKind::BeaconDue) return;
        const SimTime elapsed = eng.now() - last_beacon;
        last_beacon = eng.now();
        if (elapsed > SimTime{}) {
            world.coordinator.energy.harvest_for(elapsed);
            for (auto& s : world.sensors) s.energy.harvest_for(elapsed);
        }
        // event-driven traffic: every sensor has a fresh observation each interval
        std::vector<mac::SensorState*> active;
        active.reserve(world.sensors.size());
        for (auto& s : world.sensors) {
            s.pending_data = std::array<std::uint8_t, 4>{std::uint8_t(s.address & 0xff),
                                                         std::uint8_t(s.address >> 8), 0, 0};
            active.push_back(&s);
        }
        const mac::SuperframeResult result = mac::run_superframe(
            superframe_index, world.coordinator, active, config, params, rng);
        if (result.status == mac::SuperframeStatus::Completed) ++completed;
        ++superframe_index;
        if (superframe_index < spec.superframes_per_point)
            (void)eng.schedule(eng.now() + interval, sim::EventKind::BeaconDue,
                               world.coordinator.address);
    };

    engine.run_until(interval * spec.superframes_per_point, on_event);
    return completed;
}

namespace {

std::vector<SweepRow> run_grid(const SweepSpec& spec, const std::vector<double>& scales,
                               unsigned threads, std::string* trace) {
    struct Point {
        double duration;
        double scale;
        std::uint32_t m;
    };
    std::vector<Point> grid;
    for (double d : spec.durations)
        for (double s : scales)
            for (std::uint32_t m = spec.slots_min; m <= spec.slots_max; ++m)
                grid.push_back({d, s, m});

    std::vector<SweepRow> rows(grid.size());
    std::vector<std::string> traces(trace ? grid.size() : 0);
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        const Point& p = grid[i];
        std::string* point_trace = trace ? &traces[i] : nullptr;
        const std::uint32_t completed =
            run_sweep_point(p.duration, p.scale, p.m, spec, std::uint64_t(i), point_trace);
        rows[i] = SweepRow{p.duration, p.scale, p.m,
                           double(completed) / double(spec.superframes_per_point),
                           analytic_success_rate(p.m, p.scale, p.duration,
                                                 spec.harvest_rate_pj_per_min)};
    });
    if (trace) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            *trace += "# point duration_min=" + format_number(grid[i].duration) +
                      " scale=" + format_number(grid[i].scale) +
                      " m=" + std::to_string(grid[i].m) + "\n";
            *trace += traces[i];
        }
    }
    return rows;
}

} // namespace

std::vector<SweepRow> run_duration_sweep(const SweepSpec& spec, unsigned threads,
                                         std::string* trace) {
    return run_grid(spec, {1.0}, threads, trace);
}

std::vector<SweepRow> run_packet_size_sweep(const SweepSpec& spec, unsigned threads,
                                            std::string* trace) {
    return run_grid(spec, spec.packet_scales, threads, trace);
}

std::string duration_sweep_csv(const std::vector<SweepRow>& rows) {
    std::string csv = "duration_min,m,success_rate\n";
    for (const SweepRow& r : rows) {
        append_csv_field(csv, r.duration_min);
        append_csv_field(csv, std::uint64_t(r.m));
        append_csv_field(csv, r.success_rate, true);
    }
    return csv;
}

std::string packet_size_sweep_csv(const std::vector<SweepRow>& rows) {
    std::string csv = "duration_min,scale,m,success_rate\n";
    for (const SweepRow& r : rows) {
        append_csv_field(csv, r.duration_min);
        append_csv_field(csv, r.scale);
        append_csv_field(csv, std::uint64_t(r.m));
        append_csv_field(csv, r.success_rate, true);
    }
    return csv;
}

std::string oracle_check_csv(const std::vector<SweepRow>& rows) {
    std::string csv = "duration_min,scale,m,simulated,analytic,abs_deviation\n";
    for (const SweepRow& r : rows) {
        append_csv_field(csv, r.duration_min);
        append_csv_field(csv, r.scale);
        append_csv_field(csv, std::uint64_t(r.m));
        append_csv_field(csv, r.success_rate);
        append_csv_field(csv, r.analytic);
        append_csv_field(csv, std::fabs(r.success_rate - r.analytic), true);
    }
    return csv;
}

double max_oracle_deviation(const std::vector<SweepRow>& rows) {
    double worst = 0.0;
    for (const SweepRow& r : rows)
        worst = std::max(worst, std::fabs(r.success_rate - r.analytic));
    return worst;
}

std::string duration_sweep_svg(const std::vector<SweepRow>& rows) {
    std::vector<textio::Series> series;
    for (const SweepRow& r : rows) {
        const std::string label = format_number(r.duration_min) + " min";
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const textio::Series& s) { return s.label == label; });
        if (it == series.end()) {
            series.push_back({label, {}});
            it = series.end() - 1;
        }
        it->points.emplace_back(double(r.m), r.success_rate);
    }
    return textio::render_line_plot_svg("Successful slot assigning rate vs concurrent slots",
                                        "concurrent slots", "success rate", series);
}

std::string packet_size_sweep_svg(const std::vector<SweepRow>& rows) {
    std::vector<textio::Series> series;
    for (const SweepRow& r : rows) {
        const std::string label =
            format_number(r.duration_min) + " min, scale " + format_number(r.scale);
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const textio::Series& s) { return s.label == label; });
        if (it == series.end()) {
            series.push_back({label, {}});
            it = series.end() - 1;
        }
        it->points.emplace_back(double(r.m), r.success_rate);
    }
    return textio::render_line_plot_svg("Successful slot assigning rate vs packet size",
                                        "concurrent slots", "success rate", series);
}

std::vector<ContentionRow> run_contention_compare(const ContentionSpec& spec,
                                                  unsigned threads) {
    std::vector<ContentionRow> rows(spec.request_rates.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        const double p = spec.request_rates[i];
        const std::uint32_t contender_count =
            std::uint32_t(std::llround(p * double(spec.population)));

        std::vector<frames::ShortAddress> contenders(contender_count);
        for (std::uint32_t c = 0; c < contender_count; ++c)
            contenders[c] = frames::ShortAddress(c + 1);

        // independent streams per method so adding rates never perturbs others
        RandomStream csma_rng(spec.seed, 2 * i);
        RandomStream rr_rng(spec.seed, 2 * i + 1);

        std::uint64_t csma_usable = 0;
        std::uint64_t rr_usable = 0;
        std::uint64_t rr_owner = 0;
        for (std::uint32_t trial = 0; trial < spec.trials_per_rate; ++trial) {
            for (std::uint32_t slot = 1; slot <= 15; ++slot) {
                const mac::SlotOutcome outcome =
                    mac::csma_contend(contenders, csma_rng, spec.backoff);
                if (outcome.kind == mac::SlotOutcomeKind::Success) ++csma_usable;

                // cyclic ownership; the owner is active with probability p
                rr_owner = (rr_owner + 1) % spec.population;
                if (rr_rng.uniform01() < p) ++rr_usable;
            }
        }
        const double denom = 15.0 * double(spec.trials_per_rate);
        rows[i] = ContentionRow{p, double(csma_usable) / denom, double(rr_usable) / denom};
    });
    return rows;
}

std::string contention_compare_csv(const std::vector<ContentionRow>& rows) {
    std::string csv = "request_rate,csma_usable_rate,rr_usable_rate\n";
    for (const ContentionRow& r : rows) {
        append_csv_field(csv, r.request_rate);
        append_csv_field(csv, r.csma_usable_rate);
        append_csv_field(csv, r.rr_usable_rate, true);
    }
    return csv;
}

std::string contention_compare_svg(const std::vector<ContentionRow>& rows) {
    textio::Series csma{"slotted CSMA/CA", {}};
    textio::Series rr{"round robin", {}};
    for (const ContentionRow& r : rows) {
        csma.points.emplace_back(r.request_rate, r.csma_usable_rate);
        rr.points.emplace_back(r.request_rate, r.rr_usable_rate);
    }
    return textio::render_line_plot_svg("Possible slot usable rate", "slot request rate",
                                        "usable rate", {csma, rr});
}

std::vector<HarvestRow> run_harvest_curve(const HarvestSpec& spec) {
    std::vector<HarvestRow> rows;
    const std::uint64_t steps = std::uint64_t(spec.horizon_s / spec.sample_step_s);
    rows.reserve(steps + 1);
    for (std::uint64_t i = 0; i <= steps; ++i) {
        HarvestRow row;
        row.time_s = double(i) * spec.sample_step_s;
        row.level_pj.reserve(spec.frequencies_hz.size());
        for (double f : spec.frequencies_hz) {
            energy::HarvestConfig config;
            config.mode = energy::HarvestMode::SaturatingCurve;
            config.cycle_frequency_hz = f;
            row.level_pj.push_back(
                energy::harvested_level_pj(row.time_s, 0.0, config, spec.capacity_pj));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string harvest_curve_csv(const HarvestSpec& spec, const std::vector<HarvestRow>& rows) {
    std::string csv = "time_s";
    for (double f : spec.frequencies_hz) csv += ",energy_pJ_" + format_number(f) + "Hz";
    csv.push_back('\n');
    for (const HarvestRow& r : rows) {
        csv += format_number(r.time_s);
        for (double level : r.level_pj) {
            csv.push_back(',');
            csv += format_number(level);
        }
        csv.push_back('\n');
    }
    return csv;
}

std::string harvest_curve_svg(const HarvestSpec& spec, const std::vector<HarvestRow>& rows) {
    std::vector<textio::Series> series;
    for (std::size_t f = 0; f < spec.frequencies_hz.size(); ++f) {
        textio::Series s{format_number(spec.frequencies_hz[f]) + " Hz", {}};
        for (const HarvestRow& r : rows) s.points.emplace_back(r.time_s, r.level_pj[f]);
        series.push_back(std::move(s));
    }
    return textio::render_line_plot_svg("Accumulated capacitor energy", "time (s)",
                                        "energy (pJ)", series);
}

TsookResult run_tsook_trace(const TsookSpec& spec) {
    TsookResult result;
    const std::int64_t delay = channel::propagation_delay_fs(spec.propagation);
    std::vector<channel::ArrivedTrain> arrived;
    for (std::size_t t = 0; t < spec.trains.size(); ++t) {
        channel::PulseTrain train;
        train.start_fs = spec.trains[t].start_fs;
        train.symbol_spacing_fs = spec.symbol_spacing_fs;
        train.pulse_width_fs = spec.pulse_width_fs;
        for (char c : spec.trains[t].bits) train.bits.push_back(c == '1');
        for (std::size_t i = 0; i < train.bits.size(); ++i)
            if (train.bits[i])
                result.arrivals.emplace_back(
                    std::uint32_t(t), std::uint32_t(i),
                    train.start_fs + delay + std::int64_t(i) * train.symbol_spacing_fs);
        arrived.push_back({std::move(train), delay});
    }
    result.overlaps = channel::count_pulse_overlaps(arrived);
    return result;
}

std::string tsook_trace_csv(const TsookResult& result) {
    std::string csv = "train_id,symbol_index,arrival_fs\n";
    for (const auto& [train, symbol, at] : result.arrivals) {
        append_csv_field(csv, std::uint64_t(train));
        append_csv_field(csv, std::uint64_t(symbol));
        csv += std::to_string(at);
        csv.push_back('\n');
    }
    return csv;
}

std::string superframe_ledger_csv(double duration_min, double scale, std::uint32_t m,
                                  const SweepSpec& spec) {
    mac::SuperframeConfig config;
    config.duration_min = duration_min;
    config.packet_scale = scale;

    energy::HarvestConfig harvest;
    harvest.rate_pj_per_min = spec.harvest_rate_pj_per_min;

    mac::Topology world;
    world.coordinator.energy.harvest = harvest;
    world.sensors.resize(m);
    for (std::uint32_t i = 0; i < m; ++i) {
        world.sensors[i].address = frames::ShortAddress(i + 1);
        world.sensors[i].phase = mac::SensorPhase::Associated;
        world.sensors[i].energy.harvest = harvest;
        world.coordinator.member_table.push_back(world.sensors[i].address);
    }

    const mac::PulseEnergyParams params{};
    RandomStream rng(spec.seed, 0);

    std::string csv = "superframe_index,status,m,budget_pJ,coordinator_level_pJ,"
                      "success_slots,collision_slots,idle_slots\n";
    for (std::uint32_t k = 0; k < spec.superframes_per_point; ++k) {
        if (k > 0) {
            world.coordinator.energy.harvest_for(config.duration());
            for (auto& s : world.sensors) s.energy.harvest_for(config.duration());
        }
        std::vector<mac::SensorState*> active;
        for (auto& s : world.sensors) {
            s.pending_data = std::array<std::uint8_t, 4>{};
            active.push_back(&s);
        }
        const mac::SuperframeResult r =
            mac::run_superframe(k, world.coordinator, active, config, params, rng);
        std::uint64_t success = 0, collision = 0, idle = 0;
        for (const mac::SlotOutcome& o : r.slot_outcomes) {
            if (o.kind == mac::SlotOutcomeKind::Success) ++success;
            else if (o.kind == mac::SlotOutcomeKind::Collision) ++collision;
            else ++idle;
        }
        append_csv_field(csv, std::uint64_t(k));
        append_csv_field(csv, std::string(r.status == mac::SuperframeStatus::Completed
                                              ? "Completed"
                                              : "Skipped"));
        append_csv_field(csv, std::uint64_t(m));
        append_csv_field(csv, energy::fj_to_pj(r.budget_fj));
        append_csv_field(csv, world.coordinator.energy.level_pj());
        append_csv_field(csv, success);
        append_csv_field(csv, collision);
        append_csv_field(csv, idle, true);
    }
    return csv;
}

frames::MacFrame canonical_frame(frames::FrameKind kind) {
    using namespace frames;
    switch (kind) {
        case FrameKind::Beacon: {
            BeaconPayload body;
            body.superframe_spec = {16, 15};
            body.pending_count = 0;
            body.addresses.fill(kBroadcastAddress);
            return make_beacon(0, 0x0000, body);
        }
        case FrameKind::Data: {
            const std::uint8_t payload[4] = {0x01, 0x02, 0x03, 0x04};
            return make_data(0, 0x0000, 0x0001, payload);
        }
        case FrameKind::Ack:
            return make_ack(0);
        case FrameKind::MacCommand: {
            const std::uint8_t payload[4] = {0x00, 0x00, 0x00, 0x00};
            return make_command(0, 0x0000, 0x0001, kCmdAssociationRequest, payload);
        }
    }
    return make_ack(0);
}

std::string hex_dump(const std::vector<std::uint8_t>& octets) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (std::size_t i = 0; i < octets.size(); ++i) {
        out.push_back(digits[octets[i] >> 4]);
        out.push_back(digits[octets[i] & 0xf]);
        out.push_back((i + 1) % 16 == 0 || i + 1 == octets.size() ? '\n' : ' ');
    }
    return out;
}

} // namespace nanomac::experiments
