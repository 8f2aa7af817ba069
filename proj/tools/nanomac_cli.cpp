// nanomac command line front end. Parses flags and the optional JSON config,
// resolves the effective spec (defaults, then config file, then flags), and
// drives the shared library through its C API.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nanomac.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFault = 1;
constexpr int kExitUsage = 2;

int usage_error(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return kExitUsage;
}

int fault(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return kExitFault;
}

int fault(const std::string& what, nm_status status) {
    return fault(what + ": " + nm_status_str(status));
}

// Owned C string from the library; frees on scope exit.
struct OwnedText {
    char* text = nullptr;
    ~OwnedText() { nm_string_free(text); }
    std::string str() const { return text ? std::string(text) : std::string(); }
};

bool write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out.write(contents.data(), std::streamsize(contents.size()));
    return bool(out);
}

int emit(const fs::path& path, const std::string& contents) {
    if (!write_file(path, contents)) return fault("cannot write " + path.string());
    std::cout << path.string() << "\n";
    return kExitOk;
}

// Merged option state. Precedence: defaults, then the JSON config document,
// then explicitly supplied flags.
struct Options {
    std::vector<double> durations = {8, 10, 12};
    std::vector<double> scales = {1.0, 0.9, 0.8, 0.7, 0.6, 0.5};
    std::uint32_t m_min = 1, m_max = 15;
    std::uint32_t superframes = 1000;
    double harvest_rate = 29.943;

    std::uint32_t population = 100;
    std::vector<double> rates;  // empty: 0.01..0.50 step 0.01
    std::uint32_t trials = 10000;
    std::uint32_t backoff_exponent = 3;

    std::vector<double> frequencies = {1.0, 50.0};
    double horizon_s = 2500.0;
    double step_s = 1.0;
    double capacity_pj = 800.0;

    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    unsigned threads = 0;  // 0: hardware concurrency
    bool svg = false;
    bool trace = false;
};

template <class T>
void from_config(const json& doc, const char* key, T& into) {
    if (doc.contains(key)) into = doc.at(key).get<T>();
}

int apply_config(const std::string& path, Options& opt) {
    std::ifstream in(path);
    if (!in) return fault("cannot read config " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        return usage_error("config " + path + ": " + e.what());
    }
    try {
        from_config(doc, "durations", opt.durations);
        from_config(doc, "packet_scales", opt.scales);
        if (doc.contains("concurrent_slots")) {
            const auto& range = doc.at("concurrent_slots");
            if (!range.is_array() || range.size() != 2)
                return usage_error("config concurrent_slots must be [min, max]");
            opt.m_min = range.at(0).get<std::uint32_t>();
            opt.m_max = range.at(1).get<std::uint32_t>();
        }
        from_config(doc, "superframes_per_point", opt.superframes);
        from_config(doc, "harvest_rate_pj_per_min", opt.harvest_rate);
        from_config(doc, "population", opt.population);
        from_config(doc, "request_rates", opt.rates);
        from_config(doc, "trials_per_rate", opt.trials);
        if (doc.contains("backoff"))
            from_config(doc.at("backoff"), "backoff_exponent", opt.backoff_exponent);
        from_config(doc, "frequencies", opt.frequencies);
        from_config(doc, "horizon_s", opt.horizon_s);
        from_config(doc, "sample_step_s", opt.step_s);
        from_config(doc, "capacity_pj", opt.capacity_pj);
        if (doc.contains("seed")) opt.seed = doc.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        return usage_error(std::string("config: ") + e.what());
    }
    return kExitOk;
}

unsigned effective_threads(const Options& opt) {
    if (opt.threads > 0) return opt.threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

int check_ranges(const Options& opt) {
    for (double s : opt.scales)
        if (s < 0.5 || s > 1.0)
            return usage_error("--scales: " + std::to_string(s) + " outside [0.5, 1.0]");
    for (double d : opt.durations)
        if (d <= 0) return usage_error("--durations: values must be positive");
    if (opt.m_min < 1 || opt.m_max > 15 || opt.m_min > opt.m_max)
        return usage_error("--m-min/--m-max: slot range must lie within 1..15");
    if (opt.backoff_exponent < 1 || opt.backoff_exponent > 8)
        return usage_error("--backoff-exponent: must lie within 1..8");
    for (double p : opt.rates)
        if (p <= 0 || p > 1) return usage_error("--rates: values must lie in (0, 1]");
    return kExitOk;
}

nm_sweep_spec make_sweep_spec(const Options& opt) {
    nm_sweep_spec spec;
    nm_sweep_spec_init(&spec);
    spec.durations = opt.durations.data();
    spec.n_durations = opt.durations.size();
    spec.packet_scales = opt.scales.data();
    spec.n_scales = opt.scales.size();
    spec.slots_min = opt.m_min;
    spec.slots_max = opt.m_max;
    spec.superframes_per_point = opt.superframes;
    spec.seed = *opt.seed;
    spec.harvest_rate_pj_per_min = opt.harvest_rate;
    spec.threads = effective_threads(opt);
    return spec;
}

fs::path artifact_path(const Options& opt, const std::string& subcommand, const char* ext) {
    const std::uint64_t seed = opt.seed.value_or(0);
    return fs::path(opt.out_dir) / (subcommand + "-" + std::to_string(seed) + ext);
}

int run_sweep(const Options& opt, const std::string& name, bool with_scales, bool ledger,
              double ledger_scale) {
    if (!opt.seed) return usage_error("--seed is required for " + name);
    const nm_sweep_spec spec = make_sweep_spec(opt);

    if (ledger) {
        if (opt.durations.size() != 1 || opt.m_min != opt.m_max)
            return usage_error("--ledger needs a single grid point "
                               "(one --durations value and --m-min == --m-max)");
        OwnedText csv;
        const nm_status s = nm_run_superframe_ledger(&spec, opt.durations[0], ledger_scale,
                                                     opt.m_min, &csv.text);
        if (s != NM_OK) return fault(name, s);
        return emit(artifact_path(opt, name + ".ledger", ".csv"), csv.str());
    }

    OwnedText csv, svg, trace;
    nm_status s;
    if (with_scales)
        s = nm_run_packet_size_sweep(&spec, &csv.text, opt.svg ? &svg.text : nullptr,
                                     opt.trace ? &trace.text : nullptr);
    else
        s = nm_run_duration_sweep(&spec, &csv.text, opt.svg ? &svg.text : nullptr,
                                  opt.trace ? &trace.text : nullptr);
    if (s != NM_OK) return fault(name, s);

    if (int rc = emit(artifact_path(opt, name, ".csv"), csv.str()); rc != kExitOk) return rc;
    if (opt.svg)
        if (int rc = emit(artifact_path(opt, name, ".svg"), svg.str()); rc != kExitOk) return rc;
    if (opt.trace)
        if (int rc = emit(artifact_path(opt, name, ".trace"), trace.str()); rc != kExitOk)
            return rc;
    return kExitOk;
}

int run_oracle_check(const Options& opt) {
    if (!opt.seed) return usage_error("--seed is required for oracle-check");
    const nm_sweep_spec spec = make_sweep_spec(opt);
    OwnedText csv;
    double max_deviation = 0;
    if (nm_status s = nm_run_oracle_check(&spec, &csv.text, &max_deviation); s != NM_OK)
        return fault("oracle-check", s);
    if (int rc = emit(artifact_path(opt, "oracle-check", ".csv"), csv.str()); rc != kExitOk)
        return rc;
    std::cout << "max deviation: " << max_deviation << "\n";
    return kExitOk;
}

int run_contention(const Options& opt) {
    if (!opt.seed) return usage_error("--seed is required for contention-compare");
    nm_contention_spec spec;
    nm_contention_spec_init(&spec);
    spec.population = opt.population;
    if (!opt.rates.empty()) {
        spec.request_rates = opt.rates.data();
        spec.n_rates = opt.rates.size();
    }
    spec.trials_per_rate = opt.trials;
    spec.backoff_exponent = opt.backoff_exponent;
    spec.seed = *opt.seed;
    spec.threads = effective_threads(opt);

    OwnedText csv, svg;
    if (nm_status s =
            nm_run_contention_compare(&spec, &csv.text, opt.svg ? &svg.text : nullptr);
        s != NM_OK)
        return fault("contention-compare", s);
    if (int rc = emit(artifact_path(opt, "contention-compare", ".csv"), csv.str());
        rc != kExitOk)
        return rc;
    if (opt.svg)
        return emit(artifact_path(opt, "contention-compare", ".svg"), svg.str());
    return kExitOk;
}

int run_harvest(const Options& opt) {
    nm_harvest_spec spec;
    nm_harvest_spec_init(&spec);
    spec.frequencies_hz = opt.frequencies.data();
    spec.n_frequencies = opt.frequencies.size();
    spec.horizon_s = opt.horizon_s;
    spec.sample_step_s = opt.step_s;
    spec.capacity_pj = opt.capacity_pj;

    OwnedText csv, svg;
    if (nm_status s = nm_run_harvest_curve(&spec, &csv.text, opt.svg ? &svg.text : nullptr);
        s != NM_OK)
        return fault("harvest-curve", s);
    if (int rc = emit(artifact_path(opt, "harvest-curve", ".csv"), csv.str()); rc != kExitOk)
        return rc;
    if (opt.svg) return emit(artifact_path(opt, "harvest-curve", ".svg"), svg.str());
    return kExitOk;
}

int run_tsook(const Options& opt, const std::vector<std::string>& bits,
              const std::vector<std::int64_t>& starts, std::int64_t spacing,
              std::int64_t width, double distance_mm) {
    nm_tsook_spec spec;
    nm_tsook_spec_init(&spec);
    std::vector<const char*> strings;
    if (!bits.empty()) {
        if (bits.size() != starts.size())
            return usage_error("--bits and --starts need the same number of entries");
        for (const std::string& b : bits) strings.push_back(b.c_str());
        spec.bit_strings = strings.data();
        spec.starts_fs = starts.data();
        spec.n_trains = strings.size();
    }
    spec.symbol_spacing_fs = spacing;
    spec.pulse_width_fs = width;
    spec.distance_mm = distance_mm;

    OwnedText csv;
    std::int64_t overlaps = 0;
    if (nm_status s = nm_run_tsook_trace(&spec, &csv.text, &overlaps); s != NM_OK)
        return fault("tsook-trace", s);
    if (int rc = emit(artifact_path(opt, "tsook-trace", ".csv"), csv.str()); rc != kExitOk)
        return rc;
    std::cout << "overlapping pulse pairs: " << overlaps << "\n";
    return kExitOk;
}

int print_frame_hex(const std::string& kind_name) {
    nm_frame_kind kind;
    if (kind_name == "beacon") kind = NM_FRAME_BEACON;
    else if (kind_name == "data") kind = NM_FRAME_DATA;
    else if (kind_name == "ack") kind = NM_FRAME_ACK;
    else if (kind_name == "command") kind = NM_FRAME_MAC_COMMAND;
    else return usage_error("--kind must be beacon, data, ack, or command");

    nm_frame* frame = nullptr;
    if (nm_status s = nm_frame_make_canonical(kind, &frame); s != NM_OK)
        return fault("frame", s);
    std::uint8_t buffer[64];
    size_t written = 0;
    const nm_status s = nm_frame_encode(frame, buffer, sizeof buffer, &written);
    nm_frame_free(frame);
    if (s != NM_OK) return fault("frame", s);

    for (size_t i = 0; i < written; ++i) {
        std::printf("%02x", buffer[i]);
        std::printf((i + 1) % 16 == 0 || i + 1 == written ? "\n" : " ");
    }
    return kExitOk;
}

int decode_frame_hex(const std::string& hex) {
    std::vector<std::uint8_t> octets;
    int hi = -1;
    for (char c : hex) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else return usage_error("--decode: not a hex string");
        if (hi < 0) hi = v;
        else {
            octets.push_back(std::uint8_t(hi << 4 | v));
            hi = -1;
        }
    }
    if (hi >= 0) return usage_error("--decode: odd number of hex digits");

    nm_frame* frame = nullptr;
    if (nm_status s = nm_frame_decode(octets.data(), octets.size(), &frame); s != NM_OK)
        return fault("decode", s);
    static const char* kind_names[] = {"beacon", "data", "ack", "command"};
    std::cout << "kind: " << kind_names[nm_frame_kind_of(frame)] << "\n"
              << "sequence: " << int(nm_frame_sequence(frame)) << "\n";
    if (nm_frame_kind_of(frame) != NM_FRAME_ACK) {
        std::printf("dest: 0x%04x\nsrc: 0x%04x\n", nm_frame_dest(frame), nm_frame_src(frame));
    }
    if (nm_frame_kind_of(frame) == NM_FRAME_MAC_COMMAND)
        std::printf("command id: 0x%02x\n", nm_frame_command_id(frame));
    size_t payload_len = 0;
    (void)nm_frame_payload(frame, nullptr, 0, &payload_len);
    std::cout << "payload octets: " << payload_len << "\n";
    nm_frame_free(frame);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nanomac: slotted CSMA/CA nanonetwork MAC simulator (library v" +
                 std::string(nm_version()) + ")"};
    app.require_subcommand(1);

    Options opt;
    std::string config_path;

    // flags shared by every subcommand
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file (flags override it)");
        cmd->add_option("--seed", "64-bit seed; required for stochastic subcommands")
            ->check(CLI::TypeValidator<std::uint64_t>());
        cmd->add_option("--out", opt.out_dir, "output directory (default: .)");
        cmd->add_flag("--svg", opt.svg, "also emit an SVG line plot");
        cmd->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
    };

    auto* frame_cmd = app.add_subcommand("frame", "hex dump or decode a reference frame");
    std::string frame_kind, frame_decode;
    frame_cmd->add_option("--kind", frame_kind, "beacon | data | ack | command");
    frame_cmd->add_option("--decode", frame_decode, "decode a hex-encoded frame instead");

    auto* tsook = app.add_subcommand("tsook-trace", "pulse arrival table and overlap count");
    std::vector<std::string> tsook_bits;
    std::vector<std::int64_t> tsook_starts;
    std::int64_t tsook_spacing = 100000, tsook_width = 100;
    double tsook_distance = 10.0;
    add_common(tsook);
    tsook->add_option("--bits", tsook_bits, "bit strings, one per transmitter");
    tsook->add_option("--starts", tsook_starts, "transmission starts in fs, one per transmitter");
    tsook->add_option("--spacing", tsook_spacing, "symbol spacing in fs (default 100000)");
    tsook->add_option("--width", tsook_width, "pulse width in fs (default 100)");
    tsook->add_option("--distance-mm", tsook_distance, "link distance in mm (default 10)");

    auto* harvest = app.add_subcommand("harvest-curve", "capacitor charge curves over time");
    add_common(harvest);
    harvest->add_option("--frequencies", opt.frequencies, "harvest cycle frequencies in Hz");
    harvest->add_option("--horizon", opt.horizon_s, "time horizon in seconds");
    harvest->add_option("--step", opt.step_s, "sample step in seconds");
    harvest->add_option("--capacity", opt.capacity_pj, "store capacity in pJ");

    bool ledger_flag = false;
    auto add_grid_options = [&](CLI::App* cmd, bool with_scales, bool with_diagnostics) {
        add_common(cmd);
        cmd->add_option("--durations", opt.durations, "superframe durations in minutes");
        if (with_scales) cmd->add_option("--scales", opt.scales, "packet scales in [0.5, 1.0]");
        cmd->add_option("--m-min", opt.m_min, "smallest concurrent slot count");
        cmd->add_option("--m-max", opt.m_max, "largest concurrent slot count");
        cmd->add_option("--superframes", opt.superframes, "beacon intervals per grid point");
        cmd->add_option("--harvest-rate", opt.harvest_rate, "harvest rate in pJ per minute");
        if (with_diagnostics) {
            cmd->add_flag("--trace", opt.trace, "also emit the event trace log");
            cmd->add_flag("--ledger", ledger_flag,
                          "emit the per-superframe ledger (single grid point only)");
        }
    };

    auto* duration_sweep =
        app.add_subcommand("duration-sweep", "completion rate vs superframe duration");
    add_grid_options(duration_sweep, false, true);

    auto* packet_sweep =
        app.add_subcommand("packet-size-sweep", "completion rate vs packet scale");
    double ledger_scale = 1.0;
    add_grid_options(packet_sweep, true, true);
    packet_sweep->add_option("--ledger-scale", ledger_scale,
                             "packet scale used with --ledger (default 1.0)");

    auto* oracle = app.add_subcommand("oracle-check",
                                      "simulated vs analytic completion rate over the grid");
    add_grid_options(oracle, true, false);

    auto* contention =
        app.add_subcommand("contention-compare", "slot usable rate, contention vs round robin");
    add_common(contention);
    contention->add_option("--population", opt.population, "node population");
    contention->add_option("--rates", opt.rates, "slot request rates in (0, 1]");
    contention->add_option("--trials", opt.trials, "trials per request rate");
    contention->add_option("--backoff-exponent", opt.backoff_exponent,
                           "backoff window is 2^BE (default 3)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    CLI::App* active = app.get_subcommands().front();

    // precedence: defaults were set above; config overrides them; flags that
    // were actually given override the config
    if (!config_path.empty()) {
        // re-apply flag values on top of the config by re-parsing
        Options flag_values = opt;
        if (int rc = apply_config(config_path, opt); rc != kExitOk) return rc;
        for (const CLI::Option* o : active->get_options()) {
            if (o->count() == 0) continue;
            const std::string name = o->get_name();
            if (name == "--durations") opt.durations = flag_values.durations;
            else if (name == "--scales") opt.scales = flag_values.scales;
            else if (name == "--m-min") opt.m_min = flag_values.m_min;
            else if (name == "--m-max") opt.m_max = flag_values.m_max;
            else if (name == "--superframes") opt.superframes = flag_values.superframes;
            else if (name == "--harvest-rate") opt.harvest_rate = flag_values.harvest_rate;
            else if (name == "--population") opt.population = flag_values.population;
            else if (name == "--rates") opt.rates = flag_values.rates;
            else if (name == "--trials") opt.trials = flag_values.trials;
            else if (name == "--backoff-exponent")
                opt.backoff_exponent = flag_values.backoff_exponent;
            else if (name == "--frequencies") opt.frequencies = flag_values.frequencies;
            else if (name == "--horizon") opt.horizon_s = flag_values.horizon_s;
            else if (name == "--step") opt.step_s = flag_values.step_s;
            else if (name == "--capacity") opt.capacity_pj = flag_values.capacity_pj;
        }
    }
    if (const CLI::Option* seed_opt = active->get_option_no_throw("--seed");
        seed_opt && seed_opt->count() > 0)
        opt.seed = seed_opt->as<std::uint64_t>();

    if (int rc = check_ranges(opt); rc != kExitOk) return rc;

    try {
        if (active == frame_cmd) {
            if (!frame_decode.empty()) return decode_frame_hex(frame_decode);
            if (frame_kind.empty()) return usage_error("frame needs --kind or --decode");
            return print_frame_hex(frame_kind);
        }
        if (active == tsook)
            return run_tsook(opt, tsook_bits, tsook_starts, tsook_spacing, tsook_width,
                             tsook_distance);
        if (active == harvest) return run_harvest(opt);
        if (active == duration_sweep)
            return run_sweep(opt, "duration-sweep", false, ledger_flag, 1.0);
        if (active == packet_sweep)
            return run_sweep(opt, "packet-size-sweep", true, ledger_flag, ledger_scale);
        if (active == oracle) return run_oracle_check(opt);
        if (active == contention) return run_contention(opt);
    } catch (const std::exception& e) {
        return fault(e.what());
    }
    return usage_error("unknown subcommand");
}
