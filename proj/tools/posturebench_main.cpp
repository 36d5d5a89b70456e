// Command-line surface of the workbench. Everything goes through the public
// C API; this file owns argument parsing, unit conversion at the boundary
// (degrees in, radians everywhere else) and exit-code policy:
//   0 ok, 1 usage, 2 data/config error, 3 simulation ended in a fall.

#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "posturebench.h"

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

int data_error() {
    std::fprintf(stderr, "error: %s\n", pb_last_error());
    return 2;
}

int usage_error(const char* msg) {
    std::fprintf(stderr, "error: %s\n", msg);
    return 1;
}

struct AngleArg {
    double rad = 0.0;
    double deg = 0.0;
    CLI::Option* rad_opt = nullptr;
    CLI::Option* deg_opt = nullptr;

    void attach(CLI::App* cmd, const std::string& name, const std::string& help) {
        rad_opt = cmd->add_option("--" + name, rad, help + " [rad]");
        deg_opt = cmd->add_option("--" + name + "-deg", deg, help + " [deg]");
    }
    bool both() const { return rad_opt->count() > 0 && deg_opt->count() > 0; }
    bool given() const { return rad_opt->count() > 0 || deg_opt->count() > 0; }
    double value() const { return deg_opt->count() > 0 ? deg * kDegToRad : rad; }
};

struct StringOut {
    char* s = nullptr;
    ~StringOut() { pb_string_free(s); }
};

int run_generate(const std::string& kind, const AngleArg& amplitude, double frequency,
                 const AngleArg& velocity, int stages, int cycles, double state_duration,
                 const AngleArg& peak, double width, const std::string& axis, double rate,
                 double duration, const std::string& out, bool json) {
    if (amplitude.both() || velocity.both() || peak.both()) {
        return usage_error("give each quantity in radians or degrees, not both");
    }
    int axis_id = 0;
    if (axis == "translation") {
        axis_id = 1;
    } else if (axis != "tilt") {
        return usage_error("--axis must be tilt or translation");
    }

    pb_series* series = nullptr;
    pb_status st = PB_OK;
    if (kind == "sine") {
        if (!amplitude.given() || frequency <= 0.0) {
            return usage_error("sine needs --amplitude[-deg] and --frequency");
        }
        st = pb_series_sine(amplitude.value(), frequency, duration, rate, &series);
    } else if (kind == "prts") {
        if (!velocity.given()) return usage_error("prts needs --velocity[-deg]");
        st = pb_series_prts(stages, velocity.value(), rate, cycles, state_duration, &series);
    } else if (kind == "impulse") {
        if (!peak.given()) return usage_error("impulse needs --peak[-deg]");
        st = pb_series_impulse(axis_id, peak.value(), width, rate, duration, &series);
    } else {
        return usage_error("--kind must be sine, prts or impulse");
    }
    if (st != PB_OK) return data_error();

    std::unique_ptr<pb_series, decltype(&pb_series_free)> guard(series, pb_series_free);
    if (pb_series_write_csv(series, out.c_str()) != PB_OK) return data_error();
    if (json) {
        std::printf("{\"kind\":\"%s\",\"samples\":%zu,\"rate_hz\":%.9g,\"period_s\":%.9g,"
                    "\"path\":\"%s\"}\n",
                    kind.c_str(), pb_series_size(series), pb_series_rate_hz(series),
                    pb_series_period_s(series), out.c_str());
    } else {
        std::printf("wrote %zu samples to %s (rate %.9g Hz, period %.9g s)\n",
                    pb_series_size(series), out.c_str(), pb_series_rate_hz(series),
                    pb_series_period_s(series));
    }
    return 0;
}

int run_simulate(const std::string& config, const std::string& out, bool json) {
    pb_outcome outcome = PB_OUTCOME_COMPLETED;
    if (pb_simulate_config_file(config.c_str(), out.c_str(), &outcome) != PB_OK) {
        return data_error();
    }
    const char* label = outcome == PB_OUTCOME_FALLEN ? "fallen" : "completed";
    if (json) {
        std::printf("{\"outcome\":\"%s\",\"trial\":\"%s\"}\n", label, out.c_str());
    } else {
        std::printf("outcome: %s, trial written to %s\n", label, out.c_str());
    }
    return outcome == PB_OUTCOME_FALLEN ? 3 : 0;
}

int run_analyze(const std::string& trial, const std::string& out, bool with_frf, int harmonics,
                int settle, bool json) {
    pb_analyze_options opts{with_frf ? 1 : 0, harmonics, settle};
    pb_report* report = nullptr;
    if (pb_analyze_file(trial.c_str(), &opts, &report) != PB_OK) return data_error();
    std::unique_ptr<pb_report, decltype(&pb_report_free)> guard(report, pb_report_free);

    if (!out.empty() && pb_report_write(report, out.c_str()) != PB_OK) return data_error();
    if (json) {
        StringOut text;
        if (pb_report_json(report, &text.s) != PB_OK) return data_error();
        std::fputs(text.s, stdout);
    } else {
        std::printf("gain: %.6g\n", pb_report_gain(report));
        std::printf("phase_rad: %.6g\n", pb_report_phase_rad(report));
        std::printf("power: %.6g\n", pb_report_power(report));
        double trms = 0.0;
        if (pb_report_torque_rms(report, &trms) == PB_OK) {
            std::printf("torque_rms: %.6g\n", trms);
        }
        if (!out.empty()) std::printf("report written to %s\n", out.c_str());
    }
    return 0;
}

int run_compare(const std::string& a, const std::string& b, const std::string& ref,
                const std::string& entry, double w_log_gain, double w_phase) {
    if (b.empty() == ref.empty()) {
        return usage_error("compare needs exactly one of --b or --ref");
    }
    pb_report* ra = nullptr;
    if (pb_report_load(a.c_str(), &ra) != PB_OK) return data_error();
    std::unique_ptr<pb_report, decltype(&pb_report_free)> guard_a(ra, pb_report_free);

    StringOut text;
    if (!b.empty()) {
        pb_report* rb = nullptr;
        if (pb_report_load(b.c_str(), &rb) != PB_OK) return data_error();
        std::unique_ptr<pb_report, decltype(&pb_report_free)> guard_b(rb, pb_report_free);
        if (pb_compare_reports(ra, rb, w_log_gain, w_phase, &text.s) != PB_OK) {
            return data_error();
        }
    } else {
        if (pb_compare_to_reference_file(ra, ref.c_str(), entry.empty() ? nullptr : entry.c_str(),
                                         w_log_gain, w_phase, &text.s) != PB_OK) {
            return data_error();
        }
    }
    std::fputs(text.s, stdout);
    return 0;
}

int run_report(const std::string& trial, const std::string& out_dir, bool with_frf, int harmonics,
               int settle, bool json) {
    pb_analyze_options opts{with_frf ? 1 : 0, harmonics, settle};
    if (pb_report_bundle_file(trial.c_str(), out_dir.c_str(), &opts) != PB_OK) {
        return data_error();
    }
    if (json) {
        std::printf("{\"dir\":\"%s\",\"files\":[\"report.json\",\"sway.csv\",\"sway.svg\"]}\n",
                    out_dir.c_str());
    } else {
        std::printf("wrote %s/report.json, sway.csv, sway.svg\n", out_dir.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("posturebench ") + pb_version() +
                 " - posture-control benchmarking workbench"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "emit a stimulus series as CSV");
    std::string gen_kind, gen_axis = "tilt", gen_out;
    double gen_freq = 0.0, gen_rate = 100.0, gen_duration = 200.0, gen_state = 0.25,
           gen_width = 1.0;
    int gen_stages = 5, gen_cycles = 1;
    bool gen_json = false;
    AngleArg gen_amp, gen_vel, gen_peak;
    gen->add_option("--kind", gen_kind, "sine | prts | impulse")->required();
    gen_amp.attach(gen, "amplitude", "sine amplitude");
    gen->add_option("--frequency", gen_freq, "sine frequency [Hz]");
    gen_vel.attach(gen, "velocity", "prts velocity magnitude (per second)");
    gen->add_option("--stages", gen_stages, "prts register stages (2..8)");
    gen->add_option("--cycles", gen_cycles, "prts sequence periods to emit");
    gen->add_option("--state-duration", gen_state, "prts state length [s]");
    gen_peak.attach(gen, "peak", "impulse peak");
    gen->add_option("--width", gen_width, "impulse base width [s]");
    gen->add_option("--axis", gen_axis, "tilt | translation (impulse only)");
    gen->add_option("--rate", gen_rate, "sampling rate [Hz]");
    gen->add_option("--duration", gen_duration, "signal length [s]");
    gen->add_option("--out", gen_out, "output CSV path")->required();
    gen->add_flag("--json", gen_json, "machine-readable summary on stdout");

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a trial config to a trial file");
    std::string sim_config, sim_out;
    bool sim_json = false;
    sim->add_option("--config", sim_config, "trial config (JSON)")->required();
    sim->add_option("--out", sim_out, "output trial file")->required();
    sim->add_flag("--json", sim_json, "machine-readable summary on stdout");

    // analyze
    auto* ana = app.add_subcommand("analyze", "score a trial file");
    std::string ana_trial, ana_out;
    bool ana_frf = false, ana_json = false;
    int ana_harmonics = 10, ana_settle = -1;
    ana->add_option("--trial", ana_trial, "trial file")->required();
    ana->add_option("--out", ana_out, "write the report JSON here");
    ana->add_flag("--frf", ana_frf, "include the per-frequency response");
    ana->add_option("--harmonics", ana_harmonics, "harmonic count for --frf");
    ana->add_option("--settle", ana_settle, "override the record's settle periods");
    ana->add_flag("--json", ana_json, "print the full report JSON");

    // compare
    auto* cmp = app.add_subcommand("compare", "diff two reports, or a report vs a reference");
    std::string cmp_a, cmp_b, cmp_ref, cmp_entry;
    double cmp_wg = 1.0, cmp_wp = 1.0;
    cmp->add_option("--a", cmp_a, "first report JSON")->required();
    cmp->add_option("--b", cmp_b, "second report JSON");
    cmp->add_option("--ref", cmp_ref, "reference set JSON");
    cmp->add_option("--entry", cmp_entry, "reference entry name");
    cmp->add_option("--log-gain-weight", cmp_wg, "weight of the log-gain term");
    cmp->add_option("--phase-weight", cmp_wp, "weight of the phase term");

    // report
    auto* rep = app.add_subcommand("report", "write scores + plot data + SVG panel");
    std::string rep_trial, rep_dir;
    bool rep_frf = false, rep_json = false;
    int rep_harmonics = 10, rep_settle = -1;
    rep->add_option("--trial", rep_trial, "trial file")->required();
    rep->add_option("--out-dir", rep_dir, "output directory")->required();
    rep->add_flag("--frf", rep_frf, "include the per-frequency response");
    rep->add_option("--harmonics", rep_harmonics, "harmonic count for --frf");
    rep->add_option("--settle", rep_settle, "override the record's settle periods");
    rep->add_flag("--json", rep_json, "machine-readable summary on stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (gen->parsed()) {
        return run_generate(gen_kind, gen_amp, gen_freq, gen_vel, gen_stages, gen_cycles,
                            gen_state, gen_peak, gen_width, gen_axis, gen_rate, gen_duration,
                            gen_out, gen_json);
    }
    if (sim->parsed()) return run_simulate(sim_config, sim_out, sim_json);
    if (ana->parsed()) {
        return run_analyze(ana_trial, ana_out, ana_frf, ana_harmonics, ana_settle, ana_json);
    }
    if (cmp->parsed()) return run_compare(cmp_a, cmp_b, cmp_ref, cmp_entry, cmp_wg, cmp_wp);
    if (rep->parsed()) {
        return run_report(rep_trial, rep_dir, rep_frf, rep_harmonics, rep_settle, rep_json);
    }
    return usage_error("no subcommand given");
}
