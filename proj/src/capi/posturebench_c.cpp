#include "posturebench.h"

#include <cstdio>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "core/model.hpp"
#include "core/report.hpp"
#include "core/series.hpp"
#include "core/testbench.hpp"
#include "core/trial_io.hpp"

using namespace posturebench;

struct pb_series {
    SignalSeries s;
};
struct pb_model {
    AnthropometricModel m;
};
struct pb_trial {
    TrialRecord r;
};
struct pb_report {
    LoadedReport r;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
pb_status guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return PB_OK;
    } catch (const InvalidArgument& e) {
        g_last_error = e.what();
        return PB_ERR_INVALID_ARGUMENT;
    } catch (const ParseError& e) {
        g_last_error = e.what();
        return PB_ERR_PARSE;
    } catch (const IoError& e) {
        g_last_error = e.what();
        return PB_ERR_IO;
    } catch (const NumericError& e) {
        g_last_error = e.what();
        return PB_ERR_NUMERIC;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return PB_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PB_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return PB_ERR_INTERNAL;
    }
}

pb_status fail_arg(const char* msg) {
    g_last_error = msg;
    return PB_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

pb_outcome to_c(TrialOutcome o) {
    return o == TrialOutcome::Fallen ? PB_OUTCOME_FALLEN : PB_OUTCOME_COMPLETED;
}

pb_analyze_options normalized(const pb_analyze_options* opts) {
    pb_analyze_options o{0, 0, -1};
    if (opts) o = *opts;
    if (o.max_harmonics <= 0) o.max_harmonics = 10;
    return o;
}

LoadedReport analyze(const TrialRecord& rec, const pb_analyze_options& o) {
    LoadedReport out;
    out.score = score_trial(rec, o.settle_override);
    if (o.with_frf) {
        out.frf = frf_for_trial(rec, o.max_harmonics, o.settle_override);
        out.has_frf = true;
    }
    return out;
}

}  // namespace

extern "C" {

const char* pb_version(void) { return "1.0.0"; }

const char* pb_last_error(void) { return g_last_error.c_str(); }

void pb_string_free(char* s) { std::free(s); }

/* ---- series ---- */

pb_status pb_series_sine(double amplitude, double freq_hz, double duration_s, double rate_hz,
                         pb_series** out) {
    if (!out) return fail_arg("null output pointer");
    return guarded([&] { *out = new pb_series{gen_sine(amplitude, freq_hz, duration_s, rate_hz)}; });
}

pb_status pb_series_prts(int stages, double velocity, double rate_hz, int cycles,
                         double state_duration_s, pb_series** out) {
    if (!out) return fail_arg("null output pointer");
    return guarded([&] {
        double hold = state_duration_s > 0.0 ? state_duration_s : 0.25;
        *out = new pb_series{gen_prts(stages, velocity, rate_hz, cycles, hold)};
    });
}

pb_status pb_series_impulse(int axis, double peak, double width_s, double rate_hz,
                            double duration_s, pb_series** out) {
    if (!out) return fail_arg("null output pointer");
    return guarded(
        [&] { *out = new pb_series{gen_impulse(axis, peak, width_s, rate_hz, duration_s)}; });
}

size_t pb_series_size(const pb_series* s) { return s ? s->s.size() : 0; }

double pb_series_rate_hz(const pb_series* s) { return s ? s->s.rate_hz : 0.0; }

double pb_series_period_s(const pb_series* s) { return s ? s->s.period_s : 0.0; }

const double* pb_series_data(const pb_series* s) {
    return s && !s->s.samples.empty() ? s->s.samples.data() : nullptr;
}

pb_status pb_series_write_csv(const pb_series* s, const char* path) {
    if (!s || !path) return fail_arg("null series or path");
    return guarded([&] {
        std::string text = "time_s,value\n";
        char buf[96];
        const double dt = s->s.dt();
        for (std::size_t k = 0; k < s->s.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", static_cast<double>(k) * dt,
                          s->s.samples[k]);
            text += buf;
        }
        write_text_file(path, text);
    });
}

void pb_series_free(pb_series* s) { delete s; }

/* ---- models ---- */

pb_status pb_model_default(pb_model** out) {
    if (!out) return fail_arg("null output pointer");
    return guarded([&] { *out = new pb_model{default_model()}; });
}

pb_status pb_model_load(const char* path, pb_model** out) {
    if (!out || !path) return fail_arg("null path or output pointer");
    return guarded([&] { *out = new pb_model{load_model_file(path)}; });
}

double pb_model_total_mass(const pb_model* m) { return m ? m->m.total_mass() : 0.0; }

double pb_model_com_height(const pb_model* m) { return m ? m->m.com_height() : 0.0; }

double pb_model_mgh(const pb_model* m) { return m ? m->m.mgh() : 0.0; }

void pb_model_free(pb_model* m) { delete m; }

/* ---- trials ---- */

pb_status pb_simulate_config_file(const char* config_path, const char* trial_out_path,
                                  pb_outcome* outcome_out) {
    if (!config_path || !trial_out_path) return fail_arg("null config or output path");
    return guarded([&] {
        TrialSpec spec = load_trial_config(config_path);
        TrialRecord rec = run_trial(spec);
        write_trial(rec, trial_out_path);
        if (outcome_out) *outcome_out = to_c(rec.outcome);
    });
}

pb_status pb_run_pair_files(const char* config_a, const char* config_b, const char* trial_out_a,
                            const char* trial_out_b, pb_outcome* outcome_a,
                            pb_outcome* outcome_b) {
    if (!config_a || !config_b || !trial_out_a || !trial_out_b) {
        return fail_arg("null config or output path");
    }
    return guarded([&] {
        TrialSpec a = load_trial_config(config_a);
        TrialSpec b = load_trial_config(config_b);
        auto pair = run_pair(a, b);
        write_trial(pair.first, trial_out_a);
        write_trial(pair.second, trial_out_b);
        if (outcome_a) *outcome_a = to_c(pair.first.outcome);
        if (outcome_b) *outcome_b = to_c(pair.second.outcome);
    });
}

pb_status pb_trial_read(const char* path, pb_trial** out) {
    if (!out || !path) return fail_arg("null path or output pointer");
    return guarded([&] { *out = new pb_trial{read_trial(path)}; });
}

pb_status pb_trial_write(const pb_trial* t, const char* path) {
    if (!t || !path) return fail_arg("null trial or path");
    return guarded([&] { write_trial(t->r, path); });
}

size_t pb_trial_size(const pb_trial* t) { return t ? t->r.size() : 0; }

pb_outcome pb_trial_outcome(const pb_trial* t) {
    return t ? to_c(t->r.outcome) : PB_OUTCOME_COMPLETED;
}

double pb_trial_rate_hz(const pb_trial* t) { return t ? t->r.rate_hz : 0.0; }

pb_status pb_trial_channel(const pb_trial* t, const char* name, const double** data_out,
                           size_t* size_out) {
    if (!t || !name || !data_out || !size_out) return fail_arg("null argument");
    return guarded([&] {
        const std::vector<double>* v = nullptr;
        std::string key = name;
        if (key == "time") v = &t->r.time_s;
        else if (key == "platform_cmd") v = &t->r.platform_cmd;
        else if (key == "fs") v = &t->r.fs;
        else if (key == "ss") v = &t->r.ss;
        else if (key == "ls") v = &t->r.ls;
        else if (key == "ts") v = &t->r.ts;
        else if (key == "com") v = &t->r.com;
        else if (key == "ankle_torque") v = &t->r.ankle_torque;
        else if (key == "hip_torque") v = &t->r.hip_torque;
        else throw InvalidArgument("unknown channel '" + key + "'");
        if (v->empty()) throw InvalidArgument("channel '" + key + "' is absent from this trial");
        *data_out = v->data();
        *size_out = v->size();
    });
}

void pb_trial_free(pb_trial* t) { delete t; }

/* ---- analysis ---- */

pb_status pb_analyze_trial(const pb_trial* t, const pb_analyze_options* opts, pb_report** out) {
    if (!t || !out) return fail_arg("null trial or output pointer");
    return guarded([&] { *out = new pb_report{analyze(t->r, normalized(opts))}; });
}

pb_status pb_analyze_file(const char* trial_path, const pb_analyze_options* opts,
                          pb_report** out) {
    if (!trial_path || !out) return fail_arg("null path or output pointer");
    return guarded([&] {
        TrialRecord rec = read_trial(trial_path);
        *out = new pb_report{analyze(rec, normalized(opts))};
    });
}

double pb_report_gain(const pb_report* r) { return r ? r->r.score.gain : 0.0; }

double pb_report_phase_rad(const pb_report* r) { return r ? r->r.score.phase_rad : 0.0; }

double pb_report_power(const pb_report* r) { return r ? r->r.score.power : 0.0; }

pb_status pb_report_torque_rms(const pb_report* r, double* out) {
    if (!r || !out) return fail_arg("null report or output pointer");
    if (!r->r.score.torque_present) {
        return fail_arg("record carried no torque channel");
    }
    *out = r->r.score.torque_rms;
    return PB_OK;
}

pb_status pb_report_json(const pb_report* r, char** json_out) {
    if (!r || !json_out) return fail_arg("null report or output pointer");
    return guarded([&] {
        *json_out =
            copy_string(report_to_json_text(r->r.score, r->r.has_frf ? &r->r.frf : nullptr));
    });
}

pb_status pb_report_write(const pb_report* r, const char* path) {
    if (!r || !path) return fail_arg("null report or path");
    return guarded(
        [&] { write_report(r->r.score, r->r.has_frf ? &r->r.frf : nullptr, path); });
}

pb_status pb_report_load(const char* path, pb_report** out) {
    if (!path || !out) return fail_arg("null path or output pointer");
    return guarded([&] { *out = new pb_report{load_report(path)}; });
}

void pb_report_free(pb_report* r) { delete r; }

/* ---- comparison ---- */

pb_status pb_compare_reports(const pb_report* a, const pb_report* b, double w_log_gain,
                             double w_phase, char** json_out) {
    if (!a || !b || !json_out) return fail_arg("null report or output pointer");
    return guarded([&] {
        CompareWeights w{w_log_gain, w_phase};
        *json_out = copy_string(compare_reports_json(a->r, b->r, w));
    });
}

pb_status pb_compare_to_reference_file(const pb_report* r, const char* reference_path,
                                       const char* entry_name, double w_log_gain, double w_phase,
                                       char** json_out) {
    if (!r || !reference_path || !json_out) return fail_arg("null report, path or output pointer");
    return guarded([&] {
        ReferenceSet set = load_reference_set(reference_path);
        CompareWeights w{w_log_gain, w_phase};
        std::string entry = entry_name ? entry_name : "";
        *json_out = copy_string(compare_to_reference_json(r->r, set, entry, w));
    });
}

/* ---- bundle ---- */

pb_status pb_report_bundle_file(const char* trial_path, const char* out_dir,
                                const pb_analyze_options* opts) {
    if (!trial_path || !out_dir) return fail_arg("null trial path or output directory");
    return guarded([&] {
        pb_analyze_options o = normalized(opts);
        TrialRecord rec = read_trial(trial_path);
        if (o.settle_override >= 0) rec.settle_periods = o.settle_override;
        write_report_bundle(rec, out_dir, o.with_frf != 0, o.max_harmonics);
    });
}

} /* extern "C" */
