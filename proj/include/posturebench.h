/* posturebench: C interface of the posture-control benchmarking workbench.
 *
 * Conventions:
 *   - Every fallible call returns pb_status; PB_OK is 0. On failure
 *     pb_last_error() holds a message for the calling thread until the next
 *     library call on that thread.
 *   - Objects come back through out-parameters as opaque handles owned by
 *     the caller; release them with the matching *_free function.
 *   - Strings returned through char** are heap copies; release them with
 *     pb_string_free.
 *   - Angles are radians, lengths metres, torques newton-metres.
 */

#ifndef POSTUREBENCH_H
#define POSTUREBENCH_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pb_status {
    PB_OK = 0,
    PB_ERR_INVALID_ARGUMENT = 1,
    PB_ERR_PARSE = 2,
    PB_ERR_IO = 3,
    PB_ERR_NUMERIC = 4,
    PB_ERR_INTERNAL = 5
} pb_status;

/* Not an error: a simulated trial either completed or ended in a fall. */
typedef enum pb_outcome {
    PB_OUTCOME_COMPLETED = 0,
    PB_OUTCOME_FALLEN = 1
} pb_outcome;

/* Library version, e.g. "1.0.0". Static storage; do not free. */
const char* pb_version(void);

/* Message of the most recent failure on this thread ("" if none). */
const char* pb_last_error(void);

void pb_string_free(char* s);

/* ---- signal series ---------------------------------------------------- */

typedef struct pb_series pb_series;

pb_status pb_series_sine(double amplitude, double freq_hz, double duration_s, double rate_hz,
                         pb_series** out);
/* Pseudo-random ternary stimulus; state_duration_s <= 0 selects the default
 * state length of 0.25 s. */
pb_status pb_series_prts(int stages, double velocity, double rate_hz, int cycles,
                         double state_duration_s, pb_series** out);
/* axis: 0 = tilt, 1 = translation. */
pb_status pb_series_impulse(int axis, double peak, double width_s, double rate_hz,
                            double duration_s, pb_series** out);

size_t pb_series_size(const pb_series* s);
double pb_series_rate_hz(const pb_series* s);
/* Fundamental period in seconds, 0 for aperiodic signals. */
double pb_series_period_s(const pb_series* s);
/* Borrowed pointer to pb_series_size(s) doubles; valid until the series is
 * freed. */
const double* pb_series_data(const pb_series* s);
/* Two-column time_s,value text file, 9 significant digits, atomic write. */
pb_status pb_series_write_csv(const pb_series* s, const char* path);
void pb_series_free(pb_series* s);

/* ---- body models ------------------------------------------------------ */

typedef struct pb_model pb_model;

pb_status pb_model_default(pb_model** out);
pb_status pb_model_load(const char* path, pb_model** out);
double pb_model_total_mass(const pb_model* m);
double pb_model_com_height(const pb_model* m);
double pb_model_mgh(const pb_model* m);
void pb_model_free(pb_model* m);

/* ---- trials ----------------------------------------------------------- */

typedef struct pb_trial pb_trial;

/* Load a trial config (JSON), run the closed-loop simulation and write the
 * trial file. Returns PB_OK for both outcomes; *outcome_out tells which.
 * The record is written in either case. */
pb_status pb_simulate_config_file(const char* config_path, const char* trial_out_path,
                                  pb_outcome* outcome_out);

/* Run two configs as an A/B pair under an identical stimulus (the configs
 * must agree in scenario, profile, duration, rate and settle count). */
pb_status pb_run_pair_files(const char* config_a, const char* config_b, const char* trial_out_a,
                            const char* trial_out_b, pb_outcome* outcome_a,
                            pb_outcome* outcome_b);

pb_status pb_trial_read(const char* path, pb_trial** out);
pb_status pb_trial_write(const pb_trial* t, const char* path);
size_t pb_trial_size(const pb_trial* t);
pb_outcome pb_trial_outcome(const pb_trial* t);
double pb_trial_rate_hz(const pb_trial* t);
/* name: one of "time", "platform_cmd", "fs", "ss", "ls", "ts", "com",
 * "ankle_torque", "hip_torque". Fails if the channel is absent. The pointer
 * borrows from the trial handle. */
pb_status pb_trial_channel(const pb_trial* t, const char* name, const double** data_out,
                           size_t* size_out);
void pb_trial_free(pb_trial* t);

/* ---- analysis --------------------------------------------------------- */

typedef struct pb_report pb_report;

typedef struct pb_analyze_options {
    int with_frf;        /* nonzero: include the per-frequency response */
    int max_harmonics;   /* <= 0 selects the default of 10 */
    int settle_override; /* < 0: use the record's settle count */
} pb_analyze_options;

/* opts may be NULL for defaults (no frf, record's settle count). */
pb_status pb_analyze_trial(const pb_trial* t, const pb_analyze_options* opts, pb_report** out);
pb_status pb_analyze_file(const char* trial_path, const pb_analyze_options* opts,
                          pb_report** out);

double pb_report_gain(const pb_report* r);
double pb_report_phase_rad(const pb_report* r);
double pb_report_power(const pb_report* r);
/* Normalized-torque RMS; fails when the record carried no torque channel. */
pb_status pb_report_torque_rms(const pb_report* r, double* out);
/* Full report as JSON text (stable key order, trailing newline). */
pb_status pb_report_json(const pb_report* r, char** json_out);
pb_status pb_report_write(const pb_report* r, const char* path);
pb_status pb_report_load(const char* path, pb_report** out);
void pb_report_free(pb_report* r);

/* ---- comparison ------------------------------------------------------- */

/* Scalar deltas (b minus a), plus the likeness distance when both reports
 * carry response curves. Weights apply to the log-gain and phase terms. */
pb_status pb_compare_reports(const pb_report* a, const pb_report* b, double w_log_gain,
                             double w_phase, char** json_out);

/* Compare a report (with response curve) against one entry of a reference
 * set file. entry_name may be NULL/"" when the set has a single entry. */
pb_status pb_compare_to_reference_file(const pb_report* r, const char* reference_path,
                                       const char* entry_name, double w_log_gain, double w_phase,
                                       char** json_out);

/* ---- report bundle ---------------------------------------------------- */

/* Write report.json, sway.csv and sway.svg for a trial file into out_dir
 * (created if missing). */
pb_status pb_report_bundle_file(const char* trial_path, const char* out_dir,
                                const pb_analyze_options* opts);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* POSTUREBENCH_H */
