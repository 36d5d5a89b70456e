#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/metrics.hpp"
#include "core/testbench.hpp"

namespace posturebench {

inline constexpr const char* kReportFormatTag = "posturebench-report v1";
inline constexpr const char* kReferenceFormatTag = "posturebench-reference v1";

/// A report parsed back from JSON; the response curve is optional.
struct LoadedReport {
    ScoreReport score;
    bool has_frf = false;
    FrfResult frf;
};

/// Trim the record by its settle count (or the override when >= 0) and
/// compute Gain, Phase, Power and the normalized-torque RMS. The stimulus
/// channel is the achieved support tilt, or the recorded command for
/// translation and contact trials.
ScoreReport score_trial(const TrialRecord& rec, int settle_periods = -1);

/// Stimulus harmonics (Hz) carrying at least 1e-6 of the strongest
/// harmonic's energy, lowest first, at most max_count of them.
std::vector<double> stimulus_harmonics(const SignalSeries& trimmed_u, int max_count);

/// Per-frequency response of the trimmed record at its stimulus harmonics.
FrfResult frf_for_trial(const TrialRecord& rec, int max_harmonics = 10, int settle_periods = -1);

/// Stable-key-order JSON; frf may be null.
std::string report_to_json_text(const ScoreReport& score, const FrfResult* frf = nullptr);
LoadedReport report_from_json_text(const std::string& text, const std::string& origin);
LoadedReport load_report(const std::string& path);
void write_report(const ScoreReport& score, const FrfResult* frf, const std::string& path);

/// Scalar deltas (b minus a) plus, when both reports carry a response
/// curve, the weighted likeness distance.
std::string compare_reports_json(const LoadedReport& a, const LoadedReport& b,
                                 const CompareWeights& weights = {});

/// Named response curves serving as comparison targets.
struct ReferenceEntry {
    std::string name;
    std::string subject;
    std::string condition;
    std::string notes;
    FrfResult frf;
};

struct ReferenceSet {
    std::vector<ReferenceEntry> entries;
    const ReferenceEntry* find(const std::string& name) const;
};

ReferenceSet reference_set_from_json_text(const std::string& text, const std::string& origin);
ReferenceSet load_reference_set(const std::string& path);

/// Distance and per-frequency deltas of a report (which must carry a
/// response curve) against one entry. An empty entry_name selects the only
/// entry of a single-entry set.
std::string compare_to_reference_json(const LoadedReport& report, const ReferenceSet& set,
                                      const std::string& entry_name,
                                      const CompareWeights& weights = {});

/// Write report.json, sway.csv (plot data) and sway.svg (segment-sway
/// panel) into out_dir, creating it if needed. Pure function of the record.
void write_report_bundle(const TrialRecord& rec, const std::string& out_dir, bool with_frf,
                         int max_harmonics = 10);

/// FNV-1a over the bytes; used to stamp reports with their record identity.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace posturebench
