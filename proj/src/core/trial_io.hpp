#pragma once

#include <string>

#include "core/testbench.hpp"

namespace posturebench {

/// Version tag written into and required from every trial file.
inline constexpr const char* kTrialFormatTag = "posturebench-trial v1";

/// Render a record as the comma-separated trial format: '#'-prefixed header
/// lines (format tag, scenario, outcome, rate, period, metadata echoes),
/// one column-name row, then one row per sample with 9 significant digits.
/// Channels that are absent from the record produce no column.
std::string trial_to_text(const TrialRecord& rec);

/// Parse the trial format. Requires the version tag, a time_s and fs_rad
/// column and at least one body channel; rejects ragged rows and non-uniform
/// time bases citing the offending file line. When the com_rad column is
/// missing it is recomputed from the segment channels using the embedded
/// model echo, if both are available.
TrialRecord trial_from_text(const std::string& text, const std::string& origin = "<memory>");

/// trial_to_text plus an atomic write (temp file + rename).
void write_trial(const TrialRecord& rec, const std::string& path);

/// Read and parse a trial file.
TrialRecord read_trial(const std::string& path);

/// Atomically replace `path` with `content` (write temp, rename over).
void write_text_file(const std::string& path, const std::string& content);

/// Slurp a whole file; IoError when unreadable.
std::string read_text_file(const std::string& path);

}  // namespace posturebench
