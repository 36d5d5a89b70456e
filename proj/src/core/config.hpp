#pragma once

#include <string>

#include "core/model.hpp"
#include "core/testbench.hpp"

namespace posturebench {

/// Parse a trial config. Angular keys accept both unit suffixes (_rad/_deg,
/// _rad_s/_deg_s); unknown keys are rejected with their full path. base_dir
/// anchors a relative "model_path" reference.
TrialSpec trial_spec_from_json_text(const std::string& text, const std::string& origin = "<config>",
                                    const std::string& base_dir = "");

/// read + parse + validate; model_path entries resolve relative to the
/// config file's directory.
TrialSpec load_trial_config(const std::string& path);

/// Canonical compact echo (radian keys, model inlined). Parsing it back
/// reproduces the spec exactly.
std::string trial_spec_to_json_text(const TrialSpec& spec);

/// Same content, indented for humans.
std::string trial_spec_to_pretty_json(const TrialSpec& spec);

/// Model used when a config names none: the POSTUREBENCH_MODEL_PATH
/// environment variable if set, else the built-in body.
AnthropometricModel resolve_default_model();

}  // namespace posturebench
