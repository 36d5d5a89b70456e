#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core/controller.hpp"
#include "core/model.hpp"
#include "core/plant.hpp"
#include "core/platform.hpp"
#include "core/series.hpp"

namespace posturebench {

/// The four benchmark scenarios: driven support tilt, driven horizontal
/// support translation, an external pull at the body, and the sway-referenced
/// platform servo (platform tilt tracks body sway).
enum class Scenario : std::uint8_t { Tilt, Translation, ContactPull, Bsrp };

/// Everything needed to reproduce one closed-loop trial. Trials are pure
/// functions of this struct: equal specs give bitwise-equal records.
struct TrialSpec {
    std::string name = "trial";
    Scenario scenario = Scenario::Tilt;
    /// Stimulus description; ignored for the bsrp scenario, where the command
    /// is the measured body sway itself.
    PerturbationProfile profile;
    AnthropometricModel model = default_model();
    PlantKind plant = PlantKind::Sip;
    /// With the two-link plant, pin the hip joint (reduces to the rigid body).
    bool hip_locked = false;
    /// Joint-space hip servo used by the free two-link plant. Negative values
    /// select defaults scaled from the upper segment's gravity stiffness
    /// about the hip, which the servo must dominate to hold the joint.
    double hip_kp = -1.0;
    double hip_kd = -1.0;
    ControllerConfig controller;
    PlatformModel platform;
    double duration_s = 200.0;
    double rate_hz = 100.0;
    /// Leading stimulus periods the analyzer discards.
    int settle_periods = 2;
    /// Body sway at t=0 (all segments aligned), rad.
    double initial_sway_rad = 0.0;

    double dt() const { return 1.0 / rate_hz; }
    /// Throws InvalidArgument on any violated bound (rate >= 50 Hz, duration
    /// covering settle+3 periods for periodic profiles, axis/scenario
    /// mismatch, sub-model validity, ...).
    void validate() const;
    /// Effective hip gains after applying the gravity-scaled default.
    double effective_hip_kp() const;
    double effective_hip_kd() const;
};

enum class TrialOutcome : std::uint8_t { Completed, Fallen };

/// Channel bundle produced by run_trial or read back from a trial file.
/// All populated channels share the uniform time base; an empty vector means
/// the channel is absent (legacy files may omit torques). Angles are
/// in-space sway angles, rad; torques N*m.
struct TrialRecord {
    TrialOutcome outcome = TrialOutcome::Completed;
    double rate_hz = 0.0;
    double period_s = 0.0;    // stimulus period, 0 when aperiodic
    int settle_periods = 0;
    double fall_time_s = -1.0;  // set when outcome == Fallen
    std::string scenario;       // textual scenario tag
    std::string spec_json;      // trial spec echo (may be empty on legacy reads)
    std::string model_json;     // model echo

    std::vector<double> time_s;
    std::vector<double> platform_cmd;  // rad (tilt/bsrp), m (translation), N*m (pull)
    std::vector<double> fs;            // support tilt actually achieved
    std::vector<double> ss;            // shank in space
    std::vector<double> ls;            // leg in space
    std::vector<double> ts;            // trunk in space
    std::vector<double> com;           // whole-body CoM sway
    std::vector<double> ankle_torque;
    std::vector<double> hip_torque;    // free two-link trials only

    std::size_t size() const { return time_s.size(); }
    /// Wrap a channel as a SignalSeries carrying the record's rate and period.
    SignalSeries as_series(const std::vector<double>& channel) const;
};

const char* to_string(Scenario s);
const char* to_string(TrialOutcome o);
Scenario scenario_from_string(const std::string& s);
TrialOutcome trial_outcome_from_string(const std::string& s);

/// Body sway beyond which a trial counts as a fall and the record is cut.
inline constexpr double kFallThresholdRad = 0.5;

/// Run one closed-loop trial. Per step: the platform tracks this step's
/// command under its limits, the controller reads the sensors, the applied
/// torques and the current state are recorded, then the plant integrates one
/// dt. A fall truncates the record at the last upright sample.
TrialRecord run_trial(const TrialSpec& spec);

/// Run an A/B pair under an identical stimulus. The specs must agree in
/// scenario, profile, duration, rate and settle count; anything else (model,
/// added mass, controller, plant) may differ.
std::pair<TrialRecord, TrialRecord> run_pair(const TrialSpec& nominal, const TrialSpec& modified);

}  // namespace posturebench
