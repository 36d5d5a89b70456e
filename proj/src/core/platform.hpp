#pragma once

#include "core/series.hpp"

namespace posturebench {

/// Motion platform envelope: first-order command tracking followed by hard
/// rate/acceleration and range clamps. Defaults describe the lab platform
/// (tilt +-10 deg at 30 deg/s, translation +-0.25 m at 5 m/s^2).
struct PlatformModel {
    double time_constant_s = 0.02;
    double tilt_range_rad = 0.175;
    double tilt_rate_limit = 0.52;      // rad/s
    double translation_range_m = 0.25;
    double accel_limit = 5.0;           // m/s^2

    void validate() const;
};

/// Discrete platform state shared by the tilt and translation axes.
/// Per step: first-order tracking toward the command, then the motion clamp
/// (rate for tilt, acceleration for translation), then the range clamp.
class PlatformSim {
public:
    PlatformSim(const PlatformModel& model, double dt, double initial_tilt = 0.0,
                double initial_translation = 0.0);

    void step_tilt(double command_rad);
    void step_translation(double command_m);

    double tilt() const { return tilt_; }
    double tilt_rate() const { return tilt_rate_; }
    double translation() const { return trans_; }
    double translation_accel() const { return trans_accel_; }

private:
    PlatformModel model_;
    double dt_;
    double track_alpha_;
    double tilt_ = 0.0, tilt_rate_ = 0.0;
    double trans_ = 0.0, trans_vel_ = 0.0, trans_accel_ = 0.0;
};

/// Feed a command series through the platform and return the achieved motion.
/// tilt_axis selects which axis the samples drive.
SignalSeries apply_platform_limits(const PlatformModel& model, const SignalSeries& command,
                                   bool tilt_axis);

}  // namespace posturebench
