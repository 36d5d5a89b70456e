#include "core/platform.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace posturebench {

void PlatformModel::validate() const {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw InvalidArgument(msg);
    };
    require(std::isfinite(time_constant_s) && time_constant_s > 0.0,
            "platform time constant must be > 0");
    require(std::isfinite(tilt_range_rad) && tilt_range_rad > 0.0,
            "platform tilt range must be > 0");
    require(std::isfinite(tilt_rate_limit) && tilt_rate_limit > 0.0,
            "platform tilt rate limit must be > 0");
    require(std::isfinite(translation_range_m) && translation_range_m > 0.0,
            "platform translation range must be > 0");
    require(std::isfinite(accel_limit) && accel_limit > 0.0,
            "platform acceleration limit must be > 0");
}

PlatformSim::PlatformSim(const PlatformModel& model, double dt, double initial_tilt,
                         double initial_translation)
    : model_(model), dt_(dt) {
    model_.validate();
    if (!(dt > 0.0)) throw InvalidArgument("platform step must be > 0");
    track_alpha_ = 1.0 - std::exp(-dt / model_.time_constant_s);
    tilt_ = std::clamp(initial_tilt, -model_.tilt_range_rad, model_.tilt_range_rad);
    trans_ = std::clamp(initial_translation, -model_.translation_range_m,
                        model_.translation_range_m);
}

void PlatformSim::step_tilt(double command_rad) {
    const double prev = tilt_;
    const double tracked = tilt_ + track_alpha_ * (command_rad - tilt_);
    const double max_step = model_.tilt_rate_limit * dt_;
    const double delta = std::clamp(tracked - prev, -max_step, max_step);
    tilt_ = std::clamp(prev + delta, -model_.tilt_range_rad, model_.tilt_range_rad);
    tilt_rate_ = (tilt_ - prev) / dt_;
}

void PlatformSim::step_translation(double command_m) {
    const double prev = trans_;
    const double prev_vel = trans_vel_;
    const double tracked = trans_ + track_alpha_ * (command_m - trans_);
    const double want_vel = (tracked - prev) / dt_;
    const double accel =
        std::clamp((want_vel - prev_vel) / dt_, -model_.accel_limit, model_.accel_limit);
    trans_vel_ = prev_vel + accel * dt_;
    trans_ = std::clamp(prev + trans_vel_ * dt_, -model_.translation_range_m,
                        model_.translation_range_m);
    trans_vel_ = (trans_ - prev) / dt_;  // the range clamp is a hard stop
    trans_accel_ = (trans_vel_ - prev_vel) / dt_;
}

SignalSeries apply_platform_limits(const PlatformModel& model, const SignalSeries& command,
                                   bool tilt_axis) {
    if (!(command.rate_hz > 0.0)) throw InvalidArgument("command series needs a sample rate");
    PlatformSim sim(model, 1.0 / command.rate_hz);
    SignalSeries out = command;
    for (std::size_t k = 0; k < command.samples.size(); ++k) {
        if (tilt_axis) {
            sim.step_tilt(command.samples[k]);
            out.samples[k] = sim.tilt();
        } else {
            sim.step_translation(command.samples[k]);
            out.samples[k] = sim.translation();
        }
    }
    return out;
}

}  // namespace posturebench
