#include "core/controller.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"

namespace posturebench {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidArgument(msg);
}

double clamp_torque(double tau, double sat) { return std::clamp(tau, -sat, sat); }

double lp_alpha(double cutoff_hz, double dt) {
    // Exact first-order discretization; cutoff 0 disables the filter state.
    return 1.0 - std::exp(-2.0 * std::numbers::pi * cutoff_hz * dt);
}

}  // namespace

void ControllerConfig::validate() const {
    if (kind == ControllerKind::None) return;
    require(std::isfinite(loop_rate_hz) && loop_rate_hz >= 0.0, "loop rate must be >= 0");
    require(std::isfinite(kp) && kp >= 0.0, "kp must be >= 0");
    require(std::isfinite(kd) && kd >= 0.0, "kd must be >= 0");
    require(std::isfinite(setpoint), "setpoint must be finite");
    require(std::isfinite(nominal_mgh) && nominal_mgh >= 0.0, "nominal mgh must be >= 0");
    require(std::isfinite(saturation) && saturation > 0.0, "saturation must be > 0");
    if (kind == ControllerKind::Pd) {
        // Without gravity compensation the proportional stiffness must beat
        // the gravitational toppling stiffness of the internal model.
        require(kp > nominal_mgh, "pd needs kp > nominal_mgh to stabilize the plant");
    }
    if (kind == ControllerKind::Dec) {
        require(kp > 0.0, "dec needs kp > 0");
        require(tilt_lp_hz > 0.0 && contact_lp_hz > 0.0, "estimator cutoffs must be > 0");
        require(tilt_threshold >= 0.0 && contact_threshold >= 0.0,
                "dead-zone thresholds must be >= 0");
        require(tilt_comp_gain >= 0.0, "tilt compensation gain must be >= 0");
        require(contact_gain >= 0.0, "contact tracking gain must be >= 0");
        require(contact_leak_s > 0.0, "contact leak time constant must be > 0");
    }
}

double pd_control(const ControllerConfig& cfg, const SensorReadings& r) {
    const double tau = -cfg.kp * (r.body_sway - cfg.setpoint) - cfg.kd * r.body_sway_rate;
    return clamp_torque(tau, cfg.saturation);
}

double dec_control(const ControllerConfig& cfg, DecState& st, const SensorReadings& r,
                   double dt) {
    require(dt > 0.0, "controller step must be > 0");
    const double bs = r.body_sway;
    const double bsr = r.body_sway_rate;

    // Support tilt velocity is the vestibular/proprioceptive difference.
    const double support_vel = bsr - r.ankle_rate;
    st.tilt_vel_lp += lp_alpha(cfg.tilt_lp_hz, dt) * (support_vel - st.tilt_vel_lp);
    const double vel_detected =
        std::abs(st.tilt_vel_lp) > cfg.tilt_threshold ? st.tilt_vel_lp : 0.0;
    st.tilt_estimate += vel_detected * dt;

    // Quasi-static servo residual: torques unexplained by the internal gravity
    // model (pendulum inertia is negligible at sway frequencies).
    const double resid = -cfg.nominal_mgh * std::sin(bs) - st.prev_torque;
    st.resid_lp += lp_alpha(cfg.contact_lp_hz, dt) * (resid - st.resid_lp);
    const double resid_detected =
        std::abs(st.resid_lp) > cfg.contact_threshold ? st.resid_lp : 0.0;
    st.contact_estimate +=
        dt * (cfg.contact_gain * (resid_detected - st.contact_estimate) -
              st.contact_estimate / cfg.contact_leak_s);

    const double servo = -cfg.kp * bs - cfg.kd * bsr;
    const double gravity = -cfg.nominal_mgh * std::sin(bs);
    const double tilt_comp = cfg.tilt_comp_gain * cfg.nominal_mgh * std::sin(st.tilt_estimate);
    const double contact_comp = -st.contact_estimate;

    const double tau = clamp_torque(servo + gravity + tilt_comp + contact_comp, cfg.saturation);
    st.prev_torque = tau;
    return tau;
}

double bsrp_command(double com_sway_now) { return com_sway_now; }

Controller::Controller(const ControllerConfig& cfg, double sim_dt) : cfg_(cfg) {
    cfg_.validate();
    require(sim_dt > 0.0, "controller step must be > 0");
    hold_steps_ = 1;
    if (cfg_.loop_rate_hz > 0.0) {
        const double steps = 1.0 / (cfg_.loop_rate_hz * sim_dt);
        require(steps >= 1.0 - 1e-9, "controller loop rate exceeds the simulation rate");
        hold_steps_ = static_cast<std::size_t>(std::llround(std::max(steps, 1.0)));
    }
    loop_dt_ = sim_dt * static_cast<double>(hold_steps_);
}

double Controller::step(const SensorReadings& r) {
    if (countdown_ > 0) {
        --countdown_;
        return held_;
    }
    switch (cfg_.kind) {
        case ControllerKind::None:
            held_ = 0.0;
            break;
        case ControllerKind::Pd:
            held_ = pd_control(cfg_, r);
            break;
        case ControllerKind::Dec:
            held_ = dec_control(cfg_, dec_, r, loop_dt_);
            break;
    }
    countdown_ = hold_steps_ - 1;
    return held_;
}

const char* to_string(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::None: return "none";
        case ControllerKind::Pd: return "pd";
        case ControllerKind::Dec: return "dec";
    }
    return "?";
}

ControllerKind controller_kind_from_string(const std::string& s) {
    if (s == "none") return ControllerKind::None;
    if (s == "pd") return ControllerKind::Pd;
    if (s == "dec") return ControllerKind::Dec;
    throw ParseError("unknown controller kind: " + s);
}

}  // namespace posturebench
