#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace posturebench {

enum class ControllerKind : std::uint8_t { None, Pd, Dec };

/// Balance controller parameters. Gains are torque units (N*m per rad and
/// per rad/s); the defaults assume the built-in model (mgh ~ 129.5 N*m) and
/// are meant to be overridden per trial.
struct ControllerConfig {
    ControllerKind kind = ControllerKind::Pd;
    double kp = 194.238;          // 1.5 * default mgh
    double kd = 38.8476;          // 0.3 * default mgh * s
    double setpoint = 0.0;        // target body sway (pd)
    double nominal_mgh = 129.492; // internal gravity model
    double saturation = 80.0;     // |torque| bound, N*m
    double loop_rate_hz = 0.0;    // 0 = run every simulation step

    // Disturbance-estimation branch (dec only).
    double tilt_lp_hz = 1.0;        // low-pass on the measured support velocity
    double tilt_threshold = 0.0017; // rad/s dead zone on that velocity
    double tilt_comp_gain = 0.25;   // scales the tilt corrective torque
    double contact_lp_hz = 1.0;     // low-pass on the servo residual
    double contact_threshold = 0.3; // N*m dead zone on the residual
    double contact_gain = 0.3;      // 1/s tracking rate of the residual estimate
    double contact_leak_s = 20.0;   // leak time constant of the estimate

    /// Throws InvalidArgument on non-finite or negative parameters, and when a
    /// pd loop cannot stabilize the linearized plant (kp <= nominal_mgh).
    void validate() const;
};

/// What the controller can sense: a vestibular analog (body CoM sway in
/// space) and ankle proprioception. The support tilt is not sensed directly;
/// dec reconstructs it as body_sway - ankle_angle.
struct SensorReadings {
    double body_sway = 0.0;
    double body_sway_rate = 0.0;
    double ankle_angle = 0.0;
    double ankle_rate = 0.0;
};

/// Proportional-derivative servo on body-in-space sway:
///   tau = clamp(-kp (BS - setpoint) - kd BS_rate, +-saturation)
double pd_control(const ControllerConfig& cfg, const SensorReadings& r);

/// Estimator memory of the dec law. Zero-initialized at trial start.
struct DecState {
    double tilt_vel_lp = 0.0;   // low-passed support tilt velocity
    double tilt_estimate = 0.0; // integrated post-dead-zone velocity
    double resid_lp = 0.0;      // low-passed servo residual
    double contact_estimate = 0.0;
    double prev_torque = 0.0;   // torque applied on the previous step
};

/// Disturbance-estimation-and-compensation law, single joint:
///   servo      -kp BS - kd BS_rate
///   gravity    -nominal_mgh sin(BS)            (cancels the gravity torque)
///   tilt       +tilt_comp_gain * nominal_mgh * sin(tilt_estimate)
///   contact    -contact_estimate
/// The tilt estimate integrates the dead-zoned, low-passed support velocity;
/// the contact estimate tracks the dead-zoned, low-passed quasi-static servo
/// residual (-nominal_mgh sin(BS) - applied torque) with a leaky integrator.
/// While both dead zones stay closed the output equals servo + gravity exactly.
double dec_control(const ControllerConfig& cfg, DecState& state, const SensorReadings& r,
                   double dt);

/// Sway-referenced platform servo: the platform tilt command equals the body
/// CoM sway, which holds the ankle joint angle constant.
double bsrp_command(double com_sway_now);

/// Stateful wrapper used by the trial loop. When loop_rate_hz is below the
/// simulation rate the law ticks on a decimated grid and the torque is held
/// between ticks (zero-order hold).
class Controller {
public:
    Controller(const ControllerConfig& cfg, double sim_dt);
    /// Ankle torque for this simulation step.
    double step(const SensorReadings& r);
    const ControllerConfig& config() const { return cfg_; }

private:
    ControllerConfig cfg_;
    DecState dec_;
    double loop_dt_;
    std::size_t hold_steps_;
    std::size_t countdown_ = 0;
    double held_ = 0.0;
};

const char* to_string(ControllerKind kind);
ControllerKind controller_kind_from_string(const std::string& s);

}  // namespace posturebench
