#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "core/model.hpp"

namespace posturebench {

enum class PlantKind : std::uint8_t { Sip, Dip };

/// Joint torques applied by the controller, in the sway-positive direction.
struct JointTorques {
    double ankle = 0.0;
    double hip = 0.0;
};

/// Exogenous inputs for one integration step (zero-order hold).
/// support_tilt/support_tilt_rate act kinematically through the foot-in-space
/// channel; support_accel is the horizontal acceleration of the support;
/// contact_torque is an external pull expressed as a torque about the ankle.
struct DisturbanceInputs {
    double support_tilt = 0.0;       // rad
    double support_tilt_rate = 0.0;  // rad/s
    double support_accel = 0.0;      // m/s^2
    double contact_torque = 0.0;     // N*m
};

/// Scalar constants of the composed body (segments + attached point load),
/// frozen once per model so the derivative evaluations stay cheap.
struct ComposedBody {
    double g = 9.81;
    // whole chain about the ankle
    double S = 0.0;        // first moment m'h' (includes the point load)
    double J = 0.0;        // rigid inertia about the ankle (parallel axis)
    double Ce = 0.0;       // eccentric gravity coefficient: ma * g * e
    // two-link split (valid when dip_valid)
    bool dip_valid = false;
    double L1 = 0.0;       // ankle-to-hip distance
    double M11 = 0.0, M22 = 0.0, B = 0.0;  // mass matrix: M12 = B cos(phi1-phi2)
    double A1 = 0.0, A2 = 0.0;             // first moments driving gravity/accel terms
    double E1 = 0.0;                       // eccentric first moment on the lower link
};

/// Requires two segments for DIP use; an attached load must sit at or below
/// the hip so it rides on the lower link.
ComposedBody compose_body(const AnthropometricModel& model);

struct SipState {
    double alpha = 0.0;  // body-in-space sway
    double rate = 0.0;
};

struct DipState {
    double phi1 = 0.0;  // lower link in space
    double phi2 = 0.0;  // upper link in space
    double rate1 = 0.0;
    double rate2 = 0.0;
};

/// Body sway acceleration of the single inverted pendulum:
///   J a'' = S g sin(a) + Ce cos(a) - S cos(a) u_acc + tau_ankle + tau_contact
double sip_accel(const ComposedBody& b, double alpha, const JointTorques& tau,
                 const DisturbanceInputs& dist);

/// Two-link accelerations (phi1'', phi2'') on a tilting/accelerating base.
std::array<double, 2> dip_accel(const ComposedBody& b, const DipState& s,
                                const JointTorques& tau, const DisturbanceInputs& dist);

/// DIP with the hip pinned (hip angle and rate identically 0): the constraint
/// torque is eliminated by summing the link equations, which reduces exactly
/// to sip_accel for the rigid composition.
double dip_locked_accel(const ComposedBody& b, double alpha, const JointTorques& tau,
                        const DisturbanceInputs& dist);

/// One classic RK4 step with zero-order-hold inputs. dt must lie in (0, 0.05].
SipState sip_step_rk4(const ComposedBody& b, const SipState& s, const JointTorques& tau,
                      const DisturbanceInputs& dist, double dt);
DipState dip_step_rk4(const ComposedBody& b, const DipState& s, const JointTorques& tau,
                      const DisturbanceInputs& dist, double dt);
SipState locked_dip_step_rk4(const ComposedBody& b, const SipState& s, const JointTorques& tau,
                             const DisturbanceInputs& dist, double dt);

/// Total mechanical energy for a static, level support (used by drift checks).
double sip_energy(const ComposedBody& b, const SipState& s);
double dip_energy(const ComposedBody& b, const DipState& s);

/// CoM sway angle from per-segment in-space sway angles:
///   atan2(sum m_i z_i sin(th_i), sum m_i z_i cos(th_i))
/// treating each segment CoM as a point at polar (z_i, th_i) about the ankle.
/// For a rigid body (all angles equal) this returns that angle exactly.
double com_sway(const AnthropometricModel& model, const std::vector<double>& segment_angles);

/// Time derivative of com_sway for the given segment angle rates.
double com_sway_rate(const AnthropometricModel& model, const std::vector<double>& segment_angles,
                     const std::vector<double>& segment_rates);

}  // namespace posturebench
