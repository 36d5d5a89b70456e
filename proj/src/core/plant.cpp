#include "core/plant.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace posturebench {

namespace {

void check_dt(double dt) {
    if (!(dt > 0.0) || dt > 0.05)
        throw InvalidArgument("integration step must lie in (0, 0.05] s");
}

}  // namespace

ComposedBody compose_body(const AnthropometricModel& model) {
    model.validate();
    ComposedBody b;
    b.g = model.gravity;
    b.S = model.combined_first_moment();
    b.J = model.combined_inertia_about_ankle();
    b.Ce = model.added.mass_kg * model.gravity * model.added.eccentricity_m;

    if (model.segments.size() == 2) {
        const Segment& lo = model.segments[0];
        const Segment& hi = model.segments[1];
        const double z1 = model.segment_com_height(0);
        b.L1 = lo.length_m;
        double s1 = lo.mass_kg * z1;
        double J1 = lo.inertia_kgm2 + lo.mass_kg * z1 * z1;
        if (model.added.mass_kg > 0.0) {
            if (model.added.height_m > b.L1 + 1e-12)
                throw InvalidArgument("attached load above the hip needs the rigid-body plant");
            s1 += model.added.mass_kg * model.added.height_m;
            J1 += model.added.mass_kg * (model.added.height_m * model.added.height_m +
                                         model.added.eccentricity_m * model.added.eccentricity_m);
        }
        const double c2 = hi.com_offset_m;
        b.M11 = J1 + hi.mass_kg * b.L1 * b.L1;
        b.M22 = hi.inertia_kgm2 + hi.mass_kg * c2 * c2;
        b.B = hi.mass_kg * b.L1 * c2;
        b.A1 = s1 + hi.mass_kg * b.L1;
        b.A2 = hi.mass_kg * c2;
        b.E1 = model.added.mass_kg * model.added.eccentricity_m;
        b.dip_valid = true;
    }
    return b;
}

double sip_accel(const ComposedBody& b, double alpha, const JointTorques& tau,
                 const DisturbanceInputs& dist) {
    const double sa = std::sin(alpha);
    const double ca = std::cos(alpha);
    return (b.S * b.g * sa + b.Ce * ca - b.S * ca * dist.support_accel + tau.ankle +
            dist.contact_torque) /
           b.J;
}

std::array<double, 2> dip_accel(const ComposedBody& b, const DipState& s,
                                const JointTorques& tau, const DisturbanceInputs& dist) {
    if (!b.dip_valid) throw InvalidArgument("two-link dynamics need a two-segment model");
    const double s1 = std::sin(s.phi1), c1 = std::cos(s.phi1);
    const double s2 = std::sin(s.phi2), c2 = std::cos(s.phi2);
    const double s12 = std::sin(s.phi1 - s.phi2);
    const double m12 = b.B * std::cos(s.phi1 - s.phi2);

    // M11 q1'' + M12 q2'' = r1 ; M12 q1'' + M22 q2'' = r2
    const double r1 = -b.B * s12 * s.rate2 * s.rate2 +
                      b.g * (b.A1 * s1 + b.E1 * c1) - b.A1 * dist.support_accel * c1 +
                      tau.ankle - tau.hip + dist.contact_torque;
    const double r2 = b.B * s12 * s.rate1 * s.rate1 + b.g * b.A2 * s2 -
                      b.A2 * dist.support_accel * c2 + tau.hip;

    const double det = b.M11 * b.M22 - m12 * m12;
    if (!(det > 0.0)) throw NumericError("two-link mass matrix is not positive definite");
    return {(r1 * b.M22 - r2 * m12) / det, (r2 * b.M11 - r1 * m12) / det};
}

double dip_locked_accel(const ComposedBody& b, double alpha, const JointTorques& tau,
                        const DisturbanceInputs& dist) {
    if (!b.dip_valid) throw InvalidArgument("two-link dynamics need a two-segment model");
    // Pinned hip: phi1 = phi2, rates equal; summing the link equations cancels
    // the hip torque and the Coriolis terms (sin(phi1-phi2) = 0).
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    const double m_sum = b.M11 + 2.0 * b.B + b.M22;
    const double r = b.g * ((b.A1 + b.A2) * sa + b.E1 * ca) -
                     (b.A1 + b.A2) * dist.support_accel * ca + tau.ankle + dist.contact_torque;
    return r / m_sum;
}

SipState sip_step_rk4(const ComposedBody& b, const SipState& s, const JointTorques& tau,
                      const DisturbanceInputs& dist, double dt) {
    check_dt(dt);
    auto f = [&](const SipState& y) {
        return SipState{y.rate, sip_accel(b, y.alpha, tau, dist)};
    };
    const SipState k1 = f(s);
    const SipState k2 = f({s.alpha + 0.5 * dt * k1.alpha, s.rate + 0.5 * dt * k1.rate});
    const SipState k3 = f({s.alpha + 0.5 * dt * k2.alpha, s.rate + 0.5 * dt * k2.rate});
    const SipState k4 = f({s.alpha + dt * k3.alpha, s.rate + dt * k3.rate});
    return {s.alpha + dt / 6.0 * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha),
            s.rate + dt / 6.0 * (k1.rate + 2.0 * k2.rate + 2.0 * k3.rate + k4.rate)};
}

SipState locked_dip_step_rk4(const ComposedBody& b, const SipState& s, const JointTorques& tau,
                             const DisturbanceInputs& dist, double dt) {
    check_dt(dt);
    auto f = [&](const SipState& y) {
        return SipState{y.rate, dip_locked_accel(b, y.alpha, tau, dist)};
    };
    const SipState k1 = f(s);
    const SipState k2 = f({s.alpha + 0.5 * dt * k1.alpha, s.rate + 0.5 * dt * k1.rate});
    const SipState k3 = f({s.alpha + 0.5 * dt * k2.alpha, s.rate + 0.5 * dt * k2.rate});
    const SipState k4 = f({s.alpha + dt * k3.alpha, s.rate + dt * k3.rate});
    return {s.alpha + dt / 6.0 * (k1.alpha + 2.0 * k2.alpha + 2.0 * k3.alpha + k4.alpha),
            s.rate + dt / 6.0 * (k1.rate + 2.0 * k2.rate + 2.0 * k3.rate + k4.rate)};
}

DipState dip_step_rk4(const ComposedBody& b, const DipState& s, const JointTorques& tau,
                      const DisturbanceInputs& dist, double dt) {
    check_dt(dt);
    auto f = [&](const DipState& y) {
        const auto acc = dip_accel(b, y, tau, dist);
        return DipState{y.rate1, y.rate2, acc[0], acc[1]};
    };
    auto advance = [&](const DipState& y, const DipState& k, double h) {
        return DipState{y.phi1 + h * k.phi1, y.phi2 + h * k.phi2, y.rate1 + h * k.rate1,
                        y.rate2 + h * k.rate2};
    };
    const DipState k1 = f(s);
    const DipState k2 = f(advance(s, k1, 0.5 * dt));
    const DipState k3 = f(advance(s, k2, 0.5 * dt));
    const DipState k4 = f(advance(s, k3, dt));
    return {s.phi1 + dt / 6.0 * (k1.phi1 + 2.0 * k2.phi1 + 2.0 * k3.phi1 + k4.phi1),
            s.phi2 + dt / 6.0 * (k1.phi2 + 2.0 * k2.phi2 + 2.0 * k3.phi2 + k4.phi2),
            s.rate1 + dt / 6.0 * (k1.rate1 + 2.0 * k2.rate1 + 2.0 * k3.rate1 + k4.rate1),
            s.rate2 + dt / 6.0 * (k1.rate2 + 2.0 * k2.rate2 + 2.0 * k3.rate2 + k4.rate2)};
}

double sip_energy(const ComposedBody& b, const SipState& s) {
    const double T = 0.5 * b.J * s.rate * s.rate;
    const double U = b.g * b.S * std::cos(s.alpha) - b.Ce * std::sin(s.alpha);
    return T + U;
}

double dip_energy(const ComposedBody& b, const DipState& s) {
    if (!b.dip_valid) throw InvalidArgument("two-link energy needs a two-segment model");
    const double m12 = b.B * std::cos(s.phi1 - s.phi2);
    const double T = 0.5 * b.M11 * s.rate1 * s.rate1 + 0.5 * b.M22 * s.rate2 * s.rate2 +
                     m12 * s.rate1 * s.rate2;
    const double U = b.g * (b.A1 * std::cos(s.phi1) + b.A2 * std::cos(s.phi2)) -
                     b.g * b.E1 * std::sin(s.phi1);
    return T + U;
}

double com_sway(const AnthropometricModel& model, const std::vector<double>& segment_angles) {
    if (segment_angles.size() != model.segments.size())
        throw InvalidArgument("one sway angle per segment is required");
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < model.segments.size(); ++i) {
        const double w = model.segments[i].mass_kg * model.segment_com_height(i);
        sx += w * std::sin(segment_angles[i]);
        sy += w * std::cos(segment_angles[i]);
    }
    return std::atan2(sx, sy);
}

double com_sway_rate(const AnthropometricModel& model, const std::vector<double>& segment_angles,
                     const std::vector<double>& segment_rates) {
    if (segment_angles.size() != model.segments.size() ||
        segment_rates.size() != model.segments.size())
        throw InvalidArgument("one sway angle and rate per segment is required");
    double sx = 0.0, sy = 0.0, dsx = 0.0, dsy = 0.0;
    for (std::size_t i = 0; i < model.segments.size(); ++i) {
        const double w = model.segments[i].mass_kg * model.segment_com_height(i);
        const double sa = std::sin(segment_angles[i]), ca = std::cos(segment_angles[i]);
        sx += w * sa;
        sy += w * ca;
        dsx += w * ca * segment_rates[i];
        dsy -= w * sa * segment_rates[i];
    }
    const double r2 = sx * sx + sy * sy;
    if (!(r2 > 0.0)) throw NumericError("CoM coincides with the ankle");
    return (sy * dsx - sx * dsy) / r2;
}

}  // namespace posturebench
