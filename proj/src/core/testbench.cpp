#include "core/testbench.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "core/config.hpp"
#include "core/errors.hpp"

namespace posturebench {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw InvalidArgument(msg);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::Tilt: return "tilt";
        case Scenario::Translation: return "translation";
        case Scenario::ContactPull: return "contact-pull";
        case Scenario::Bsrp: return "bsrp";
    }
    return "tilt";
}

const char* to_string(TrialOutcome o) {
    return o == TrialOutcome::Fallen ? "fallen" : "completed";
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "tilt") return Scenario::Tilt;
    if (s == "translation") return Scenario::Translation;
    if (s == "contact-pull") return Scenario::ContactPull;
    if (s == "bsrp") return Scenario::Bsrp;
    throw InvalidArgument("unknown scenario '" + s + "'");
}

TrialOutcome trial_outcome_from_string(const std::string& s) {
    if (s == "completed") return TrialOutcome::Completed;
    if (s == "fallen") return TrialOutcome::Fallen;
    throw InvalidArgument("unknown trial outcome '" + s + "'");
}

namespace {

// Gravity stiffness of the upper segment about the hip. The hip servo's
// spring must exceed this or the joint is statically unstable.
double hip_gravity_stiffness(const AnthropometricModel& m) {
    if (m.segments.size() < 2) return 0.0;
    const Segment& hi = m.segments[1];
    return hi.mass_kg * m.gravity * hi.com_offset_m;
}

}  // namespace

double TrialSpec::effective_hip_kp() const {
    return hip_kp >= 0.0 ? hip_kp : 2.0 * hip_gravity_stiffness(model);
}

double TrialSpec::effective_hip_kd() const {
    return hip_kd >= 0.0 ? hip_kd : 0.6 * hip_gravity_stiffness(model);
}

void TrialSpec::validate() const {
    model.validate();
    controller.validate();
    platform.validate();
    require(finite(duration_s) && duration_s > 0.0, "trial duration must be positive");
    require(finite(rate_hz) && rate_hz >= 50.0, "simulation rate must be at least 50 Hz");
    require(std::llround(duration_s * rate_hz) >= 1, "trial covers no samples");
    require(settle_periods >= 0, "settle period count must be non-negative");
    require(finite(initial_sway_rad) && std::abs(initial_sway_rad) < kFallThresholdRad,
            "initial sway must stay below the fall threshold");
    require(finite(hip_kp) && finite(hip_kd), "hip gains must be finite");
    if (plant == PlantKind::Dip) {
        require(model.segments.size() == 2, "the two-link plant needs a two-segment model");
    }
    if (scenario != Scenario::Bsrp && profile.kind != ProfileKind::Zero) {
        ProfileAxis want = ProfileAxis::SupportTilt;
        if (scenario == Scenario::Translation) want = ProfileAxis::SupportTranslation;
        if (scenario == Scenario::ContactPull) want = ProfileAxis::ContactForce;
        require(profile.axis == want, "profile axis does not match the trial scenario");
        double p = profile.period_s();
        if (p > 0.0) {
            require(duration_s + 1e-9 >= (settle_periods + 3) * p,
                    "duration too short: periodic trials need settle+3 stimulus periods");
        }
    }
}

SignalSeries TrialRecord::as_series(const std::vector<double>& channel) const {
    SignalSeries s;
    s.samples = channel;
    s.rate_hz = rate_hz;
    s.period_s = period_s;
    return s;
}

TrialRecord run_trial(const TrialSpec& spec) {
    spec.validate();

    const double dt = spec.dt();
    const std::size_t n = static_cast<std::size_t>(std::llround(spec.duration_s * spec.rate_hz));
    const bool bsrp = spec.scenario == Scenario::Bsrp;
    const bool dip_free = spec.plant == PlantKind::Dip && !spec.hip_locked;
    const bool dip_locked = spec.plant == PlantKind::Dip && spec.hip_locked;

    const ComposedBody body = compose_body(spec.model);
    const std::size_t nseg = spec.model.segments.size();

    SignalSeries cmd;
    if (!bsrp) {
        cmd = spec.profile.realize(spec.rate_hz, spec.duration_s);
        if (cmd.size() < n) throw NumericError("realized profile shorter than the trial");
    }

    // The platform starts already settled on the first command so trials do
    // not open with an artificial step transient.
    double init_tilt = 0.0, init_trans = 0.0;
    if (bsrp) {
        init_tilt = spec.initial_sway_rad;
    } else if (spec.scenario == Scenario::Tilt) {
        init_tilt = cmd.samples[0];
    } else if (spec.scenario == Scenario::Translation) {
        init_trans = cmd.samples[0];
    }
    PlatformSim platform(spec.platform, dt, init_tilt, init_trans);

    Controller controller(spec.controller, dt);
    const double hip_kp = spec.effective_hip_kp();
    const double hip_kd = spec.effective_hip_kd();

    SipState sip{spec.initial_sway_rad, 0.0};
    DipState dip{spec.initial_sway_rad, spec.initial_sway_rad, 0.0, 0.0};

    TrialRecord rec;
    rec.rate_hz = spec.rate_hz;
    rec.period_s = bsrp ? 0.0 : cmd.period_s;
    rec.settle_periods = spec.settle_periods;
    rec.scenario = to_string(spec.scenario);
    rec.spec_json = trial_spec_to_json_text(spec);
    rec.model_json = model_to_json_text(spec.model);
    for (auto* ch : {&rec.time_s, &rec.platform_cmd, &rec.fs, &rec.ss, &rec.ls, &rec.ts, &rec.com,
                     &rec.ankle_torque}) {
        ch->reserve(n);
    }
    if (dip_free) rec.hip_torque.reserve(n);

    std::vector<double> angles(nseg), rates(nseg);
    auto fill_state = [&](std::vector<double>& a, std::vector<double>& r) {
        if (dip_free) {
            a[0] = dip.phi1;
            r[0] = dip.rate1;
            if (nseg > 1) {
                a[1] = dip.phi2;
                r[1] = dip.rate2;
            }
        } else {
            std::fill(a.begin(), a.end(), sip.alpha);
            std::fill(r.begin(), r.end(), sip.rate);
        }
    };

    for (std::size_t k = 0; k < n; ++k) {
        fill_state(angles, rates);
        const double com_now = com_sway(spec.model, angles);
        const double com_rate_now = com_sway_rate(spec.model, angles, rates);

        const double command = bsrp ? bsrp_command(com_now) : cmd.samples[k];
        DisturbanceInputs dist;
        switch (spec.scenario) {
            case Scenario::Tilt:
            case Scenario::Bsrp:
                platform.step_tilt(command);
                dist.support_tilt = platform.tilt();
                dist.support_tilt_rate = platform.tilt_rate();
                break;
            case Scenario::Translation:
                platform.step_translation(command);
                dist.support_accel = platform.translation_accel();
                break;
            case Scenario::ContactPull:
                dist.contact_torque = command;
                break;
        }

        const double phi1 = dip_free ? dip.phi1 : sip.alpha;
        const double w1 = dip_free ? dip.rate1 : sip.rate;
        SensorReadings sensors;
        sensors.body_sway = com_now;
        sensors.body_sway_rate = com_rate_now;
        sensors.ankle_angle = phi1 - dist.support_tilt;
        sensors.ankle_rate = w1 - dist.support_tilt_rate;

        JointTorques tau;
        tau.ankle = controller.step(sensors);
        if (dip_free && spec.controller.kind != ControllerKind::None) {
            double raw = -hip_kp * (dip.phi2 - dip.phi1) - hip_kd * (dip.rate2 - dip.rate1);
            tau.hip = std::clamp(raw, -spec.controller.saturation, spec.controller.saturation);
        }

        rec.time_s.push_back(static_cast<double>(k) * dt);
        rec.platform_cmd.push_back(command);
        rec.fs.push_back(platform.tilt());
        rec.ss.push_back(angles[0]);
        rec.ls.push_back(angles[0]);
        rec.ts.push_back(angles[nseg > 1 ? 1 : 0]);
        rec.com.push_back(com_now);
        rec.ankle_torque.push_back(tau.ankle);
        if (dip_free) rec.hip_torque.push_back(tau.hip);

        if (dip_free) {
            dip = dip_step_rk4(body, dip, tau, dist, dt);
        } else if (dip_locked) {
            sip = locked_dip_step_rk4(body, sip, tau, dist, dt);
        } else {
            sip = sip_step_rk4(body, sip, tau, dist, dt);
        }

        fill_state(angles, rates);
        bool ok = true;
        for (double v : angles) ok = ok && finite(v);
        for (double v : rates) ok = ok && finite(v);
        const double com_next = ok ? com_sway(spec.model, angles) : 0.0;
        if (!ok || std::abs(com_next) > kFallThresholdRad) {
            rec.outcome = TrialOutcome::Fallen;
            rec.fall_time_s = static_cast<double>(k + 1) * dt;
            break;
        }
    }
    return rec;
}

std::pair<TrialRecord, TrialRecord> run_pair(const TrialSpec& nominal, const TrialSpec& modified) {
    require(nominal.scenario == modified.scenario, "paired trials must share the scenario");
    const PerturbationProfile& a = nominal.profile;
    const PerturbationProfile& b = modified.profile;
    bool same_profile = a.kind == b.kind && a.axis == b.axis && a.amplitude == b.amplitude &&
                        a.frequency_hz == b.frequency_hz && a.prts_stages == b.prts_stages &&
                        a.prts_state_s == b.prts_state_s && a.impulse_width_s == b.impulse_width_s;
    require(same_profile, "paired trials must share the stimulus profile");
    require(nominal.duration_s == modified.duration_s, "paired trials must share the duration");
    require(nominal.rate_hz == modified.rate_hz, "paired trials must share the rate");
    require(nominal.settle_periods == modified.settle_periods,
            "paired trials must share the settle count");
    return {run_trial(nominal), run_trial(modified)};
}

}  // namespace posturebench
