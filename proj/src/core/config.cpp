#include "core/config.hpp"

#include <cmath>
#include <cstdlib>
#include <initializer_list>
#include <vector>

#include "core/errors.hpp"
#include "core/trial_io.hpp"
#include <json.hpp>

namespace posturebench {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

struct UnitKey {
    const char* suffix;
    double scale;
};

constexpr UnitKey kAngle[] = {{"_rad", 1.0}, {"_deg", kDegToRad}};
constexpr UnitKey kAngleRate[] = {{"_rad_s", 1.0}, {"_deg_s", kDegToRad}};
constexpr UnitKey kLength[] = {{"_m", 1.0}};
constexpr UnitKey kLengthRate[] = {{"_m_s", 1.0}};
constexpr UnitKey kTorque[] = {{"_nm", 1.0}};
constexpr UnitKey kTorqueRate[] = {{"_nm_s", 1.0}};
constexpr UnitKey kAccel[] = {{"_m_s2", 1.0}};

[[noreturn]] void fail(const std::string& origin, const std::string& path, const std::string& msg) {
    throw ParseError(origin + ": key '" + path + "' " + msg);
}

class ObjReader {
public:
    ObjReader(const json& obj, std::string origin, std::string path)
        : obj_(obj), origin_(std::move(origin)), path_(std::move(path)) {
        if (!obj_.is_object()) fail(origin_, path_, "must be an object");
    }

    std::string sub(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    const json* find(const std::string& key) {
        used_.push_back(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    double number(const std::string& key, bool required, double def) {
        const json* v = find(key);
        if (!v) {
            if (required) fail(origin_, sub(key), "is required");
            return def;
        }
        if (!v->is_number()) fail(origin_, sub(key), "must be a number");
        return v->get<double>();
    }

    int integer(const std::string& key, bool required, int def) {
        const json* v = find(key);
        if (!v) {
            if (required) fail(origin_, sub(key), "is required");
            return def;
        }
        if (!v->is_number_integer()) fail(origin_, sub(key), "must be an integer");
        return v->get<int>();
    }

    bool boolean(const std::string& key, bool def) {
        const json* v = find(key);
        if (!v) return def;
        if (!v->is_boolean()) fail(origin_, sub(key), "must be true or false");
        return v->get<bool>();
    }

    std::string text(const std::string& key, bool required, const std::string& def) {
        const json* v = find(key);
        if (!v) {
            if (required) fail(origin_, sub(key), "is required");
            return def;
        }
        if (!v->is_string()) fail(origin_, sub(key), "must be a string");
        return v->get<std::string>();
    }

    /// Read `base` with one of the unit suffixes, e.g. amplitude_rad or
    /// amplitude_deg, converting to the canonical unit.
    template <std::size_t N>
    double quantity(const std::string& base, const UnitKey (&units)[N], bool required, double def) {
        const UnitKey* hit = nullptr;
        double raw = 0.0;
        for (const UnitKey& u : units) {
            std::string key = base + u.suffix;
            if (!obj_.contains(key)) continue;
            if (hit) fail(origin_, sub(key), "conflicts with another unit suffix of the same key");
            const json& v = obj_.at(key);
            if (!v.is_number()) fail(origin_, sub(key), "must be a number");
            raw = v.get<double>() * u.scale;
            hit = &u;
            used_.push_back(key);
        }
        if (!hit) {
            if (required) {
                std::string variants;
                for (const UnitKey& u : units) {
                    if (!variants.empty()) variants += " or ";
                    variants += base + u.suffix;
                }
                fail(origin_, sub(base), "is required (as " + variants + ")");
            }
            return def;
        }
        return raw;
    }

    /// Reject keys nobody consumed; typos surface instead of being ignored.
    void finish() {
        // also tolerate every unit variant of consumed bases
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            bool ok = false;
            for (const std::string& u : used_) {
                if (it.key() == u) {
                    ok = true;
                    break;
                }
            }
            if (!ok) fail(origin_, sub(it.key()), "is not a recognized key");
        }
    }

    /// Mark unit variants as acceptable even when another suffix was chosen.
    template <std::size_t N>
    void allow_variants(const std::string& base, const UnitKey (&units)[N]) {
        for (const UnitKey& u : units) used_.push_back(base + u.suffix);
    }

private:
    const json& obj_;
    std::string origin_;
    std::string path_;
    std::vector<std::string> used_;
};

PerturbationProfile read_profile(const json& obj, const std::string& origin,
                                 const std::string& path, ProfileAxis default_axis) {
    ObjReader r(obj, origin, path);
    PerturbationProfile p;
    std::string kind = r.text("kind", true, "");
    p.kind = profile_kind_from_string(kind);
    std::string axis = r.text("axis", false, "");
    p.axis = axis.empty() ? default_axis : profile_axis_from_string(axis);

    auto amplitude_like = [&](const char* base, bool required) {
        double v = 0.0;
        switch (p.axis) {
            case ProfileAxis::SupportTilt:
                v = r.quantity(base, kAngle, required, 0.0);
                r.allow_variants(base, kAngle);
                break;
            case ProfileAxis::SupportTranslation:
                v = r.quantity(base, kLength, required, 0.0);
                r.allow_variants(base, kLength);
                break;
            case ProfileAxis::ContactForce:
                v = r.quantity(base, kTorque, required, 0.0);
                r.allow_variants(base, kTorque);
                break;
        }
        return v;
    };
    auto velocity_like = [&](const char* base, bool required) {
        double v = 0.0;
        switch (p.axis) {
            case ProfileAxis::SupportTilt:
                v = r.quantity(base, kAngleRate, required, 0.0);
                r.allow_variants(base, kAngleRate);
                break;
            case ProfileAxis::SupportTranslation:
                v = r.quantity(base, kLengthRate, required, 0.0);
                r.allow_variants(base, kLengthRate);
                break;
            case ProfileAxis::ContactForce:
                v = r.quantity(base, kTorqueRate, required, 0.0);
                r.allow_variants(base, kTorqueRate);
                break;
        }
        return v;
    };

    switch (p.kind) {
        case ProfileKind::Zero:
            break;
        case ProfileKind::Sine:
            p.amplitude = amplitude_like("amplitude", true);
            p.frequency_hz = r.number("frequency_hz", true, 0.0);
            break;
        case ProfileKind::Prts:
            p.amplitude = velocity_like("velocity", true);
            p.prts_stages = r.integer("stages", false, p.prts_stages);
            p.prts_state_s = r.number("state_duration_s", false, p.prts_state_s);
            break;
        case ProfileKind::Impulse:
            p.amplitude = amplitude_like("peak", true);
            p.impulse_width_s = r.number("width_s", false, p.impulse_width_s);
            break;
    }
    r.finish();
    return p;
}

ControllerConfig read_controller(const json& obj, const std::string& origin,
                                 const std::string& path) {
    ObjReader r(obj, origin, path);
    ControllerConfig c;
    std::string kind = r.text("kind", false, "pd");
    c.kind = controller_kind_from_string(kind);
    c.kp = r.number("kp", false, c.kp);
    c.kd = r.number("kd", false, c.kd);
    c.setpoint = r.quantity("setpoint", kAngle, false, c.setpoint);
    r.allow_variants("setpoint", kAngle);
    c.nominal_mgh = r.number("nominal_mgh", false, c.nominal_mgh);
    c.saturation = r.quantity("saturation", kTorque, false, c.saturation);
    r.allow_variants("saturation", kTorque);
    c.loop_rate_hz = r.number("loop_rate_hz", false, c.loop_rate_hz);
    c.tilt_lp_hz = r.number("tilt_lp_hz", false, c.tilt_lp_hz);
    c.tilt_threshold = r.quantity("tilt_threshold", kAngleRate, false, c.tilt_threshold);
    r.allow_variants("tilt_threshold", kAngleRate);
    c.tilt_comp_gain = r.number("tilt_comp_gain", false, c.tilt_comp_gain);
    c.contact_lp_hz = r.number("contact_lp_hz", false, c.contact_lp_hz);
    c.contact_threshold = r.quantity("contact_threshold", kTorque, false, c.contact_threshold);
    r.allow_variants("contact_threshold", kTorque);
    c.contact_gain = r.number("contact_gain", false, c.contact_gain);
    c.contact_leak_s = r.number("contact_leak_s", false, c.contact_leak_s);
    r.finish();
    return c;
}

PlatformModel read_platform(const json& obj, const std::string& origin, const std::string& path) {
    ObjReader r(obj, origin, path);
    PlatformModel m;
    m.time_constant_s = r.number("time_constant_s", false, m.time_constant_s);
    m.tilt_range_rad = r.quantity("tilt_range", kAngle, false, m.tilt_range_rad);
    r.allow_variants("tilt_range", kAngle);
    m.tilt_rate_limit = r.quantity("tilt_rate_limit", kAngleRate, false, m.tilt_rate_limit);
    r.allow_variants("tilt_rate_limit", kAngleRate);
    m.translation_range_m = r.quantity("translation_range", kLength, false, m.translation_range_m);
    r.allow_variants("translation_range", kLength);
    m.accel_limit = r.quantity("accel_limit", kAccel, false, m.accel_limit);
    r.allow_variants("accel_limit", kAccel);
    r.finish();
    return m;
}

const char* amplitude_suffix(ProfileAxis axis) {
    switch (axis) {
        case ProfileAxis::SupportTilt: return "_rad";
        case ProfileAxis::SupportTranslation: return "_m";
        case ProfileAxis::ContactForce: return "_nm";
    }
    return "_rad";
}

const char* velocity_suffix(ProfileAxis axis) {
    switch (axis) {
        case ProfileAxis::SupportTilt: return "_rad_s";
        case ProfileAxis::SupportTranslation: return "_m_s";
        case ProfileAxis::ContactForce: return "_nm_s";
    }
    return "_rad_s";
}

ordered_json profile_to_json(const PerturbationProfile& p) {
    ordered_json j;
    j["kind"] = to_string(p.kind);
    j["axis"] = to_string(p.axis);
    switch (p.kind) {
        case ProfileKind::Zero:
            break;
        case ProfileKind::Sine:
            j[std::string("amplitude") + amplitude_suffix(p.axis)] = p.amplitude;
            j["frequency_hz"] = p.frequency_hz;
            break;
        case ProfileKind::Prts:
            j[std::string("velocity") + velocity_suffix(p.axis)] = p.amplitude;
            j["stages"] = p.prts_stages;
            j["state_duration_s"] = p.prts_state_s;
            break;
        case ProfileKind::Impulse:
            j[std::string("peak") + amplitude_suffix(p.axis)] = p.amplitude;
            j["width_s"] = p.impulse_width_s;
            break;
    }
    return j;
}

ordered_json controller_to_json(const ControllerConfig& c) {
    ordered_json j;
    j["kind"] = to_string(c.kind);
    j["kp"] = c.kp;
    j["kd"] = c.kd;
    j["setpoint_rad"] = c.setpoint;
    j["nominal_mgh"] = c.nominal_mgh;
    j["saturation_nm"] = c.saturation;
    j["loop_rate_hz"] = c.loop_rate_hz;
    j["tilt_lp_hz"] = c.tilt_lp_hz;
    j["tilt_threshold_rad_s"] = c.tilt_threshold;
    j["tilt_comp_gain"] = c.tilt_comp_gain;
    j["contact_lp_hz"] = c.contact_lp_hz;
    j["contact_threshold_nm"] = c.contact_threshold;
    j["contact_gain"] = c.contact_gain;
    j["contact_leak_s"] = c.contact_leak_s;
    return j;
}

ordered_json platform_to_json(const PlatformModel& m) {
    ordered_json j;
    j["time_constant_s"] = m.time_constant_s;
    j["tilt_range_rad"] = m.tilt_range_rad;
    j["tilt_rate_limit_rad_s"] = m.tilt_rate_limit;
    j["translation_range_m"] = m.translation_range_m;
    j["accel_limit_m_s2"] = m.accel_limit;
    return j;
}

ordered_json spec_to_json(const TrialSpec& spec) {
    ordered_json j;
    j["name"] = spec.name;
    j["scenario"] = to_string(spec.scenario);
    j["profile"] = profile_to_json(spec.profile);
    j["model"] = ordered_json::parse(model_to_json_text(spec.model));
    j["plant"] = spec.plant == PlantKind::Dip ? "dip" : "sip";
    j["hip_locked"] = spec.hip_locked;
    j["hip_kp"] = spec.hip_kp;
    j["hip_kd"] = spec.hip_kd;
    j["controller"] = controller_to_json(spec.controller);
    j["platform"] = platform_to_json(spec.platform);
    j["duration_s"] = spec.duration_s;
    j["rate_hz"] = spec.rate_hz;
    j["settle_periods"] = spec.settle_periods;
    j["initial_sway_rad"] = spec.initial_sway_rad;
    return j;
}

ProfileAxis scenario_default_axis(Scenario s) {
    switch (s) {
        case Scenario::Translation: return ProfileAxis::SupportTranslation;
        case Scenario::ContactPull: return ProfileAxis::ContactForce;
        default: return ProfileAxis::SupportTilt;
    }
}

}  // namespace

TrialSpec trial_spec_from_json_text(const std::string& text, const std::string& origin,
                                    const std::string& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }

    ObjReader r(root, origin, "");
    TrialSpec spec;
    spec.name = r.text("name", false, spec.name);
    spec.scenario = scenario_from_string(r.text("scenario", false, "tilt"));

    if (const json* p = r.find("profile")) {
        spec.profile = read_profile(*p, origin, "profile", scenario_default_axis(spec.scenario));
    } else {
        spec.profile.axis = scenario_default_axis(spec.scenario);
    }

    const json* model_obj = r.find("model");
    std::string model_path = r.text("model_path", false, "");
    if (model_obj && !model_path.empty()) {
        fail(origin, "model_path", "conflicts with an inline model");
    }
    if (model_obj) {
        spec.model = model_from_json_text(model_obj->dump(), origin + " (model)");
    } else if (!model_path.empty()) {
        std::string resolved = model_path;
        if (!base_dir.empty() && model_path.front() != '/') {
            resolved = base_dir + "/" + model_path;
        }
        spec.model = load_model_file(resolved);
    } else {
        spec.model = resolve_default_model();
    }

    std::string plant = r.text("plant", false, "sip");
    if (plant == "sip") {
        spec.plant = PlantKind::Sip;
    } else if (plant == "dip") {
        spec.plant = PlantKind::Dip;
    } else {
        fail(origin, "plant", "must be 'sip' or 'dip'");
    }
    spec.hip_locked = r.boolean("hip_locked", spec.hip_locked);
    spec.hip_kp = r.number("hip_kp", false, spec.hip_kp);
    spec.hip_kd = r.number("hip_kd", false, spec.hip_kd);

    if (const json* c = r.find("controller")) {
        spec.controller = read_controller(*c, origin, "controller");
    }
    if (const json* p = r.find("platform")) {
        spec.platform = read_platform(*p, origin, "platform");
    }

    spec.duration_s = r.number("duration_s", false, spec.duration_s);
    spec.rate_hz = r.number("rate_hz", false, spec.rate_hz);
    spec.settle_periods = r.integer("settle_periods", false, spec.settle_periods);
    spec.initial_sway_rad = r.quantity("initial_sway", kAngle, false, spec.initial_sway_rad);
    r.allow_variants("initial_sway", kAngle);
    r.finish();

    spec.validate();
    return spec;
}

TrialSpec load_trial_config(const std::string& path) {
    std::string base_dir;
    std::size_t slash = path.find_last_of('/');
    if (slash != std::string::npos) base_dir = path.substr(0, slash);
    return trial_spec_from_json_text(read_text_file(path), path, base_dir);
}

std::string trial_spec_to_json_text(const TrialSpec& spec) {
    return spec_to_json(spec).dump();
}

std::string trial_spec_to_pretty_json(const TrialSpec& spec) {
    return spec_to_json(spec).dump(2) + "\n";
}

AnthropometricModel resolve_default_model() {
    const char* env = std::getenv("POSTUREBENCH_MODEL_PATH");
    if (env && *env) return load_model_file(env);
    return default_model();
}

}  // namespace posturebench
