#include "core/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"

namespace posturebench {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidArgument(msg);
}

}  // namespace

void AnthropometricModel::validate() const {
    require(!segments.empty(), "model needs at least one segment");
    require(std::isfinite(gravity) && gravity > 0.0, "gravity must be > 0");
    for (const auto& s : segments) {
        require(std::isfinite(s.mass_kg) && s.mass_kg > 0.0,
                "segment '" + s.name + "': mass must be > 0");
        require(std::isfinite(s.length_m) && s.length_m > 0.0,
                "segment '" + s.name + "': length must be > 0");
        require(std::isfinite(s.com_offset_m) && s.com_offset_m >= 0.0 &&
                    s.com_offset_m <= s.length_m,
                "segment '" + s.name + "': CoM offset must lie within the segment");
        require(std::isfinite(s.inertia_kgm2) && s.inertia_kgm2 >= 0.0,
                "segment '" + s.name + "': inertia must be >= 0");
    }
    require(std::isfinite(added.mass_kg) && added.mass_kg >= 0.0, "added mass must be >= 0");
    if (added.mass_kg > 0.0) {
        require(std::isfinite(added.height_m) && added.height_m >= 0.0,
                "added mass height must be >= 0");
        require(std::isfinite(added.eccentricity_m), "added mass eccentricity must be finite");
    }
    require(com_height() > 0.0, "model CoM must lie above the ankle");
}

double AnthropometricModel::total_mass() const {
    double m = 0.0;
    for (const auto& s : segments) m += s.mass_kg;
    return m;
}

double AnthropometricModel::joint_height(std::size_t i) const {
    double z = 0.0;
    for (std::size_t j = 0; j <= i && j < segments.size(); ++j) z += segments[j].length_m;
    return z;
}

double AnthropometricModel::segment_com_height(std::size_t i) const {
    double base = 0.0;
    for (std::size_t j = 0; j < i; ++j) base += segments[j].length_m;
    return base + segments[i].com_offset_m;
}

double AnthropometricModel::com_height() const {
    double mz = 0.0;
    for (std::size_t i = 0; i < segments.size(); ++i)
        mz += segments[i].mass_kg * segment_com_height(i);
    return mz / total_mass();
}

double AnthropometricModel::mgh() const { return total_mass() * gravity * com_height(); }

double AnthropometricModel::combined_mass() const { return total_mass() + added.mass_kg; }

double AnthropometricModel::combined_first_moment() const {
    return total_mass() * com_height() + added.mass_kg * added.height_m;
}

double AnthropometricModel::combined_com_height() const {
    return combined_first_moment() / combined_mass();
}

double AnthropometricModel::combined_inertia_about_ankle() const {
    double J = 0.0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const double z = segment_com_height(i);
        J += segments[i].inertia_kgm2 + segments[i].mass_kg * z * z;
    }
    if (added.mass_kg > 0.0)
        J += added.mass_kg *
             (added.height_m * added.height_m + added.eccentricity_m * added.eccentricity_m);
    return J;
}

AnthropometricModel default_model() {
    AnthropometricModel m;
    m.name = "lucy-default";
    m.gravity = 9.81;
    m.segments = {
        {"legs", 9.075, 0.85, 0.44, 0.55},
        {"trunk", 7.425, 0.65, 0.39, 0.26},
    };
    return m;
}

AnthropometricModel model_from_json_text(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
    try {
        AnthropometricModel m;
        m.name = j.value("name", "unnamed");
        m.gravity = j.value("gravity_m_s2", 9.81);
        if (!j.contains("segments") || !j["segments"].is_array())
            throw ParseError(origin + ": missing 'segments' array");
        for (const auto& js : j["segments"]) {
            Segment s;
            s.name = js.value("name", "segment");
            s.mass_kg = js.at("mass_kg").get<double>();
            s.length_m = js.at("length_m").get<double>();
            s.com_offset_m = js.at("com_offset_m").get<double>();
            s.inertia_kgm2 = js.at("inertia_kgm2").get<double>();
            m.segments.push_back(s);
        }
        if (j.contains("added_mass") && !j["added_mass"].is_null()) {
            const auto& ja = j["added_mass"];
            m.added.mass_kg = ja.value("mass_kg", 0.0);
            m.added.height_m = ja.value("height_m", 0.0);
            m.added.eccentricity_m = ja.value("eccentricity_m", 0.05);
        }
        m.validate();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

std::string model_to_json_text(const AnthropometricModel& model) {
    nlohmann::ordered_json j;
    j["name"] = model.name;
    j["gravity_m_s2"] = model.gravity;
    j["segments"] = nlohmann::ordered_json::array();
    for (const auto& s : model.segments) {
        nlohmann::ordered_json js;
        js["name"] = s.name;
        js["mass_kg"] = s.mass_kg;
        js["length_m"] = s.length_m;
        js["com_offset_m"] = s.com_offset_m;
        js["inertia_kgm2"] = s.inertia_kgm2;
        j["segments"].push_back(js);
    }
    if (model.added.mass_kg > 0.0) {
        j["added_mass"] = {{"mass_kg", model.added.mass_kg},
                           {"height_m", model.added.height_m},
                           {"eccentricity_m", model.added.eccentricity_m}};
    }
    return j.dump();
}

AnthropometricModel load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return model_from_json_text(ss.str(), path);
}

}  // namespace posturebench
