#pragma once

#include <string>
#include <vector>

namespace posturebench {

/// One rigid segment of the sagittal chain, listed ankle upward.
struct Segment {
    std::string name;
    double mass_kg = 0.0;
    double length_m = 0.0;      // joint-to-joint along the chain
    double com_offset_m = 0.0;  // segment CoM above its distal (lower) joint
    double inertia_kgm2 = 0.0;  // about the segment's own CoM
};

/// Optional point load rigidly attached to the body at a given height above
/// the ankle, offset forward of the ankle-hip plane by the eccentricity.
struct AddedMass {
    double mass_kg = 0.0;
    double height_m = 0.0;
    double eccentricity_m = 0.05;
};

/// Sagittal-plane anthropometry. Heights are measured above the ankle joint
/// in the upright configuration.
struct AnthropometricModel {
    std::string name;
    std::vector<Segment> segments;
    double gravity = 9.81;
    AddedMass added;  // mass_kg == 0 means absent

    /// Validates masses/lengths/offsets and finiteness; throws InvalidArgument.
    void validate() const;

    double total_mass() const;           // segment masses only
    double com_height() const;           // sum(m_i z_i) / m over segments
    double mgh() const;                  // total_mass * gravity * com_height
    /// Height of segment i's CoM above the ankle, upright.
    double segment_com_height(std::size_t i) const;
    /// Height of the joint at the top of segment i (cumulative lengths).
    double joint_height(std::size_t i) const;

    /// Point-mass composition with the added load (parallel axis):
    ///   m' = m + ma, h' = (m h + ma za) / m',
    ///   J  = sum(I_i + m_i z_i^2) + ma (za^2 + e^2).
    /// With mass_kg == 0 these reduce exactly to the nominal values.
    double combined_mass() const;
    double combined_first_moment() const;  // m' h'
    double combined_com_height() const;
    double combined_inertia_about_ankle() const;
};

/// Built-in default humanoid: 1.5 m, 16.5 kg, two segments (legs 55%,
/// trunk+arms+head 45%) with CoM height 0.80 m above the ankles.
AnthropometricModel default_model();

AnthropometricModel model_from_json_text(const std::string& text, const std::string& origin);
std::string model_to_json_text(const AnthropometricModel& model);
AnthropometricModel load_model_file(const std::string& path);

}  // namespace posturebench
