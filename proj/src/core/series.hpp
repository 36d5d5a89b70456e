#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace posturebench {

/// Uniformly sampled scalar signal. Values are radians for angular axes and
/// metres for translational axes; the producer decides which.
struct SignalSeries {
    std::vector<double> samples;
    double rate_hz = 0.0;
    /// Fundamental period for periodic signals, 0 when aperiodic.
    double period_s = 0.0;

    double dt() const { return 1.0 / rate_hz; }
    std::size_t size() const { return samples.size(); }
    /// Period length in samples. Requires period_s > 0 and an integer
    /// sample count per period (validated by the producers).
    std::size_t period_samples() const;
};

/// Sinusoidal sway stimulus: samples[k] = amplitude * sin(2*pi*f*k/rate).
/// Requires freq > 0, rate >= 20*freq and duration >= one period.
SignalSeries gen_sine(double amplitude, double freq_hz, double duration_s, double rate_hz);

/// Pseudo-random ternary position stimulus.
///
/// A base-3 linear feedback shift register over GF(3) with fixed primitive
/// feedback taps emits one of 3^stages - 1 states per interval of
/// state_duration_s; the state maps to a velocity in {-v, 0, +v} which is
/// integrated into the returned position signal. Symbol balance over one
/// sequence period makes the velocity exactly zero-mean, so the position is
/// periodic with period (3^stages - 1) * state_duration_s.
/// stages must lie in [2, 8]; cycles >= 1 full sequence periods are emitted.
SignalSeries gen_prts(int stages, double velocity, double rate_hz, int cycles,
                      double state_duration_s = 0.25);

/// Raised-cosine impulse of the given base width centred at duration/2,
/// starting and ending at exactly zero. axis 0 = tilt, 1 = translation
/// (recorded; the waveform itself is axis independent).
SignalSeries gen_impulse(int axis, double peak, double width_s, double rate_hz,
                         double duration_s);

enum class ProfileKind : std::uint8_t { Zero, Sine, Prts, Impulse };
enum class ProfileAxis : std::uint8_t { SupportTilt, SupportTranslation, ContactForce };

/// Declarative stimulus description carried by a trial spec.
/// amplitude is the position amplitude (rad or m) for sine, the velocity
/// magnitude (rad/s or m/s) for prts and the peak value for impulse.
struct PerturbationProfile {
    ProfileKind kind = ProfileKind::Zero;
    ProfileAxis axis = ProfileAxis::SupportTilt;
    double amplitude = 0.0;
    double frequency_hz = 0.0;     // sine
    int prts_stages = 5;           // prts
    double prts_state_s = 0.25;    // prts
    double impulse_width_s = 1.0;  // impulse

    /// Instantiate the profile over [0, duration) at the given rate.
    SignalSeries realize(double rate_hz, double duration_s) const;
    /// Fundamental period, 0 when aperiodic.
    double period_s() const;
};

const char* to_string(ProfileKind kind);
const char* to_string(ProfileAxis axis);
ProfileKind profile_kind_from_string(const std::string& s);
ProfileAxis profile_axis_from_string(const std::string& s);

}  // namespace posturebench
