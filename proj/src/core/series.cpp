#include "core/series.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"

namespace posturebench {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidArgument(msg);
}

std::size_t checked_sample_count(double duration_s, double rate_hz) {
    const double n = duration_s * rate_hz;
    require(n >= 1.0 && n <= 1e8, "sample count out of range");
    return static_cast<std::size_t>(std::llround(n));
}

// Feedback taps of the lexicographically smallest primitive polynomial
// x^m + c0*x^(m-1) + ... + c(m-1) over GF(3) for each stage count m = 2..8.
// Verified by test: the all-ones seed cycles through exactly 3^m - 1 states.
constexpr std::array<std::array<int, 8>, 7> kTernaryTaps = {{
    {1, 2, 0, 0, 0, 0, 0, 0},  // m = 2
    {0, 2, 1, 0, 0, 0, 0, 0},  // m = 3
    {0, 0, 1, 2, 0, 0, 0, 0},  // m = 4
    {0, 0, 0, 2, 1, 0, 0, 0},  // m = 5
    {0, 0, 0, 0, 1, 2, 0, 0},  // m = 6
    {0, 0, 0, 0, 1, 2, 1, 0},  // m = 7
    {0, 0, 0, 0, 1, 0, 0, 2},  // m = 8
}};

}  // namespace

std::size_t SignalSeries::period_samples() const {
    if (period_s <= 0.0) throw InvalidArgument("series is aperiodic");
    const double n = period_s * rate_hz;
    const double r = std::round(n);
    if (std::abs(n - r) > 0.5e-6 * std::max(1.0, n) || r < 1.0)
        throw InvalidArgument("period is not an integer number of samples");
    return static_cast<std::size_t>(r);
}

SignalSeries gen_sine(double amplitude, double freq_hz, double duration_s, double rate_hz) {
    require(std::isfinite(amplitude) && amplitude >= 0.0, "sine amplitude must be >= 0");
    require(freq_hz > 0.0, "sine frequency must be > 0");
    require(rate_hz >= 20.0 * freq_hz, "sample rate must be at least 20x the sine frequency");
    require(duration_s * freq_hz >= 1.0 - 1e-9, "duration must cover at least one period");

    SignalSeries s;
    s.rate_hz = rate_hz;
    s.period_s = 1.0 / freq_hz;
    const std::size_t n = checked_sample_count(duration_s, rate_hz);
    s.samples.resize(n);
    const double w = kTwoPi * freq_hz / rate_hz;
    for (std::size_t k = 0; k < n; ++k)
        s.samples[k] = amplitude * std::sin(w * static_cast<double>(k));
    return s;
}

SignalSeries gen_prts(int stages, double velocity, double rate_hz, int cycles,
                      double state_duration_s) {
    require(stages >= 2 && stages <= 8, "prts stages must lie in [2, 8]");
    require(std::isfinite(velocity) && velocity >= 0.0, "prts velocity must be >= 0");
    require(rate_hz > 0.0, "sample rate must be > 0");
    require(cycles >= 1, "prts cycles must be >= 1");
    const double hold = state_duration_s * rate_hz;
    require(hold >= 1.0 - 1e-9 && std::abs(hold - std::round(hold)) < 1e-6,
            "prts state duration must be a whole number of samples");
    const std::size_t hold_n = static_cast<std::size_t>(std::llround(hold));

    // Emit the LFSR state sequence once; every nonzero register state occurs
    // exactly once per period, so symbols 1 and 2 are equally frequent.
    const int m = stages;
    const auto& taps = kTernaryTaps[static_cast<std::size_t>(m - 2)];
    std::size_t n_states = 1;
    for (int i = 0; i < m; ++i) n_states *= 3;
    n_states -= 1;

    std::vector<int> symbols(n_states);
    std::array<int, 8> reg{};
    for (int i = 0; i < m; ++i) reg[static_cast<std::size_t>(i)] = 1;  // all-ones seed
    for (std::size_t t = 0; t < n_states; ++t) {
        symbols[t] = reg[0];
        int acc = 0;
        for (int i = 0; i < m; ++i) acc += taps[static_cast<std::size_t>(i)] * reg[static_cast<std::size_t>(i)];
        const int next = ((-acc) % 3 + 3) % 3;
        for (int i = m - 1; i > 0; --i) reg[static_cast<std::size_t>(i)] = reg[static_cast<std::size_t>(i - 1)];
        reg[0] = next;
    }

    SignalSeries s;
    s.rate_hz = rate_hz;
    s.period_s = static_cast<double>(n_states) * static_cast<double>(hold_n) / rate_hz;
    s.samples.resize(n_states * hold_n * static_cast<std::size_t>(cycles));
    const double dt = 1.0 / rate_hz;
    double pos = 0.0;
    std::size_t k = 0;
    for (int c = 0; c < cycles; ++c) {
        for (std::size_t j = 0; j < n_states; ++j) {
            const double v = symbols[j] == 0 ? 0.0 : (symbols[j] == 1 ? velocity : -velocity);
            for (std::size_t i = 0; i < hold_n; ++i) {
                s.samples[k++] = pos;
                pos += v * dt;
            }
        }
    }
    return s;
}

SignalSeries gen_impulse(int axis, double peak, double width_s, double rate_hz,
                         double duration_s) {
    require(axis == 0 || axis == 1, "impulse axis must be 0 (tilt) or 1 (translation)");
    require(std::isfinite(peak), "impulse peak must be finite");
    require(width_s > 0.0, "impulse width must be > 0");
    require(rate_hz * width_s >= 4.0, "impulse width must span at least 4 samples");
    require(duration_s >= width_s, "duration must cover the impulse width");

    SignalSeries s;
    s.rate_hz = rate_hz;
    s.period_s = 0.0;
    const std::size_t n = checked_sample_count(duration_s, rate_hz);
    s.samples.assign(n, 0.0);
    const double t0 = 0.5 * duration_s;
    const double dt = 1.0 / rate_hz;
    for (std::size_t k = 0; k < n; ++k) {
        const double u = (static_cast<double>(k) * dt - t0) / width_s;  // [-0.5, 0.5] inside pulse
        if (u >= -0.5 && u <= 0.5)
            s.samples[k] = peak * 0.5 * (1.0 - std::cos(kTwoPi * (u + 0.5)));
    }
    return s;
}

SignalSeries PerturbationProfile::realize(double rate_hz, double duration_s) const {
    switch (kind) {
        case ProfileKind::Zero: {
            SignalSeries s;
            s.rate_hz = rate_hz;
            s.period_s = 0.0;
            s.samples.assign(checked_sample_count(duration_s, rate_hz), 0.0);
            return s;
        }
        case ProfileKind::Sine:
            return gen_sine(amplitude, frequency_hz, duration_s, rate_hz);
        case ProfileKind::Prts: {
            const double period = period_s();
            const int cycles = static_cast<int>(std::ceil(duration_s / period - 1e-9));
            SignalSeries s = gen_prts(prts_stages, amplitude, rate_hz, std::max(cycles, 1),
                                      prts_state_s);
            s.samples.resize(checked_sample_count(duration_s, rate_hz));
            return s;
        }
        case ProfileKind::Impulse:
            return gen_impulse(axis == ProfileAxis::SupportTranslation ? 1 : 0, amplitude,
                               impulse_width_s, rate_hz, duration_s);
    }
    throw InvalidArgument("unknown profile kind");
}

double PerturbationProfile::period_s() const {
    switch (kind) {
        case ProfileKind::Sine:
            if (frequency_hz <= 0.0) throw InvalidArgument("sine frequency must be > 0");
            return 1.0 / frequency_hz;
        case ProfileKind::Prts: {
            if (prts_stages < 2 || prts_stages > 8) throw InvalidArgument("prts stages must lie in [2, 8]");
            std::size_t n_states = 1;
            for (int i = 0; i < prts_stages; ++i) n_states *= 3;
            return static_cast<double>(n_states - 1) * prts_state_s;
        }
        default:
            return 0.0;
    }
}

const char* to_string(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::Zero: return "zero";
        case ProfileKind::Sine: return "sine";
        case ProfileKind::Prts: return "prts";
        case ProfileKind::Impulse: return "impulse";
    }
    return "?";
}

const char* to_string(ProfileAxis axis) {
    switch (axis) {
        case ProfileAxis::SupportTilt: return "support-tilt";
        case ProfileAxis::SupportTranslation: return "support-translation";
        case ProfileAxis::ContactForce: return "contact-force";
    }
    return "?";
}

ProfileKind profile_kind_from_string(const std::string& s) {
    if (s == "zero") return ProfileKind::Zero;
    if (s == "sine") return ProfileKind::Sine;
    if (s == "prts") return ProfileKind::Prts;
    if (s == "impulse") return ProfileKind::Impulse;
    throw ParseError("unknown profile kind: " + s);
}

ProfileAxis profile_axis_from_string(const std::string& s) {
    if (s == "support-tilt") return ProfileAxis::SupportTilt;
    if (s == "support-translation") return ProfileAxis::SupportTranslation;
    if (s == "contact-force") return ProfileAxis::ContactForce;
    throw ParseError("unknown profile axis: " + s);
}

}  // namespace posturebench
