#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "core/errors.hpp"
#include "core/fft.hpp"

namespace posturebench {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_pair(const SignalSeries& u, const SignalSeries& a) {
    if (u.size() == 0 || a.size() == 0) throw InvalidArgument("empty series");
    if (u.size() != a.size()) throw InvalidArgument("series lengths differ");
    if (u.rate_hz != a.rate_hz) throw InvalidArgument("series rates differ");
}

double stimulus_energy(const SignalSeries& u) {
    double s = 0.0;
    for (double v : u.samples) s += v * v;
    if (!(s > 0.0)) throw InvalidArgument("stimulus energy is zero");
    return s;
}

struct Peak {
    long long lag = 0;
    double value = 0.0;  // signed correlation at the peak
    double magnitude = 0.0;
};

Peak find_peak(const CrossCorrelation& x) {
    Peak best;
    best.lag = x.lags.front();
    best.value = x.values.front();
    best.magnitude = std::abs(best.value);
    for (std::size_t i = 1; i < x.values.size(); ++i) {
        double m = std::abs(x.values[i]);
        if (m > best.magnitude) {
            best.magnitude = m;
            best.value = x.values[i];
            best.lag = x.lags[i];
        }
    }
    return best;
}

}  // namespace

double wrap_angle(double rad) {
    double r = std::remainder(rad, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

SignalSeries trim_steady_state(const SignalSeries& series, int periods) {
    if (periods < 0) throw InvalidArgument("negative trim count");
    std::size_t np = series.period_samples();  // validates the period
    std::size_t drop = static_cast<std::size_t>(periods) * np;
    if (drop + np > series.size()) {
        throw InvalidArgument("trim leaves less than one stimulus period");
    }
    std::size_t keep = ((series.size() - drop) / np) * np;
    SignalSeries out;
    out.rate_hz = series.rate_hz;
    out.period_s = series.period_s;
    out.samples.assign(series.samples.begin() + static_cast<std::ptrdiff_t>(drop),
                       series.samples.begin() + static_cast<std::ptrdiff_t>(drop + keep));
    return out;
}

CrossCorrelation cross_correlate(const SignalSeries& u, const SignalSeries& a) {
    check_pair(u, a);
    const std::size_t n = u.size();
    const std::size_t m = detail::next_pow2(2 * n - 1);

    std::vector<std::complex<double>> fu(m), fa(m);
    for (std::size_t i = 0; i < n; ++i) {
        fu[i] = u.samples[i];
        fa[i] = a.samples[i];
    }
    detail::fft_inplace(fu, false);
    detail::fft_inplace(fa, false);
    for (std::size_t i = 0; i < m; ++i) fu[i] = std::conj(fu[i]) * fa[i];
    detail::fft_inplace(fu, true);

    CrossCorrelation out;
    out.lags.reserve(2 * n - 1);
    out.values.reserve(2 * n - 1);
    const long long nn = static_cast<long long>(n);
    for (long long lag = -(nn - 1); lag <= nn - 1; ++lag) {
        std::size_t idx = static_cast<std::size_t>((lag + static_cast<long long>(m)) %
                                                   static_cast<long long>(m));
        out.lags.push_back(lag);
        out.values.push_back(fu[idx].real());
    }
    return out;
}

double gain(const SignalSeries& u, const SignalSeries& a) {
    check_pair(u, a);
    double energy = stimulus_energy(u);
    CrossCorrelation x = cross_correlate(u, a);
    return find_peak(x).magnitude / energy;
}

double phase(const SignalSeries& u, const SignalSeries& a) {
    check_pair(u, a);
    stimulus_energy(u);
    const long long np = static_cast<long long>(u.period_samples());
    CrossCorrelation x = cross_correlate(u, a);
    Peak peak = find_peak(x);

    long long folded = ((peak.lag % np) + np) % np;  // [0, np)
    if (2 * folded > np) folded -= np;               // (-np/2, np/2]
    double phi = -2.0 * kPi * static_cast<double>(folded) / static_cast<double>(np);
    // A negative peak is an inverted response: half a period away.
    if (peak.value < 0.0) phi += kPi;
    return wrap_angle(phi);
}

double power(const SignalSeries& a) {
    if (a.size() == 0) throw InvalidArgument("power of an empty series");
    double s = 0.0;
    for (double v : a.samples) s += v * v;
    return s / static_cast<double>(a.size());
}

FrfResult estimate_frf(const SignalSeries& u, const SignalSeries& a,
                       const std::vector<double>& frequencies_hz) {
    check_pair(u, a);
    const std::size_t np = u.period_samples();
    if (u.size() % np != 0) {
        throw InvalidArgument("series is not a whole number of stimulus periods");
    }
    const std::size_t nper = u.size() / np;
    if (nper < 2) throw InvalidArgument("coherence needs at least two stimulus periods");

    // Numerical floor separating a genuinely excited harmonic from transform
    // leakage: an excited bin carries O(np^2 A^2) while roundoff leaves
    // O((eps np A)^2), many orders below this threshold.
    double mean_sq = 0.0;
    for (double v : u.samples) mean_sq += v * v;
    mean_sq /= static_cast<double>(u.size());
    const double energy_floor =
        1e-18 * static_cast<double>(np) * static_cast<double>(np) * mean_sq;

    FrfResult out;
    for (double f : frequencies_hz) {
        const double h = f * u.period_s;
        const long long hr = std::llround(h);
        if (hr < 1 || std::abs(h - static_cast<double>(hr)) > 1e-6 * std::max(1.0, h)) {
            throw InvalidArgument("frequency " + std::to_string(f) +
                                  " Hz is not a harmonic of the stimulus period");
        }
        if (2 * static_cast<std::size_t>(hr) >= np) {
            throw InvalidArgument("frequency " + std::to_string(f) +
                                  " Hz is not resolvable at this rate");
        }

        std::complex<double> mean_u(0.0, 0.0), mean_a(0.0, 0.0), cross(0.0, 0.0);
        double pow_u = 0.0, pow_a = 0.0;
        for (std::size_t p = 0; p < nper; ++p) {
            std::complex<double> cu(0.0, 0.0), ca(0.0, 0.0);
            const std::size_t base = p * np;
            for (std::size_t j = 0; j < np; ++j) {
                const double ang = -2.0 * kPi * static_cast<double>(hr) *
                                   static_cast<double>(j) / static_cast<double>(np);
                const std::complex<double> w(std::cos(ang), std::sin(ang));
                cu += u.samples[base + j] * w;
                ca += a.samples[base + j] * w;
            }
            mean_u += cu;
            mean_a += ca;
            cross += std::conj(cu) * ca;
            pow_u += std::norm(cu);
            pow_a += std::norm(ca);
        }
        const double scale = 1.0 / static_cast<double>(nper);
        mean_u *= scale;
        mean_a *= scale;
        cross *= scale;
        pow_u *= scale;
        pow_a *= scale;

        if (!(pow_u > energy_floor) || std::abs(mean_u) == 0.0) {
            throw InvalidArgument("stimulus has no energy at " + std::to_string(f) + " Hz");
        }
        out.frequencies_hz.push_back(f);
        if (pow_a == 0.0) {
            out.gain.push_back(0.0);
            out.phase_rad.push_back(0.0);
            out.coherence.push_back(0.0);
            continue;
        }
        out.gain.push_back(std::abs(mean_a) / std::abs(mean_u));
        out.phase_rad.push_back(wrap_angle(std::arg(mean_a) - std::arg(mean_u)));
        double coh = std::norm(cross) / (pow_u * pow_a);
        out.coherence.push_back(std::clamp(coh, 0.0, 1.0));
    }
    return out;
}

SignalSeries normalize_torque(const SignalSeries& torque, const AnthropometricModel& model) {
    if (torque.size() == 0) throw InvalidArgument("empty torque series");
    const double mgh = model.mgh();
    if (!(mgh > 0.0)) throw InvalidArgument("torque normalization needs positive mgh");
    SignalSeries out = torque;
    for (double& v : out.samples) v /= mgh;
    return out;
}

double compare_to_reference(const FrfResult& result, const FrfResult& reference,
                            const CompareWeights& weights) {
    if (reference.frequencies_hz.empty()) throw InvalidArgument("empty reference response");
    if (result.frequencies_hz.size() != reference.frequencies_hz.size()) {
        throw InvalidArgument("frequency grids differ in size");
    }
    if (!(weights.log_gain >= 0.0) || !(weights.phase >= 0.0) ||
        !(weights.log_gain + weights.phase > 0.0)) {
        throw InvalidArgument("comparison weights must be non-negative and not both zero");
    }
    const std::size_t nf = result.frequencies_hz.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < nf; ++i) {
        const double fa = result.frequencies_hz[i];
        const double fb = reference.frequencies_hz[i];
        if (std::abs(fa - fb) > 1e-9 * std::max(1.0, std::abs(fb))) {
            throw InvalidArgument("frequency grids do not match at index " + std::to_string(i));
        }
        const double ga = result.gain[i];
        const double gb = reference.gain[i];
        if (!(ga > 0.0) || !(gb > 0.0)) {
            throw InvalidArgument("gain comparison needs positive gains");
        }
        const double dlog = std::log(ga) - std::log(gb);
        const double dphi = wrap_angle(result.phase_rad[i] - reference.phase_rad[i]);
        acc += weights.log_gain * dlog * dlog + weights.phase * dphi * dphi;
    }
    return std::sqrt(acc / (static_cast<double>(nf) * (weights.log_gain + weights.phase)));
}

}  // namespace posturebench
