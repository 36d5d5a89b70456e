#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "core/model.hpp"
#include "core/series.hpp"

using namespace posturebench;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

SignalSeries make_series(std::vector<double> v, double rate, double period = 0.0) {
    SignalSeries s;
    s.samples = std::move(v);
    s.rate_hz = rate;
    s.period_s = period;
    return s;
}

// direct O(n^2) definition used as the oracle for the transform-based path
std::vector<double> direct_xcorr(const std::vector<double>& u, const std::vector<double>& a) {
    const long long n = static_cast<long long>(u.size());
    std::vector<double> out;
    for (long long lag = -(n - 1); lag <= n - 1; ++lag) {
        double s = 0.0;
        for (long long t = 0; t < n; ++t) {
            const long long ta = t + lag;
            if (ta >= 0 && ta < n) s += u[static_cast<std::size_t>(t)] * a[static_cast<std::size_t>(ta)];
        }
        out.push_back(s);
    }
    return out;
}

struct Lcg {
    std::uint64_t state;
    explicit Lcg(std::uint64_t seed) : state(seed) {}
    double next() {  // uniform in [-1, 1)
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<double>(static_cast<std::int64_t>(state >> 11)) / 4611686018427387904.0;
    }
};

}  // namespace

TEST_CASE("cross correlation matches the direct definition") {
    // tiny case by hand: u = {1, 0}, a = {0, 1} correlates only at lag +1
    const SignalSeries u = make_series({1.0, 0.0}, 100.0);
    const SignalSeries a = make_series({0.0, 1.0}, 100.0);
    const CrossCorrelation x = cross_correlate(u, a);
    REQUIRE(x.lags.size() == 3);
    CHECK(x.lags[0] == -1);
    CHECK(x.lags[2] == 1);
    CHECK(std::abs(x.values[0]) < 1e-12);
    CHECK(std::abs(x.values[1]) < 1e-12);
    CHECK(x.values[2] == doctest::Approx(1.0).epsilon(1e-12));

    Lcg rng(0x5eedULL);
    for (std::size_t n : {2u, 3u, 17u, 64u, 129u}) {
        std::vector<double> vu(n), va(n);
        for (auto& v : vu) v = rng.next();
        for (auto& v : va) v = rng.next();
        const CrossCorrelation got = cross_correlate(make_series(vu, 50.0), make_series(va, 50.0));
        const std::vector<double> want = direct_xcorr(vu, va);
        REQUIRE(got.values.size() == want.size());
        double scale = 0.0;
        for (double w : want) scale = std::max(scale, std::abs(w));
        for (std::size_t i = 0; i < want.size(); ++i)
            CHECK(std::abs(got.values[i] - want[i]) <= 1e-9 * std::max(1.0, scale));
    }
}

TEST_CASE("self comparison gives unit gain and zero phase") {
    const SignalSeries u = gen_sine(0.0349, 0.05, 100.0, 100.0);
    CHECK(std::abs(gain(u, u) - 1.0) < 1e-12);
    CHECK(std::abs(phase(u, u)) < 1e-12);
}

TEST_CASE("gain is linear in the response and inverse in the stimulus") {
    const SignalSeries u = gen_sine(0.0349, 0.05, 100.0, 100.0);
    SignalSeries a = u;
    for (double& v : a.samples) v *= 0.15;
    CHECK(gain(u, a) == doctest::Approx(0.15).epsilon(1e-12));

    SignalSeries neg = u;
    for (double& v : neg.samples) v *= -0.15;
    CHECK(gain(u, neg) == doctest::Approx(0.15).epsilon(1e-12));

    SignalSeries u2 = u;
    for (double& v : u2.samples) v *= 2.0;
    CHECK(gain(u2, a) == doctest::Approx(0.075).epsilon(1e-9));
}

TEST_CASE("an inverted response sits half a period away") {
    const SignalSeries u = gen_sine(0.02, 0.1, 50.0, 100.0);
    SignalSeries a = u;
    for (double& v : a.samples) v = -v;
    CHECK(std::abs(phase(u, a)) == doctest::Approx(kPi).epsilon(1e-9));
}

TEST_CASE("a pure delay maps to phase minus two pi delay over period") {
    // coarse period (20 samples per cycle) keeps the neighbor-lag gap of the
    // correlation peak well above the finite-window ripple, so the peak lag
    // is exact and the phase law holds to rounding
    const double f = 5.0, rate = 100.0;
    const std::size_t np = 20;
    const SignalSeries u = gen_sine(1.0, f, 4.0, rate);  // 20 periods
    for (std::size_t d : {1u, 3u, 5u, 9u}) {
        SignalSeries a = u;
        for (std::size_t k = 0; k < a.size(); ++k)
            a.samples[k] = u.samples[(k + a.size() - d) % a.size()];
        const double expect = -2.0 * kPi * static_cast<double>(d) / static_cast<double>(np);
        CHECK(phase(u, a) == doctest::Approx(expect).epsilon(1e-9));
    }
    // half a period of delay is an exact inversion and folds to +pi
    SignalSeries inv = u;
    for (std::size_t k = 0; k < inv.size(); ++k)
        inv.samples[k] = u.samples[(k + inv.size() - np / 2) % inv.size()];
    CHECK(phase(u, inv) == doctest::Approx(kPi).epsilon(1e-9));
    // a lead maps to the positive mirror
    SignalSeries lead = u;
    for (std::size_t k = 0; k < lead.size(); ++k)
        lead.samples[k] = u.samples[(k + 3) % u.size()];
    CHECK(phase(u, lead) ==
          doctest::Approx(2.0 * kPi * 3.0 / static_cast<double>(np)).epsilon(1e-9));
}

TEST_CASE("synthetic sway example recovers the planted response") {
    // stimulus 2 deg at 0.05 Hz; response 0.3 deg lagging 0.35 rad
    const double rate = 100.0, f = 0.05;
    const std::size_t n = 200 * 100;  // 10 periods
    SignalSeries u = make_series(std::vector<double>(n), rate, 20.0);
    SignalSeries a = u;
    const double w = 2.0 * kPi * f / rate;
    for (std::size_t k = 0; k < n; ++k) {
        u.samples[k] = 2.0 * kDeg * std::sin(w * static_cast<double>(k));
        a.samples[k] = 0.3 * kDeg * std::sin(w * static_cast<double>(k) - 0.35);
    }
    const SignalSeries ut = trim_steady_state(u, 2);
    const SignalSeries at = trim_steady_state(a, 2);
    CHECK(gain(ut, at) == doctest::Approx(0.15).epsilon(0.01));
    CHECK(phase(ut, at) == doctest::Approx(-0.35).epsilon(0.012));  // quantized to 0.00314 rad
    CHECK(power(at) == doctest::Approx(0.5 * 0.3 * kDeg * 0.3 * kDeg).epsilon(1e-9));
}

TEST_CASE("power is the plain mean square") {
    const SignalSeries sine = gen_sine(0.1, 0.1, 40.0, 100.0);
    CHECK(power(sine) == doctest::Approx(0.005).epsilon(1e-9));
    CHECK(power(make_series({0.0, 0.0, 0.0}, 10.0)) == 0.0);
    CHECK(power(make_series({2.0, 2.0}, 10.0)) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK_THROWS_AS(power(make_series({}, 10.0)), InvalidArgument);
}

TEST_CASE("steady-state trimming drops settle periods and partial tails") {
    SignalSeries s = make_series(std::vector<double>(1050), 100.0, 2.0);  // np = 200
    for (std::size_t k = 0; k < s.size(); ++k) s.samples[k] = static_cast<double>(k);
    const SignalSeries t = trim_steady_state(s, 2);
    REQUIRE(t.size() == 600);  // dropped 400, kept 3 whole periods of the 650 left
    CHECK(t.samples.front() == 400.0);
    CHECK(t.samples.back() == 999.0);
    CHECK(t.period_s == 2.0);

    const SignalSeries t0 = trim_steady_state(s, 0);
    CHECK(t0.size() == 1000);

    CHECK_THROWS_AS(trim_steady_state(s, 5), InvalidArgument);
    CHECK_THROWS_AS(trim_steady_state(s, -1), InvalidArgument);
    SignalSeries aperiodic = make_series({1.0, 2.0}, 100.0, 0.0);
    CHECK_THROWS_AS(trim_steady_state(aperiodic, 0), InvalidArgument);
}

TEST_CASE("per-frequency response recovers a planted multi-harmonic system") {
    const double f0 = 0.1, rate = 20.0;
    const std::size_t np = 200, nper = 4, n = np * nper;
    const std::vector<double> amps{1.0, 0.5, 0.25};
    const std::vector<double> gains{0.8, 0.6, 0.4};
    const std::vector<double> phis{-0.2, -0.5, -1.0};
    SignalSeries u = make_series(std::vector<double>(n), rate, 10.0);
    SignalSeries a = u;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / rate;
        double su = 0.0, sa = 0.0;
        for (std::size_t h = 0; h < 3; ++h) {
            const double wh = 2.0 * kPi * f0 * static_cast<double>(h + 1);
            su += amps[h] * std::sin(wh * t);
            sa += amps[h] * gains[h] * std::sin(wh * t + phis[h]);
        }
        u.samples[k] = su;
        a.samples[k] = sa;
    }
    const FrfResult frf = estimate_frf(u, a, {0.1, 0.2, 0.3});
    for (std::size_t h = 0; h < 3; ++h) {
        CHECK(frf.gain[h] == doctest::Approx(gains[h]).epsilon(1e-9));
        CHECK(frf.phase_rad[h] == doctest::Approx(phis[h]).epsilon(1e-9));
        CHECK(frf.coherence[h] == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("noise lowers coherence monotonically") {
    const double rate = 20.0;
    const std::size_t n = 200 * 6;
    SignalSeries u = make_series(std::vector<double>(n), rate, 10.0);
    const double w = 2.0 * kPi * 0.1 / rate;
    for (std::size_t k = 0; k < n; ++k) u.samples[k] = std::sin(w * static_cast<double>(k));
    auto noisy = [&](double level, std::uint64_t seed) {
        Lcg rng(seed);
        SignalSeries a = u;
        for (double& v : a.samples) v = 0.7 * v + level * rng.next();
        return a;
    };
    const double c0 = estimate_frf(u, noisy(0.0, 7), {0.1}).coherence[0];
    const double c1 = estimate_frf(u, noisy(0.1, 7), {0.1}).coherence[0];
    const double c2 = estimate_frf(u, noisy(0.5, 7), {0.1}).coherence[0];
    CHECK(c0 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(c1 < c0);
    CHECK(c2 < c1);
    CHECK(c2 >= 0.0);
}

TEST_CASE("response without energy at a harmonic scores zero") {
    const double rate = 20.0;
    const std::size_t n = 200 * 4;
    SignalSeries u = make_series(std::vector<double>(n), rate, 10.0);
    const double w = 2.0 * kPi * 0.1 / rate;
    for (std::size_t k = 0; k < n; ++k)
        u.samples[k] = std::sin(w * static_cast<double>(k)) +
                       0.5 * std::sin(2.0 * w * static_cast<double>(k));
    SignalSeries a = make_series(std::vector<double>(n, 0.0), rate, 10.0);
    const FrfResult frf = estimate_frf(u, a, {0.1, 0.2});
    CHECK(frf.gain[0] == 0.0);
    CHECK(frf.coherence[0] == 0.0);
}

TEST_CASE("per-frequency response rejects malformed requests") {
    const SignalSeries u = gen_sine(1.0, 0.1, 40.0, 20.0);
    const SignalSeries a = u;
    // not a harmonic of the 10 s period
    CHECK_THROWS_AS(estimate_frf(u, a, {0.15}), InvalidArgument);
    // beyond Nyquist for np = 200 at 20 Hz
    CHECK_THROWS_AS(estimate_frf(u, a, {10.0}), InvalidArgument);
    // no stimulus energy at an unexcited harmonic
    CHECK_THROWS_AS(estimate_frf(u, a, {0.2}), InvalidArgument);
    // fewer than two periods
    const SignalSeries one = gen_sine(1.0, 0.1, 10.0, 20.0);
    CHECK_THROWS_AS(estimate_frf(one, one, {0.1}), InvalidArgument);
}

TEST_CASE("torque normalization divides by the body mgh") {
    const AnthropometricModel m = default_model();
    SignalSeries t = make_series({12.95, -12.95, 0.0}, 100.0);
    const SignalSeries n = normalize_torque(t, m);
    CHECK(std::abs(n.samples[0] - 0.1) < 1e-4);
    CHECK(n.samples[0] == doctest::Approx(12.95 / m.mgh()).epsilon(1e-12));
    CHECK(n.samples[2] == 0.0);
    CHECK_THROWS_AS(normalize_torque(make_series({}, 100.0), m), InvalidArgument);
}

TEST_CASE("reference likeness distance") {
    FrfResult a;
    a.frequencies_hz = {0.05, 0.1, 0.15};
    a.gain = {0.9, 0.7, 0.5};
    a.phase_rad = {-0.2, -0.5, -0.9};
    a.coherence = {1.0, 1.0, 1.0};
    CHECK(compare_to_reference(a, a) == 0.0);

    FrfResult doubled = a;
    for (double& g : doubled.gain) g *= 2.0;
    const double dl = std::log(2.0);
    CHECK(compare_to_reference(doubled, a, {1.0, 0.0}) == doctest::Approx(dl).epsilon(1e-12));
    // with both weights the same delta spreads over the weight sum
    CHECK(compare_to_reference(doubled, a, {1.0, 1.0}) ==
          doctest::Approx(dl / std::sqrt(2.0)).epsilon(1e-12));

    FrfResult shifted = a;
    for (double& p : shifted.phase_rad) p += 0.3;
    CHECK(compare_to_reference(shifted, a, {0.0, 1.0}) == doctest::Approx(0.3).epsilon(1e-12));

    FrfResult grid = a;
    grid.frequencies_hz[1] = 0.11;
    CHECK_THROWS_AS(compare_to_reference(grid, a), InvalidArgument);
    FrfResult shorter = a;
    shorter.frequencies_hz.pop_back();
    shorter.gain.pop_back();
    shorter.phase_rad.pop_back();
    CHECK_THROWS_AS(compare_to_reference(shorter, a), InvalidArgument);
    CHECK_THROWS_AS(compare_to_reference(a, a, {0.0, 0.0}), InvalidArgument);
    FrfResult zero_gain = a;
    zero_gain.gain[0] = 0.0;
    CHECK_THROWS_AS(compare_to_reference(zero_gain, a), InvalidArgument);
}

TEST_CASE("angle wrapping lands in the half-open interval") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(3.0 * kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(2.0 * kPi) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(wrap_angle(-0.3) == doctest::Approx(-0.3).epsilon(1e-15));
    CHECK(wrap_angle(kPi + 0.1) == doctest::Approx(-kPi + 0.1).epsilon(1e-12));
}

TEST_CASE("mismatched series pairs are rejected") {
    const SignalSeries u = make_series({1.0, 2.0}, 100.0);
    CHECK_THROWS_AS(gain(u, make_series({1.0}, 100.0)), InvalidArgument);
    CHECK_THROWS_AS(gain(u, make_series({1.0, 2.0}, 50.0)), InvalidArgument);
    CHECK_THROWS_AS(gain(make_series({}, 100.0), make_series({}, 100.0)), InvalidArgument);
    // zero stimulus energy
    CHECK_THROWS_AS(gain(make_series({0.0, 0.0}, 100.0), u), InvalidArgument);
}
