#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/model.hpp"
#include "core/series.hpp"

namespace posturebench {

/// Sample cross-correlation X(L) = sum_t u(t) a(t+L) over the valid overlap,
/// for every lag L in [-(n-1), n-1].
struct CrossCorrelation {
    std::vector<long long> lags;
    std::vector<double> values;
};

/// Scalar trial scores plus the settings that produced them.
struct ScoreReport {
    double gain = 0.0;       // peak |X| / sum u^2, dimensionless
    double phase_rad = 0.0;  // in (-pi, pi], negative = response lags stimulus
    double power = 0.0;      // mean squared sway over the scored window
    double torque_rms = 0.0; // RMS of the mgh-normalized ankle torque
    bool torque_present = false;

    int settle_periods = 0;       // leading periods discarded
    double period_s = 0.0;        // stimulus period the scores assume
    std::uint64_t samples_scored = 0;
    std::string power_unit = "rad^2";
    /// Conventional display label kept alongside the mean-square unit.
    std::string power_display_unit = "rad^2/s";
    std::uint64_t provenance = 0;  // hash of the scored record's metadata
};

/// Per-frequency response description of a stimulus/response pair.
struct FrfResult {
    std::vector<double> frequencies_hz;
    std::vector<double> gain;
    std::vector<double> phase_rad;  // wrapped to (-pi, pi]
    std::vector<double> coherence;  // in [0, 1]
};

/// Weights of the two terms inside compare_to_reference.
struct CompareWeights {
    double log_gain = 1.0;
    double phase = 1.0;
};

/// Drop `periods` leading stimulus periods, then cut the tail to a whole
/// number of periods. Requires a periodic series and at least one full
/// period left over.
SignalSeries trim_steady_state(const SignalSeries& series, int periods);

/// FFT-accelerated sample cross-correlation; matches the direct O(n^2)
/// definition within 1e-9 relative. Requires equal lengths and rates.
CrossCorrelation cross_correlate(const SignalSeries& u, const SignalSeries& a);

/// Peak correlation magnitude normalized by the stimulus energy:
///   G = max_L |X(L)| / sum_t u(t)^2
double gain(const SignalSeries& u, const SignalSeries& a);

/// Phase from the cross-correlation peak. The argmax lag is folded into the
/// symmetric one-period window (-n_p/2, n_p/2] and converted by
/// phi = -2 pi L / n_p; a negative correlation peak contributes an extra pi
/// (an inverted response is a half-period shift). Result in (-pi, pi].
double phase(const SignalSeries& u, const SignalSeries& a);

/// Mean of squared samples.
double power(const SignalSeries& a);

/// Per-stimulus-frequency gain, phase and coherence from period-wise Fourier
/// components. Needs at least two full periods; every requested frequency
/// must be a sub-Nyquist harmonic of the series period with nonzero
/// stimulus energy.
FrfResult estimate_frf(const SignalSeries& u, const SignalSeries& a,
                       const std::vector<double>& frequencies_hz);

/// Element-wise division by the model's mgh.
SignalSeries normalize_torque(const SignalSeries& torque, const AnthropometricModel& model);

/// Weighted RMS distance between two responses on the same frequency grid:
///   sqrt( sum_f [ wg (ln g - ln g_ref)^2 + wp wrap(phi - phi_ref)^2 ]
///         / (F (wg + wp)) )
/// Zero exactly when gains and phases agree everywhere.
double compare_to_reference(const FrfResult& result, const FrfResult& reference,
                            const CompareWeights& weights = {});

/// Wrap an angle to (-pi, pi].
double wrap_angle(double rad);

}  // namespace posturebench
