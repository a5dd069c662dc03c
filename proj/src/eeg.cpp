#include "bta/eeg.hpp"

#include <cmath>

namespace bta {

std::vector<Band> search_style_bands() {
    return {{"delta", 1, 4}, {"theta", 4, 8}, {"alpha", 8, 13}, {"beta", 13, 30},
            {"gamma", 30, 45}};
}

std::vector<Band> amigos_style_bands() {
    return {{"theta", 4, 8}, {"alpha", 8, 13}, {"beta", 13, 30}, {"gamma", 30, 45}};
}

std::vector<EegSample> window(const Recording& recording, double window_seconds,
                              double overlap_seconds, bool* too_short) {
    if (window_seconds <= 0.0)
        throw config_error("window: window_seconds must be positive");
    if (overlap_seconds < 0.0 || overlap_seconds >= window_seconds)
        throw config_error("window: overlap must lie in [0, window)");
    const int E = recording.signal.rows();
    const int T = recording.signal.cols();
    const int n = static_cast<int>(std::lround(window_seconds * recording.sample_rate));
    const int step = n - static_cast<int>(std::lround(overlap_seconds * recording.sample_rate));
    if (n <= 0 || step <= 0) throw config_error("window: empty window at this sample rate");

    std::vector<EegSample> out;
    if (too_short) *too_short = T < n;
    for (int start = 0; start + n <= T; start += step) {
        EegSample s;
        s.temporal = Matrix(E, n);
        for (int e = 0; e < E; ++e)
            for (int i = 0; i < n; ++i) s.temporal(e, i) = recording.signal(e, start + i);
        s.label = recording.label.value_or(-1);
        s.group_id = recording.group_id;
        out.push_back(std::move(s));
    }
    return out;
}

Matrix de_features(const Matrix& temporal, double sample_rate,
                   const std::vector<Band>& bands) {
    const int E = temporal.rows();
    const int n = temporal.cols();
    const double nyquist = sample_rate / 2.0;
    for (const Band& b : bands) {
        if (b.lo >= b.hi)
            throw config_error("de_features: band '" + b.name + "' has lo >= hi");
        if (b.hi > nyquist)
            throw config_error("de_features: band '" + b.name +
                               "' exceeds the Nyquist frequency");
    }

    // Per-band DFT power. Band power sums |X_k|^2 over the bins whose
    // frequency k*fs/n lies in [lo, hi), doubled for the conjugate half, so
    // a band holding the whole spectrum recovers the plain signal power.
    Matrix out(E, static_cast<int>(bands.size()));
    for (int e = 0; e < E; ++e) {
        for (size_t bi = 0; bi < bands.size(); ++bi) {
            const Band& b = bands[bi];
            double power = 0.0;
            for (int k = 0; k <= n / 2; ++k) {
                const double freq = static_cast<double>(k) * sample_rate / n;
                if (freq < b.lo || freq >= b.hi) continue;
                double re = 0.0, im = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double ang = -2.0 * M_PI * k * i / n;
                    re += temporal(e, i) * std::cos(ang);
                    im += temporal(e, i) * std::sin(ang);
                }
                const double mag2 = (re * re + im * im) / (static_cast<double>(n) * n);
                const bool self_conjugate = k == 0 || 2 * k == n;
                power += self_conjugate ? mag2 : 2.0 * mag2;
            }
            const double variance = std::max(power, kDeVarianceFloor);
            out(e, static_cast<int>(bi)) = 0.5 * std::log(2.0 * M_PI * M_E * variance);
        }
    }
    return out;
}

}  // namespace bta
