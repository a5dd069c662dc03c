#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bta/matrix.hpp"

namespace bta {

/// One continuous multichannel recording attached to a stimulus (search task
/// or video), channel-major.
struct Recording {
    std::vector<std::string> channel_names;  // length E
    double sample_rate = 0.0;                // Hz
    Matrix signal;                           // E x T
    std::string group_id;
    std::optional<int> label;                // 0 unsatisfied, 1 satisfied
};

/// One stimulus-response sample: temporal window plus its spectral features.
struct EegSample {
    Matrix temporal;   // E x N
    Matrix spectral;   // E x B
    int label = -1;    // -1 when absent
    std::string group_id;
};

/// Named frequency band [lo, hi) in Hz.
struct Band {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
};

/// delta/theta/alpha/beta/gamma, B = 5.
std::vector<Band> search_style_bands();
/// theta/alpha/beta/gamma, B = 4.
std::vector<Band> amigos_style_bands();

/// Cut a recording into fixed windows of window_seconds with the given
/// overlap; the trailing partial window is dropped. Returns only the
/// temporal part of each sample (spectral left empty). A recording shorter
/// than one window yields an empty list and sets *too_short when provided.
std::vector<EegSample> window(const Recording& recording, double window_seconds,
                              double overlap_seconds, bool* too_short = nullptr);

/// Differential entropy per channel and band: 0.5 ln(2 pi e sigma^2_band),
/// where sigma^2_band is the signal power falling in [lo, hi) of the
/// rectangular-window periodogram, floored at 1e-10.
Matrix de_features(const Matrix& temporal, double sample_rate,
                   const std::vector<Band>& bands);

inline constexpr double kDeVarianceFloor = 1e-10;

}  // namespace bta
