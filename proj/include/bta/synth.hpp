#pragma once

#include <cstdint>

#include "bta/eeg.hpp"
#include "bta/montage.hpp"

namespace bta {

/// A loaded or generated corpus: metadata plus per-sample features.
struct Dataset {
    std::string name;
    std::vector<std::string> channel_names;
    double sample_rate = 0.0;
    std::vector<Band> bands;
    Montage montage;
    std::vector<EegSample> samples;

    int channel_count() const { return static_cast<int>(channel_names.size()); }
};

/// Synthetic corpus with planted topographic class structure: filtered-noise
/// background everywhere, plus an alpha-band sinusoid of amplitude
/// effect_size on the left-frontal channels for satisfied samples and on the
/// right-frontal channels for unsatisfied ones.
struct SynthConfig {
    int subjects = 4;
    int samples_per_class = 100;
    int channels = 8;           // E, >= 4; F3/F4 always included
    int window_samples = 128;   // N
    double sample_rate = 128.0;
    double effect_size = 2.0;
    int groups = 20;            // distinct task ids, balanced across classes
    uint64_t seed = 0;
};

Dataset synth_generate(const SynthConfig& config);

}  // namespace bta
