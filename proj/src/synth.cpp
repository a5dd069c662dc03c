#include "bta/synth.hpp"

#include <cmath>

#include "bta/rng.hpp"

namespace bta {

namespace {

// preferred channel order; frontal pair first so small caps keep the planted
// asymmetry
const char* kChannelOrder[] = {"F3", "F4", "Fp1", "Fp2", "C3", "C4", "O1", "O2",
                               "F7", "F8", "T3", "T4", "P3", "P4", "T5", "T6",
                               "Fz", "Cz", "Pz", "Oz"};

}  // namespace

Dataset synth_generate(const SynthConfig& config) {
    if (config.channels < 4)
        throw config_error("synth_generate: at least 4 channels required (F3/F4 present)");
    if (config.channels > static_cast<int>(std::size(kChannelOrder)))
        throw config_error("synth_generate: at most " +
                           std::to_string(std::size(kChannelOrder)) + " channels supported");
    if (config.samples_per_class < 1)
        throw config_error("synth_generate: samples_per_class must be >= 1");
    if (config.groups < 1) throw config_error("synth_generate: groups must be >= 1");

    Dataset ds;
    ds.name = "synthetic";
    ds.sample_rate = config.sample_rate;
    ds.bands = search_style_bands();
    if (ds.bands.back().hi > config.sample_rate / 2.0)
        throw config_error("synth_generate: sample rate too low for the gamma band");
    ds.montage = Montage::standard_10_20();
    for (int e = 0; e < config.channels; ++e) ds.channel_names.push_back(kChannelOrder[e]);

    std::vector<int> left_frontal, right_frontal;
    for (int e = 0; e < config.channels; ++e) {
        const std::string name = ds.channel_names[e];
        if (name == "F3" || name == "Fp1" || name == "F7") left_frontal.push_back(e);
        if (name == "F4" || name == "Fp2" || name == "F8") right_frontal.push_back(e);
    }

    Rng master = Rng(config.seed).split("synth");
    const int n = config.window_samples;
    const double alpha_hz = 10.0;
    const int total = 2 * config.samples_per_class;
    ds.samples.reserve(total);
    // one-pole low-pass background; driving noise scaled for unit variance
    const double pole = 0.7;
    const double drive = std::sqrt(1.0 - pole * pole);

    for (int pair = 0; pair < config.samples_per_class; ++pair) {
        for (int label = 0; label <= 1; ++label) {
            const int sample_idx = pair * 2 + label;
            Rng rng = master.split(static_cast<uint64_t>(sample_idx));
            const int subject = sample_idx % std::max(1, config.subjects);
            const double subject_gain = 1.0 + 0.05 * subject;

            EegSample s;
            s.label = label;
            s.group_id = "task-" + std::to_string(pair % config.groups);
            s.temporal = Matrix(config.channels, n);
            for (int e = 0; e < config.channels; ++e) {
                double state = 0.0;
                for (int i = 0; i < n; ++i) {
                    state = pole * state + drive * rng.normal();
                    s.temporal(e, i) = subject_gain * state;
                }
            }
            const double phase = rng.uniform(0.0, 2.0 * M_PI);
            const std::vector<int>& targets = label == 1 ? left_frontal : right_frontal;
            for (int e : targets)
                for (int i = 0; i < n; ++i)
                    s.temporal(e, i) += config.effect_size *
                                        std::sin(2.0 * M_PI * alpha_hz * i /
                                                     config.sample_rate +
                                                 phase);
            s.spectral = de_features(s.temporal, config.sample_rate, ds.bands);
            ds.samples.push_back(std::move(s));
        }
    }
    return ds;
}

}  // namespace bta
