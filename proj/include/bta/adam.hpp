#pragma once

#include <unordered_map>

#include "bta/param_store.hpp"

namespace bta {

/// Adam with bias correction. Moment constants are the usual library
/// defaults; only the learning rate is tuned.
struct AdamState {
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long step = 0;
    std::unordered_map<std::string, Matrix> m;  // first moments
    std::unordered_map<std::string, Matrix> v;  // second moments

    explicit AdamState(double lr = 0.01) : learning_rate(lr) {}
};

/// One update over every trainable parameter from its gradient buffer.
/// Throws numeric_error naming the parameter if a gradient is not finite.
void adam_step(ParameterStore& store, AdamState& state);

}  // namespace bta
