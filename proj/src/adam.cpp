#include "bta/adam.hpp"

#include <cmath>

namespace bta {

void adam_step(ParameterStore& store, AdamState& state) {
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (ParameterStore::Entry& e : store.entries()) {
        if (!e.trainable) continue;
        if (!e.grad.all_finite())
            throw numeric_error("adam_step: non-finite gradient for parameter '" + e.name +
                                "'");
        Matrix& m = state.m.try_emplace(e.name, e.value.rows(), e.value.cols()).first->second;
        Matrix& v = state.v.try_emplace(e.name, e.value.rows(), e.value.cols()).first->second;
        for (size_t i = 0; i < e.value.size(); ++i) {
            const double g = e.grad[i];
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            e.value[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.eps);
        }
    }
}

}  // namespace bta
