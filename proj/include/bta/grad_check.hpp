#pragma once

#include <functional>
#include <string>

#include "bta/param_store.hpp"
#include "bta/rng.hpp"

namespace bta {

/// Loss callback for gradient checking. Must be deterministic in the store
/// contents. When with_grad is set, it must leave analytic gradients in the
/// store's gradient buffers (which arrive zeroed).
using LossFn = std::function<double(ParameterStore&, bool with_grad)>;

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::string worst_parameter;
    size_t coords_checked = 0;
    bool passed(double tolerance) const { return max_rel_error < tolerance; }
};

/// Compares analytic gradients against central finite differences (h = 1e-5)
/// on a random subsample of at least `coords_per_param` coordinates of every
/// trainable parameter (all coordinates when the tensor is smaller).
GradCheckReport finite_diff_check(const LossFn& loss_fn, ParameterStore& store,
                                  uint64_t seed, int coords_per_param = 64);

}  // namespace bta
