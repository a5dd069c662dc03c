#include "bta/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace bta {

GradCheckReport finite_diff_check(const LossFn& loss_fn, ParameterStore& store,
                                  uint64_t seed, int coords_per_param) {
    constexpr double kStep = 1e-5;
    Rng rng(seed);
    GradCheckReport report;

    store.zero_grads();
    loss_fn(store, /*with_grad=*/true);

    for (ParameterStore::Entry& e : store.entries()) {
        if (!e.trainable || e.value.size() == 0) continue;
        const size_t total = e.value.size();
        std::vector<size_t> coords(total);
        for (size_t i = 0; i < total; ++i) coords[i] = i;
        if (total > static_cast<size_t>(coords_per_param)) {
            rng.shuffle(coords);
            coords.resize(static_cast<size_t>(coords_per_param));
        }
        const Matrix analytic = e.grad;
        for (size_t idx : coords) {
            const double saved = e.value[idx];
            e.value[idx] = saved + kStep;
            const double up = loss_fn(store, /*with_grad=*/false);
            e.value[idx] = saved - kStep;
            const double down = loss_fn(store, /*with_grad=*/false);
            e.value[idx] = saved;
            const double numeric = (up - down) / (2.0 * kStep);
            const double denom =
                std::max({std::fabs(analytic[idx]), std::fabs(numeric), 1e-6});
            const double rel = std::fabs(analytic[idx] - numeric) / denom;
            ++report.coords_checked;
            if (rel > report.max_rel_error) {
                report.max_rel_error = rel;
                report.worst_parameter = e.name;
            }
        }
    }
    return report;
}

}  // namespace bta
