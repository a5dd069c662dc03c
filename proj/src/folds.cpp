#include "bta/folds.hpp"

#include <algorithm>
#include <map>

#include "bta/rng.hpp"

namespace bta {

FoldPlan make_folds_grouped(const std::vector<EegSample>& samples, int k, uint64_t seed) {
    if (k < 1) throw config_error("make_folds_grouped: k must be >= 1");
    std::vector<std::string> groups;
    for (const EegSample& s : samples)
        if (std::find(groups.begin(), groups.end(), s.group_id) == groups.end())
            groups.push_back(s.group_id);
    if (groups.size() < static_cast<size_t>(k))
        throw data_error("make_folds_grouped: only " + std::to_string(groups.size()) +
                         " groups for " + std::to_string(k) + " folds");
    std::sort(groups.begin(), groups.end());  // seed-independent base order
    Rng rng = Rng(seed).split("folds-grouped");
    rng.shuffle(groups);
    std::map<std::string, int> fold_of;
    for (size_t i = 0; i < groups.size(); ++i)
        fold_of[groups[i]] = static_cast<int>(i % k);

    FoldPlan plan;
    plan.k = k;
    plan.assignment.reserve(samples.size());
    for (const EegSample& s : samples) plan.assignment.push_back(fold_of[s.group_id]);
    return plan;
}

FoldPlan make_folds_random(size_t n_samples, int k, uint64_t seed) {
    if (k < 1) throw config_error("make_folds_random: k must be >= 1");
    if (n_samples < static_cast<size_t>(k))
        throw data_error("make_folds_random: fewer samples than folds");
    std::vector<size_t> order(n_samples);
    for (size_t i = 0; i < n_samples; ++i) order[i] = i;
    Rng rng = Rng(seed).split("folds-random");
    rng.shuffle(order);
    FoldPlan plan;
    plan.k = k;
    plan.assignment.assign(n_samples, 0);
    for (size_t pos = 0; pos < order.size(); ++pos)
        plan.assignment[order[pos]] = static_cast<int>(pos % k);
    return plan;
}

}  // namespace bta
