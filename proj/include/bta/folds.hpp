#pragma once

#include <cstdint>
#include <vector>

#include "bta/eeg.hpp"

namespace bta {

/// Partition of sample indices into k folds.
struct FoldPlan {
    int k = 0;
    std::vector<int> assignment;  // sample index -> fold index

    std::vector<size_t> fold_indices(int fold) const {
        std::vector<size_t> out;
        for (size_t i = 0; i < assignment.size(); ++i)
            if (assignment[i] == fold) out.push_back(i);
        return out;
    }
};

/// Task-independent folds: group ids are shuffled by seed and dealt
/// round-robin, so all samples of a group land in one fold. Requires at
/// least k distinct groups.
FoldPlan make_folds_grouped(const std::vector<EegSample>& samples, int k, uint64_t seed);

/// Plain random folds with sizes differing by at most one.
FoldPlan make_folds_random(size_t n_samples, int k, uint64_t seed);

}  // namespace bta
