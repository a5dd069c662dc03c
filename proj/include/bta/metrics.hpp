#pragma once

#include <vector>

#include "bta/errors.hpp"

namespace bta {

struct ScoredLabel {
    double score = 0.0;
    int label = 0;  // binary {0,1} or graded relevance >= 0
};

/// Probability that a random positive outscores a random negative; ties are
/// credited 0.5 (rank-sum formulation). Throws undefined_metric_error when
/// only one class is present.
double auc(const std::vector<ScoredLabel>& items);

/// F1 of the positive class with predictions thresholded at 0.5. Degenerate
/// inputs (no predicted and no actual positives, or zero precision+recall)
/// return 0 and set *degenerate when provided.
double f1(const std::vector<ScoredLabel>& items, bool* degenerate = nullptr);
double f1_threshold();

/// NDCG@k with gain 2^rel - 1 and discount 1/log2(rank + 1), normalized by
/// the ideal ordering of the same items; 0 when no item has gain.
double ndcg_at_k(const std::vector<int>& ranked_relevance, int k);

/// MAP@k over binarized relevance (grade >= 1): mean precision at each
/// relevant rank <= k, divided by min(k, total relevant). Zero relevant
/// items give 0 and set *no_relevant when provided.
double map_at_k(const std::vector<int>& ranked_relevance, int k,
                bool* no_relevant = nullptr);

}  // namespace bta
