#include "bta/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace bta {

double auc(const std::vector<ScoredLabel>& items) {
    size_t positives = 0, negatives = 0;
    for (const ScoredLabel& it : items) {
        if (!std::isfinite(it.score))
            throw data_error("auc: non-finite score");
        (it.label >= 1 ? positives : negatives) += 1;
    }
    if (positives == 0 || negatives == 0)
        throw undefined_metric_error("auc: needs at least one positive and one negative");

    // rank-sum with average ranks over tied scores
    std::vector<size_t> order(items.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return items[a].score < items[b].score; });
    double rank_sum_pos = 0.0;
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i;
        while (j < order.size() && items[order[j]].score == items[order[i]].score) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (size_t t = i; t < j; ++t)
            if (items[order[t]].label >= 1) rank_sum_pos += avg_rank;
        i = j;
    }
    const double n_pos = static_cast<double>(positives);
    const double n_neg = static_cast<double>(negatives);
    return (rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

double f1_threshold() { return 0.5; }

double f1(const std::vector<ScoredLabel>& items, bool* degenerate) {
    size_t tp = 0, fp = 0, fn = 0;
    for (const ScoredLabel& it : items) {
        const bool pred = it.score >= f1_threshold();
        const bool truth = it.label >= 1;
        if (pred && truth) ++tp;
        else if (pred && !truth) ++fp;
        else if (!pred && truth) ++fn;
    }
    if (degenerate) *degenerate = false;
    if (tp == 0) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    const double precision = static_cast<double>(tp) / (tp + fp);
    const double recall = static_cast<double>(tp) / (tp + fn);
    return 2.0 * precision * recall / (precision + recall);
}

namespace {
double dcg(const std::vector<int>& relevance, int k) {
    double acc = 0.0;
    const int n = std::min<int>(k, static_cast<int>(relevance.size()));
    for (int r = 0; r < n; ++r)
        acc += (std::pow(2.0, relevance[r]) - 1.0) / std::log2(static_cast<double>(r + 2));
    return acc;
}
}  // namespace

double ndcg_at_k(const std::vector<int>& ranked_relevance, int k) {
    if (k < 1) throw config_error("ndcg_at_k: k must be >= 1");
    std::vector<int> ideal = ranked_relevance;
    std::sort(ideal.begin(), ideal.end(), std::greater<int>());
    const double idcg = dcg(ideal, k);
    if (idcg == 0.0) return 0.0;
    return dcg(ranked_relevance, k) / idcg;
}

double map_at_k(const std::vector<int>& ranked_relevance, int k, bool* no_relevant) {
    if (k < 1) throw config_error("map_at_k: k must be >= 1");
    size_t total_relevant = 0;
    for (int r : ranked_relevance)
        if (r >= 1) ++total_relevant;
    if (no_relevant) *no_relevant = total_relevant == 0;
    if (total_relevant == 0) return 0.0;

    double sum_precision = 0.0;
    size_t hits = 0;
    const int n = std::min<int>(k, static_cast<int>(ranked_relevance.size()));
    for (int r = 0; r < n; ++r) {
        if (ranked_relevance[r] >= 1) {
            ++hits;
            sum_precision += static_cast<double>(hits) / (r + 1);
        }
    }
    const double denom = static_cast<double>(std::min<size_t>(k, total_relevant));
    return sum_precision / denom;
}

}  // namespace bta
