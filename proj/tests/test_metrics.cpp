#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bta/metrics.hpp"
#include "bta/rng.hpp"

using namespace bta;

namespace {

// exhaustive pairwise counting: P(pos > neg) with 0.5 for ties
double auc_pair_oracle(const std::vector<ScoredLabel>& items) {
    double wins = 0.0;
    size_t pairs = 0;
    for (const ScoredLabel& p : items) {
        if (p.label < 1) continue;
        for (const ScoredLabel& n : items) {
            if (n.label >= 1) continue;
            ++pairs;
            if (p.score > n.score) wins += 1.0;
            else if (p.score == n.score) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

}  // namespace

TEST_CASE("auc: perfectly separated scores give 1") {
    std::vector<ScoredLabel> items = {{0.9, 1}, {0.8, 1}, {0.2, 0}, {0.1, 0}};
    CHECK(auc(items) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("auc: all scores equal gives 0.5") {
    std::vector<ScoredLabel> items = {{0.5, 1}, {0.5, 0}, {0.5, 1}, {0.5, 0}};
    CHECK(auc(items) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("auc: matches exhaustive pair counting on random instances") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<ScoredLabel> items;
        for (int i = 0; i < 50; ++i) {
            // quantized scores so ties actually occur
            const double score = std::floor(rng.uniform() * 10.0) / 10.0;
            items.push_back({score, rng.bernoulli(0.4) ? 1 : 0});
        }
        bool has_pos = false, has_neg = false;
        for (const auto& it : items) (it.label ? has_pos : has_neg) = true;
        if (!has_pos || !has_neg) continue;
        CHECK(std::fabs(auc(items) - auc_pair_oracle(items)) < 1e-12);
    }
}

TEST_CASE("auc: single-class input is an undefined-metric error") {
    std::vector<ScoredLabel> items = {{0.4, 1}, {0.6, 1}};
    CHECK_THROWS_AS(auc(items), undefined_metric_error);
}

TEST_CASE("auc is invariant under strictly monotone score transforms") {
    Rng rng(32);
    std::vector<ScoredLabel> items, warped;
    for (int i = 0; i < 40; ++i) {
        const double s = rng.uniform(-2.0, 2.0);
        const int label = rng.bernoulli(0.5) ? 1 : 0;
        items.push_back({s, label});
        warped.push_back({std::exp(0.7 * s) + 3.0, label});
    }
    CHECK(auc(items) == doctest::Approx(auc(warped)).epsilon(1e-12));
}

TEST_CASE("f1: perfect predictions give 1") {
    std::vector<ScoredLabel> items = {{0.9, 1}, {0.1, 0}, {0.8, 1}, {0.3, 0}};
    CHECK(f1(items) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("f1: all predicted negative with positives present gives 0, flagged") {
    std::vector<ScoredLabel> items = {{0.2, 1}, {0.1, 1}, {0.3, 0}};
    bool degenerate = false;
    CHECK(f1(items, &degenerate) == 0.0);
    CHECK(degenerate);
}

TEST_CASE("f1: confusion-matrix arithmetic TP=3 FP=1 FN=2") {
    std::vector<ScoredLabel> items = {
        {0.9, 1}, {0.8, 1}, {0.7, 1},  // TP x3
        {0.6, 0},                      // FP
        {0.2, 1}, {0.1, 1},            // FN x2
        {0.3, 0},
    };
    // precision 3/4, recall 3/5 -> 2*0.75*0.6/(0.75+0.6)
    CHECK(f1(items) == doctest::Approx(2.0 * 0.75 * 0.6 / 1.35).epsilon(1e-12));
}

TEST_CASE("f1 is symmetric under swapping predictions and labels") {
    Rng rng(33);
    std::vector<ScoredLabel> a, b;
    for (int i = 0; i < 30; ++i) {
        const int pred = rng.bernoulli(0.5) ? 1 : 0;
        const int label = rng.bernoulli(0.5) ? 1 : 0;
        a.push_back({pred ? 1.0 : 0.0, label});
        b.push_back({label ? 1.0 : 0.0, pred});
    }
    bool d1 = false, d2 = false;
    CHECK(f1(a, &d1) == doctest::Approx(f1(b, &d2)).epsilon(1e-12));
}

TEST_CASE("ndcg: ideal ordering gives 1") {
    CHECK(ndcg_at_k({3, 2, 2, 1, 0}, 5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ndcg: all-zero relevance gives 0 by convention") {
    CHECK(ndcg_at_k({0, 0, 0}, 3) == 0.0);
}

TEST_CASE("ndcg: hand-computed fixture [0,2,1] at k=3") {
    // DCG  = 0/log2(2) + 3/log2(3) + 1/log2(4) = 3/log2(3) + 0.5
    // IDCG = 3/log2(2) + 1/log2(3) + 0        = 3 + 1/log2(3)
    const double dcg = 3.0 / std::log2(3.0) + 0.5;
    const double idcg = 3.0 + 1.0 / std::log2(3.0);
    CHECK(ndcg_at_k({0, 2, 1}, 3) == doctest::Approx(dcg / idcg).epsilon(1e-9));
}

TEST_CASE("ndcg: equals 1 iff the top-k is gain-sorted descending") {
    CHECK(ndcg_at_k({2, 2, 1, 0}, 4) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ndcg_at_k({1, 2}, 2) < 1.0);
}

TEST_CASE("ndcg and map ignore permutations of equal items below k") {
    // swapping two equally relevant tail items cannot change either metric
    std::vector<int> a = {2, 1, 0, 1, 1};
    std::vector<int> b = {2, 1, 0, 1, 1};
    std::swap(b[3], b[4]);
    CHECK(ndcg_at_k(a, 3) == doctest::Approx(ndcg_at_k(b, 3)).epsilon(1e-12));
    CHECK(map_at_k(a, 3) == doctest::Approx(map_at_k(b, 3)).epsilon(1e-12));
}

TEST_CASE("map: single relevant doc at rank 1 gives 1") {
    CHECK(map_at_k({1, 0, 0}, 3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("map: relevant at ranks 2 and 4 of 5, k=5") {
    // (1/2 + 2/4) / min(5, 2) = 0.5
    CHECK(map_at_k({0, 1, 0, 1, 0}, 5) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("map: zero relevant gives 0 with flag") {
    bool none = false;
    CHECK(map_at_k({0, 0}, 2, &none) == 0.0);
    CHECK(none);
}

TEST_CASE("map binarizes graded relevance at >= 1") {
    CHECK(map_at_k({2, 0, 1}, 3) == doctest::Approx((1.0 + 2.0 / 3.0) / 2.0).epsilon(1e-12));
}
