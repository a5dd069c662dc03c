#pragma once

#include <cstdint>
#include <cmath>
#include <limits>
#include <filesystem>
#include <string>
#include <vector>

#include "bta/matrix.hpp"

namespace bta {

/// One user-item record: profile features, item id, the explicit label in
/// [0,1], and the brain-signal satisfaction estimate (NaN when absent).
struct Interaction {
    std::vector<double> user_features;  // fixed dimension across the dataset
    std::string item_id;
    double true_label = 0.0;
    double estimated = std::numeric_limits<double>::quiet_NaN();

    bool has_estimate() const { return !std::isnan(estimated); }
};

/// 8:1:1 train/valid/test split, seed-deterministic.
struct SplitPlan {
    std::vector<size_t> train, valid, test;
};
SplitPlan split_811(size_t n, uint64_t seed);

enum class LabelSource { truth, estimated };

/// Training targets after label mixing: a uniformly random floor(alpha * n)
/// subset of the train indices keeps true labels, the rest carry the
/// estimated satisfaction. Validation and test labels are never touched.
/// Throws data_error when an estimate is missing but needed.
struct MixedLabels {
    std::vector<double> targets;        // parallel to train indices
    std::vector<LabelSource> sources;
};
MixedLabels mix_labels(const std::vector<Interaction>& interactions,
                       const std::vector<size_t>& train_indices, double alpha,
                       uint64_t seed);

/// Feature layout: user profile then a one-hot item block (ids in first-seen
/// order).
struct FeatureSpace {
    int user_dim = 0;
    std::vector<std::string> item_ids;

    static FeatureSpace build(const std::vector<Interaction>& interactions);
    int dim() const { return user_dim + static_cast<int>(item_ids.size()); }
    std::vector<double> encode(const Interaction& it) const;
};

/// Logistic regression on concat(e_u, e_v), trained with Adam on log-loss;
/// soft targets in [0,1] are supported.
struct LrModel {
    Matrix w;  // 1 x dim
    double b = 0.0;
    double predict(const std::vector<double>& x) const;
};
LrModel lr_train(const std::vector<std::vector<double>>& features,
                 const std::vector<double>& targets, int epochs, double learning_rate,
                 uint64_t seed);

/// Factorization machine: w0 + w.x + 0.5 sum_f [(v_f.x)^2 - (v_f^2).(x^2)],
/// squashed by a sigmoid; k latent factors.
struct FmModel {
    double w0 = 0.0;
    Matrix w;  // 1 x dim
    Matrix v;  // dim x k
    double logit(const std::vector<double>& x) const;
    double predict(const std::vector<double>& x) const;
};
FmModel fm_train(const std::vector<std::vector<double>>& features,
                 const std::vector<double>& targets, int k, int epochs,
                 double learning_rate, uint64_t seed);

inline constexpr int kFmFactors = 8;

/// One sweep cell: model in {lr, fm}, condition in {T(a), T(a)+S}.
struct SweepRow {
    std::string model;
    double alpha = 0.0;
    std::string condition;
    double auc = 0.0;
};

struct SweepConfig {
    std::vector<double> alphas = {0.0, 0.1, 0.3, 0.5, 1.0};
    int epochs = 80;
    double learning_rate = 0.05;
    int fm_factors = kFmFactors;
    uint64_t seed = 0;
};

/// Trains every (model, alpha, condition) cell on the mixed training set and
/// scores AUC against true test labels. T(0) without estimates has no
/// training data and is skipped.
std::vector<SweepRow> run_alpha_sweep(const std::vector<Interaction>& interactions,
                                      const SweepConfig& config);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// One record per line: user features, item id, true label, estimated
/// satisfaction ('-' when absent).
std::vector<Interaction> load_interactions(const std::filesystem::path& path);
void save_interactions(const std::vector<Interaction>& interactions,
                       const std::filesystem::path& path);

/// Synthetic user-item corpus: true labels follow a logistic ground truth on
/// profile + item effects; estimates are either correlated with the truth
/// (target correlation ~0.8) or independent noise.
struct RatingSynthConfig {
    int users = 100;
    int items = 16;
    int user_dim = 71;
    bool independent_estimates = false;
    double estimate_noise = 0.85;  // logit-space noise; yields corr(est, truth) near 0.8
    uint64_t seed = 0;
};
std::vector<Interaction> synth_interactions(const RatingSynthConfig& config);

}  // namespace bta
