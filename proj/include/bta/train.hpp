#pragma once

#include <optional>

#include "bta/folds.hpp"
#include "bta/model.hpp"

namespace bta {

struct FoldMetrics {
    int fold = 0;
    double auc = 0.0;
    double f1 = 0.0;
    double train_loss = 0.0;
};

struct TrainReport {
    std::vector<FoldMetrics> folds;
    double mean_auc = 0.0;
    double mean_f1 = 0.0;
    double mean_train_loss = 0.0;
    int best_fold = -1;                 // by held-out AUC
    ParameterStore best_params;
    /// "fold,auc,f1,train_loss" rows plus a mean row.
    std::string to_csv() const;
};

struct PretrainReport {
    std::vector<double> epoch_losses;
};

/// Unsupervised masked-reconstruction pretraining over the whole dataset.
/// Labels are ignored; training mutates model.params() in place.
PretrainReport pretrain_subtask(BtaModel& model, const Dataset& dataset);

/// Supervised training on the given sample indices (single split). Returns
/// the final epoch's mean training loss.
double train_supervised(BtaModel& model, const Dataset& dataset,
                        const std::vector<size_t>& train_indices, uint64_t seed);

/// Cross-validated training per the fold plan: every fold is held out once,
/// a fresh model is trained on the rest (optionally seeded with pretrained
/// centrality embeddings per Algorithm 1), and AUC/F1 are measured on the
/// held-out fold. jobs > 1 trains folds in parallel; results are
/// deterministic either way.
TrainReport train_classifier(const Dataset& dataset, const FoldPlan& plan,
                             const BtaConfig& config, const ParameterStore* pretrained,
                             int jobs = 1);

/// Topography-invariant reference classifier: concat(X^t, X^s) flattened
/// into a two-layer perceptron (hidden 64, gelu), same CV protocol.
struct MlpConfig {
    int hidden = 64;
    double learning_rate = 0.01;
    int batch_size = 32;
    int epochs = 50;
    int patience = 5;
    uint64_t seed = 0;
};
TrainReport baseline_mlp(const Dataset& dataset, const FoldPlan& plan,
                         const MlpConfig& config, int jobs = 1);

enum class ClassFilter { satisfied, unsatisfied, all };

/// Average of the head-averaged attention matrices over the selected
/// samples; rows are query channels. Spectral stream by default.
Matrix export_attention_map(BtaModel& model, const Dataset& dataset, ClassFilter filter,
                            Stream stream = Stream::spectral);

/// Labeled comma-separated table with channel-name headers.
std::string attention_map_csv(const Matrix& map,
                              const std::vector<std::string>& channel_names);

/// AUC and F1 of a trained model over the given samples.
std::pair<double, double> evaluate_model(BtaModel& model, const Dataset& dataset,
                                         const std::vector<size_t>& indices);

}  // namespace bta
