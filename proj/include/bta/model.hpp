#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bta/adam.hpp"
#include "bta/montage.hpp"
#include "bta/ops.hpp"
#include "bta/param_store.hpp"
#include "bta/rng.hpp"
#include "bta/synth.hpp"

namespace bta {

/// Model and training hyperparameters. The tuning grid is learning rate in
/// {0.01, 0.05}, batch size in {8, 32}, hidden in {8, 16, 32}; heads fixed
/// at eight and three centrality frames by default.
struct BtaConfig {
    int channels = 0;       // E
    int temporal_len = 0;   // N
    int spectral_len = 0;   // B
    int hidden = 16;        // H
    int heads = 8;          // D, must divide H
    int centralities = 3;   // M
    double learning_rate = 0.01;
    int batch_size = 32;
    int epochs = 50;
    int pretrain_epochs = 15;
    double mask_ratio = 0.15;
    int patience = 5;       // early stop when train loss stops improving
    uint64_t seed = 0;
    bool use_attention = true;   // ablation: spatial attention module
    bool use_centrality = true;  // ablation: multi-centrality encoding

    void validate() const;
    std::string to_json() const;
    static BtaConfig from_json(const std::string& text);
};

enum class Stream { temporal, spectral };

/// Per-sample model outputs from an eval-mode pass.
struct Prediction {
    double prob_satisfied = 0.0;
    double prob_unsatisfied = 0.0;
    // head-averaged E x E attention per stream, filled on request
    Matrix attention_temporal;
    Matrix attention_spectral;
};

/// The two-stream network: linear input encoding, shared multi-centrality
/// encoding, per-stream spatial attention and batch normalization, fused
/// two-logit softmax head, plus per-stream reconstruction heads for the
/// masked pretraining subtask.
class BtaModel {
public:
    BtaModel(BtaConfig config, const Montage& montage,
             std::vector<std::string> channel_names);

    const BtaConfig& config() const { return config_; }
    const std::vector<std::string>& channel_names() const { return channel_names_; }
    ParameterStore& params() { return params_; }
    const ParameterStore& params() const { return params_; }

    /// Fresh initialization: uniform(+-1/sqrt(fan_in)) weights, zero biases,
    /// normal(0, 0.02) centrality embeddings.
    void init_params(uint64_t seed);

    /// Mean cross-entropy over the batch. with_grad adds gradients into the
    /// store; persist_bn commits updated running statistics (training) or
    /// leaves them untouched (gradient checking). train_mode batches need
    /// size >= 2 for batch norm.
    double classify_loss(const std::vector<const EegSample*>& batch, bool with_grad,
                         bool train_mode, bool persist_bn);

    /// Mean masked reconstruction loss over the batch; masks are drawn from
    /// mask_rng per sample and entry with P(hidden) = mask_ratio. Labels are
    /// never read.
    double reconstruct_loss(const std::vector<const EegSample*>& batch, Rng& mask_rng,
                            bool with_grad, bool persist_bn);

    /// Eval-mode probabilities, optionally with head-averaged attention maps.
    std::vector<Prediction> predict(const std::vector<const EegSample*>& batch,
                                    bool want_attention = false);

    /// Per-channel z-scoring applied to temporal inputs before the model.
    static Matrix normalize_temporal(const Matrix& temporal);

    /// p_{channel,frame} = rho c_rho + theta c_theta + phi c_phi, 1 x H.
    Matrix centrality_encoding(int channel, int frame) const;

    /// The encoded input Z (E x H) of one sample before attention and batch
    /// norm: per-channel projection plus summed centrality encodings.
    Matrix encoded_input(Stream stream, const EegSample& sample);

private:
    struct StreamNodes;
    StreamNodes encode_stream(Tape& tape, Stream stream,
                              const std::vector<const EegSample*>& batch,
                              const std::vector<Matrix>* masked_override, BnMode mode,
                              BatchNormState& bn_state, bool want_attention);
    Matrix stream_input(Stream stream, const EegSample& s) const;

    BtaConfig config_;
    std::vector<std::string> channel_names_;
    // spherical coordinates of every channel in every centrality frame
    std::vector<Matrix> rho_, theta_, phi_;  // M entries, each E x 1
    ParameterStore params_;
};

/// Algorithm-1 handover: copy exactly the 3M centrality embedding tensors
/// from the pretrained store into the target; everything else is untouched.
void transfer_centrality_embeddings(const ParameterStore& source, ParameterStore& target,
                                    int centralities);

/// Binary noise mask for the reconstruction subtask: entry 0 (hidden) with
/// probability mask_ratio, else 1 (visible).
Matrix draw_mask(int rows, int cols, double mask_ratio, Rng& rng);

}  // namespace bta
