#pragma once

#include <vector>

#include "bta/matrix.hpp"
#include "bta/tape.hpp"

namespace bta {

/// Exact Gaussian-CDF GELU, x * Phi(x).
double gelu(double x);
double gelu_derivative(double x);

/// Softmax of a vector; stable under shifts.
std::vector<double> softmax(const std::vector<double>& v);

/// Binary cross-entropy -y ln(p) - (1-y) ln(1-p) with p clamped to
/// [1e-12, 1 - 1e-12].
double cross_entropy(double y_hat, int y);

inline constexpr double kProbClamp = 1e-12;

/// Masked reconstruction loss: sum over hidden entries (mask == 0) of the
/// squared difference. Entries with mask == 1 contribute zero loss and zero
/// gradient. empty_mask set when the mask hides nothing.
struct MaskedMse {
    Tape::Node loss;
    bool empty_mask = false;
};
MaskedMse masked_mse(Tape& tape, Tape::Node reconstructed, const Matrix& target,
                     const Matrix& mask);

/// Convenience wrapper evaluating masked_mse outside any training loop.
double masked_mse_value(const Matrix& reconstructed, const Matrix& target,
                        const Matrix& mask, bool* empty_mask = nullptr);

/// Per-head projection weights, each H x (H/D).
struct AttentionHead {
    Tape::Node wq;
    Tape::Node wk;
    Tape::Node wv;
};

/// Scaled dot-product multihead self-attention over the rows of z (E x H).
/// Returns the projected output and each head's E x E attention matrix.
struct AttentionResult {
    Tape::Node out;
    std::vector<Tape::Node> attention;
};
AttentionResult multihead_attention(Tape& tape, Tape::Node z,
                                    const std::vector<AttentionHead>& heads,
                                    Tape::Node w_out);

/// Batch normalization over a batch of same-shaped matrices, treating every
/// (row, col) coordinate as one normalized channel. gamma/beta are 1 x
/// (rows*cols). Train mode updates `state` and needs batch size >= 2.
std::vector<Matrix> batch_norm(const std::vector<Matrix>& batch, const Matrix& gamma,
                               const Matrix& beta, BatchNormState& state, BnMode mode);

}  // namespace bta
