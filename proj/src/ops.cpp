#include "bta/ops.hpp"

#include <algorithm>
#include <cmath>

namespace bta {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
}  // namespace

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * kInvSqrt2)); }

double gelu_derivative(double x) {
    const double cdf = 0.5 * (1.0 + std::erf(x * kInvSqrt2));
    const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
    return cdf + x * pdf;
}

std::vector<double> softmax(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    if (v.empty()) return out;
    const double mx = *std::max_element(v.begin(), v.end());
    double denom = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - mx);
        denom += out[i];
    }
    for (double& x : out) x /= denom;
    return out;
}

double cross_entropy(double y_hat, int y) {
    const double p = std::min(1.0 - kProbClamp, std::max(kProbClamp, y_hat));
    return y == 1 ? -std::log(p) : -std::log(1.0 - p);
}

MaskedMse masked_mse(Tape& tape, Tape::Node reconstructed, const Matrix& target,
                     const Matrix& mask) {
    const Matrix& rec = tape.value(reconstructed);
    if (!rec.same_shape(target) || !rec.same_shape(mask))
        throw dimension_error("masked_mse: shape mismatch " + rec.shape_str() + " vs " +
                              target.shape_str() + " vs " + mask.shape_str());
    Matrix hidden(mask.rows(), mask.cols());  // 1 where the entry is hidden
    bool any_hidden = false;
    for (size_t i = 0; i < mask.size(); ++i) {
        hidden[i] = mask[i] == 0.0 ? 1.0 : 0.0;
        any_hidden = any_hidden || mask[i] == 0.0;
    }
    Tape::Node diff = tape.sub(reconstructed, tape.constant(target));
    Tape::Node gated = tape.mul(diff, tape.constant(std::move(hidden)));
    Tape::Node loss = tape.sum(tape.mul(gated, diff));
    return MaskedMse{loss, !any_hidden};
}

double masked_mse_value(const Matrix& reconstructed, const Matrix& target,
                        const Matrix& mask, bool* empty_mask) {
    Tape tape;
    MaskedMse r = masked_mse(tape, tape.constant(reconstructed), target, mask);
    if (empty_mask) *empty_mask = r.empty_mask;
    return tape.value(r.loss)(0, 0);
}

AttentionResult multihead_attention(Tape& tape, Tape::Node z,
                                    const std::vector<AttentionHead>& heads,
                                    Tape::Node w_out) {
    const Matrix& zv = tape.value(z);
    const int hidden = zv.cols();
    const int n_heads = static_cast<int>(heads.size());
    if (n_heads < 1) throw config_error("multihead_attention: needs at least one head");
    if (hidden % n_heads != 0)
        throw config_error("multihead_attention: hidden dim " + std::to_string(hidden) +
                           " not divisible by " + std::to_string(n_heads) + " heads");
    const int head_dim = hidden / n_heads;
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(head_dim));

    AttentionResult res;
    std::vector<Tape::Node> outputs;
    for (const AttentionHead& h : heads) {
        const Matrix& wq = tape.value(h.wq);
        if (wq.rows() != hidden || wq.cols() != head_dim)
            throw dimension_error("multihead_attention: head weight " + wq.shape_str() +
                                  ", expected " + std::to_string(hidden) + "x" +
                                  std::to_string(head_dim));
        Tape::Node q = tape.matmul(z, h.wq);
        Tape::Node k = tape.matmul(z, h.wk);
        Tape::Node v = tape.matmul(z, h.wv);
        Tape::Node scores = tape.scale(tape.matmul(q, tape.transpose(k)), inv_sqrt_d);
        Tape::Node attn = tape.row_softmax(scores);
        res.attention.push_back(attn);
        outputs.push_back(tape.matmul(attn, v));
    }
    res.out = tape.matmul(tape.concat_cols(outputs), w_out);
    return res;
}

std::vector<Matrix> batch_norm(const std::vector<Matrix>& batch, const Matrix& gamma,
                               const Matrix& beta, BatchNormState& state, BnMode mode) {
    if (batch.empty()) return {};
    const int rows = batch[0].rows();
    const int cols = batch[0].cols();
    const int coords = rows * cols;
    Matrix stacked(static_cast<int>(batch.size()), coords);
    for (size_t s = 0; s < batch.size(); ++s) {
        if (!batch[s].same_shape(batch[0]))
            throw dimension_error("batch_norm: inhomogeneous batch " + batch[0].shape_str() +
                                  " vs " + batch[s].shape_str());
        for (int i = 0; i < coords; ++i) stacked(static_cast<int>(s), i) = batch[s][i];
    }
    Tape tape;
    Tape::Node out = tape.batch_norm(tape.constant(std::move(stacked)), tape.constant(gamma),
                                     tape.constant(beta), state, mode);
    const Matrix& ov = tape.value(out);
    std::vector<Matrix> result;
    result.reserve(batch.size());
    for (size_t s = 0; s < batch.size(); ++s) {
        Matrix m(rows, cols);
        for (int i = 0; i < coords; ++i) m[i] = ov(static_cast<int>(s), i);
        result.push_back(std::move(m));
    }
    return result;
}

}  // namespace bta
