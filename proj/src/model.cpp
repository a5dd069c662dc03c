#include "bta/model.hpp"

#include <cmath>

#include <json.hpp>

namespace bta {

void BtaConfig::validate() const {
    if (channels < 1) throw config_error("BtaConfig: channels must be >= 1");
    if (temporal_len < 1) throw config_error("BtaConfig: temporal_len must be >= 1");
    if (spectral_len < 1) throw config_error("BtaConfig: spectral_len must be >= 1");
    if (hidden < 1) throw config_error("BtaConfig: hidden must be >= 1");
    if (heads < 1 || hidden % heads != 0)
        throw config_error("BtaConfig: heads must divide hidden (" + std::to_string(heads) +
                           " vs " + std::to_string(hidden) + ")");
    if (centralities < 1) throw config_error("BtaConfig: centralities must be >= 1");
    if (mask_ratio <= 0.0 || mask_ratio >= 1.0)
        throw config_error("BtaConfig: mask_ratio must lie in (0,1)");
    if (learning_rate <= 0.0) throw config_error("BtaConfig: learning_rate must be > 0");
    if (batch_size < 2) throw config_error("BtaConfig: batch_size must be >= 2");
}

std::string BtaConfig::to_json() const {
    nlohmann::json j;
    j["channels"] = channels;
    j["temporal_len"] = temporal_len;
    j["spectral_len"] = spectral_len;
    j["hidden"] = hidden;
    j["heads"] = heads;
    j["centralities"] = centralities;
    j["learning_rate"] = learning_rate;
    j["batch_size"] = batch_size;
    j["epochs"] = epochs;
    j["pretrain_epochs"] = pretrain_epochs;
    j["mask_ratio"] = mask_ratio;
    j["patience"] = patience;
    j["seed"] = seed;
    j["use_attention"] = use_attention;
    j["use_centrality"] = use_centrality;
    return j.dump();
}

BtaConfig BtaConfig::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw config_error("BtaConfig: bad json: " + std::string(e.what()));
    }
    BtaConfig c;
    c.channels = j.value("channels", c.channels);
    c.temporal_len = j.value("temporal_len", c.temporal_len);
    c.spectral_len = j.value("spectral_len", c.spectral_len);
    c.hidden = j.value("hidden", c.hidden);
    c.heads = j.value("heads", c.heads);
    c.centralities = j.value("centralities", c.centralities);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.epochs = j.value("epochs", c.epochs);
    c.pretrain_epochs = j.value("pretrain_epochs", c.pretrain_epochs);
    c.mask_ratio = j.value("mask_ratio", c.mask_ratio);
    c.patience = j.value("patience", c.patience);
    c.seed = j.value("seed", c.seed);
    c.use_attention = j.value("use_attention", c.use_attention);
    c.use_centrality = j.value("use_centrality", c.use_centrality);
    return c;
}

namespace {

const char* stream_prefix(Stream s) { return s == Stream::temporal ? "t" : "s"; }

Matrix uniform_init(int rows, int cols, int fan_in, Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Matrix m(rows, cols);
    for (size_t i = 0; i < m.size(); ++i) m[i] = rng.uniform(-bound, bound);
    return m;
}

BatchNormState bn_from_store(const ParameterStore& store, const std::string& prefix) {
    BatchNormState state(store.value(prefix + ".run_mean").cols());
    state.running_mean = store.value(prefix + ".run_mean");
    state.running_var = store.value(prefix + ".run_var");
    return state;
}

void bn_to_store(const BatchNormState& state, ParameterStore& store,
                 const std::string& prefix) {
    store.value(prefix + ".run_mean") = state.running_mean;
    store.value(prefix + ".run_var") = state.running_var;
}

}  // namespace

BtaModel::BtaModel(BtaConfig config, const Montage& montage,
                   std::vector<std::string> channel_names)
    : config_(std::move(config)), channel_names_(std::move(channel_names)) {
    config_.validate();
    if (static_cast<int>(channel_names_.size()) != config_.channels)
        throw config_error("BtaModel: channel list length " +
                           std::to_string(channel_names_.size()) + " != channels " +
                           std::to_string(config_.channels));
    if (static_cast<int>(montage.centralities().size()) < config_.centralities)
        throw config_error("BtaModel: montage provides " +
                           std::to_string(montage.centralities().size()) +
                           " centralities, config wants " +
                           std::to_string(config_.centralities));
    const int E = config_.channels;
    for (int j = 0; j < config_.centralities; ++j) {
        const Point3& origin = montage.centralities()[j];
        Matrix r(E, 1), t(E, 1), p(E, 1);
        for (int e = 0; e < E; ++e) {
            const Spherical s = spherical_from_cartesian(
                montage.position(channel_names_[e]), origin);
            r(e, 0) = s.rho;
            t(e, 0) = s.theta;
            p(e, 0) = s.phi;
        }
        rho_.push_back(std::move(r));
        theta_.push_back(std::move(t));
        phi_.push_back(std::move(p));
    }
    init_params(config_.seed);
}

void BtaModel::init_params(uint64_t seed) {
    params_ = ParameterStore();
    Rng rng = Rng(seed).split("init");
    const int E = config_.channels;
    const int N = config_.temporal_len;
    const int B = config_.spectral_len;
    const int H = config_.hidden;
    const int D = config_.heads;
    const int EH = E * H;

    params_.add("t.W", uniform_init(H, N, N, rng));
    params_.add("t.B", Matrix(H, E));
    params_.add("s.W", uniform_init(H, B, B, rng));
    params_.add("s.B", Matrix(H, E));
    for (int j = 0; j < config_.centralities; ++j) {
        const std::string base = "cent." + std::to_string(j) + ".";
        for (const char* coord : {"rho", "theta", "phi"}) {
            Matrix m(1, H);
            for (size_t i = 0; i < m.size(); ++i) m[i] = rng.normal(0.0, 0.02);
            params_.add(base + coord, std::move(m));
        }
    }
    for (Stream stream : {Stream::temporal, Stream::spectral}) {
        const std::string p = stream_prefix(stream);
        for (int d = 0; d < D; ++d) {
            const std::string hb = p + ".attn." + std::to_string(d) + ".";
            params_.add(hb + "wq", uniform_init(H, H / D, H, rng));
            params_.add(hb + "wk", uniform_init(H, H / D, H, rng));
            params_.add(hb + "wv", uniform_init(H, H / D, H, rng));
        }
        params_.add(p + ".attn.wo", uniform_init(H, H, H, rng));
        params_.add(p + ".bn.gamma", Matrix(1, EH, 1.0));
        params_.add(p + ".bn.beta", Matrix(1, EH, 0.0));
        params_.add(p + ".bn.run_mean", Matrix(1, EH, 0.0), /*trainable=*/false);
        params_.add(p + ".bn.run_var", Matrix(1, EH, 1.0), /*trainable=*/false);
        const int F = stream == Stream::temporal ? N : B;
        params_.add(p + ".rec.W", uniform_init(H, F, H, rng));
    }
    params_.add("fuse.W", uniform_init(2 * EH, 2, 2 * EH, rng));
    params_.add("fuse.b", Matrix(1, 2));
}

Matrix BtaModel::normalize_temporal(const Matrix& temporal) {
    Matrix out = temporal;
    const int n = temporal.cols();
    for (int e = 0; e < temporal.rows(); ++e) {
        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += temporal(e, i);
        mean /= n;
        double var = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = temporal(e, i) - mean;
            var += d * d;
        }
        var /= n;
        const double inv = 1.0 / (std::sqrt(var) + 1e-9);
        for (int i = 0; i < n; ++i) out(e, i) = (temporal(e, i) - mean) * inv;
    }
    return out;
}

Matrix BtaModel::stream_input(Stream stream, const EegSample& s) const {
    if (stream == Stream::temporal) {
        if (s.temporal.rows() != config_.channels || s.temporal.cols() != config_.temporal_len)
            throw dimension_error("BtaModel: temporal sample " + s.temporal.shape_str() +
                                  ", expected " + std::to_string(config_.channels) + "x" +
                                  std::to_string(config_.temporal_len));
        return normalize_temporal(s.temporal);
    }
    if (s.spectral.rows() != config_.channels || s.spectral.cols() != config_.spectral_len)
        throw dimension_error("BtaModel: spectral sample " + s.spectral.shape_str() +
                              ", expected " + std::to_string(config_.channels) + "x" +
                              std::to_string(config_.spectral_len));
    return s.spectral;
}

struct BtaModel::StreamNodes {
    Tape::Node normed = -1;                 // S x EH after batch norm
    std::vector<Tape::Node> attention;     // per sample, E x E head-average
};

BtaModel::StreamNodes BtaModel::encode_stream(Tape& tape, Stream stream,
                                              const std::vector<const EegSample*>& batch,
                                              const std::vector<Matrix>* masked_override,
                                              BnMode mode, BatchNormState& bn_state,
                                              bool want_attention) {
    const std::string p = stream_prefix(stream);
    const int E = config_.channels;
    const int H = config_.hidden;
    const int D = config_.heads;

    Tape::Node w = params_.use(tape, p + ".W");
    Tape::Node bias = params_.use(tape, p + ".B");

    // shared multi-centrality encoding matrix: rows are per-channel sums of
    // coordinate-scaled embedding vectors
    Tape::Node encoding = -1;
    if (config_.use_centrality) {
        for (int j = 0; j < config_.centralities; ++j) {
            const std::string base = "cent." + std::to_string(j) + ".";
            Tape::Node term = tape.add(
                tape.add(tape.matmul(tape.constant(rho_[j]), params_.use(tape, base + "rho")),
                         tape.matmul(tape.constant(theta_[j]),
                                     params_.use(tape, base + "theta"))),
                tape.matmul(tape.constant(phi_[j]), params_.use(tape, base + "phi")));
            encoding = j == 0 ? term : tape.add(encoding, term);
        }
    }

    std::vector<AttentionHead> heads;
    Tape::Node wo = -1;
    if (config_.use_attention) {
        for (int d = 0; d < D; ++d) {
            const std::string hb = p + ".attn." + std::to_string(d) + ".";
            heads.push_back({params_.use(tape, hb + "wq"), params_.use(tape, hb + "wk"),
                             params_.use(tape, hb + "wv")});
        }
        wo = params_.use(tape, p + ".attn.wo");
    }

    StreamNodes out;
    std::vector<Tape::Node> flat;
    for (size_t i = 0; i < batch.size(); ++i) {
        Matrix input = masked_override ? (*masked_override)[i]
                                       : stream_input(stream, *batch[i]);
        // H_stream = W X^T + B, channels as columns; Z rows are channels
        Tape::Node x = tape.constant(std::move(input));
        Tape::Node h = tape.add(tape.matmul(w, tape.transpose(x)), bias);
        Tape::Node z = tape.transpose(h);
        if (config_.use_centrality) z = tape.add(z, encoding);

        Tape::Node z1 = z;
        if (config_.use_attention) {
            AttentionResult att = multihead_attention(tape, z, heads, wo);
            z1 = att.out;
            if (want_attention) {
                Tape::Node avg = att.attention[0];
                for (int d = 1; d < D; ++d) avg = tape.add(avg, att.attention[d]);
                out.attention.push_back(tape.scale(avg, 1.0 / D));
            }
        } else if (want_attention) {
            out.attention.push_back(tape.constant(Matrix(E, E)));
        }
        flat.push_back(tape.reshape(z1, 1, E * H));
    }
    Tape::Node stacked = batch.size() == 1 ? flat[0] : tape.concat_rows(flat);
    out.normed = tape.batch_norm(stacked, params_.use(tape, p + ".bn.gamma"),
                                 params_.use(tape, p + ".bn.beta"), bn_state, mode);
    return out;
}

double BtaModel::classify_loss(const std::vector<const EegSample*>& batch, bool with_grad,
                               bool train_mode, bool persist_bn) {
    if (batch.empty()) throw data_error("classify_loss: empty batch");
    const int S = static_cast<int>(batch.size());
    Tape tape;
    BatchNormState bn_t = bn_from_store(params_, "t.bn");
    BatchNormState bn_s = bn_from_store(params_, "s.bn");
    const BnMode mode = train_mode ? BnMode::train : BnMode::eval;

    StreamNodes st = encode_stream(tape, Stream::temporal, batch, nullptr, mode, bn_t, false);
    StreamNodes ss = encode_stream(tape, Stream::spectral, batch, nullptr, mode, bn_s, false);

    Tape::Node fused = tape.concat_cols({st.normed, ss.normed});
    Tape::Node logits = tape.add_rowvec(tape.matmul(tape.gelu(fused), params_.use(tape, "fuse.W")),
                                        params_.use(tape, "fuse.b"));
    Tape::Node probs = tape.clamp(tape.row_softmax(logits), kProbClamp, 1.0 - kProbClamp);
    Matrix onehot(S, 2);
    for (int i = 0; i < S; ++i) {
        const int y = batch[i]->label;
        if (y != 0 && y != 1)
            throw data_error("classify_loss: sample without a 0/1 label (group '" +
                             batch[i]->group_id + "')");
        onehot(i, y) = 1.0;
    }
    Tape::Node loss = tape.scale(
        tape.sum(tape.mul(tape.log(probs), tape.constant(std::move(onehot)))), -1.0 / S);

    if (with_grad) {
        tape.backward(loss);
        params_.collect_grads(tape);
    }
    if (persist_bn && train_mode) {
        bn_to_store(bn_t, params_, "t.bn");
        bn_to_store(bn_s, params_, "s.bn");
    }
    const double value = tape.value(loss)(0, 0);
    if (!std::isfinite(value)) throw numeric_error("classify_loss: non-finite loss");
    return value;
}

double BtaModel::reconstruct_loss(const std::vector<const EegSample*>& batch, Rng& mask_rng,
                                  bool with_grad, bool persist_bn) {
    if (batch.empty()) throw data_error("reconstruct_loss: empty batch");
    const int S = static_cast<int>(batch.size());
    const int E = config_.channels;
    const int H = config_.hidden;
    Tape tape;
    BatchNormState bn_t = bn_from_store(params_, "t.bn");
    BatchNormState bn_s = bn_from_store(params_, "s.bn");
    const BnMode mode = S >= 2 ? BnMode::train : BnMode::eval;

    Tape::Node total = -1;
    for (Stream stream : {Stream::temporal, Stream::spectral}) {
        const std::string p = stream_prefix(stream);
        const int F = stream == Stream::temporal ? config_.temporal_len
                                                 : config_.spectral_len;
        // draw per-sample masks: 0 hides the entry and marks it for the loss
        std::vector<Matrix> masked;
        Matrix targets(S * E, F);
        Matrix masks(S * E, F);
        for (int i = 0; i < S; ++i) {
            Matrix input = stream_input(stream, *batch[i]);
            Matrix mask = draw_mask(E, F, config_.mask_ratio, mask_rng);
            Matrix hidden_input = hadamard(input, mask);
            for (int e = 0; e < E; ++e)
                for (int f = 0; f < F; ++f) {
                    targets(i * E + e, f) = input(e, f);
                    masks(i * E + e, f) = mask(e, f);
                }
            masked.push_back(std::move(hidden_input));
        }
        BatchNormState& bn = stream == Stream::temporal ? bn_t : bn_s;
        StreamNodes nodes = encode_stream(tape, stream, batch, &masked, mode, bn, false);
        // rows of the normalized batch, regrouped per sample for the head
        Tape::Node z2 = tape.reshape(nodes.normed, S * E, H);
        Tape::Node reconstructed = tape.matmul(z2, params_.use(tape, p + ".rec.W"));
        MaskedMse mse = masked_mse(tape, reconstructed, targets, masks);
        total = total == -1 ? mse.loss : tape.add(total, mse.loss);
    }
    Tape::Node loss = tape.scale(total, 1.0 / S);

    if (with_grad) {
        tape.backward(loss);
        params_.collect_grads(tape);
    }
    if (persist_bn && mode == BnMode::train) {
        bn_to_store(bn_t, params_, "t.bn");
        bn_to_store(bn_s, params_, "s.bn");
    }
    const double value = tape.value(loss)(0, 0);
    if (!std::isfinite(value)) throw numeric_error("reconstruct_loss: non-finite loss");
    return value;
}

std::vector<Prediction> BtaModel::predict(const std::vector<const EegSample*>& batch,
                                          bool want_attention) {
    if (batch.empty()) return {};
    Tape tape;
    BatchNormState bn_t = bn_from_store(params_, "t.bn");
    BatchNormState bn_s = bn_from_store(params_, "s.bn");
    StreamNodes st = encode_stream(tape, Stream::temporal, batch, nullptr, BnMode::eval,
                                   bn_t, want_attention);
    StreamNodes ss = encode_stream(tape, Stream::spectral, batch, nullptr, BnMode::eval,
                                   bn_s, want_attention);
    Tape::Node fused = tape.concat_cols({st.normed, ss.normed});
    Tape::Node logits = tape.add_rowvec(tape.matmul(tape.gelu(fused), params_.use(tape, "fuse.W")),
                                        params_.use(tape, "fuse.b"));
    Tape::Node probs = tape.row_softmax(logits);

    std::vector<Prediction> out(batch.size());
    const Matrix& pv = tape.value(probs);
    for (size_t i = 0; i < batch.size(); ++i) {
        out[i].prob_satisfied = pv(static_cast<int>(i), 1);
        out[i].prob_unsatisfied = pv(static_cast<int>(i), 0);
        if (want_attention) {
            out[i].attention_temporal = tape.value(st.attention[i]);
            out[i].attention_spectral = tape.value(ss.attention[i]);
        }
    }
    return out;
}

Matrix draw_mask(int rows, int cols, double mask_ratio, Rng& rng) {
    Matrix mask(rows, cols);
    for (size_t k = 0; k < mask.size(); ++k)
        mask[k] = rng.uniform() < mask_ratio ? 0.0 : 1.0;
    return mask;
}

Matrix BtaModel::centrality_encoding(int channel, int frame) const {
    if (channel < 0 || channel >= config_.channels)
        throw data_error("centrality_encoding: channel index out of range");
    if (frame < 0 || frame >= config_.centralities)
        throw config_error("centrality_encoding: frame index out of range");
    const std::string base = "cent." + std::to_string(frame) + ".";
    Matrix out = scale(params_.value(base + "rho"), rho_[frame](channel, 0));
    out = add(out, scale(params_.value(base + "theta"), theta_[frame](channel, 0)));
    out = add(out, scale(params_.value(base + "phi"), phi_[frame](channel, 0)));
    return out;
}

Matrix BtaModel::encoded_input(Stream stream, const EegSample& sample) {
    const std::string p = stream_prefix(stream);
    Matrix x = stream_input(stream, sample);
    Matrix z = bta::transpose(
        add(matmul(params_.value(p + ".W"), bta::transpose(x)), params_.value(p + ".B")));
    if (config_.use_centrality) {
        for (int e = 0; e < config_.channels; ++e)
            for (int j = 0; j < config_.centralities; ++j) {
                const Matrix enc = centrality_encoding(e, j);
                for (int h = 0; h < config_.hidden; ++h) z(e, h) += enc(0, h);
            }
    }
    return z;
}

void transfer_centrality_embeddings(const ParameterStore& source, ParameterStore& target,
                                    int centralities) {
    for (int j = 0; j < centralities; ++j) {
        const std::string base = "cent." + std::to_string(j) + ".";
        for (const char* coord : {"rho", "theta", "phi"}) {
            const std::string name = base + coord;
            if (!source.has(name) || !target.has(name))
                throw config_error("transfer_centrality_embeddings: missing '" + name + "'");
            const Matrix& src = source.value(name);
            Matrix& dst = target.value(name);
            if (!src.same_shape(dst))
                throw config_error("transfer_centrality_embeddings: shape mismatch for '" +
                                   name + "': " + src.shape_str() + " vs " + dst.shape_str());
            dst = src;
        }
    }
}

}  // namespace bta
