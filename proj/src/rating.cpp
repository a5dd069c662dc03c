#include "bta/rating.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bta/adam.hpp"
#include "bta/metrics.hpp"
#include "bta/rng.hpp"

namespace bta {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

SplitPlan split_811(size_t n, uint64_t seed) {
    if (n < 10) throw data_error("split_811: need at least 10 records");
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng = Rng(seed).split("split811");
    rng.shuffle(order);
    SplitPlan plan;
    const size_t n_test = n / 10;
    const size_t n_valid = n / 10;
    for (size_t i = 0; i < n; ++i) {
        if (i < n_test) plan.test.push_back(order[i]);
        else if (i < n_test + n_valid) plan.valid.push_back(order[i]);
        else plan.train.push_back(order[i]);
    }
    return plan;
}

MixedLabels mix_labels(const std::vector<Interaction>& interactions,
                       const std::vector<size_t>& train_indices, double alpha,
                       uint64_t seed) {
    if (alpha < 0.0 || alpha > 1.0) throw config_error("mix_labels: alpha must be in [0,1]");
    const size_t n = train_indices.size();
    const size_t n_true = static_cast<size_t>(std::floor(alpha * static_cast<double>(n)));
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng = Rng(seed).split("mix-labels");
    rng.shuffle(order);

    MixedLabels out;
    out.targets.resize(n);
    out.sources.resize(n);
    for (size_t pos = 0; pos < n; ++pos) {
        const size_t slot = order[pos];
        const Interaction& it = interactions.at(train_indices[slot]);
        if (pos < n_true) {
            out.targets[slot] = it.true_label;
            out.sources[slot] = LabelSource::truth;
        } else {
            if (!it.has_estimate())
                throw data_error("mix_labels: interaction for item '" + it.item_id +
                                 "' has no estimated satisfaction but alpha < 1");
            out.targets[slot] = it.estimated;
            out.sources[slot] = LabelSource::estimated;
        }
    }
    return out;
}

FeatureSpace FeatureSpace::build(const std::vector<Interaction>& interactions) {
    if (interactions.empty()) throw data_error("FeatureSpace: no interactions");
    FeatureSpace fs;
    fs.user_dim = static_cast<int>(interactions[0].user_features.size());
    for (const Interaction& it : interactions) {
        if (static_cast<int>(it.user_features.size()) != fs.user_dim)
            throw data_error("FeatureSpace: inconsistent user vector length");
        if (std::find(fs.item_ids.begin(), fs.item_ids.end(), it.item_id) ==
            fs.item_ids.end())
            fs.item_ids.push_back(it.item_id);
    }
    return fs;
}

std::vector<double> FeatureSpace::encode(const Interaction& it) const {
    std::vector<double> x(static_cast<size_t>(dim()), 0.0);
    for (int i = 0; i < user_dim; ++i) x[i] = it.user_features[i];
    auto pos = std::find(item_ids.begin(), item_ids.end(), it.item_id);
    if (pos == item_ids.end())
        throw data_error("FeatureSpace: unknown item '" + it.item_id + "'");
    x[user_dim + static_cast<size_t>(pos - item_ids.begin())] = 1.0;
    return x;
}

double LrModel::predict(const std::vector<double>& x) const {
    double z = b;
    for (size_t i = 0; i < x.size(); ++i) z += w(0, static_cast<int>(i)) * x[i];
    return sigmoid(z);
}

LrModel lr_train(const std::vector<std::vector<double>>& features,
                 const std::vector<double>& targets, int epochs, double learning_rate,
                 uint64_t seed) {
    if (features.empty()) throw data_error("lr_train: empty training set");
    if (features.size() != targets.size())
        throw dimension_error("lr_train: features/targets size mismatch");
    const int dim = static_cast<int>(features[0].size());
    ParameterStore store;
    store.add("w", Matrix(1, dim));
    store.add("b", Matrix(1, 1));
    AdamState adam(learning_rate);
    Rng rng = Rng(seed).split("lr");

    std::vector<size_t> order(features.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    constexpr size_t kBatch = 32;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        for (size_t start = 0; start < order.size(); start += kBatch) {
            const size_t end = std::min(order.size(), start + kBatch);
            store.zero_grads();
            Matrix& gw = store.grad("w");
            Matrix& gb = store.grad("b");
            for (size_t i = start; i < end; ++i) {
                const auto& x = features[order[i]];
                double z = store.value("b")(0, 0);
                for (int d = 0; d < dim; ++d) z += store.value("w")(0, d) * x[d];
                const double err = (sigmoid(z) - targets[order[i]]) /
                                   static_cast<double>(end - start);
                for (int d = 0; d < dim; ++d) gw(0, d) += err * x[d];
                gb(0, 0) += err;
            }
            adam_step(store, adam);
        }
    }
    LrModel model;
    model.w = store.value("w");
    model.b = store.value("b")(0, 0);
    return model;
}

double FmModel::logit(const std::vector<double>& x) const {
    double z = w0;
    for (size_t i = 0; i < x.size(); ++i) z += w(0, static_cast<int>(i)) * x[i];
    // O(k n) pairwise term
    for (int f = 0; f < v.cols(); ++f) {
        double s = 0.0, s2 = 0.0;
        for (size_t i = 0; i < x.size(); ++i) {
            const double t = v(static_cast<int>(i), f) * x[i];
            s += t;
            s2 += t * t;
        }
        z += 0.5 * (s * s - s2);
    }
    return z;
}

double FmModel::predict(const std::vector<double>& x) const { return sigmoid(logit(x)); }

FmModel fm_train(const std::vector<std::vector<double>>& features,
                 const std::vector<double>& targets, int k, int epochs,
                 double learning_rate, uint64_t seed) {
    if (features.empty()) throw data_error("fm_train: empty training set");
    if (k < 1) throw config_error("fm_train: k must be >= 1");
    const int dim = static_cast<int>(features[0].size());
    ParameterStore store;
    store.add("w0", Matrix(1, 1));
    store.add("w", Matrix(1, dim));
    Rng rng = Rng(seed).split("fm");
    Matrix v(dim, k);
    for (size_t i = 0; i < v.size(); ++i) v[i] = rng.normal(0.0, 0.01);
    store.add("v", std::move(v));
    AdamState adam(learning_rate);

    std::vector<size_t> order(features.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    constexpr size_t kBatch = 32;
    std::vector<double> sums(static_cast<size_t>(k));
    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order);
        for (size_t start = 0; start < order.size(); start += kBatch) {
            const size_t end = std::min(order.size(), start + kBatch);
            store.zero_grads();
            const Matrix& wv = store.value("v");
            const Matrix& ww = store.value("w");
            Matrix& gw0 = store.grad("w0");
            Matrix& gw = store.grad("w");
            Matrix& gv = store.grad("v");
            for (size_t i = start; i < end; ++i) {
                const auto& x = features[order[i]];
                double z = store.value("w0")(0, 0);
                for (int d = 0; d < dim; ++d) z += ww(0, d) * x[d];
                for (int f = 0; f < k; ++f) {
                    double s = 0.0, s2 = 0.0;
                    for (int d = 0; d < dim; ++d) {
                        const double t = wv(d, f) * x[d];
                        s += t;
                        s2 += t * t;
                    }
                    sums[static_cast<size_t>(f)] = s;
                    z += 0.5 * (s * s - s2);
                }
                const double err = (sigmoid(z) - targets[order[i]]) /
                                   static_cast<double>(end - start);
                gw0(0, 0) += err;
                for (int d = 0; d < dim; ++d) {
                    if (x[d] == 0.0) continue;
                    gw(0, d) += err * x[d];
                    for (int f = 0; f < k; ++f)
                        gv(d, f) += err * x[d] * (sums[static_cast<size_t>(f)] - wv(d, f) * x[d]);
                }
            }
            adam_step(store, adam);
        }
    }
    FmModel model;
    model.w0 = store.value("w0")(0, 0);
    model.w = store.value("w");
    model.v = store.value("v");
    return model;
}

namespace {

double test_auc(const std::vector<Interaction>& interactions, const FeatureSpace& fs,
                const std::vector<size_t>& test_idx,
                const std::function<double(const std::vector<double>&)>& predict) {
    std::vector<ScoredLabel> scored;
    scored.reserve(test_idx.size());
    for (size_t i : test_idx)
        scored.push_back({predict(fs.encode(interactions[i])),
                          interactions[i].true_label >= 0.5 ? 1 : 0});
    return auc(scored);
}

}  // namespace

std::vector<SweepRow> run_alpha_sweep(const std::vector<Interaction>& interactions,
                                      const SweepConfig& config) {
    const FeatureSpace fs = FeatureSpace::build(interactions);
    const SplitPlan plan = split_811(interactions.size(), config.seed);

    std::vector<SweepRow> rows;
    for (double alpha : config.alphas) {
        const MixedLabels mixed =
            mix_labels(interactions, plan.train, alpha, config.seed);
        for (const bool with_estimates : {false, true}) {
            // assemble the training set for this condition
            std::vector<std::vector<double>> feats;
            std::vector<double> targets;
            for (size_t slot = 0; slot < plan.train.size(); ++slot) {
                if (!with_estimates && mixed.sources[slot] != LabelSource::truth) continue;
                feats.push_back(fs.encode(interactions[plan.train[slot]]));
                targets.push_back(mixed.targets[slot]);
            }
            if (feats.size() < 2) continue;  // T(0) without estimates: nothing to fit
            const std::string condition = with_estimates ? "T+S" : "T";
            const uint64_t model_seed =
                Rng(config.seed).split(condition).split(static_cast<uint64_t>(alpha * 1000))
                    .next_u64();

            LrModel lr = lr_train(feats, targets, config.epochs, config.learning_rate,
                                  model_seed);
            rows.push_back({"lr", alpha, condition,
                            test_auc(interactions, fs, plan.test,
                                     [&](const std::vector<double>& x) {
                                         return lr.predict(x);
                                     })});
            FmModel fm = fm_train(feats, targets, config.fm_factors, config.epochs,
                                  config.learning_rate, model_seed);
            rows.push_back({"fm", alpha, condition,
                            test_auc(interactions, fs, plan.test,
                                     [&](const std::vector<double>& x) {
                                         return fm.predict(x);
                                     })});
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "model,alpha,condition,auc\n";
    out.precision(6);
    out << std::fixed;
    for (const SweepRow& r : rows)
        out << r.model << "," << r.alpha << "," << r.condition << "," << r.auc << "\n";
    return out.str();
}

std::vector<Interaction> load_interactions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("load_interactions: cannot open " + path.string());
    std::vector<Interaction> out;
    std::string line;
    size_t expected_dim = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
        if (tokens.size() < 4)
            throw data_error("load_interactions: short line '" + line + "'");
        Interaction it;
        const size_t dim = tokens.size() - 3;
        if (expected_dim == 0) expected_dim = dim;
        if (dim != expected_dim)
            throw data_error("load_interactions: inconsistent feature dimension");
        it.user_features.reserve(dim);
        for (size_t i = 0; i < dim; ++i) it.user_features.push_back(std::stod(tokens[i]));
        it.item_id = tokens[dim];
        it.true_label = std::stod(tokens[dim + 1]);
        if (tokens[dim + 2] != "-") it.estimated = std::stod(tokens[dim + 2]);
        out.push_back(std::move(it));
    }
    if (out.empty()) throw data_error("load_interactions: no records in " + path.string());
    return out;
}

void save_interactions(const std::vector<Interaction>& interactions,
                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw data_error("save_interactions: cannot open " + path.string());
    out.precision(17);
    for (const Interaction& it : interactions) {
        for (double v : it.user_features) out << v << " ";
        out << it.item_id << " " << it.true_label << " ";
        if (it.has_estimate()) out << it.estimated;
        else out << "-";
        out << "\n";
    }
    if (!out) throw data_error("save_interactions: write failed for " + path.string());
}

std::vector<Interaction> synth_interactions(const RatingSynthConfig& config) {
    if (config.users < 1 || config.items < 1)
        throw config_error("synth_interactions: users and items must be >= 1");
    Rng master = Rng(config.seed).split("rating-synth");
    Rng user_rng = master.split("users");
    Rng truth_rng = master.split("truth");
    Rng est_rng = master.split("estimates");

    // ground-truth weights over the profile space plus per-item effects
    std::vector<double> weights(static_cast<size_t>(config.user_dim));
    const double scale = 2.0 / std::sqrt(static_cast<double>(config.user_dim));
    for (double& w : weights) w = truth_rng.normal(0.0, scale);
    std::vector<double> item_bias(static_cast<size_t>(config.items));
    for (double& b : item_bias) b = truth_rng.normal(0.0, 0.8);

    std::vector<Interaction> out;
    out.reserve(static_cast<size_t>(config.users) * config.items);
    for (int u = 0; u < config.users; ++u) {
        std::vector<double> profile(static_cast<size_t>(config.user_dim));
        for (double& p : profile) p = user_rng.normal();
        for (int v = 0; v < config.items; ++v) {
            Interaction it;
            it.user_features = profile;
            it.item_id = "video-" + std::to_string(v);
            double logit = item_bias[static_cast<size_t>(v)];
            for (int d = 0; d < config.user_dim; ++d)
                logit += weights[static_cast<size_t>(d)] * profile[static_cast<size_t>(d)];
            it.true_label = logit > 0.0 ? 1.0 : 0.0;
            if (config.independent_estimates) {
                it.estimated = est_rng.uniform();
            } else {
                it.estimated = sigmoid(logit + est_rng.normal(0.0, config.estimate_noise));
            }
            out.push_back(std::move(it));
        }
    }
    return out;
}

}  // namespace bta
