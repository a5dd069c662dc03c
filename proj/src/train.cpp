#include "bta/train.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <cmath>
#include <sstream>
#include <thread>

#include "bta/metrics.hpp"

namespace bta {

namespace {

std::vector<const EegSample*> gather(const Dataset& ds, const std::vector<size_t>& indices,
                                     size_t from, size_t to) {
    std::vector<const EegSample*> out;
    out.reserve(to - from);
    for (size_t i = from; i < to; ++i) out.push_back(&ds.samples[indices[i]]);
    return out;
}

// epoch loop shared by supervised training and pretraining
template <typename StepFn>
std::vector<double> run_epochs(const Dataset& ds, std::vector<size_t> indices, int epochs,
                               int batch_size, int patience, Rng rng, StepFn step) {
    std::vector<double> losses;
    double best = std::numeric_limits<double>::infinity();
    int stale = 0;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(indices);
        double total = 0.0;
        size_t batches = 0;
        for (size_t start = 0; start < indices.size(); start += batch_size) {
            const size_t end = std::min(indices.size(), start + batch_size);
            if (end - start < 2 && indices.size() >= 2) continue;  // batch norm needs pairs
            total += step(gather(ds, indices, start, end), epoch);
            ++batches;
        }
        const double mean = batches ? total / static_cast<double>(batches) : 0.0;
        losses.push_back(mean);
        if (mean < best - 1e-6) {
            best = mean;
            stale = 0;
        } else if (++stale >= patience) {
            break;
        }
    }
    return losses;
}

}  // namespace

std::string TrainReport::to_csv() const {
    std::ostringstream out;
    out << "fold,auc,f1,train_loss\n";
    out.precision(6);
    out << std::fixed;
    for (const FoldMetrics& f : folds)
        out << f.fold << "," << f.auc << "," << f.f1 << "," << f.train_loss << "\n";
    out << "mean," << mean_auc << "," << mean_f1 << "," << mean_train_loss << "\n";
    return out.str();
}

PretrainReport pretrain_subtask(BtaModel& model, const Dataset& dataset) {
    const BtaConfig& cfg = model.config();
    std::vector<size_t> indices(dataset.samples.size());
    for (size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    AdamState adam(cfg.learning_rate);
    Rng root = Rng(cfg.seed).split("pretrain");
    Rng mask_rng = root.split("masks");

    PretrainReport report;
    report.epoch_losses = run_epochs(
        dataset, std::move(indices), cfg.pretrain_epochs, cfg.batch_size, cfg.patience,
        root.split("shuffle"),
        [&](const std::vector<const EegSample*>& batch, int) {
            model.params().zero_grads();
            const double loss = model.reconstruct_loss(batch, mask_rng, /*with_grad=*/true,
                                                       /*persist_bn=*/true);
            adam_step(model.params(), adam);
            return loss;
        });
    return report;
}

double train_supervised(BtaModel& model, const Dataset& dataset,
                        const std::vector<size_t>& train_indices, uint64_t seed) {
    const BtaConfig& cfg = model.config();
    if (train_indices.empty()) throw data_error("train_supervised: empty training fold");
    AdamState adam(cfg.learning_rate);
    Rng root = Rng(seed).split("train");

    std::vector<double> losses = run_epochs(
        dataset, train_indices, cfg.epochs, cfg.batch_size, cfg.patience,
        root.split("shuffle"),
        [&](const std::vector<const EegSample*>& batch, int) {
            model.params().zero_grads();
            const double loss = model.classify_loss(batch, /*with_grad=*/true,
                                                    /*train_mode=*/true, /*persist_bn=*/true);
            adam_step(model.params(), adam);
            return loss;
        });
    return losses.empty() ? 0.0 : losses.back();
}

std::pair<double, double> evaluate_model(BtaModel& model, const Dataset& dataset,
                                         const std::vector<size_t>& indices) {
    std::vector<ScoredLabel> scored;
    scored.reserve(indices.size());
    constexpr size_t kChunk = 64;
    for (size_t start = 0; start < indices.size(); start += kChunk) {
        const size_t end = std::min(indices.size(), start + kChunk);
        std::vector<const EegSample*> batch;
        for (size_t i = start; i < end; ++i) batch.push_back(&dataset.samples[indices[i]]);
        auto preds = model.predict(batch);
        for (size_t i = 0; i < preds.size(); ++i)
            scored.push_back({preds[i].prob_satisfied, dataset.samples[indices[start + i]].label});
    }
    return {auc(scored), f1(scored)};
}

namespace {

template <typename FoldFn>
void parallel_folds(int k, int jobs, FoldFn fn) {
    jobs = std::max(1, std::min(jobs, k));
    if (jobs == 1) {
        for (int f = 0; f < k; ++f) fn(f);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&] {
            for (int f = next.fetch_add(1); f < k; f = next.fetch_add(1)) fn(f);
        });
    for (auto& t : pool) t.join();
}

}  // namespace

TrainReport train_classifier(const Dataset& dataset, const FoldPlan& plan,
                             const BtaConfig& config, const ParameterStore* pretrained,
                             int jobs) {
    if (plan.assignment.size() != dataset.samples.size())
        throw config_error("train_classifier: fold plan does not cover the dataset");
    TrainReport report;
    report.folds.resize(plan.k);
    std::vector<ParameterStore> fold_params(plan.k);
    std::vector<std::exception_ptr> errors(plan.k);

    parallel_folds(plan.k, jobs, [&](int fold) {
        try {
            BtaConfig fold_cfg = config;
            fold_cfg.seed =
                Rng(config.seed).split("fold").split(static_cast<uint64_t>(fold)).next_u64();
            std::vector<size_t> train_idx, eval_idx;
            for (size_t i = 0; i < plan.assignment.size(); ++i)
                (plan.assignment[i] == fold ? eval_idx : train_idx).push_back(i);
            if (train_idx.empty()) throw data_error("train_classifier: empty training fold");
            if (eval_idx.empty())
                throw data_error("train_classifier: empty evaluation fold");
            BtaModel model(fold_cfg, dataset.montage, dataset.channel_names);
            if (pretrained)
                transfer_centrality_embeddings(*pretrained, model.params(),
                                               config.centralities);
            const double train_loss = train_supervised(model, dataset, train_idx, fold_cfg.seed);
            auto [fold_auc, fold_f1] = evaluate_model(model, dataset, eval_idx);
            report.folds[fold] = FoldMetrics{fold, fold_auc, fold_f1, train_loss};
            fold_params[fold] = model.params();
        } catch (...) {
            errors[fold] = std::current_exception();
        }
    });
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    for (const FoldMetrics& f : report.folds) {
        report.mean_auc += f.auc;
        report.mean_f1 += f.f1;
        report.mean_train_loss += f.train_loss;
        if (report.best_fold < 0 || f.auc > report.folds[report.best_fold].auc)
            report.best_fold = f.fold;
    }
    report.mean_auc /= plan.k;
    report.mean_f1 /= plan.k;
    report.mean_train_loss /= plan.k;
    report.best_params = fold_params[report.best_fold];
    return report;
}

namespace {

// flattened-input two-layer perceptron on the same tape machinery
struct MlpModel {
    MlpConfig cfg;
    int input_dim;
    ParameterStore params;

    MlpModel(const MlpConfig& c, int in_dim) : cfg(c), input_dim(in_dim) {
        Rng rng = Rng(c.seed).split("mlp-init");
        const double b1 = 1.0 / std::sqrt(static_cast<double>(in_dim));
        Matrix w1(in_dim, c.hidden);
        for (size_t i = 0; i < w1.size(); ++i) w1[i] = rng.uniform(-b1, b1);
        params.add("w1", std::move(w1));
        params.add("b1", Matrix(1, c.hidden));
        const double b2 = 1.0 / std::sqrt(static_cast<double>(c.hidden));
        Matrix w2(c.hidden, 2);
        for (size_t i = 0; i < w2.size(); ++i) w2[i] = rng.uniform(-b2, b2);
        params.add("w2", std::move(w2));
        params.add("b2", Matrix(1, 2));
    }

    Matrix flatten(const EegSample& s) const {
        const Matrix t = BtaModel::normalize_temporal(s.temporal);
        Matrix row(1, input_dim);
        size_t k = 0;
        for (size_t i = 0; i < t.size(); ++i) row[k++] = t[i];
        for (size_t i = 0; i < s.spectral.size(); ++i) row[k++] = s.spectral[i];
        return row;
    }

    double loss(const std::vector<const EegSample*>& batch, bool with_grad) {
        const int S = static_cast<int>(batch.size());
        Tape tape;
        std::vector<Tape::Node> rows;
        for (const EegSample* s : batch) rows.push_back(tape.constant(flatten(*s)));
        Tape::Node x = S == 1 ? rows[0] : tape.concat_rows(rows);
        Tape::Node h = tape.gelu(
            tape.add_rowvec(tape.matmul(x, params.use(tape, "w1")), params.use(tape, "b1")));
        Tape::Node logits =
            tape.add_rowvec(tape.matmul(h, params.use(tape, "w2")), params.use(tape, "b2"));
        Tape::Node probs = tape.clamp(tape.row_softmax(logits), kProbClamp, 1.0 - kProbClamp);
        Matrix onehot(S, 2);
        for (int i = 0; i < S; ++i) onehot(i, batch[i]->label) = 1.0;
        Tape::Node loss_node = tape.scale(
            tape.sum(tape.mul(tape.log(probs), tape.constant(std::move(onehot)))), -1.0 / S);
        if (with_grad) {
            tape.backward(loss_node);
            params.collect_grads(tape);
        }
        return tape.value(loss_node)(0, 0);
    }

    double prob_satisfied(const EegSample& s) {
        Tape tape;
        Tape::Node x = tape.constant(flatten(s));
        Tape::Node h = tape.gelu(
            tape.add_rowvec(tape.matmul(x, params.use(tape, "w1")), params.use(tape, "b1")));
        Tape::Node logits =
            tape.add_rowvec(tape.matmul(h, params.use(tape, "w2")), params.use(tape, "b2"));
        return tape.value(tape.row_softmax(logits))(0, 1);
    }
};

}  // namespace

TrainReport baseline_mlp(const Dataset& dataset, const FoldPlan& plan,
                         const MlpConfig& config, int jobs) {
    if (plan.assignment.size() != dataset.samples.size())
        throw config_error("baseline_mlp: fold plan does not cover the dataset");
    const int E = dataset.channel_count();
    const int in_dim = E * (dataset.samples.at(0).temporal.cols() +
                            dataset.samples.at(0).spectral.cols());
    TrainReport report;
    report.folds.resize(plan.k);
    std::vector<ParameterStore> fold_params(plan.k);
    std::vector<std::exception_ptr> errors(plan.k);

    parallel_folds(plan.k, jobs, [&](int fold) {
        try {
            MlpConfig fold_cfg = config;
            fold_cfg.seed =
                Rng(config.seed).split("mlp-fold").split(static_cast<uint64_t>(fold)).next_u64();
            std::vector<size_t> train_idx, eval_idx;
            for (size_t i = 0; i < plan.assignment.size(); ++i)
                (plan.assignment[i] == fold ? eval_idx : train_idx).push_back(i);
            if (train_idx.empty()) throw data_error("baseline_mlp: empty training fold");
            MlpModel model(fold_cfg, in_dim);
            AdamState adam(fold_cfg.learning_rate);
            auto losses = run_epochs(
                dataset, train_idx, fold_cfg.epochs, fold_cfg.batch_size, fold_cfg.patience,
                Rng(fold_cfg.seed).split("shuffle"),
                [&](const std::vector<const EegSample*>& batch, int) {
                    model.params.zero_grads();
                    const double l = model.loss(batch, true);
                    adam_step(model.params, adam);
                    return l;
                });
            std::vector<ScoredLabel> scored;
            for (size_t i : eval_idx)
                scored.push_back(
                    {model.prob_satisfied(dataset.samples[i]), dataset.samples[i].label});
            report.folds[fold] = FoldMetrics{fold, auc(scored), f1(scored),
                                             losses.empty() ? 0.0 : losses.back()};
            fold_params[fold] = model.params;
        } catch (...) {
            errors[fold] = std::current_exception();
        }
    });
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    for (const FoldMetrics& f : report.folds) {
        report.mean_auc += f.auc;
        report.mean_f1 += f.f1;
        report.mean_train_loss += f.train_loss;
        if (report.best_fold < 0 || f.auc > report.folds[report.best_fold].auc)
            report.best_fold = f.fold;
    }
    report.mean_auc /= plan.k;
    report.mean_f1 /= plan.k;
    report.mean_train_loss /= plan.k;
    report.best_params = fold_params[report.best_fold];
    return report;
}

Matrix export_attention_map(BtaModel& model, const Dataset& dataset, ClassFilter filter,
                            Stream stream) {
    std::vector<const EegSample*> selected;
    for (const EegSample& s : dataset.samples) {
        if (filter == ClassFilter::satisfied && s.label != 1) continue;
        if (filter == ClassFilter::unsatisfied && s.label != 0) continue;
        selected.push_back(&s);
    }
    if (selected.empty())
        throw data_error("export_attention_map: no samples match the class filter");

    const int E = model.config().channels;
    Matrix sum(E, E);
    constexpr size_t kChunk = 64;
    for (size_t start = 0; start < selected.size(); start += kChunk) {
        const size_t end = std::min(selected.size(), start + kChunk);
        std::vector<const EegSample*> batch(selected.begin() + start, selected.begin() + end);
        auto preds = model.predict(batch, /*want_attention=*/true);
        for (const Prediction& p : preds) {
            const Matrix& a =
                stream == Stream::spectral ? p.attention_spectral : p.attention_temporal;
            for (size_t i = 0; i < sum.size(); ++i) sum[i] += a[i];
        }
    }
    return scale(sum, 1.0 / static_cast<double>(selected.size()));
}

std::string attention_map_csv(const Matrix& map,
                              const std::vector<std::string>& channel_names) {
    if (map.rows() != static_cast<int>(channel_names.size()) || map.rows() != map.cols())
        throw dimension_error("attention_map_csv: map " + map.shape_str() + " vs " +
                              std::to_string(channel_names.size()) + " channels");
    std::ostringstream out;
    out << "channel";
    for (const std::string& name : channel_names) out << "," << name;
    out << "\n";
    out.precision(9);
    out << std::fixed;
    for (int i = 0; i < map.rows(); ++i) {
        out << channel_names[i];
        for (int j = 0; j < map.cols(); ++j) out << "," << map(i, j);
        out << "\n";
    }
    return out.str();
}

}  // namespace bta
