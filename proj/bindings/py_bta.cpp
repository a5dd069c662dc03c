#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bta/eeg.hpp"
#include "bta/folds.hpp"
#include "bta/metrics.hpp"
#include "bta/model.hpp"
#include "bta/montage.hpp"
#include "bta/ops.hpp"
#include "bta/rating.hpp"
#include "bta/rerank.hpp"
#include "bta/synth.hpp"
#include "bta/text.hpp"
#include "bta/train.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

bta::Matrix matrix_from_numpy(const py::array_t<double>& a) {
    const auto buf = a.request();
    if (buf.ndim != 2) throw bta::dimension_error("expected a 2-D array");
    bta::Matrix m(static_cast<int>(buf.shape[0]), static_cast<int>(buf.shape[1]));
    const auto r = a.unchecked<2>();
    for (py::ssize_t i = 0; i < buf.shape[0]; ++i)
        for (py::ssize_t j = 0; j < buf.shape[1]; ++j)
            m(static_cast<int>(i), static_cast<int>(j)) = r(i, j);
    return m;
}

py::array_t<double> numpy_from_matrix(const bta::Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    auto w = out.mutable_unchecked<2>();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) w(i, j) = m(i, j);
    return out;
}

std::vector<bta::Band> bands_by_name(const std::string& name) {
    if (name == "search") return bta::search_style_bands();
    if (name == "amigos") return bta::amigos_style_bands();
    throw bta::config_error("bands must be 'search' or 'amigos'");
}

std::vector<bta::ScoredLabel> zip_scored(const std::vector<double>& scores,
                                         const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw bta::dimension_error("scores and labels must have equal length");
    std::vector<bta::ScoredLabel> items(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) items[i] = {scores[i], labels[i]};
    return items;
}

}  // namespace

PYBIND11_MODULE(btacore, m) {
    m.doc() = "EEG satisfaction modeling: features, metrics, model, re-ranking, rating";

    py::register_exception<bta::config_error>(m, "ConfigError");
    py::register_exception<bta::data_error>(m, "DataError");

    m.def(
        "tokenize", [](const std::string& text) { return bta::tokenize(text); }, "text"_a,
        "Lowercase tokens split on non-alphanumerics.");
    m.def("gelu", py::vectorize([](double x) { return bta::gelu(x); }), "x"_a);

    m.def(
        "auc",
        [](const std::vector<double>& scores, const std::vector<int>& labels) {
            return bta::auc(zip_scored(scores, labels));
        },
        "scores"_a, "labels"_a, "Rank-sum AUC with 0.5 tie credit.");
    m.def(
        "f1",
        [](const std::vector<double>& scores, const std::vector<int>& labels) {
            return bta::f1(zip_scored(scores, labels));
        },
        "scores"_a, "labels"_a, "F1 of the positive class at threshold 0.5.");
    m.def("ndcg_at_k", &bta::ndcg_at_k, "ranked_relevance"_a, "k"_a);
    m.def(
        "map_at_k",
        [](const std::vector<int>& rel, int k) { return bta::map_at_k(rel, k); },
        "ranked_relevance"_a, "k"_a);

    m.def(
        "de_features",
        [](const py::array_t<double>& temporal, double sample_rate,
           const std::string& bands) {
            return numpy_from_matrix(
                bta::de_features(matrix_from_numpy(temporal), sample_rate,
                                 bands_by_name(bands)));
        },
        "temporal"_a, "sample_rate"_a, "bands"_a = "search",
        "Differential entropy per channel and band from an E x N window.");

    m.def(
        "spherical_from_cartesian",
        [](double x, double y, double z, double ox, double oy, double oz) {
            const bta::Spherical s =
                bta::spherical_from_cartesian({x, y, z}, {ox, oy, oz});
            return py::make_tuple(s.rho, s.theta, s.phi);
        },
        "x"_a, "y"_a, "z"_a, "origin_x"_a = 0.0, "origin_y"_a = 0.0, "origin_z"_a = 0.0);

    m.def("satisfaction_prior", &bta::satisfaction_prior, "y_hat"_a,
          "lam"_a = bta::kDefaultLambda,
          "Satisfaction-weighted document prior over examined results.");

    m.def(
        "train_synthetic",
        [](int samples_per_class, int channels, int window_samples, double effect_size,
           int folds, int epochs, int hidden, int heads, uint64_t seed, int jobs) {
            bta::SynthConfig scfg;
            scfg.samples_per_class = samples_per_class;
            scfg.channels = channels;
            scfg.window_samples = window_samples;
            scfg.effect_size = effect_size;
            scfg.groups = std::max(folds, 10);
            scfg.seed = seed;
            bta::Dataset ds = bta::synth_generate(scfg);
            bta::BtaConfig cfg;
            cfg.channels = ds.channel_count();
            cfg.temporal_len = window_samples;
            cfg.spectral_len = static_cast<int>(ds.bands.size());
            cfg.hidden = hidden;
            cfg.heads = heads;
            cfg.epochs = epochs;
            cfg.batch_size = 16;
            cfg.seed = seed;
            bta::FoldPlan plan = bta::make_folds_grouped(ds.samples, folds, seed);
            bta::TrainReport r = bta::train_classifier(ds, plan, cfg, nullptr, jobs);
            py::dict out;
            out["mean_auc"] = r.mean_auc;
            out["mean_f1"] = r.mean_f1;
            out["folds"] = r.folds.size();
            return out;
        },
        "samples_per_class"_a = 40, "channels"_a = 6, "window_samples"_a = 64,
        "effect_size"_a = 2.0, "folds"_a = 4, "epochs"_a = 8, "hidden"_a = 8,
        "heads"_a = 2, "seed"_a = 0, "jobs"_a = 1,
        "Cross-validated training on the planted-topography synthetic set.");

    m.def(
        "rerank_synthetic",
        [](int sessions, uint64_t seed) {
            bta::SessionSynthConfig cfg;
            cfg.sessions = sessions;
            cfg.seed = seed;
            auto sess = bta::synth_sessions(cfg);
            py::dict out;
            for (bta::RerankMode mode :
                 {bta::RerankMode::bm25, bta::RerankMode::ulm, bta::RerankMode::slm}) {
                const bta::RankingMetrics r = bta::evaluate_sessions(sess, mode);
                py::dict row;
                row["ndcg1"] = r.ndcg1;
                row["ndcg5"] = r.ndcg5;
                row["ndcg10"] = r.ndcg10;
                row["map10"] = r.map10;
                out[py::str(bta::to_string(mode))] = row;
            }
            return out;
        },
        "sessions"_a = 50, "seed"_a = 0,
        "Mean ranking metrics of bm25/ulm/slm on synthetic sessions.");

    m.def(
        "rating_sweep_synthetic",
        [](double alpha, bool independent_estimates, uint64_t seed) {
            bta::RatingSynthConfig rcfg;
            rcfg.seed = seed;
            rcfg.independent_estimates = independent_estimates;
            auto data = bta::synth_interactions(rcfg);
            bta::SweepConfig scfg;
            scfg.alphas = {alpha};
            scfg.seed = seed;
            py::dict out;
            for (const bta::SweepRow& r : bta::run_alpha_sweep(data, scfg))
                out[py::str(r.model + "/" + r.condition)] = r.auc;
            return out;
        },
        "alpha"_a = 0.1, "independent_estimates"_a = false, "seed"_a = 0,
        "AUC per (model, condition) on the synthetic rating corpus.");
}
