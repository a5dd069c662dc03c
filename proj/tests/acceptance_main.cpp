// Acceptance suite: one pass/fail line per criterion, exit 0 only when all
// criteria hold. Tolerances are fixed here, not tuned at run time.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include "bta/dataset_io.hpp"
#include "bta/grad_check.hpp"
#include "bta/metrics.hpp"
#include "bta/model.hpp"
#include "bta/rating.hpp"
#include "bta/rerank.hpp"
#include "bta/synth.hpp"
#include "bta/text.hpp"
#include "bta/train.hpp"

using namespace bta;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int worker_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(10u, hw == 0 ? 1u : hw));
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return std::string(buf);
}

// ---------------------------------------------------------------------
// 1. Gradient fidelity of the full forward pass

void check_gradient_fidelity() {
    const auto t0 = std::chrono::steady_clock::now();
    SynthConfig scfg;
    scfg.samples_per_class = 2;
    scfg.channels = 4;
    scfg.window_samples = 16;
    scfg.sample_rate = 128.0;
    scfg.seed = 101;
    Dataset ds = synth_generate(scfg);
    for (auto& s : ds.samples)
        s.spectral = de_features(s.temporal, scfg.sample_rate, amigos_style_bands());

    BtaConfig cfg;
    cfg.channels = 4;
    cfg.temporal_len = 16;
    cfg.spectral_len = 4;
    cfg.hidden = 8;
    cfg.heads = 2;
    cfg.seed = 7;
    BtaModel model(cfg, ds.montage, ds.channel_names);
    std::vector<const EegSample*> batch = {&ds.samples[0], &ds.samples[1],
                                           &ds.samples[2]};
    auto loss_fn = [&](ParameterStore&, bool with_grad) {
        return model.classify_loss(batch, with_grad, /*train_mode=*/true,
                                   /*persist_bn=*/false);
    };
    const auto rep = finite_diff_check(loss_fn, model.params(), 2024,
                                       /*coords_per_param=*/64);
    const double dt = seconds_since(t0);
    const bool ok = rep.max_rel_error < 1e-4 && dt < 30.0;
    report("gradient-fidelity", ok,
           fmt("full BTA forward at E=4 N=16 B=4 H=8 D=2: max rel err %.2e < 1e-4 "
               "(worst '%s', %zu coords, %.1f s < 30 s)",
               rep.max_rel_error, rep.worst_parameter.c_str(), rep.coords_checked, dt));
}

// ---------------------------------------------------------------------
// 2. Masked-subtask correctness

void check_masked_subtask() {
    Rng rng(2025);
    // visible entries must contribute nothing to loss or gradient
    bool zero_sensitive = true;
    {
        Matrix target(6, 7), rec(6, 7), mask(6, 7);
        for (size_t i = 0; i < target.size(); ++i) {
            target[i] = rng.normal();
            rec[i] = rng.normal();
            mask[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
        }
        const double base = masked_mse_value(rec, target, mask);
        Tape tape;
        Tape::Node rn = tape.leaf(rec);
        MaskedMse r = masked_mse(tape, rn, target, mask);
        tape.backward(r.loss);
        const Matrix& g = tape.grad(rn);
        for (size_t i = 0; i < mask.size(); ++i) {
            if (mask[i] != 1.0) continue;
            Matrix perturbed = rec;
            perturbed[i] += 17.0;  // arbitrary poke at a visible entry
            zero_sensitive = zero_sensitive &&
                             masked_mse_value(perturbed, target, mask) == base &&
                             g[i] == 0.0;
        }
    }
    // empirical mask ratio over 1e5 draws from the training mechanism
    Rng mask_rng = Rng(77).split("mask-measure");
    const int rows = 100, cols = 1000;
    Matrix mask = draw_mask(rows, cols, 0.15, mask_rng);
    size_t hidden = 0;
    for (size_t i = 0; i < mask.size(); ++i) hidden += mask[i] == 0.0;
    const double ratio = static_cast<double>(hidden) / static_cast<double>(mask.size());
    const bool ratio_ok = std::fabs(ratio - 0.15) <= 0.01;
    report("masked-subtask", zero_sensitive && ratio_ok,
           fmt("visible entries zero-sensitive: %s; mask ratio %.4f in 0.15 +- 0.01 "
               "over %zu draws",
               zero_sensitive ? "yes" : "no", ratio, mask.size()));
}

// ---------------------------------------------------------------------
// 3. Algorithm 1 fidelity

void check_algorithm1() {
    SynthConfig scfg;
    scfg.samples_per_class = 8;
    scfg.channels = 4;
    scfg.window_samples = 32;
    scfg.seed = 301;
    Dataset ds = synth_generate(scfg);
    BtaConfig cfg;
    cfg.channels = 4;
    cfg.temporal_len = 32;
    cfg.spectral_len = 5;
    cfg.hidden = 8;
    cfg.heads = 2;
    cfg.batch_size = 8;
    cfg.pretrain_epochs = 2;
    cfg.seed = 5;

    // transfer touches exactly the 3M centrality tensors
    BtaModel source(cfg, ds.montage, ds.channel_names);
    source.init_params(42);
    BtaModel target(cfg, ds.montage, ds.channel_names);
    target.init_params(43);
    ParameterStore fresh = target.params();
    transfer_centrality_embeddings(source.params(), target.params(), cfg.centralities);
    int changed = 0;
    bool only_cents = true;
    for (const auto& e : target.params().entries()) {
        const bool moved = !(e.value == fresh.value(e.name));
        if (moved) ++changed;
        if (moved && e.name.rfind("cent.", 0) != 0) only_cents = false;
    }
    const bool transfer_ok = changed == 3 * cfg.centralities && only_cents;

    // label scrambling must not perturb the pretraining trajectory at any
    // point: compare the parameter state after 1, 2 and 4 epochs
    Dataset scrambled = ds;
    Rng flip(99);
    for (auto& s : scrambled.samples) s.label = flip.bernoulli(0.5) ? 1 : 0;
    bool blind_ok = true;
    for (int epochs : {1, 2, 4}) {
        BtaConfig ecfg = cfg;
        ecfg.pretrain_epochs = epochs;
        BtaModel a(ecfg, ds.montage, ds.channel_names);
        BtaModel b(ecfg, scrambled.montage, scrambled.channel_names);
        pretrain_subtask(a, ds);
        pretrain_subtask(b, scrambled);
        blind_ok = blind_ok && a.params() == b.params();
    }

    report("algorithm1-fidelity", transfer_ok && blind_ok,
           fmt("transfer changed %d tensors (want %d, centrality only: %s); "
               "label-scrambled pretraining bitwise identical: %s",
               changed, 3 * cfg.centralities, only_cents ? "yes" : "no",
               blind_ok ? "yes" : "no"));
}

// ---------------------------------------------------------------------
// 4. Synthetic classification

void check_synthetic_classification() {
    const auto t0 = std::chrono::steady_clock::now();
    SynthConfig scfg;
    scfg.samples_per_class = 1000;
    scfg.channels = 8;
    scfg.window_samples = 128;
    scfg.sample_rate = 128.0;
    scfg.effect_size = 2.0;
    scfg.groups = 20;
    scfg.seed = 404;
    Dataset ds = synth_generate(scfg);

    BtaConfig cfg;
    cfg.channels = 8;
    cfg.temporal_len = 128;
    cfg.spectral_len = 5;
    cfg.hidden = 16;
    cfg.heads = 8;
    cfg.learning_rate = 0.01;
    cfg.batch_size = 32;
    cfg.epochs = 50;
    cfg.pretrain_epochs = 5;
    cfg.seed = 11;

    const int jobs = worker_count();
    BtaModel pre(cfg, ds.montage, ds.channel_names);
    pretrain_subtask(pre, ds);
    FoldPlan plan = make_folds_grouped(ds.samples, 10, cfg.seed);
    TrainReport bta_report = train_classifier(ds, plan, cfg, &pre.params(), jobs);

    MlpConfig mcfg;
    mcfg.seed = 11;
    mcfg.epochs = 50;
    mcfg.batch_size = 32;
    TrainReport mlp_report = baseline_mlp(ds, plan, mcfg, jobs);

    const double dt = seconds_since(t0);
    const bool ok = bta_report.mean_auc >= 0.85 &&
                    bta_report.mean_auc >= mlp_report.mean_auc - 0.01 && dt < 600.0;
    report("synthetic-classification", ok,
           fmt("2000 samples, effect 2: BTA 10-fold AUC %.4f >= 0.85, MLP %.4f "
               "(BTA >= MLP - 0.01), %.0f s < 600 s",
               bta_report.mean_auc, mlp_report.mean_auc, dt));
}

// ---------------------------------------------------------------------
// 5. Ablation harness

void check_ablation_harness() {
    SynthConfig scfg;
    scfg.samples_per_class = 100;
    scfg.channels = 6;
    scfg.window_samples = 64;
    scfg.effect_size = 1.0;  // leave headroom so degradation is visible
    scfg.groups = 10;
    scfg.seed = 505;
    Dataset ds = synth_generate(scfg);

    BtaConfig base;
    base.channels = 6;
    base.temporal_len = 64;
    base.spectral_len = 5;
    base.hidden = 8;
    base.heads = 2;
    base.batch_size = 16;
    base.epochs = 10;
    base.pretrain_epochs = 4;
    base.seed = 13;
    FoldPlan plan = make_folds_grouped(ds.samples, 5, base.seed);
    const int jobs = worker_count();

    struct Variant {
        std::string name;
        bool attention, centrality, subtask;
    };
    const std::vector<Variant> variants = {{"full", true, true, true},
                                           {"wo-attention", false, true, true},
                                           {"wo-centrality", true, false, true},
                                           {"wo-subtask", true, true, false}};
    std::ostringstream table;
    table << "variant,auc,f1\n";
    bool all_ran = true;
    double full_auc = 0.0;
    std::vector<std::pair<std::string, double>> results;
    for (const Variant& v : variants) {
        BtaConfig cfg = base;
        cfg.use_attention = v.attention;
        cfg.use_centrality = v.centrality;
        const ParameterStore* pre_params = nullptr;
        BtaModel pre(cfg, ds.montage, ds.channel_names);
        if (v.subtask) {
            pretrain_subtask(pre, ds);
            pre_params = &pre.params();
        }
        try {
            TrainReport r = train_classifier(ds, plan, cfg, pre_params, jobs);
            table << v.name << "," << r.mean_auc << "," << r.mean_f1 << "\n";
            results.emplace_back(v.name, r.mean_auc);
            if (v.name == "full") full_auc = r.mean_auc;
        } catch (const std::exception& e) {
            all_ran = false;
            table << v.name << ",error,error\n";
        }
    }
    std::printf("%s", table.str().c_str());
    // direction of degradation is logged, not asserted
    for (const auto& [name, auc_value] : results)
        if (name != "full")
            std::printf("  ablation %s: AUC delta vs full %+0.4f\n", name.c_str(),
                        auc_value - full_auc);
    report("ablation-harness", all_ran,
           fmt("%zu variants trained under one protocol, table emitted", results.size()));
}

// ---------------------------------------------------------------------
// 6. Metric oracles

void check_metric_oracles() {
    Rng rng(606);
    bool auc_ok = true;
    int instances = 0;
    while (instances < 100) {
        std::vector<ScoredLabel> items;
        for (int i = 0; i < 40; ++i)
            items.push_back({std::floor(rng.uniform() * 8.0) / 8.0,
                             rng.bernoulli(0.5) ? 1 : 0});
        bool pos = false, neg = false;
        for (const auto& it : items) (it.label ? pos : neg) = true;
        if (!pos || !neg) continue;
        ++instances;
        double wins = 0.0;
        size_t pairs = 0;
        for (const auto& p : items) {
            if (p.label < 1) continue;
            for (const auto& n : items) {
                if (n.label >= 1) continue;
                ++pairs;
                wins += p.score > n.score ? 1.0 : (p.score == n.score ? 0.5 : 0.0);
            }
        }
        if (std::fabs(auc(items) - wins / pairs) > 1e-12) auc_ok = false;
    }

    const double dcg = 3.0 / std::log2(3.0) + 0.5;
    const double idcg = 3.0 + 1.0 / std::log2(3.0);
    const bool ndcg_ok =
        std::fabs(ndcg_at_k({0, 2, 1}, 3) - dcg / idcg) < 1e-9 &&
        std::fabs(ndcg_at_k({3, 2, 1}, 3) - 1.0) < 1e-9 && ndcg_at_k({0, 0}, 2) == 0.0;
    const bool map_ok = std::fabs(map_at_k({0, 1, 0, 1, 0}, 5) - 0.5) < 1e-9 &&
                        std::fabs(map_at_k({1, 0}, 2) - 1.0) < 1e-9;
    // TP=3 FP=1 FN=2
    std::vector<ScoredLabel> f1_items = {{0.9, 1}, {0.8, 1}, {0.7, 1}, {0.6, 0},
                                         {0.2, 1}, {0.1, 1}, {0.3, 0}};
    const bool f1_ok = std::fabs(f1(f1_items) - 2.0 * 0.75 * 0.6 / 1.35) < 1e-12;

    report("metric-oracles", auc_ok && ndcg_ok && map_ok && f1_ok,
           fmt("AUC exact on %d instances: %s; NDCG fixture: %s; MAP fixture: %s; "
               "F1 confusion arithmetic: %s",
               instances, auc_ok ? "yes" : "no", ndcg_ok ? "yes" : "no",
               map_ok ? "yes" : "no", f1_ok ? "yes" : "no"));
}

// ---------------------------------------------------------------------
// 7. SLM algebra

void check_slm_algebra() {
    Rng rng(707);
    bool sums_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> y(static_cast<size_t>(2 + rng.below(8)));
        for (double& v : y) v = rng.uniform();
        auto p = satisfaction_prior(y, 2.0);
        double sum = 0.0;
        for (double v : p) sum += v;
        if (std::fabs(sum - 1.0) > 1e-12) sums_ok = false;
    }

    SessionSynthConfig scfg;
    scfg.sessions = 20;
    scfg.seed = 7;
    auto sessions = synth_sessions(scfg);
    bool reductions_ok = true;
    for (const QuerySession& s : sessions) {
        auto limit = rerank_session(s, RerankMode::slm, 1e300);
        auto ulm = rerank_session(s, RerankMode::ulm);
        for (size_t i = 0; i < limit.size(); ++i)
            if (limit[i]->id != ulm[i]->id) reductions_ok = false;
        QuerySession eq = s;
        for (ExaminedDoc& e : eq.examined) e.satisfaction = 0.6;
        auto slm_eq = rerank_session(eq, RerankMode::slm);
        auto ulm_eq = rerank_session(eq, RerankMode::ulm);
        for (size_t i = 0; i < slm_eq.size(); ++i)
            if (slm_eq[i]->id != ulm_eq[i]->id) reductions_ok = false;
    }

    // the dental case study: SLM expansion words come from the satisfying doc
    Document bad;
    bad.id = "r1";
    bad.tokens = tokenize("permanent teeth dentist online advice consult");
    Document good;
    good.id = "r2";
    good.tokens = tokenize("permanent teeth child old when kid");
    Document u1;
    u1.id = "u1";
    u1.tokens = tokenize("child old when kid permanent teeth age");
    Document u2;
    u2.id = "u2";
    u2.tokens = tokenize("dentist online advice consult booking");
    CorpusStats stats = CorpusStats::build({&bad, &good, &u1, &u2});
    auto prior = satisfaction_prior({0.1, 0.9}, 2.0);
    auto rel = word_relevance({&bad, &good}, {"permanent", "teeth"}, prior, stats);
    auto rewritten = rewrite_query({"permanent", "teeth"}, rel, 5);
    const std::set<std::string> top4(rewritten.query.begin() + 2,
                                     rewritten.query.begin() + 6);
    const bool case_ok = top4 == std::set<std::string>{"child", "kid", "old", "when"};

    report("slm-algebra", sums_ok && reductions_ok && case_ok,
           fmt("prior sums to 1: %s; lambda-limit and equal-yhat reductions exact: %s; "
               "case-study expansion from the satisfying result: %s",
               sums_ok ? "yes" : "no", reductions_ok ? "yes" : "no",
               case_ok ? "yes" : "no"));
}

// ---------------------------------------------------------------------
// 8. Synthetic re-ranking

void check_synthetic_reranking() {
    const auto t0 = std::chrono::steady_clock::now();
    double mean_bm25 = 0.0, mean_ulm = 0.0, mean_slm = 0.0;
    const int seeds = 5;
    for (uint64_t seed = 0; seed < seeds; ++seed) {
        SessionSynthConfig cfg;
        cfg.sessions = 200;
        cfg.seed = seed;
        auto sessions = synth_sessions(cfg);
        mean_bm25 += evaluate_sessions(sessions, RerankMode::bm25).ndcg5;
        mean_ulm += evaluate_sessions(sessions, RerankMode::ulm).ndcg5;
        mean_slm += evaluate_sessions(sessions, RerankMode::slm).ndcg5;
    }
    mean_bm25 /= seeds;
    mean_ulm /= seeds;
    mean_slm /= seeds;
    const double dt = seconds_since(t0);
    const bool ok = mean_slm >= mean_ulm && mean_ulm >= mean_bm25 &&
                    mean_slm - mean_ulm >= 0.02 && dt < 120.0;
    report("synthetic-reranking", ok,
           fmt("5-seed mean NDCG@5 over 200 sessions: slm %.4f >= ulm %.4f >= bm25 %.4f, "
               "slm-ulm %.4f >= 0.02, %.1f s < 120 s",
               mean_slm, mean_ulm, mean_bm25, mean_slm - mean_ulm, dt));
}

// ---------------------------------------------------------------------
// 9. FM correctness

void check_fm_correctness() {
    Rng rng(909);
    bool pairwise_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 9, k = 4;
        FmModel fm;
        fm.w0 = rng.normal();
        fm.w = Matrix(1, dim);
        for (size_t i = 0; i < fm.w.size(); ++i) fm.w[i] = rng.normal();
        fm.v = Matrix(dim, k);
        for (size_t i = 0; i < fm.v.size(); ++i) fm.v[i] = rng.normal();
        std::vector<double> x(dim);
        for (double& t : x) t = rng.normal();
        double naive = fm.w0;
        for (int d = 0; d < dim; ++d) naive += fm.w(0, d) * x[d];
        for (size_t i = 0; i < x.size(); ++i)
            for (size_t j = i + 1; j < x.size(); ++j) {
                double dot = 0.0;
                for (int f = 0; f < k; ++f)
                    dot += fm.v(static_cast<int>(i), f) * fm.v(static_cast<int>(j), f);
                naive += dot * x[i] * x[j];
            }
        if (std::fabs(fm.logit(x) - naive) > 1e-10) pairwise_ok = false;
    }

    bool reduce_ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 6;
        FmModel fm;
        fm.w0 = rng.normal();
        fm.w = Matrix(1, dim);
        for (size_t i = 0; i < fm.w.size(); ++i) fm.w[i] = rng.normal();
        fm.v = Matrix(dim, 3);
        LrModel lr;
        lr.w = fm.w;
        lr.b = fm.w0;
        std::vector<double> x(dim);
        for (double& t : x) t = rng.normal();
        if (std::fabs(fm.predict(x) - lr.predict(x)) > 1e-12) reduce_ok = false;
    }
    report("fm-correctness", pairwise_ok && reduce_ok,
           fmt("O(kn) pairwise equals naive double loop to 1e-10: %s; V=0 reduces to "
               "LR to 1e-12: %s",
               pairwise_ok ? "yes" : "no", reduce_ok ? "yes" : "no"));
}

// ---------------------------------------------------------------------
// 10. Synthetic rating sweep

void check_rating_sweep() {
    const int seeds = 5;
    double lr_gain = 0.0, fm_gain = 0.0, lr_null = 0.0, fm_null = 0.0;
    for (uint64_t seed = 0; seed < seeds; ++seed) {
        for (const bool independent : {false, true}) {
            RatingSynthConfig rcfg;
            rcfg.seed = seed;
            rcfg.independent_estimates = independent;
            auto data = synth_interactions(rcfg);
            SweepConfig scfg;
            scfg.alphas = {0.1};
            scfg.seed = seed;
            auto rows = run_alpha_sweep(data, scfg);
            double lr_t = 0, lr_ts = 0, fm_t = 0, fm_ts = 0;
            for (const SweepRow& r : rows) {
                if (r.model == "lr" && r.condition == "T") lr_t = r.auc;
                if (r.model == "lr" && r.condition == "T+S") lr_ts = r.auc;
                if (r.model == "fm" && r.condition == "T") fm_t = r.auc;
                if (r.model == "fm" && r.condition == "T+S") fm_ts = r.auc;
            }
            if (independent) {
                lr_null += (lr_ts - lr_t) / seeds;
                fm_null += (fm_ts - fm_t) / seeds;
            } else {
                lr_gain += (lr_ts - lr_t) / seeds;
                fm_gain += (fm_ts - fm_t) / seeds;
            }
        }
    }
    const bool ok = lr_gain >= 0.03 && fm_gain >= 0.03 && lr_null <= 0.02 &&
                    fm_null <= 0.02;
    report("synthetic-rating-sweep", ok,
           fmt("5-seed mean AUC gain of T(0.1)+S over T(0.1): lr %+.4f, fm %+.4f "
               "(>= 0.03); independent-estimate control: lr %+.4f, fm %+.4f (<= 0.02)",
               lr_gain, fm_gain, lr_null, fm_null));
}

// ---------------------------------------------------------------------
// 11. CLI determinism

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool replays(const std::string& args, const fs::path& work, const std::string& tag) {
    const fs::path a = work / (tag + "_a");
    const fs::path b = work / (tag + "_b");
    for (const fs::path& out : {a, b}) {
        const std::string cmd = std::string(BTA_CLI_PATH) + " " + args + " --out " +
                                out.string() + " > /dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0) return false;
    }
    std::vector<fs::path> rel;
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file() && e.path().filename() != "run_manifest.json")
            rel.push_back(fs::relative(e.path(), a));
    if (rel.empty()) return false;
    for (const auto& r : rel) {
        if (!fs::exists(b / r)) return false;
        if (slurp(a / r) != slurp(b / r)) return false;
    }
    return true;
}

void check_cli_determinism() {
    const fs::path work = fs::temp_directory_path() / "bta_acceptance_cli";
    fs::remove_all(work);
    fs::create_directories(work);

    // small but complete configuration shared by the pipeline commands
    const fs::path cfg_path = work / "config.json";
    {
        std::ofstream f(cfg_path);
        f << R"({"synth": {"samples_per_class": 20, "channels": 4, "window_samples": 32,
                 "groups": 10},
                 "model": {"hidden": 8, "heads": 2, "epochs": 3, "pretrain_epochs": 2,
                           "batch_size": 8},
                 "train": {"folds": 2, "fold_mode": "random"},
                 "rate": {"synth": true, "synth_users": 20, "alphas": [0.1],
                          "epochs": 10}})";
    }
    // a recordings directory for the features command
    {
        Rng rng(5);
        fs::create_directories(work / "recs");
        for (int r = 0; r < 2; ++r) {
            Recording rec;
            rec.channel_names = {"F3", "F4", "C3", "C4"};
            rec.sample_rate = 128.0;
            rec.signal = Matrix(4, 128 * 2);
            for (size_t i = 0; i < rec.signal.size(); ++i) rec.signal[i] = rng.normal();
            rec.group_id = "task-" + std::to_string(r);
            rec.label = r % 2;
            save_recording(rec, work / "recs" / ("r" + std::to_string(r) + ".rec"));
        }
    }
    const std::string shared = "--config " + cfg_path.string() + " --seed 5 ";
    bool all_ok = true;
    std::string failed;
    auto step = [&](const std::string& name, const std::string& args) {
        if (!replays(shared + args, work, name)) {
            all_ok = false;
            failed += (failed.empty() ? "" : ", ") + name;
        }
    };
    step("synth", "synth");
    const std::string data = (work / "synth_a" / "dataset").string();
    step("features", "features --in " + (work / "recs").string());
    step("pretrain", "pretrain --data " + data);
    const std::string pre = (work / "pretrain_a" / "pretrained.ckpt").string();
    step("train", "train --data " + data + " --pretrained " + pre);
    const std::string ckpt = (work / "train_a" / "model.ckpt").string();
    step("eval", "eval --data " + data + " --checkpoint " + ckpt);
    step("attnmap", "attn-map --data " + data + " --checkpoint " + ckpt + " --class all");
    step("rerank", "rerank --synth 20");
    step("rate", "rate");
    report("cli-determinism", all_ok,
           all_ok ? "all 8 commands byte-replay under a fixed seed"
                  : "commands with diverging outputs: " + failed);
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    check_gradient_fidelity();
    check_masked_subtask();
    check_algorithm1();
    check_synthetic_classification();
    check_ablation_harness();
    check_metric_oracles();
    check_slm_algebra();
    check_synthetic_reranking();
    check_fm_correctness();
    check_rating_sweep();
    check_cli_determinism();
    std::printf("ACCEPTANCE: %d/11 criteria passed (%.0f s)\n", 11 - g_failures,
                seconds_since(t0));
    return g_failures == 0 ? 0 : 1;
}
