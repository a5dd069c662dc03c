// bta: experiment driver for EEG satisfaction modeling and its two
// downstream tasks (search re-ranking, rating prediction).
//
// Subcommands: synth, features, pretrain, train, eval, attn-map, rerank,
// rate. Configuration comes from an optional JSON file plus flag overrides
// (flags win). Every command is deterministic under --seed and writes its
// resolved configuration and a run manifest next to its outputs.

#include <chrono>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bta/checkpoint.hpp"
#include "bta/dataset_io.hpp"
#include "bta/folds.hpp"
#include "bta/model.hpp"
#include "bta/rating.hpp"
#include "bta/rerank.hpp"
#include "bta/synth.hpp"
#include "bta/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunContext {
    fs::path out;
    uint64_t seed = 0;
    int jobs = 1;
    json resolved_config;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    void write_text(const std::string& filename, const std::string& content) {
        fs::create_directories(out);
        std::ofstream f(out / filename, std::ios::binary);
        f << content;
        if (!f) throw bta::data_error("cannot write " + (out / filename).string());
        outputs.push_back(filename);
    }

    void note_output(const std::string& filename) { outputs.push_back(filename); }

    // resolved config + manifest; manifest goes through a temp file so a
    // finished run always has a complete one
    void finish(const std::string& command) {
        fs::create_directories(out);
        const std::string config_text = resolved_config.dump(2) + "\n";
        {
            std::ofstream f(out / "config.json", std::ios::binary);
            f << config_text;
        }
        uint64_t hash = 1469598103934665603ULL;
        for (char c : config_text) {
            hash ^= static_cast<unsigned char>(c);
            hash *= 1099511628211ULL;
        }
        json manifest;
        manifest["artifact_version"] = "1.0.0";
        manifest["command"] = command;
        manifest["config_hash"] = hash;
        manifest["seed"] = seed;
        manifest["wall_clock_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                .count();
        std::sort(outputs.begin(), outputs.end());
        manifest["outputs"] = outputs;
        const fs::path tmp = out / "run_manifest.json.tmp";
        {
            std::ofstream f(tmp, std::ios::binary);
            f << manifest.dump(2) << "\n";
            if (!f) throw bta::data_error("cannot write manifest in " + out.string());
        }
        fs::rename(tmp, out / "run_manifest.json");
    }
};

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw bta::config_error("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw bta::config_error("bad config json: " + std::string(e.what()));
    }
    if (!j.is_object()) throw bta::config_error("config root must be an object");
    return j;
}

json section(const json& config, const std::string& name,
             const std::set<std::string>& allowed) {
    json s = config.value(name, json::object());
    if (!s.is_object())
        throw bta::config_error("config section '" + name + "' must be an object");
    for (const auto& [key, value] : s.items()) {
        (void)value;
        if (!allowed.count(key))
            throw bta::config_error("unknown key '" + key + "' in config section '" + name +
                                    "'");
    }
    return s;
}

void check_top_level(const json& config, const std::set<std::string>& sections) {
    std::set<std::string> allowed = sections;
    allowed.insert("seed");
    allowed.insert("jobs");
    allowed.insert("out");
    for (const auto& [key, value] : config.items()) {
        (void)value;
        if (!allowed.count(key))
            throw bta::config_error("unknown top-level config key '" + key + "'");
    }
}

const std::set<std::string> kModelKeys = {
    "hidden",     "heads",   "centralities", "learning_rate",  "batch_size",
    "epochs",     "patience", "mask_ratio",  "pretrain_epochs", "use_attention",
    "use_centrality"};

bta::BtaConfig model_config_for(const bta::Dataset& ds, const json& model_section,
                                uint64_t seed) {
    bta::BtaConfig cfg;
    cfg.channels = ds.channel_count();
    cfg.temporal_len = ds.samples.at(0).temporal.cols();
    cfg.spectral_len = ds.samples.at(0).spectral.cols();
    cfg.hidden = model_section.value("hidden", cfg.hidden);
    cfg.heads = model_section.value("heads", cfg.heads);
    cfg.centralities = model_section.value("centralities", cfg.centralities);
    cfg.learning_rate = model_section.value("learning_rate", cfg.learning_rate);
    cfg.batch_size = model_section.value("batch_size", cfg.batch_size);
    cfg.epochs = model_section.value("epochs", cfg.epochs);
    cfg.patience = model_section.value("patience", cfg.patience);
    cfg.mask_ratio = model_section.value("mask_ratio", cfg.mask_ratio);
    cfg.pretrain_epochs = model_section.value("pretrain_epochs", cfg.pretrain_epochs);
    cfg.use_attention = model_section.value("use_attention", cfg.use_attention);
    cfg.use_centrality = model_section.value("use_centrality", cfg.use_centrality);
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

std::string metrics_pair_csv(double auc_value, double f1_value) {
    std::ostringstream out;
    out.precision(6);
    out << std::fixed;
    out << "auc,f1\n" << auc_value << "," << f1_value << "\n";
    return out.str();
}

// ---------------------------------------------------------------- synth

int cmd_synth(const json& config, RunContext& ctx) {
    json s = section(config, "synth",
                     {"subjects", "samples_per_class", "channels", "window_samples",
                      "sample_rate", "effect_size", "groups"});
    bta::SynthConfig scfg;
    scfg.subjects = s.value("subjects", scfg.subjects);
    scfg.samples_per_class = s.value("samples_per_class", scfg.samples_per_class);
    scfg.channels = s.value("channels", scfg.channels);
    scfg.window_samples = s.value("window_samples", scfg.window_samples);
    scfg.sample_rate = s.value("sample_rate", scfg.sample_rate);
    scfg.effect_size = s.value("effect_size", scfg.effect_size);
    scfg.groups = s.value("groups", scfg.groups);
    scfg.seed = ctx.seed;

    ctx.resolved_config["synth"] = {{"subjects", scfg.subjects},
                                    {"samples_per_class", scfg.samples_per_class},
                                    {"channels", scfg.channels},
                                    {"window_samples", scfg.window_samples},
                                    {"sample_rate", scfg.sample_rate},
                                    {"effect_size", scfg.effect_size},
                                    {"groups", scfg.groups}};
    bta::Dataset ds = bta::synth_generate(scfg);
    bta::save_dataset(ds, ctx.out / "dataset");
    ctx.note_output("dataset/manifest.json");
    ctx.note_output("dataset/samples.bin");
    ctx.note_output("dataset/montage.txt");
    std::cout << "synth: " << ds.samples.size() << " samples, " << ds.channel_count()
              << " channels\n";
    return 0;
}

// ------------------------------------------------------------- features

int cmd_features(const json& config, RunContext& ctx, const std::string& input_dir) {
    json s = section(config, "features",
                     {"input", "bands", "window_seconds", "overlap_seconds", "name"});
    const std::string input = !input_dir.empty() ? input_dir : s.value("input", "");
    if (input.empty()) throw bta::config_error("features: no input recordings directory");
    const std::string bands_name = s.value("bands", "search");
    const double window_seconds = s.value("window_seconds", 1.0);
    const double overlap_seconds = s.value("overlap_seconds", 0.0);

    std::vector<bta::Band> bands;
    if (bands_name == "search") bands = bta::search_style_bands();
    else if (bands_name == "amigos") bands = bta::amigos_style_bands();
    else throw bta::config_error("features: bands must be 'search' or 'amigos'");

    ctx.resolved_config["features"] = {{"input", input},
                                       {"bands", bands_name},
                                       {"window_seconds", window_seconds},
                                       {"overlap_seconds", overlap_seconds}};

    auto recordings = bta::load_recordings_dir(input);
    bta::Dataset ds;
    ds.name = s.value("name", "features");
    ds.montage = bta::Montage::standard_10_20();
    ds.bands = bands;
    ds.sample_rate = recordings.at(0).sample_rate;
    ds.channel_names = recordings.at(0).channel_names;
    for (const std::string& name : ds.channel_names)
        if (!ds.montage.has_channel(name))
            throw bta::data_error("features: channel '" + name + "' not in the montage");
    for (const bta::Recording& rec : recordings) {
        if (rec.channel_names != ds.channel_names)
            throw bta::data_error("features: recordings disagree on channel order");
        if (rec.sample_rate != ds.sample_rate)
            throw bta::data_error("features: recordings disagree on sample rate");
        for (bta::EegSample& sample : bta::window(rec, window_seconds, overlap_seconds)) {
            sample.spectral = bta::de_features(sample.temporal, rec.sample_rate, bands);
            ds.samples.push_back(std::move(sample));
        }
    }
    if (ds.samples.empty()) throw bta::data_error("features: no windows produced");
    bta::save_dataset(ds, ctx.out / "dataset");
    ctx.note_output("dataset/manifest.json");
    ctx.note_output("dataset/samples.bin");
    ctx.note_output("dataset/montage.txt");
    std::cout << "features: " << ds.samples.size() << " samples, B="
              << ds.bands.size() << "\n";
    return 0;
}

// ------------------------------------------------------------- pretrain

int cmd_pretrain(const json& config, RunContext& ctx, const std::string& data_dir) {
    json model_section = section(config, "model", kModelKeys);
    bta::Dataset ds = bta::load_dataset(data_dir);
    bta::BtaConfig cfg = model_config_for(ds, model_section, ctx.seed);
    ctx.resolved_config["model"] = json::parse(cfg.to_json());

    bta::BtaModel model(cfg, ds.montage, ds.channel_names);
    bta::PretrainReport report = bta::pretrain_subtask(model, ds);

    std::ostringstream losses;
    losses << "epoch,reconstruction_loss\n";
    losses.precision(9);
    losses << std::fixed;
    for (size_t e = 0; e < report.epoch_losses.size(); ++e)
        losses << e << "," << report.epoch_losses[e] << "\n";
    ctx.write_text("pretrain_loss.csv", losses.str());
    bta::save_checkpoint(ctx.out / "pretrained.ckpt", cfg.to_json(), model.params());
    ctx.note_output("pretrained.ckpt");
    std::cout << "pretrain: " << report.epoch_losses.size() << " epochs, final loss "
              << (report.epoch_losses.empty() ? 0.0 : report.epoch_losses.back()) << "\n";
    return 0;
}

// ---------------------------------------------------------------- train

int cmd_train(const json& config, RunContext& ctx, const std::string& data_dir,
              const std::string& pretrained_path) {
    json model_section = section(config, "model", kModelKeys);
    json train_section = section(config, "train", {"folds", "fold_mode", "pretrained"});
    const int folds = train_section.value("folds", 10);
    const std::string fold_mode = train_section.value("fold_mode", "grouped");
    const std::string pretrained =
        !pretrained_path.empty() ? pretrained_path : train_section.value("pretrained", "");

    bta::Dataset ds = bta::load_dataset(data_dir);
    bta::BtaConfig cfg = model_config_for(ds, model_section, ctx.seed);
    ctx.resolved_config["model"] = json::parse(cfg.to_json());
    ctx.resolved_config["train"] = {
        {"folds", folds}, {"fold_mode", fold_mode}, {"pretrained", pretrained}};

    bta::FoldPlan plan;
    if (fold_mode == "grouped") plan = bta::make_folds_grouped(ds.samples, folds, ctx.seed);
    else if (fold_mode == "random")
        plan = bta::make_folds_random(ds.samples.size(), folds, ctx.seed);
    else throw bta::config_error("train: fold_mode must be 'grouped' or 'random'");

    const bta::ParameterStore* pre = nullptr;
    bta::Checkpoint ckpt;
    if (!pretrained.empty()) {
        ckpt = bta::load_checkpoint(pretrained);
        const bta::BtaConfig pre_cfg = bta::BtaConfig::from_json(ckpt.config_json);
        if (pre_cfg.centralities != cfg.centralities || pre_cfg.hidden != cfg.hidden)
            throw bta::config_error("train: pretrained checkpoint disagrees on M or H");
        pre = &ckpt.params;
    }
    bta::TrainReport report = bta::train_classifier(ds, plan, cfg, pre, ctx.jobs);
    ctx.write_text("metrics.csv", report.to_csv());
    bta::save_checkpoint(ctx.out / "model.ckpt", cfg.to_json(), report.best_params);
    ctx.note_output("model.ckpt");
    std::cout << "train: mean AUC " << report.mean_auc << ", mean F1 " << report.mean_f1
              << " over " << folds << " folds\n";
    return 0;
}

// ----------------------------------------------------------------- eval

int cmd_eval(const json& config, RunContext& ctx, const std::string& data_dir,
             const std::string& checkpoint_path) {
    (void)section(config, "eval", {});
    if (checkpoint_path.empty()) throw bta::config_error("eval: --checkpoint required");
    bta::Dataset ds = bta::load_dataset(data_dir);
    bta::Checkpoint ckpt = bta::load_checkpoint(checkpoint_path);
    bta::BtaConfig cfg = bta::BtaConfig::from_json(ckpt.config_json);
    ctx.resolved_config["model"] = json::parse(ckpt.config_json);

    bta::BtaModel model(cfg, ds.montage, ds.channel_names);
    model.params() = ckpt.params;
    std::vector<size_t> indices(ds.samples.size());
    for (size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    auto [auc_value, f1_value] = bta::evaluate_model(model, ds, indices);
    ctx.write_text("eval.csv", metrics_pair_csv(auc_value, f1_value));
    std::cout << "eval: AUC " << auc_value << ", F1 " << f1_value << "\n";
    return 0;
}

// ------------------------------------------------------------- attn-map

int cmd_attnmap(const json& config, RunContext& ctx, const std::string& data_dir,
                const std::string& checkpoint_path, std::string class_filter,
                std::string stream_name, bool class_flag_given, bool stream_flag_given) {
    json s = section(config, "attn_map", {"class", "stream"});
    if (!class_flag_given) class_filter = s.value("class", class_filter);
    if (!stream_flag_given) stream_name = s.value("stream", stream_name);
    if (checkpoint_path.empty()) throw bta::config_error("attn-map: --checkpoint required");
    bta::Dataset ds = bta::load_dataset(data_dir);
    bta::Checkpoint ckpt = bta::load_checkpoint(checkpoint_path);
    bta::BtaConfig cfg = bta::BtaConfig::from_json(ckpt.config_json);
    ctx.resolved_config["attn_map"] = {{"class", class_filter}, {"stream", stream_name}};

    bta::ClassFilter filter;
    if (class_filter == "satisfied") filter = bta::ClassFilter::satisfied;
    else if (class_filter == "unsatisfied") filter = bta::ClassFilter::unsatisfied;
    else if (class_filter == "all") filter = bta::ClassFilter::all;
    else throw bta::config_error("attn-map: class must be satisfied|unsatisfied|all");
    bta::Stream stream;
    if (stream_name == "spectral") stream = bta::Stream::spectral;
    else if (stream_name == "temporal") stream = bta::Stream::temporal;
    else throw bta::config_error("attn-map: stream must be spectral|temporal");

    bta::BtaModel model(cfg, ds.montage, ds.channel_names);
    model.params() = ckpt.params;
    bta::Matrix map = bta::export_attention_map(model, ds, filter, stream);
    ctx.write_text("attention_map.csv", bta::attention_map_csv(map, ds.channel_names));
    std::cout << "attn-map: " << map.rows() << "x" << map.cols() << " table written\n";
    return 0;
}

// --------------------------------------------------------------- rerank

int cmd_rerank(const json& config, RunContext& ctx, const std::string& sessions_path,
               double lambda_override, int l_override, const std::string& mode_override,
               int synth_override) {
    json s = section(config, "rerank", {"sessions", "lambda", "l", "mode", "synth_sessions"});
    const std::string sessions_file =
        !sessions_path.empty() ? sessions_path : s.value("sessions", "");
    const double lambda = lambda_override > 0 ? lambda_override
                                              : s.value("lambda", bta::kDefaultLambda);
    const int l = l_override >= 0 ? l_override : s.value("l", bta::kDefaultRewriteLen);
    const std::string mode_str = !mode_override.empty() ? mode_override
                                                        : s.value("mode", "all");
    const int synth_n = synth_override > 0 ? synth_override : s.value("synth_sessions", 0);

    ctx.resolved_config["rerank"] = {{"sessions", sessions_file},
                                     {"lambda", lambda},
                                     {"l", l},
                                     {"mode", mode_str},
                                     {"synth_sessions", synth_n}};

    std::vector<bta::QuerySession> sessions;
    if (synth_n > 0) {
        bta::SessionSynthConfig scfg;
        scfg.sessions = synth_n;
        scfg.seed = ctx.seed;
        sessions = bta::synth_sessions(scfg);
        bta::save_sessions(sessions, ctx.out / "sessions.json");
        ctx.note_output("sessions.json");
    } else if (!sessions_file.empty()) {
        sessions = bta::load_sessions(sessions_file);
    } else {
        throw bta::config_error("rerank: provide --sessions FILE or --synth N");
    }

    std::vector<bta::RerankMode> modes;
    if (mode_str == "all")
        modes = {bta::RerankMode::bm25, bta::RerankMode::ulm, bta::RerankMode::slm};
    else
        modes = {bta::rerank_mode_from_string(mode_str)};

    std::ostringstream table;
    table << "mode,ndcg@1,ndcg@5,ndcg@10,map@10\n";
    table.precision(6);
    table << std::fixed;
    for (bta::RerankMode mode : modes) {
        const bta::RankingMetrics m = bta::evaluate_sessions(sessions, mode, lambda, l);
        table << bta::to_string(mode) << "," << m.ndcg1 << "," << m.ndcg5 << "," << m.ndcg10
              << "," << m.map10 << "\n";
        std::ostringstream lists;
        for (const bta::QuerySession& session : sessions) {
            lists << session.id << ":";
            for (const bta::Document* d : bta::rerank_session(session, mode, lambda, l))
                lists << " " << d->id;
            lists << "\n";
        }
        ctx.write_text("reranked_" + bta::to_string(mode) + ".txt", lists.str());
    }
    ctx.write_text("rerank_metrics.csv", table.str());
    std::cout << "rerank: " << sessions.size() << " sessions, " << modes.size()
              << " mode(s)\n";
    return 0;
}

// ----------------------------------------------------------------- rate

int cmd_rate(const json& config, RunContext& ctx, const std::string& interactions_path,
             const std::vector<double>& alpha_override, bool synth_flag) {
    json s = section(config, "rate",
                     {"interactions", "alphas", "epochs", "learning_rate", "fm_factors",
                      "synth", "synth_users", "synth_items", "independent_estimates"});
    const std::string interactions_file =
        !interactions_path.empty() ? interactions_path : s.value("interactions", "");
    bta::SweepConfig scfg;
    scfg.alphas = !alpha_override.empty()
                      ? alpha_override
                      : s.value("alphas", scfg.alphas);
    scfg.epochs = s.value("epochs", scfg.epochs);
    scfg.learning_rate = s.value("learning_rate", scfg.learning_rate);
    scfg.fm_factors = s.value("fm_factors", scfg.fm_factors);
    scfg.seed = ctx.seed;
    const bool synth = synth_flag || s.value("synth", false);

    ctx.resolved_config["rate"] = {{"interactions", interactions_file},
                                   {"alphas", scfg.alphas},
                                   {"epochs", scfg.epochs},
                                   {"learning_rate", scfg.learning_rate},
                                   {"fm_factors", scfg.fm_factors},
                                   {"synth", synth}};

    std::vector<bta::Interaction> interactions;
    if (synth) {
        bta::RatingSynthConfig rcfg;
        rcfg.users = s.value("synth_users", rcfg.users);
        rcfg.items = s.value("synth_items", rcfg.items);
        rcfg.independent_estimates = s.value("independent_estimates", false);
        rcfg.seed = ctx.seed;
        interactions = bta::synth_interactions(rcfg);
        bta::save_interactions(interactions, ctx.out / "interactions.txt");
        ctx.note_output("interactions.txt");
    } else if (!interactions_file.empty()) {
        interactions = bta::load_interactions(interactions_file);
    } else {
        throw bta::config_error("rate: provide --interactions FILE or --synth");
    }

    auto rows = bta::run_alpha_sweep(interactions, scfg);
    ctx.write_text("rate_sweep.csv", bta::sweep_csv(rows));
    std::cout << "rate: " << rows.size() << " sweep rows over " << interactions.size()
              << " interactions\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EEG satisfaction modeling experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir = "out", data_dir, input_dir, checkpoint_path;
    std::string pretrained_path, sessions_path, interactions_path;
    std::string class_filter = "all", stream_name = "spectral", mode_override;
    uint64_t seed = 0;
    int jobs = 1;
    double lambda_override = -1.0;
    int l_override = -1;
    int synth_sessions = 0;
    bool rate_synth = false;
    std::vector<double> alpha_override;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--seed", seed, "master random seed");
    app.add_option("--jobs", jobs, "worker cap for fold-parallel training");
    app.add_option("--out", out_dir, "output directory");

    CLI::App* c_synth = app.add_subcommand("synth", "generate a synthetic EEG dataset");
    CLI::App* c_features =
        app.add_subcommand("features", "window recordings and extract DE features");
    c_features->add_option("--in", input_dir, "directory of .rec recording files");
    CLI::App* c_pretrain =
        app.add_subcommand("pretrain", "masked-reconstruction pretraining");
    c_pretrain->add_option("--data", data_dir, "dataset directory")->required();
    CLI::App* c_train = app.add_subcommand("train", "cross-validated supervised training");
    c_train->add_option("--data", data_dir, "dataset directory")->required();
    c_train->add_option("--pretrained", pretrained_path, "pretraining checkpoint");
    CLI::App* c_eval = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
    c_eval->add_option("--data", data_dir, "dataset directory")->required();
    c_eval->add_option("--checkpoint", checkpoint_path, "model checkpoint")->required();
    CLI::App* c_attn = app.add_subcommand("attn-map", "export averaged attention weights");
    c_attn->add_option("--data", data_dir, "dataset directory")->required();
    c_attn->add_option("--checkpoint", checkpoint_path, "model checkpoint")->required();
    c_attn->add_option("--class", class_filter, "satisfied|unsatisfied|all");
    c_attn->add_option("--stream", stream_name, "spectral|temporal");
    CLI::App* c_rerank = app.add_subcommand("rerank", "session re-ranking evaluation");
    c_rerank->add_option("--sessions", sessions_path, "session JSON file");
    c_rerank->add_option("--lambda", lambda_override, "satisfaction smoothing");
    c_rerank->add_option("--l", l_override, "rewrite word count");
    c_rerank->add_option("--mode", mode_override, "bm25|ulm|slm|all");
    c_rerank->add_option("--synth", synth_sessions, "generate N synthetic sessions");
    CLI::App* c_rate = app.add_subcommand("rate", "rating-prediction alpha sweep");
    c_rate->add_option("--interactions", interactions_path, "interaction file");
    c_rate->add_option("--alpha", alpha_override, "alpha values for the sweep");
    c_rate->add_flag("--synth", rate_synth, "generate synthetic interactions");

    CLI11_PARSE(app, argc, argv);

    try {
        json config = load_config_file(config_path);
        check_top_level(config, {"synth", "features", "model", "train", "eval", "attn_map",
                                 "rerank", "rate"});
        RunContext ctx;
        ctx.out = app.count("--out") || !config.contains("out")
                      ? fs::path(out_dir)
                      : fs::path(config["out"].get<std::string>());
        ctx.seed = app.count("--seed") || !config.contains("seed")
                       ? seed
                       : config["seed"].get<uint64_t>();
        ctx.jobs = app.count("--jobs") || !config.contains("jobs")
                       ? jobs
                       : config["jobs"].get<int>();
        if (ctx.jobs < 1) throw bta::config_error("--jobs must be >= 1");
        fs::create_directories(ctx.out);
        ctx.resolved_config["seed"] = ctx.seed;
        ctx.resolved_config["jobs"] = ctx.jobs;

        int rc = 0;
        std::string command;
        if (c_synth->parsed()) {
            command = "synth";
            rc = cmd_synth(config, ctx);
        } else if (c_features->parsed()) {
            command = "features";
            rc = cmd_features(config, ctx, input_dir);
        } else if (c_pretrain->parsed()) {
            command = "pretrain";
            rc = cmd_pretrain(config, ctx, data_dir);
        } else if (c_train->parsed()) {
            command = "train";
            rc = cmd_train(config, ctx, data_dir, pretrained_path);
        } else if (c_eval->parsed()) {
            command = "eval";
            rc = cmd_eval(config, ctx, data_dir, checkpoint_path);
        } else if (c_attn->parsed()) {
            command = "attn-map";
            rc = cmd_attnmap(config, ctx, data_dir, checkpoint_path, class_filter,
                             stream_name, c_attn->count("--class") > 0,
                             c_attn->count("--stream") > 0);
        } else if (c_rerank->parsed()) {
            command = "rerank";
            rc = cmd_rerank(config, ctx, sessions_path, lambda_override, l_override,
                            mode_override, synth_sessions);
        } else if (c_rate->parsed()) {
            command = "rate";
            rc = cmd_rate(config, ctx, interactions_path, alpha_override, rate_synth);
        }
        if (rc == 0) ctx.finish(command);
        return rc;
    } catch (const bta::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const bta::data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const bta::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
