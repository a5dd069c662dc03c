#include "bta/rerank.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bta/metrics.hpp"
#include "bta/rng.hpp"
#include "bta/text.hpp"

namespace bta {

void QuerySession::validate() const {
    std::set<std::string> ids;
    for (const ExaminedDoc& e : examined) {
        if (e.doc.id.empty()) throw data_error("session '" + id + "': empty document id");
        if (!ids.insert(e.doc.id).second)
            throw data_error("session '" + id + "': duplicate document id '" + e.doc.id + "'");
        if (e.satisfaction < 0.0 || e.satisfaction > 1.0)
            throw data_error("session '" + id + "': satisfaction outside [0,1] for '" +
                             e.doc.id + "'");
    }
    for (const Document& d : unseen) {
        if (d.id.empty()) throw data_error("session '" + id + "': empty document id");
        if (!ids.insert(d.id).second)
            throw data_error("session '" + id + "': examined and unseen overlap at '" +
                             d.id + "'");
        if (d.relevance < 0)
            throw data_error("session '" + id + "': negative relevance for '" + d.id + "'");
    }
}

RerankMode rerank_mode_from_string(const std::string& name) {
    if (name == "bm25") return RerankMode::bm25;
    if (name == "ulm") return RerankMode::ulm;
    if (name == "slm") return RerankMode::slm;
    throw config_error("unknown rerank mode '" + name + "' (bm25|ulm|slm)");
}

std::string to_string(RerankMode mode) {
    switch (mode) {
        case RerankMode::bm25: return "bm25";
        case RerankMode::ulm: return "ulm";
        case RerankMode::slm: return "slm";
    }
    return "?";
}

std::vector<double> satisfaction_prior(const std::vector<double>& y_hat, double lambda) {
    if (y_hat.empty()) throw data_error("satisfaction_prior: no examined documents");
    if (lambda <= 0.0) throw config_error("satisfaction_prior: lambda must be positive");
    double sum_y = 0.0;
    for (double y : y_hat) {
        if (y < 0.0 || y > 1.0)
            throw data_error("satisfaction_prior: estimate outside [0,1]");
        sum_y += y;
    }
    const double denom = lambda * static_cast<double>(y_hat.size()) + sum_y;
    std::vector<double> prior(y_hat.size());
    for (size_t i = 0; i < y_hat.size(); ++i) prior[i] = (lambda + y_hat[i]) / denom;
    return prior;
}

std::map<std::string, double> word_relevance(const std::vector<const Document*>& examined,
                                             const std::vector<std::string>& query,
                                             const std::vector<double>& prior,
                                             const CorpusStats& stats,
                                             bool* skipped_empty) {
    if (examined.empty()) throw data_error("word_relevance: no examined documents");
    if (prior.size() != examined.size())
        throw dimension_error("word_relevance: prior size " + std::to_string(prior.size()) +
                              " vs " + std::to_string(examined.size()) + " documents");
    if (skipped_empty) *skipped_empty = false;

    // candidate vocabulary: every token of the examined documents
    std::set<std::string> vocab;
    for (const Document* d : examined) vocab.insert(d->tokens.begin(), d->tokens.end());

    std::map<std::string, double> relevance;
    for (const std::string& w : vocab) relevance[w] = 0.0;
    for (size_t di = 0; di < examined.size(); ++di) {
        const Document& d = *examined[di];
        if (d.tokens.empty()) {
            if (skipped_empty) *skipped_empty = true;
            continue;
        }
        std::map<std::string, size_t> tf;
        for (const std::string& t : d.tokens) tf[t] += 1;
        const double len = static_cast<double>(d.tokens.size());
        auto smoothed = [&](const std::string& w) {
            auto it = tf.find(w);
            const double rel_freq = it == tf.end() ? 0.0 : static_cast<double>(it->second) / len;
            return (1.0 - kSmoothingMu) * rel_freq + kSmoothingMu * stats.collection_prob(w);
        };
        double query_likelihood = 1.0;
        for (const std::string& q : query) query_likelihood *= smoothed(q);
        const double doc_weight = prior[di] * query_likelihood;
        // the smoothed model spreads mass over the whole candidate set, so
        // every document contributes to every word
        for (const std::string& w : vocab) relevance[w] += doc_weight * smoothed(w);
    }
    return relevance;
}

RewriteResult rewrite_query(const std::vector<std::string>& query,
                            const std::map<std::string, double>& relevance, int l) {
    if (l < 0) throw config_error("rewrite_query: l must be >= 0");
    RewriteResult out;
    out.query = query;
    if (l == 0) return out;
    const std::set<std::string> in_query(query.begin(), query.end());
    std::vector<std::pair<std::string, double>> candidates;
    for (const auto& [w, r] : relevance)
        if (!in_query.count(w)) candidates.emplace_back(w, r);
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;  // deterministic lexicographic tie-break
    });
    const size_t take = std::min<size_t>(static_cast<size_t>(l), candidates.size());
    out.truncated = take < static_cast<size_t>(l);
    for (size_t i = 0; i < take; ++i) out.query.push_back(candidates[i].first);
    return out;
}

namespace {

std::vector<const Document*> rank_by_bm25(const std::vector<std::string>& query,
                                          const std::vector<Document>& docs,
                                          const CorpusStats& stats) {
    std::vector<std::pair<double, const Document*>> scored;
    scored.reserve(docs.size());
    for (const Document& d : docs) scored.emplace_back(bm25_score(query, d, stats), &d);
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second->id < b.second->id;
    });
    std::vector<const Document*> out;
    out.reserve(scored.size());
    for (const auto& [score, doc] : scored) out.push_back(doc);
    return out;
}

}  // namespace

std::vector<const Document*> rerank_session(const QuerySession& session, RerankMode mode,
                                            double lambda, int rewrite_len) {
    session.validate();
    if (session.unseen.empty()) return {};
    // collection statistics cover the session's whole result list
    std::vector<const Document*> all;
    for (const ExaminedDoc& e : session.examined) all.push_back(&e.doc);
    for (const Document& d : session.unseen) all.push_back(&d);
    const CorpusStats stats = CorpusStats::build(all);

    std::vector<std::string> query = session.query;
    if (mode != RerankMode::bm25) {
        if (session.examined.empty())
            throw data_error("rerank_session '" + session.id +
                             "': query rewriting needs examined documents");
        std::vector<const Document*> examined;
        std::vector<double> y_hat;
        for (const ExaminedDoc& e : session.examined) {
            examined.push_back(&e.doc);
            y_hat.push_back(e.satisfaction);
        }
        std::vector<double> prior =
            mode == RerankMode::slm
                ? satisfaction_prior(y_hat, lambda)
                : std::vector<double>(examined.size(), 1.0 / examined.size());
        const auto relevance = word_relevance(examined, session.query, prior, stats);
        query = rewrite_query(session.query, relevance, rewrite_len).query;
    }
    return rank_by_bm25(query, session.unseen, stats);
}

RankingMetrics evaluate_session(const QuerySession& session, RerankMode mode, double lambda,
                                int rewrite_len) {
    const auto ranked = rerank_session(session, mode, lambda, rewrite_len);
    std::vector<int> relevance;
    relevance.reserve(ranked.size());
    for (const Document* d : ranked) relevance.push_back(d->relevance);
    RankingMetrics m;
    m.ndcg1 = ndcg_at_k(relevance, 1);
    m.ndcg5 = ndcg_at_k(relevance, 5);
    m.ndcg10 = ndcg_at_k(relevance, 10);
    m.map10 = map_at_k(relevance, 10);
    return m;
}

RankingMetrics evaluate_sessions(const std::vector<QuerySession>& sessions, RerankMode mode,
                                 double lambda, int rewrite_len) {
    if (sessions.empty()) return {};
    RankingMetrics mean;
    for (const QuerySession& s : sessions) {
        const RankingMetrics m = evaluate_session(s, mode, lambda, rewrite_len);
        mean.ndcg1 += m.ndcg1;
        mean.ndcg5 += m.ndcg5;
        mean.ndcg10 += m.ndcg10;
        mean.map10 += m.map10;
    }
    const double n = static_cast<double>(sessions.size());
    mean.ndcg1 /= n;
    mean.ndcg5 /= n;
    mean.ndcg10 /= n;
    mean.map10 /= n;
    return mean;
}

std::vector<QuerySession> load_sessions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("load_sessions: cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw data_error("load_sessions: bad json: " + std::string(e.what()));
    }
    std::vector<QuerySession> sessions;
    for (const auto& js : j.at("sessions")) {
        QuerySession s;
        s.id = js.at("id").get<std::string>();
        s.query = tokenize(js.at("query").get<std::string>());
        for (const auto& jd : js.value("examined", nlohmann::json::array())) {
            ExaminedDoc e;
            e.doc.id = jd.at("id").get<std::string>();
            e.doc.tokens = tokenize(jd.at("text").get<std::string>());
            e.satisfaction = jd.at("satisfaction").get<double>();
            s.examined.push_back(std::move(e));
        }
        for (const auto& jd : js.value("unseen", nlohmann::json::array())) {
            Document d;
            d.id = jd.at("id").get<std::string>();
            d.tokens = tokenize(jd.at("text").get<std::string>());
            d.relevance = jd.value("relevance", 0);
            s.unseen.push_back(std::move(d));
        }
        s.validate();
        sessions.push_back(std::move(s));
    }
    return sessions;
}

void save_sessions(const std::vector<QuerySession>& sessions,
                   const std::filesystem::path& path) {
    nlohmann::json j;
    j["sessions"] = nlohmann::json::array();
    auto join = [](const std::vector<std::string>& tokens) {
        std::string out;
        for (const std::string& t : tokens) {
            if (!out.empty()) out += ' ';
            out += t;
        }
        return out;
    };
    for (const QuerySession& s : sessions) {
        nlohmann::json js;
        js["id"] = s.id;
        js["query"] = join(s.query);
        js["examined"] = nlohmann::json::array();
        for (const ExaminedDoc& e : s.examined)
            js["examined"].push_back({{"id", e.doc.id},
                                      {"text", join(e.doc.tokens)},
                                      {"satisfaction", e.satisfaction}});
        js["unseen"] = nlohmann::json::array();
        for (const Document& d : s.unseen)
            js["unseen"].push_back(
                {{"id", d.id}, {"text", join(d.tokens)}, {"relevance", d.relevance}});
        j["sessions"].push_back(std::move(js));
    }
    std::ofstream out(path);
    if (!out) throw data_error("save_sessions: cannot open " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw data_error("save_sessions: write failed for " + path.string());
}

std::vector<QuerySession> synth_sessions(const SessionSynthConfig& config) {
    if (config.sessions < 1) throw config_error("synth_sessions: sessions must be >= 1");
    Rng master = Rng(config.seed).split("sessions");

    std::vector<QuerySession> out;
    out.reserve(config.sessions);
    for (int si = 0; si < config.sessions; ++si) {
        Rng rng = master.split(static_cast<uint64_t>(si));
        // word ids shuffled so lexicographic tie-breaks cannot track topics
        std::vector<int> word_ids(2 * config.topic_vocab + config.filler_vocab);
        for (size_t i = 0; i < word_ids.size(); ++i) word_ids[i] = static_cast<int>(i);
        rng.shuffle(word_ids);
        auto word = [&](int idx) {
            std::ostringstream w;
            w << "w" << std::setw(3) << std::setfill('0') << word_ids[idx];
            return w.str();
        };
        auto topic_word = [&](int topic, int k) { return word(topic * config.topic_vocab + k); };
        auto filler_word = [&](int k) { return word(2 * config.topic_vocab + k); };

        auto make_doc = [&](const std::string& id, int topic) {
            Document d;
            d.id = id;
            d.tokens = {"q0", "q1"};  // the ambiguous query appears everywhere
            for (int k = 0; k < config.words_per_doc; ++k)
                d.tokens.push_back(
                    topic_word(topic, static_cast<int>(rng.below(config.topic_vocab))));
            for (int k = 0; k < config.fillers_per_doc; ++k)
                d.tokens.push_back(filler_word(static_cast<int>(rng.below(config.filler_vocab))));
            return d;
        };

        QuerySession s;
        s.id = "session-" + std::to_string(si);
        s.query = {"q0", "q1"};
        int doc_seq = 0;
        for (int i = 0; i < config.examined_on_topic; ++i) {
            ExaminedDoc e;
            e.doc = make_doc("e" + std::to_string(doc_seq++), 0);
            e.satisfaction = rng.uniform(0.75, 0.95);
            s.examined.push_back(std::move(e));
        }
        for (int i = 0; i < config.examined_off_topic; ++i) {
            ExaminedDoc e;
            e.doc = make_doc("e" + std::to_string(doc_seq++), 1);
            e.satisfaction = rng.uniform(0.05, 0.25);
            s.examined.push_back(std::move(e));
        }
        // interleave unseen docs so ids do not encode relevance
        std::vector<int> topics;
        for (int i = 0; i < config.unseen_relevant; ++i) topics.push_back(0);
        for (int i = 0; i < config.unseen_irrelevant; ++i) topics.push_back(1);
        rng.shuffle(topics);
        for (size_t i = 0; i < topics.size(); ++i) {
            Document d = make_doc("u" + std::to_string(i), topics[i]);
            d.relevance = topics[i] == 0 ? 1 : 0;
            s.unseen.push_back(std::move(d));
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace bta
