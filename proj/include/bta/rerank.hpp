#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>

#include "bta/bm25.hpp"
#include "bta/errors.hpp"

namespace bta {

/// An examined search result with its estimated satisfaction probability.
struct ExaminedDoc {
    Document doc;
    double satisfaction = 0.0;  // yhat(d) in [0,1]
};

/// One search task: the query, the results the user examined (with
/// satisfaction estimates), and the unseen tail with held-out relevance.
struct QuerySession {
    std::string id;
    std::vector<std::string> query;
    std::vector<ExaminedDoc> examined;  // D_hi
    std::vector<Document> unseen;       // D_un
    void validate() const;
};

enum class RerankMode { bm25, ulm, slm };
RerankMode rerank_mode_from_string(const std::string& name);
std::string to_string(RerankMode mode);

inline constexpr double kSmoothingMu = 0.5;
inline constexpr double kDefaultLambda = 2.0;
inline constexpr int kDefaultRewriteLen = 5;

/// P(d|D_hi) = (lambda + yhat(d)) / (lambda |D_hi| + sum yhat); sums to 1.
std::vector<double> satisfaction_prior(const std::vector<double>& y_hat, double lambda);

/// Relevance-model word scores over the examined documents:
/// R(w) = sum_d P(d) P(w|d) prod_i P(q_i|d), with P(.|d) linearly
/// interpolated against the collection model (mu = 0.5). Empty documents are
/// skipped (flagged via skipped_empty). Candidate words are the tokens of
/// the examined documents.
std::map<std::string, double> word_relevance(const std::vector<const Document*>& examined,
                                             const std::vector<std::string>& query,
                                             const std::vector<double>& prior,
                                             const CorpusStats& stats,
                                             bool* skipped_empty = nullptr);

/// Append the top-l relevance words not already in the query; ties broken
/// lexicographically. truncated reports fewer than l candidates.
struct RewriteResult {
    std::vector<std::string> query;
    bool truncated = false;
};
RewriteResult rewrite_query(const std::vector<std::string>& query,
                            const std::map<std::string, double>& relevance, int l);

/// Order the unseen documents: plain BM25, or BM25 with the query rewritten
/// under a uniform (ulm) or satisfaction-weighted (slm) document prior.
/// Deterministic: stable score sort with document-id tie-break.
std::vector<const Document*> rerank_session(const QuerySession& session, RerankMode mode,
                                            double lambda = kDefaultLambda,
                                            int rewrite_len = kDefaultRewriteLen);

struct RankingMetrics {
    double ndcg1 = 0.0;
    double ndcg5 = 0.0;
    double ndcg10 = 0.0;
    double map10 = 0.0;
};

RankingMetrics evaluate_session(const QuerySession& session, RerankMode mode,
                                double lambda = kDefaultLambda,
                                int rewrite_len = kDefaultRewriteLen);

/// Mean metrics over all sessions.
RankingMetrics evaluate_sessions(const std::vector<QuerySession>& sessions, RerankMode mode,
                                 double lambda = kDefaultLambda,
                                 int rewrite_len = kDefaultRewriteLen);

/// JSON session file: {"sessions": [{id, query, examined: [{id, text,
/// satisfaction}], unseen: [{id, text, relevance}]}]}.
std::vector<QuerySession> load_sessions(const std::filesystem::path& path);
void save_sessions(const std::vector<QuerySession>& sessions,
                   const std::filesystem::path& path);

/// Synthetic sessions with planted topical satisfaction: the query is
/// ambiguous between two topics, examined results lean toward the
/// on-intent topic exactly when their satisfaction is high, and unseen
/// relevance follows the on-intent topic.
struct SessionSynthConfig {
    int sessions = 200;
    int topic_vocab = 15;       // words per topic pool
    int words_per_doc = 6;      // topic words per document
    int filler_vocab = 40;
    int fillers_per_doc = 2;
    int examined_on_topic = 3;  // satisfied examined docs
    int examined_off_topic = 2;
    int unseen_relevant = 5;
    int unseen_irrelevant = 5;
    uint64_t seed = 0;
};
std::vector<QuerySession> synth_sessions(const SessionSynthConfig& config);

}  // namespace bta
