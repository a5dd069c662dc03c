#include "bta/bm25.hpp"

#include <cmath>
#include <set>

namespace bta {

CorpusStats CorpusStats::build(const std::vector<const Document*>& docs) {
    CorpusStats stats;
    stats.doc_count_ = docs.size();
    size_t total_len = 0;
    for (const Document* d : docs) {
        total_len += d->tokens.size();
        std::set<std::string> seen;
        for (const std::string& t : d->tokens) {
            stats.term_count_[t] += 1;
            if (seen.insert(t).second) stats.doc_freq_[t] += 1;
        }
    }
    stats.total_tokens_ = total_len;
    stats.avg_doc_len_ =
        docs.empty() ? 0.0 : static_cast<double>(total_len) / static_cast<double>(docs.size());
    return stats;
}

size_t CorpusStats::doc_frequency(const std::string& term) const {
    auto it = doc_freq_.find(term);
    return it == doc_freq_.end() ? 0 : it->second;
}

double CorpusStats::collection_prob(const std::string& term) const {
    if (total_tokens_ == 0) return 0.0;
    auto it = term_count_.find(term);
    return it == term_count_.end()
               ? 0.0
               : static_cast<double>(it->second) / static_cast<double>(total_tokens_);
}

double bm25_score(const std::vector<std::string>& query, const Document& doc,
                  const CorpusStats& stats, double k1, double b) {
    if (query.empty() || doc.tokens.empty()) return 0.0;
    std::map<std::string, size_t> tf;
    for (const std::string& t : doc.tokens) tf[t] += 1;
    const double dl = static_cast<double>(doc.tokens.size());
    const double norm = k1 * (1.0 - b + b * dl / stats.avg_doc_len());
    double score = 0.0;
    for (const std::string& q : query) {
        auto it = tf.find(q);
        if (it == tf.end()) continue;  // absent terms contribute nothing
        const double df = static_cast<double>(stats.doc_frequency(q));
        const double n = static_cast<double>(stats.doc_count());
        const double idf = std::log((n - df + 0.5) / (df + 0.5) + 1.0);
        const double f = static_cast<double>(it->second);
        score += idf * f * (k1 + 1.0) / (f + norm);
    }
    return score;
}

}  // namespace bta
