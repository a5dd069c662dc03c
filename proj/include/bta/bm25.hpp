#pragma once

#include <map>
#include <string>
#include <vector>

namespace bta {

struct Document {
    std::string id;
    std::vector<std::string> tokens;  // lowercase
    int relevance = 0;                // held-out grade for unseen documents
};

/// Collection statistics over a candidate set: document frequencies,
/// collection term probabilities, average document length.
class CorpusStats {
public:
    static CorpusStats build(const std::vector<const Document*>& docs);

    size_t doc_count() const { return doc_count_; }
    double avg_doc_len() const { return avg_doc_len_; }
    size_t doc_frequency(const std::string& term) const;
    /// P(w|C): term count over total token count; sums to 1.
    double collection_prob(const std::string& term) const;

private:
    size_t doc_count_ = 0;
    double avg_doc_len_ = 0.0;
    size_t total_tokens_ = 0;
    std::map<std::string, size_t> doc_freq_;
    std::map<std::string, size_t> term_count_;
};

inline constexpr double kBm25K1 = 1.2;
inline constexpr double kBm25B = 0.75;

/// Okapi BM25 with idf = ln((N - df + 0.5)/(df + 0.5) + 1).
double bm25_score(const std::vector<std::string>& query, const Document& doc,
                  const CorpusStats& stats, double k1 = kBm25K1, double b = kBm25B);

}  // namespace bta
