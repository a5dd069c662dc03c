#pragma once

#include <set>
#include <string>
#include <vector>

namespace bta {

/// Lowercase and split on any non-alphanumeric byte; empty tokens dropped.
/// Multi-byte codepoints are treated as separators, which keeps the rule
/// deterministic without a unicode table.
std::vector<std::string> tokenize(const std::string& text);

/// Same split with a stopword filter applied after lowercasing.
std::vector<std::string> tokenize(const std::string& text,
                                  const std::set<std::string>& stopwords);

}  // namespace bta
