#include "bta/text.hpp"

#include <cctype>

namespace bta {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<std::string> tokenize(const std::string& text,
                                  const std::set<std::string>& stopwords) {
    std::vector<std::string> tokens = tokenize(text);
    std::erase_if(tokens, [&](const std::string& t) { return stopwords.count(t) != 0; });
    return tokens;
}

}  // namespace bta
