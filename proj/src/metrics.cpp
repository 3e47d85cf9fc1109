#include "roht/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace roht {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char ch : text) {
        if (std::isalnum(ch)) {
            current.push_back(static_cast<char>(std::tolower(ch)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

namespace {

std::vector<std::string> normalized_tokens(const std::string& text) {
    std::vector<std::string> tokens = tokenize(text);
    std::vector<std::string> kept;
    kept.reserve(tokens.size());
    for (auto& token : tokens) {
        if (token != "a" && token != "an" && token != "the") {
            kept.push_back(std::move(token));
        }
    }
    return kept;
}

}  // namespace

std::string normalize_answer(const std::string& text) {
    std::string out;
    for (const auto& token : normalized_tokens(text)) {
        if (!out.empty()) {
            out.push_back(' ');
        }
        out += token;
    }
    return out;
}

int exact_match(const std::string& prediction, const std::vector<std::string>& golds) {
    std::string pred = normalize_answer(prediction);
    for (const auto& gold : golds) {
        if (pred == normalize_answer(gold)) {
            return 1;
        }
    }
    return 0;
}

double token_f1(const std::string& prediction, const std::vector<std::string>& golds) {
    std::vector<std::string> pred = normalized_tokens(prediction);
    double best = 0.0;
    for (const auto& gold_text : golds) {
        std::vector<std::string> gold = normalized_tokens(gold_text);
        if (pred.empty() || gold.empty()) {
            best = std::max(best, pred == gold ? 1.0 : 0.0);
            continue;
        }
        std::map<std::string, int> gold_counts;
        for (const auto& token : gold) {
            ++gold_counts[token];
        }
        int overlap = 0;
        for (const auto& token : pred) {
            auto it = gold_counts.find(token);
            if (it != gold_counts.end() && it->second > 0) {
                --it->second;
                ++overlap;
            }
        }
        if (overlap == 0) {
            continue;
        }
        double precision = static_cast<double>(overlap) / static_cast<double>(pred.size());
        double recall = static_cast<double>(overlap) / static_cast<double>(gold.size());
        best = std::max(best, 2.0 * precision * recall / (precision + recall));
    }
    return best;
}

}  // namespace roht
