#pragma once
// Answer-string evaluation: shared tokenization plus exact-match and
// token-overlap F1 under the usual extractive-QA normalization
// (lowercase, punctuation stripped, articles removed, whitespace collapsed).

#include <string>
#include <vector>

namespace roht {

// Lowercases, turns every non-alphanumeric character into a space, splits on
// whitespace. The same tokenizer feeds the retrieval index and the metrics.
std::vector<std::string> tokenize(const std::string& text);

// tokenize() minus the articles {a, an, the}, rejoined with single spaces.
std::string normalize_answer(const std::string& text);

// 1 iff the normalized prediction equals any normalized gold.
int exact_match(const std::string& prediction, const std::vector<std::string>& golds);

// Max over golds of the harmonic mean of token precision/recall on
// normalized token multisets.
double token_f1(const std::string& prediction, const std::vector<std::string>& golds);

}  // namespace roht
