#pragma once
// Paragraph store with BM25 recall, pluggable evidence selection, and
// pluggable span extraction producing scored text answers.

#include "roht/answer.hpp"
#include "roht/question.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace roht {

struct Paragraph {
    int id = 0;
    std::string title;
    std::string text;
};

struct Corpus {
    std::vector<Paragraph> paragraphs;

    const Paragraph* find(int id) const;
};

Corpus corpus_from_json(const std::string& json_text);
std::string corpus_to_json(const Corpus& corpus);
Corpus load_corpus(const std::string& path);
void save_corpus(const Corpus& corpus, const std::string& path);

bool is_stopword(const std::string& token);
// tokenize() minus stopwords, duplicates removed, first-occurrence order.
std::vector<std::string> content_words(const std::string& text);

// "A b. C d." -> {"A b.", "C d."}; periods are sentence terminators only.
std::vector<std::string> split_sentences(const std::string& text);

// Okapi BM25 over title + " " + text, idf = ln(1 + (N - df + 0.5)/(df + 0.5)).
class Bm25Index {
public:
    explicit Bm25Index(const Corpus& corpus, double k1 = 1.2, double b = 0.75);

    double score(const std::string& query, int paragraph_index) const;
    // Paragraph indices with positive score, by descending score then
    // ascending paragraph id, at most n (n <= 0 means all).
    std::vector<int> recall(const std::string& query, int n) const;

    const Corpus& corpus() const { return *corpus_; }

private:
    const Corpus* corpus_;
    double k1_, b_, avg_len_;
    std::vector<int> doc_len_;
    std::map<std::string, std::map<int, int>> postings_;  // term -> paragraph index -> tf
};

std::vector<const Paragraph*> bm25_recall(const Question& q, const Bm25Index& index, int n);

struct EvidenceDecision {
    bool evidence = false;
    double confidence = 0.0;
};

class EvidenceSelector {
public:
    virtual ~EvidenceSelector() = default;
    virtual EvidenceDecision judge(const std::string& question,
                                   const Paragraph& paragraph) const = 0;
};

// A paragraph is evidence iff it contains at least `threshold` of the
// question's distinct content words; confidence is that fraction.
class LexicalOverlapSelector : public EvidenceSelector {
public:
    explicit LexicalOverlapSelector(double threshold = 0.6) : threshold_(threshold) {}

    EvidenceDecision judge(const std::string& question,
                           const Paragraph& paragraph) const override;

private:
    double threshold_;
};

// Annotated evidence: JSON object {question: [paragraph ids]}.
class FixtureEvidenceSelector : public EvidenceSelector {
public:
    static FixtureEvidenceSelector from_file(const std::string& path);
    static FixtureEvidenceSelector from_json_text(const std::string& json_text);

    EvidenceDecision judge(const std::string& question,
                           const Paragraph& paragraph) const override;

private:
    std::map<std::string, std::set<int>> annotated_;
};

std::vector<const Paragraph*> select_evidence(const Question& q,
                                              const std::vector<const Paragraph*>& candidates,
                                              const EvidenceSelector& selector);

struct Extraction {
    std::string span;
    double p_ex = 1.0;  // in (0, 1]
    std::optional<std::string> companion;  // entity the span describes, when known
};

class SpanExtractor {
public:
    virtual ~SpanExtractor() = default;
    virtual std::vector<Extraction> extract(const std::string& question,
                                            const std::vector<const Paragraph*>& evidence) const = 0;
};

// JSON array of {question, spans: [{span, p_ex, companion?}]}; only spans that
// actually occur in the supplied evidence are emitted.
class FixtureSpanExtractor : public SpanExtractor {
public:
    static FixtureSpanExtractor from_file(const std::string& path);
    static FixtureSpanExtractor from_json_text(const std::string& json_text);

    std::vector<Extraction> extract(const std::string& question,
                                    const std::vector<const Paragraph*>& evidence) const override;

private:
    std::map<std::string, std::vector<Extraction>> entries_;
};

// Each extracted span scored p_g * p_ex; empty evidence yields an empty list.
AnswerList text_answers(const Question& q, double p_g,
                        const std::vector<const Paragraph*>& evidence,
                        const SpanExtractor& extractor);

}  // namespace roht
