#include "roht/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "roht/errors.hpp"
#include "roht/metrics.hpp"

namespace roht {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw NotFoundError("cannot open file: " + path);
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write file: " + path);
    }
    out << content;
}

nlohmann::json parse_json(const std::string& text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string(what) + " is not valid JSON: " + e.what());
    }
}

}  // namespace

const Paragraph* Corpus::find(int id) const {
    for (const auto& paragraph : paragraphs) {
        if (paragraph.id == id) {
            return &paragraph;
        }
    }
    return nullptr;
}

Corpus corpus_from_json(const std::string& json_text) {
    nlohmann::json doc = parse_json(json_text, "corpus");
    Corpus corpus;
    std::set<int> ids;
    for (const auto& p : doc.value("paragraphs", nlohmann::json::array())) {
        Paragraph paragraph;
        paragraph.id = p.at("id").get<int>();
        paragraph.title = p.at("title").get<std::string>();
        paragraph.text = p.at("text").get<std::string>();
        if (!ids.insert(paragraph.id).second) {
            throw ValidationError("duplicate paragraph id: " + std::to_string(paragraph.id));
        }
        corpus.paragraphs.push_back(std::move(paragraph));
    }
    return corpus;
}

std::string corpus_to_json(const Corpus& corpus) {
    nlohmann::json doc;
    doc["paragraphs"] = nlohmann::json::array();
    for (const auto& p : corpus.paragraphs) {
        doc["paragraphs"].push_back({{"id", p.id}, {"title", p.title}, {"text", p.text}});
    }
    return doc.dump(2) + "\n";
}

Corpus load_corpus(const std::string& path) { return corpus_from_json(read_file(path)); }

void save_corpus(const Corpus& corpus, const std::string& path) {
    write_file(path, corpus_to_json(corpus));
}

namespace {

const std::set<std::string>& stopword_set() {
    static const std::set<std::string> kStopwords{
        "a",    "an",   "and",  "are",  "at",   "both", "by",   "did",  "do",
        "does", "each", "for",  "how",  "in",   "is",   "it",   "me",   "of",
        "on",   "or",   "tell", "than", "that", "the",  "there", "to",  "was",
        "were", "what", "when", "where", "which", "who", "whom", "why",  "with"};
    return kStopwords;
}

}  // namespace

bool is_stopword(const std::string& token) { return stopword_set().count(token) > 0; }

std::vector<std::string> content_words(const std::string& text) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (auto& token : tokenize(text)) {
        if (!is_stopword(token) && seen.insert(token).second) {
            out.push_back(std::move(token));
        }
    }
    return out;
}

std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> sentences;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t dot = text.find(". ", start);
        if (dot == std::string::npos) {
            std::string tail = text.substr(start);
            while (!tail.empty() && tail.back() == ' ') {
                tail.pop_back();
            }
            if (!tail.empty()) {
                sentences.push_back(std::move(tail));
            }
            break;
        }
        sentences.push_back(text.substr(start, dot - start + 1));
        start = dot + 2;
    }
    return sentences;
}

Bm25Index::Bm25Index(const Corpus& corpus, double k1, double b)
    : corpus_(&corpus), k1_(k1), b_(b), avg_len_(1.0) {
    long long total_len = 0;
    for (std::size_t i = 0; i < corpus.paragraphs.size(); ++i) {
        const Paragraph& p = corpus.paragraphs[i];
        std::vector<std::string> tokens = tokenize(p.title + " " + p.text);
        doc_len_.push_back(static_cast<int>(tokens.size()));
        total_len += static_cast<long long>(tokens.size());
        for (const auto& token : tokens) {
            ++postings_[token][static_cast<int>(i)];
        }
    }
    if (!corpus.paragraphs.empty()) {
        avg_len_ = std::max(1.0, static_cast<double>(total_len) /
                                     static_cast<double>(corpus.paragraphs.size()));
    }
}

double Bm25Index::score(const std::string& query, int paragraph_index) const {
    const double n_docs = static_cast<double>(corpus_->paragraphs.size());
    double total = 0.0;
    for (const auto& term : tokenize(query)) {
        auto posting = postings_.find(term);
        if (posting == postings_.end()) {
            continue;
        }
        auto hit = posting->second.find(paragraph_index);
        if (hit == posting->second.end()) {
            continue;
        }
        const double df = static_cast<double>(posting->second.size());
        const double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
        const double tf = static_cast<double>(hit->second);
        const double len = static_cast<double>(doc_len_[static_cast<std::size_t>(paragraph_index)]);
        total += idf * tf * (k1_ + 1.0) / (tf + k1_ * (1.0 - b_ + b_ * len / avg_len_));
    }
    return total;
}

std::vector<int> Bm25Index::recall(const std::string& query, int n) const {
    std::vector<std::pair<double, int>> scored;
    for (std::size_t i = 0; i < corpus_->paragraphs.size(); ++i) {
        double s = score(query, static_cast<int>(i));
        if (s > 0.0) {
            scored.emplace_back(s, static_cast<int>(i));
        }
    }
    std::sort(scored.begin(), scored.end(), [this](const auto& a, const auto& b) {
        if (a.first != b.first) {
            return a.first > b.first;
        }
        return corpus_->paragraphs[static_cast<std::size_t>(a.second)].id <
               corpus_->paragraphs[static_cast<std::size_t>(b.second)].id;
    });
    std::vector<int> out;
    for (const auto& [s, index] : scored) {
        (void)s;
        if (n > 0 && static_cast<int>(out.size()) >= n) {
            break;
        }
        out.push_back(index);
    }
    return out;
}

std::vector<const Paragraph*> bm25_recall(const Question& q, const Bm25Index& index, int n) {
    std::vector<const Paragraph*> out;
    for (int i : index.recall(q.render(), n)) {
        out.push_back(&index.corpus().paragraphs[static_cast<std::size_t>(i)]);
    }
    return out;
}

EvidenceDecision LexicalOverlapSelector::judge(const std::string& question,
                                               const Paragraph& paragraph) const {
    std::vector<std::string> needed = content_words(question);
    if (needed.empty()) {
        return {false, 0.0};
    }
    std::set<std::string> present;
    for (auto& token : tokenize(paragraph.title + " " + paragraph.text)) {
        present.insert(std::move(token));
    }
    int hits = 0;
    for (const auto& word : needed) {
        if (present.count(word)) {
            ++hits;
        }
    }
    double fraction = static_cast<double>(hits) / static_cast<double>(needed.size());
    return {fraction >= threshold_, fraction};
}

FixtureEvidenceSelector FixtureEvidenceSelector::from_file(const std::string& path) {
    return from_json_text(read_file(path));
}

FixtureEvidenceSelector FixtureEvidenceSelector::from_json_text(const std::string& json_text) {
    nlohmann::json doc = parse_json(json_text, "evidence fixture");
    if (!doc.is_object()) {
        throw ValidationError("evidence fixture must map questions to paragraph id lists");
    }
    FixtureEvidenceSelector selector;
    for (const auto& [question, ids] : doc.items()) {
        for (const auto& id : ids) {
            selector.annotated_[question].insert(id.get<int>());
        }
    }
    return selector;
}

EvidenceDecision FixtureEvidenceSelector::judge(const std::string& question,
                                                const Paragraph& paragraph) const {
    auto it = annotated_.find(question);
    bool evidence = it != annotated_.end() && it->second.count(paragraph.id) > 0;
    return {evidence, evidence ? 1.0 : 0.0};
}

std::vector<const Paragraph*> select_evidence(const Question& q,
                                              const std::vector<const Paragraph*>& candidates,
                                              const EvidenceSelector& selector) {
    std::string question = q.render();
    std::vector<const Paragraph*> out;
    for (const Paragraph* paragraph : candidates) {
        if (selector.judge(question, *paragraph).evidence) {
            out.push_back(paragraph);
        }
    }
    return out;
}

FixtureSpanExtractor FixtureSpanExtractor::from_file(const std::string& path) {
    return from_json_text(read_file(path));
}

FixtureSpanExtractor FixtureSpanExtractor::from_json_text(const std::string& json_text) {
    nlohmann::json doc = parse_json(json_text, "span fixture");
    if (!doc.is_array()) {
        throw ValidationError("span fixture must be a JSON array");
    }
    FixtureSpanExtractor extractor;
    for (const auto& entry : doc) {
        std::string question = entry.at("question").get<std::string>();
        for (const auto& s : entry.at("spans")) {
            Extraction extraction;
            extraction.span = s.at("span").get<std::string>();
            extraction.p_ex = s.value("p_ex", 1.0);
            if (!(extraction.p_ex > 0.0 && extraction.p_ex <= 1.0)) {
                throw ValidationError("p_ex must be in (0, 1] for question: " + question);
            }
            if (s.contains("companion")) {
                extraction.companion = s.at("companion").get<std::string>();
            }
            extractor.entries_[question].push_back(std::move(extraction));
        }
    }
    return extractor;
}

std::vector<Extraction> FixtureSpanExtractor::extract(
    const std::string& question, const std::vector<const Paragraph*>& evidence) const {
    auto it = entries_.find(question);
    if (it == entries_.end()) {
        return {};
    }
    std::vector<Extraction> out;
    for (const Extraction& extraction : it->second) {
        std::string needle = normalize_surface(extraction.span);
        for (const Paragraph* paragraph : evidence) {
            if (normalize_surface(paragraph->title + " " + paragraph->text).find(needle) !=
                std::string::npos) {
                out.push_back(extraction);
                break;
            }
        }
    }
    return out;
}

AnswerList text_answers(const Question& q, double p_g,
                        const std::vector<const Paragraph*>& evidence,
                        const SpanExtractor& extractor) {
    if (evidence.empty()) {
        return {};
    }
    std::vector<ScoredAnswer> raw;
    for (const Extraction& extraction : extractor.extract(q.render(), evidence)) {
        AnswerValue value = parse_answer_value(extraction.span);
        if (extraction.companion) {
            value.companion = extraction.companion;
        }
        raw.push_back({std::move(value), p_g * extraction.p_ex, Source::Text});
    }
    return finalize_answers(std::move(raw), 0);
}

}  // namespace roht
