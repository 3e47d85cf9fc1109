#pragma once
// Recursive probabilistic reasoning over a question tree: a scheduler picks
// suitable knowledge sources per node, executors produce scored answers, a
// reference resolver handles bridge/operation leaves, and an aggregator
// merges everything into ranked top-k lists. Also hosts the flat baseline
// that answers a question's atomic representation in sequence.

#include "roht/hqdt.hpp"
#include "roht/kb.hpp"
#include "roht/text.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace roht {

struct Suitability {
    bool kb = false;
    bool text = false;
    bool child = false;
};

struct ReasonerConfig {
    double gamma = 0.7;        // precision threshold gating the KB source
    int topk = 5;              // answer list cap
    int combination_cap = 3;   // answers taken per referenced sibling
    int recall_n = 10;         // paragraphs recalled before evidence selection
    bool use_kb = true;
    bool use_text = true;
    bool force_sources = false;  // bypass the precision gate and the selector
};

// Read-only stores shared by every solve; null members disable the
// corresponding source gracefully.
struct SolveStores {
    const KbView* kb = nullptr;
    const PrecisionTable* precision = nullptr;
    const SemanticParser* parser = nullptr;
    const Bm25Index* index = nullptr;
    const EvidenceSelector* selector = nullptr;
    const SpanExtractor* extractor = nullptr;
    // Pre-assigned candidate paragraphs for this question; skips BM25 recall.
    const std::vector<const Paragraph*>* fixed_paragraphs = nullptr;
};

// Union of the per-source lists, deduplicated by normalized surface keeping
// the maximum score, sorted descending (ties by source priority then
// surface), truncated to k.
AnswerList aggregate(const AnswerList& kb, const AnswerList& text, const AnswerList& child, int k);

// Replaces every reference token with the mapped surface form, yielding a
// natural-language question. Throws SubstitutionError on an unmapped
// reference or a non-bridge input.
Question substitute_refs(const Question& bridge, const std::map<int, std::string>& surfaces);

class Reasoner {
public:
    Reasoner(const SolveStores& stores, const ReasonerConfig& config);
    ~Reasoner();

    Reasoner(const Reasoner&) = delete;
    Reasoner& operator=(const Reasoner&) = delete;

    // Full recursion from the root; the result is the root's aggregate.
    AnswerList solve_tree(const Hqdt& tree);

    // Flat baseline: answers the atoms left to right (each carrying
    // `certainty`), resolving references against earlier positions; the
    // final atom's list is the result.
    AnswerList solve_atoms(const AtomicRepresentation& ar, double certainty);

    // Source selection for one question; parse and evidence are cached and
    // reused by the executors.
    Suitability schedule(const Question& q, bool non_leaf);

    // JSON record of the last solve: per-node suitability, per-source answer
    // lists, bridge combinations, and the chosen aggregates.
    std::string trace_json() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace roht
