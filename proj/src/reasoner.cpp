#include "roht/reasoner.hpp"

#include "roht/errors.hpp"
#include "roht/ops.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <utility>

namespace roht {

namespace {

std::vector<std::string> whitespace_split(const std::string& text) {
    std::vector<std::string> words;
    std::istringstream stream(text);
    std::string word;
    while (stream >> word) words.push_back(word);
    return words;
}

nlohmann::json answers_json(const AnswerList& list) {
    nlohmann::json out = nlohmann::json::array();
    for (const ScoredAnswer& answer : list.answers) {
        out.push_back({{"score", answer.score},
                       {"source", to_string(answer.source)},
                       {"surface", answer.value.surface()}});
    }
    return out;
}

nlohmann::json base_entry(int index, const Question& q, double certainty) {
    return {{"certainty", certainty},
            {"index", index},
            {"kind", to_string(q.kind())},
            {"question", q.render()}};
}

}  // namespace

AnswerList aggregate(const AnswerList& kb, const AnswerList& text, const AnswerList& child,
                     int k) {
    std::vector<ScoredAnswer> merged;
    merged.reserve(kb.size() + text.size() + child.size());
    for (const AnswerList* list : {&kb, &text, &child}) {
        merged.insert(merged.end(), list->answers.begin(), list->answers.end());
    }
    return finalize_answers(std::move(merged), k);
}

Question substitute_refs(const Question& bridge, const std::map<int, std::string>& surfaces) {
    if (bridge.kind() != QuestionKind::Bridge) {
        throw SubstitutionError("substitution requires a bridge question, got: " +
                                bridge.render());
    }
    std::vector<Token> tokens;
    for (const Token& token : bridge.tokens()) {
        if (token.kind == Token::Kind::Word) {
            tokens.push_back(token);
            continue;
        }
        auto it = surfaces.find(token.target);
        if (it == surfaces.end()) {
            throw SubstitutionError("no surface form for reference #" +
                                    std::to_string(token.target));
        }
        std::vector<std::string> words = whitespace_split(it->second);
        if (words.empty()) {
            throw SubstitutionError("empty surface form for reference #" +
                                    std::to_string(token.target));
        }
        for (std::string& word : words) tokens.push_back(Token::word(std::move(word)));
    }
    return Question::from_tokens(std::move(tokens));
}

struct Reasoner::Impl {
    SolveStores stores;
    ReasonerConfig config;

    std::map<std::string, std::optional<ParsedProgram>> parse_cache;
    std::map<std::string, std::vector<const Paragraph*>> evidence_cache;

    nlohmann::json trace = nlohmann::json::object();

    Impl(const SolveStores& s, const ReasonerConfig& c) : stores(s), config(c) {}

    const std::optional<ParsedProgram>& cached_parse(const std::string& text) {
        auto it = parse_cache.find(text);
        if (it == parse_cache.end()) {
            std::optional<ParsedProgram> parsed;
            if (stores.parser != nullptr) parsed = stores.parser->parse(text);
            it = parse_cache.emplace(text, std::move(parsed)).first;
        }
        return it->second;
    }

    const std::vector<const Paragraph*>& cached_evidence(const Question& q) {
        const std::string key = q.render();
        auto it = evidence_cache.find(key);
        if (it != evidence_cache.end()) return it->second;
        std::vector<const Paragraph*> candidates;
        if (stores.fixed_paragraphs != nullptr) {
            candidates = *stores.fixed_paragraphs;
        } else if (stores.index != nullptr) {
            candidates = bm25_recall(q, *stores.index, config.recall_n);
        }
        std::vector<const Paragraph*> evidence;
        if (config.force_sources) {
            evidence = std::move(candidates);
        } else if (stores.selector != nullptr) {
            evidence = select_evidence(q, candidates, *stores.selector);
        }
        return evidence_cache.emplace(key, std::move(evidence)).first->second;
    }

    Suitability schedule(const Question& q, bool non_leaf) {
        Suitability suit;
        suit.child = non_leaf;
        if (q.kind() != QuestionKind::NaturalLanguage) return suit;
        if (config.use_kb && stores.kb != nullptr && stores.parser != nullptr) {
            const std::optional<ParsedProgram>& parsed = cached_parse(q.render());
            if (parsed.has_value()) {
                if (config.force_sources) {
                    suit.kb = true;
                } else {
                    // A skeleton absent from the table has never been answered
                    // correctly, which is indistinguishable from precision 0.
                    double precision = 0.0;
                    if (stores.precision != nullptr) {
                        precision = stores.precision
                                        ->lookup(function_skeleton(parsed->program))
                                        .value_or(0.0);
                    }
                    suit.kb = precision >= config.gamma;
                }
            }
        }
        if (config.use_text && stores.extractor != nullptr) {
            suit.text = !cached_evidence(q).empty();
        }
        return suit;
    }

    AnswerList kb_list(const Question& q, double p_g) {
        const std::optional<ParsedProgram>& parsed = cached_parse(q.render());
        if (!parsed.has_value()) return {};
        std::vector<AnswerValue> values;
        try {
            values = execute_program(*stores.kb, parsed->program);
        } catch (const ExecError&) {
            return {};
        }
        std::vector<ScoredAnswer> scored;
        scored.reserve(values.size());
        for (AnswerValue& value : values) {
            scored.push_back({std::move(value), p_g * parsed->p_parse, Source::Kb});
        }
        return finalize_answers(std::move(scored), 0);
    }

    // Natural-language solve: schedule, run the suitable executors, recurse
    // into children when present, aggregate. `tree`/`node_index` are null/-1
    // for detached questions created by reference substitution.
    AnswerList solve_nl(const Question& q, double certainty, const Hqdt* tree, int node_index,
                        nlohmann::json& entry) {
        const bool non_leaf =
            tree != nullptr && !tree->node(node_index).is_leaf();
        Suitability suit = schedule(q, non_leaf);
        AnswerList from_kb, from_text, from_child;
        if (suit.kb) from_kb = kb_list(q, certainty);
        if (suit.text) {
            from_text = text_answers(q, certainty, cached_evidence(q), *stores.extractor);
        }
        if (suit.child) {
            const HqdtNode& node = tree->node(node_index);
            std::map<int, AnswerList> by_sibling;
            nlohmann::json children = nlohmann::json::array();
            for (std::size_t i = 0; i + 1 < node.children.size(); ++i) {
                const int child = node.children[i];
                nlohmann::json child_entry;
                by_sibling[child] = solve_node(*tree, child, child_entry);
                children.push_back(std::move(child_entry));
            }
            const int last = node.children.back();
            nlohmann::json last_entry = base_entry(last, tree->node(last).question,
                                                   tree->node(last).certainty);
            from_child = solve_ref_question(tree->node(last).question,
                                            tree->node(last).certainty, by_sibling,
                                            last_entry);
            children.push_back(std::move(last_entry));
            entry["children"] = std::move(children);
        }
        entry["suitability"] = {{"child", suit.child}, {"kb", suit.kb}, {"text", suit.text}};
        entry["kb"] = answers_json(from_kb);
        entry["text"] = answers_json(from_text);
        entry["child"] = answers_json(from_child);
        AnswerList result = aggregate(from_kb, from_text, from_child, config.topk);
        entry["result"] = answers_json(result);
        return result;
    }

    AnswerList solve_node(const Hqdt& tree, int index, nlohmann::json& entry) {
        const HqdtNode& node = tree.node(index);
        entry = base_entry(node.index, node.question, node.certainty);
        if (node.question.kind() != QuestionKind::NaturalLanguage) {
            throw InvalidTreeError(
                "node " + std::to_string(index) +
                " holds a reference question outside a last-child position");
        }
        AnswerList result = solve_nl(node.question, node.certainty, &tree, index, entry);
        return result;
    }

    // Solves a bridge or symbolic-operation question against already-solved
    // referenced results.
    AnswerList solve_ref_question(const Question& q, double certainty,
                                  const std::map<int, AnswerList>& referenced,
                                  nlohmann::json& entry) {
        const std::vector<int> refs = get_ref_tokens(q);
        auto resolve = [&](int target) -> const AnswerList& {
            auto it = referenced.find(target);
            if (it == referenced.end()) {
                throw SubstitutionError("reference #" + std::to_string(target) +
                                        " has no solved target");
            }
            return it->second;
        };

        if (q.kind() == QuestionKind::SymbolicOperation) {
            OpName op = OpName::Verify;
            std::vector<std::string> args;
            for (const Token& token : q.tokens()) {
                if (token.kind == Token::Kind::OpName) op = token.op;
                if (token.kind == Token::Kind::OpArg) args.push_back(token.text);
            }
            std::vector<AnswerList> inputs;
            inputs.reserve(refs.size());
            for (int target : refs) inputs.push_back(resolve(target));
            const UnitTable units = stores.kb != nullptr ? stores.kb->units() : UnitTable{};
            AnswerList applied = apply_operation(op, args, inputs, certainty, units);
            entry["operation"] = {{"args", args}, {"name", to_string(op)}};
            AnswerList result = finalize_answers(std::move(applied.answers), config.topk);
            entry["result"] = answers_json(result);
            return result;
        }

        if (q.kind() != QuestionKind::Bridge) {
            throw SubstitutionError("expected a reference-bearing question, got: " + q.render());
        }

        // Distinct referenced siblings in first-mention order.
        std::vector<int> distinct;
        for (int target : refs) {
            if (std::find(distinct.begin(), distinct.end(), target) == distinct.end()) {
                distinct.push_back(target);
            }
        }
        nlohmann::json combos = nlohmann::json::array();
        for (int target : distinct) {
            if (resolve(target).empty()) {
                // An unanswered sub-question leaves nothing to substitute.
                entry["combinations"] = std::move(combos);
                entry["result"] = answers_json(AnswerList{});
                return {};
            }
        }

        // Top answers per referenced sibling, then every combination ordered
        // by descending mean input score.
        std::vector<std::vector<const ScoredAnswer*>> pools;
        for (int target : distinct) {
            const AnswerList& list = resolve(target);
            std::vector<const ScoredAnswer*> pool;
            const std::size_t take =
                std::min(list.answers.size(),
                         static_cast<std::size_t>(std::max(config.combination_cap, 1)));
            for (std::size_t i = 0; i < take; ++i) pool.push_back(&list.answers[i]);
            pools.push_back(std::move(pool));
        }
        struct Combo {
            std::vector<const ScoredAnswer*> picks;
            double mean = 0.0;
        };
        std::vector<Combo> order;
        std::vector<std::size_t> cursor(pools.size(), 0);
        while (true) {
            Combo combo;
            double sum = 0.0;
            for (std::size_t i = 0; i < pools.size(); ++i) {
                combo.picks.push_back(pools[i][cursor[i]]);
                sum += pools[i][cursor[i]]->score;
            }
            combo.mean = sum / static_cast<double>(pools.size());
            order.push_back(std::move(combo));
            std::size_t pos = pools.size();
            while (pos > 0) {
                --pos;
                if (++cursor[pos] < pools[pos].size()) break;
                cursor[pos] = 0;
                if (pos == 0) {
                    pos = pools.size() + 1;  // enumeration finished
                    break;
                }
            }
            if (pos == pools.size() + 1) break;
        }
        std::stable_sort(order.begin(), order.end(),
                         [](const Combo& a, const Combo& b) { return a.mean > b.mean; });

        std::vector<ScoredAnswer> rescored;
        for (const Combo& combo : order) {
            std::map<int, std::string> surfaces;
            double input_sum = 0.0;
            for (std::size_t i = 0; i < distinct.size(); ++i) {
                surfaces[distinct[i]] = combo.picks[i]->value.surface();
                input_sum += combo.picks[i]->score;
            }
            Question grounded = substitute_refs(q, surfaces);
            nlohmann::json nested = base_entry(-1, grounded, certainty);
            AnswerList solved = solve_nl(grounded, certainty, nullptr, -1, nested);
            nlohmann::json combo_entry = {{"inputs", nlohmann::json::array()},
                                          {"question", grounded.render()}};
            for (const ScoredAnswer* pick : combo.picks) {
                combo_entry["inputs"].push_back(
                    {{"score", pick->score}, {"surface", pick->value.surface()}});
            }
            combo_entry["solve"] = std::move(nested);
            combos.push_back(std::move(combo_entry));
            for (const ScoredAnswer& answer : solved.answers) {
                const double score = (answer.score + input_sum) /
                                     static_cast<double>(distinct.size() + 1);
                rescored.push_back({answer.value, score, Source::Child});
            }
        }
        entry["combinations"] = std::move(combos);
        AnswerList result = finalize_answers(std::move(rescored), config.topk);
        entry["result"] = answers_json(result);
        return result;
    }
};

Reasoner::Reasoner(const SolveStores& stores, const ReasonerConfig& config)
    : impl_(std::make_unique<Impl>(stores, config)) {}

Reasoner::~Reasoner() = default;

AnswerList Reasoner::solve_tree(const Hqdt& tree) {
    std::vector<std::string> violations = validate(tree);
    if (!violations.empty()) {
        throw InvalidTreeError("refusing to solve an invalid tree: " + violations.front());
    }
    nlohmann::json root_entry;
    AnswerList result = impl_->solve_node(tree, 0, root_entry);
    impl_->trace = {{"mode", "tree"}, {"root", std::move(root_entry)}};
    return result;
}

AnswerList Reasoner::solve_atoms(const AtomicRepresentation& ar, double certainty) {
    std::vector<std::string> violations = validate_atoms(ar);
    if (!violations.empty()) {
        throw InvalidTreeError("refusing to solve invalid atoms: " + violations.front());
    }
    std::map<int, AnswerList> by_position;
    nlohmann::json steps = nlohmann::json::array();
    AnswerList last;
    for (std::size_t i = 0; i < ar.atoms.size(); ++i) {
        const Question& atom = ar.atoms[i];
        const int position = static_cast<int>(i) + 1;
        nlohmann::json entry = base_entry(position, atom, certainty);
        if (atom.kind() == QuestionKind::NaturalLanguage) {
            last = impl_->solve_nl(atom, certainty, nullptr, -1, entry);
        } else {
            last = impl_->solve_ref_question(atom, certainty, by_position, entry);
        }
        by_position[position] = last;
        steps.push_back(std::move(entry));
    }
    impl_->trace = {{"mode", "flat"}, {"steps", std::move(steps)}};
    return last;
}

Suitability Reasoner::schedule(const Question& q, bool non_leaf) {
    return impl_->schedule(q, non_leaf);
}

std::string Reasoner::trace_json() const { return impl_->trace.dump(2); }

}  // namespace roht
