#include "support/oracles.hpp"

#include "roht/errors.hpp"
#include "roht/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <utility>

namespace testsupport {

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
    return n == 0 ? 0 : static_cast<std::size_t>(rng() % n);
}

double random_certainty(std::mt19937_64& rng) {
    return static_cast<double>(pick(rng, 1000) + 1) / 1000.0;
}

// --- Questions ---------------------------------------------------------------

namespace {

std::string random_word(std::mt19937_64& rng) {
    static const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::size_t len = 1 + pick(rng, 7);
    std::string word;
    for (std::size_t i = 0; i < len; ++i) {
        word += alphabet[pick(rng, alphabet.size())];
    }
    return word;
}

std::string random_op_arg(std::mt19937_64& rng) {
    static const std::vector<std::string> pool = {"2005",  "greater", "smaller",   "largest",
                                                  "<",     ">",       "9 metre",   "alpha beta"};
    if (pick(rng, 2) == 0) {
        return pool[pick(rng, pool.size())];
    }
    return random_word(rng);
}

roht::OpName random_op_name(std::mt19937_64& rng) {
    static const std::vector<roht::OpName> ops = {
        roht::OpName::Verify,       roht::OpName::SelectBetween, roht::OpName::SelectAmong,
        roht::OpName::Count,        roht::OpName::Intersection,  roht::OpName::Union};
    return ops[pick(rng, ops.size())];
}

}  // namespace

roht::Question random_question(std::mt19937_64& rng) {
    std::vector<roht::Token> tokens;
    switch (pick(rng, 3)) {
        case 0: {  // natural language
            std::size_t words = 1 + pick(rng, 8);
            for (std::size_t i = 0; i < words; ++i) {
                tokens.push_back(roht::Token::word(random_word(rng)));
            }
            break;
        }
        case 1: {  // bridge: words with 1-3 references mixed in
            std::size_t refs = 1 + pick(rng, 3);
            tokens.push_back(roht::Token::word(random_word(rng)));
            for (std::size_t i = 0; i < refs; ++i) {
                tokens.push_back(roht::Token::ref(static_cast<int>(1 + pick(rng, 9))));
                if (pick(rng, 2) == 0) {
                    tokens.push_back(roht::Token::word(random_word(rng)));
                }
            }
            break;
        }
        default: {  // symbolic operation: name, 0-2 args, 1-2 refs
            tokens.push_back(roht::Token::op_name(random_op_name(rng)));
            std::size_t args = pick(rng, 3);
            for (std::size_t i = 0; i < args; ++i) {
                tokens.push_back(roht::Token::op_arg(random_op_arg(rng)));
            }
            std::size_t refs = 1 + pick(rng, 2);
            for (std::size_t i = 0; i < refs; ++i) {
                tokens.push_back(roht::Token::ref(static_cast<int>(1 + pick(rng, 9))));
            }
            break;
        }
    }
    return roht::Question::from_tokens(std::move(tokens));
}

// --- Trees -------------------------------------------------------------------

namespace {

struct TreeBuilder {
    std::mt19937_64& rng;
    std::vector<roht::ProvisionalNode> nodes;
    int next_id = 100;

    // Deliberately sparse, non-contiguous ids so reindexing does real work.
    int fresh_id() {
        int id = next_id;
        next_id += 3;
        return id;
    }

    int add_node(std::optional<int> parent, roht::Question question, double certainty) {
        roht::ProvisionalNode n;
        n.id = fresh_id();
        n.parent = parent;
        n.question = std::move(question);
        n.certainty = certainty;
        nodes.push_back(std::move(n));
        return nodes.back().id;
    }

    roht::ProvisionalNode& by_id(int id) {
        for (auto& n : nodes) {
            if (n.id == id) {
                return n;
            }
        }
        throw std::logic_error("tree builder lost a node id");
    }

    int add_word_leaf(std::optional<int> parent) {
        std::string text = "topic " + random_word(rng) + " item " + std::to_string(next_id);
        return add_node(parent, roht::parse_question(text), random_certainty(rng));
    }

    // Last-child leaf referencing every earlier sibling in sibling order.
    int add_combiner_leaf(int parent, const std::vector<int>& siblings) {
        std::vector<roht::Token> tokens;
        if (siblings.size() == 1 || pick(rng, 2) == 0) {
            // Bridge: words interleaved with the references.
            tokens.push_back(roht::Token::word("use"));
            for (int sibling : siblings) {
                tokens.push_back(roht::Token::ref(sibling));
                tokens.push_back(roht::Token::word("then"));
            }
        } else {
            // Two referenced siblings: binary operation.
            switch (pick(rng, 3)) {
                case 0:
                    tokens.push_back(roht::Token::op_name(roht::OpName::Intersection));
                    break;
                case 1:
                    tokens.push_back(roht::Token::op_name(roht::OpName::Union));
                    break;
                default:
                    tokens.push_back(roht::Token::op_name(roht::OpName::SelectBetween));
                    tokens.push_back(roht::Token::op_arg("greater"));
                    break;
            }
            for (int sibling : siblings) {
                tokens.push_back(roht::Token::ref(sibling));
            }
        }
        return add_node(parent, roht::Question::from_tokens(std::move(tokens)),
                        random_certainty(rng));
    }

    // Internal node: 2-3 children, the last one a combiner leaf.
    int add_internal(std::optional<int> parent, int depth) {
        std::string text = "group " + random_word(rng) + " question";
        int id = add_node(parent, roht::parse_question(text), random_certainty(rng));
        std::size_t leading = 1 + pick(rng, 2);  // children before the combiner
        std::vector<int> children;
        for (std::size_t i = 0; i < leading; ++i) {
            bool go_deeper = depth > 0 && pick(rng, 3) == 0;
            children.push_back(go_deeper ? add_internal(id, depth - 1) : add_word_leaf(id));
        }
        children.push_back(add_combiner_leaf(id, children));
        by_id(id).children = children;
        return id;
    }
};

}  // namespace

roht::Hqdt random_tree(std::mt19937_64& rng) {
    TreeBuilder builder{rng, {}, static_cast<int>(100 + pick(rng, 50))};
    if (pick(rng, 8) == 0) {
        // Single-node tree: the root is its own only leaf.
        int id = builder.add_word_leaf(std::nullopt);
        builder.by_id(id).certainty = 1.0;
    } else {
        int root = builder.add_internal(std::nullopt, 2);
        builder.by_id(root).certainty = 1.0;
    }
    return roht::reindex_bfs(builder.nodes);
}

// --- Knowledge bases -----------------------------------------------------------

roht::KnowledgeBase random_kb(std::mt19937_64& rng) {
    roht::KnowledgeBase kb;
    kb.units.declare("km", "metre", 1000.0);

    std::size_t concepts = 3 + pick(rng, 6);
    for (std::size_t i = 0; i < concepts; ++i) {
        roht::Concept c;
        c.id = "c" + std::to_string(i);
        c.name = "kind" + std::to_string(i);
        if (i > 0 && pick(rng, 2) == 0) {
            c.parent = "c" + std::to_string(pick(rng, i));
        }
        kb.concepts.push_back(std::move(c));
    }

    std::size_t entities = 5 + pick(rng, 96);  // 5..100
    for (std::size_t i = 0; i < entities; ++i) {
        roht::Entity e;
        e.id = "e" + std::to_string(i);
        e.name = "item" + std::to_string(i);
        std::size_t memberships = pick(rng, 3);
        for (std::size_t j = 0; j < memberships; ++j) {
            e.concepts.push_back("c" + std::to_string(pick(rng, concepts)));
        }
        kb.entities.push_back(std::move(e));
    }

    static const std::vector<std::string> predicates = {"linked_to", "part_of", "near"};
    std::size_t relations = pick(rng, 3 * entities);
    for (std::size_t i = 0; i < relations; ++i) {
        roht::RelationFact fact;
        fact.s = "e" + std::to_string(pick(rng, entities));
        fact.p = predicates[pick(rng, predicates.size())];
        fact.o = "e" + std::to_string(pick(rng, entities));
        kb.relations.push_back(std::move(fact));
    }

    static const std::vector<std::string> tones = {"red", "blue", "green"};
    for (std::size_t i = 0; i < entities; ++i) {
        const std::string id = "e" + std::to_string(i);
        std::size_t size_facts = pick(rng, 10) < 7 ? (pick(rng, 10) < 2 ? 2 : 1) : 0;
        for (std::size_t j = 0; j < size_facts; ++j) {
            roht::AttributeFact fact;
            fact.entity = id;
            fact.attr = "size";
            fact.value.numeric = true;
            fact.value.number = static_cast<double>(1 + pick(rng, 500));
            fact.value.unit = pick(rng, 2) == 0 ? "metre" : "km";
            kb.attributes.push_back(std::move(fact));
        }
        if (pick(rng, 2) == 0) {
            roht::AttributeFact fact;
            fact.entity = id;
            fact.attr = "span";
            fact.value.numeric = true;
            fact.value.number = static_cast<double>(1 + pick(rng, 900));
            fact.value.unit = "";
            kb.attributes.push_back(std::move(fact));
        }
        if (pick(rng, 2) == 0) {
            roht::AttributeFact fact;
            fact.entity = id;
            fact.attr = "tone";
            fact.value.numeric = false;
            fact.value.text = tones[pick(rng, tones.size())];
            kb.attributes.push_back(std::move(fact));
        }
    }
    return kb;
}

roht::Program random_program(std::mt19937_64& rng, const roht::KnowledgeBase& kb) {
    static const std::vector<std::string> predicates = {"linked_to", "part_of", "near",
                                                         "unused_pred"};
    roht::Program program;

    std::string find_name = pick(rng, 100) < 85 && !kb.entities.empty()
                                ? kb.entities[pick(rng, kb.entities.size())].name
                                : "ghost";
    program.calls.push_back({"Find", {find_name}, {}});

    std::size_t middle = pick(rng, 4);
    for (std::size_t i = 0; i < middle; ++i) {
        int prev = static_cast<int>(program.calls.size()) - 1;
        std::size_t choice = pick(rng, 3);
        if (choice == 2 && kb.attributes.empty()) {
            choice = 0;
        }
        if (choice == 0) {
            std::string name = pick(rng, 10) < 8 && !kb.concepts.empty()
                                   ? kb.concepts[pick(rng, kb.concepts.size())].name
                                   : "unknownkind";
            program.calls.push_back({"FilterConcept", {name}, {prev}});
        } else if (choice == 1) {
            std::string pred = predicates[pick(rng, predicates.size())];
            std::string dir = pick(rng, 2) == 0 ? "forward" : "backward";
            program.calls.push_back({"Relate", {pred, dir}, {prev}});
        } else {
            const roht::AttributeFact& fact = kb.attributes[pick(rng, kb.attributes.size())];
            std::string op;
            if (fact.value.numeric) {
                static const std::vector<std::string> ops = {"=", "<", ">", "!="};
                op = ops[pick(rng, ops.size())];
            } else {
                op = pick(rng, 2) == 0 ? "=" : "!=";
            }
            program.calls.push_back({"FilterAttr", {fact.attr, op, fact.value.surface()}, {prev}});
        }
    }

    int prev = static_cast<int>(program.calls.size()) - 1;
    static const std::vector<std::string> attrs = {"size", "span", "tone"};
    switch (pick(rng, 5)) {
        case 0:
            break;  // chain ends on an entity flow
        case 1:
            program.calls.push_back({"QueryName", {}, {prev}});
            break;
        case 2:
            program.calls.push_back({"QueryAttr", {attrs[pick(rng, attrs.size())]}, {prev}});
            break;
        case 3: {
            std::string attr = pick(rng, 2) == 0 ? "size" : "span";
            std::string extreme = pick(rng, 2) == 0 ? "largest" : "smallest";
            program.calls.push_back({"SelectAmong", {attr, extreme}, {prev}});
            break;
        }
        default:
            program.calls.push_back({"Count", {}, {prev}});
            break;
    }
    return program;
}

namespace {

// Scan-based lookups over the raw KB structs; no shared index with the library.
struct KbScan {
    const roht::KnowledgeBase& kb;

    int index_of_entity_id(const std::string& id) const {
        for (std::size_t i = 0; i < kb.entities.size(); ++i) {
            if (kb.entities[i].id == id) {
                return static_cast<int>(i);
            }
        }
        return -1;
    }

    const roht::Concept* concept_by_id(const std::string& id) const {
        for (const auto& c : kb.concepts) {
            if (c.id == id) {
                return &c;
            }
        }
        return nullptr;
    }

    std::optional<std::string> concept_id_by_name(const std::string& name) const {
        for (const auto& c : kb.concepts) {
            if (c.name == name) {
                return c.id;
            }
        }
        return std::nullopt;
    }

    bool in_concept(int entity_index, const std::string& concept_name) const {
        auto target = concept_id_by_name(concept_name);
        if (!target) {
            return false;
        }
        for (const auto& start : kb.entities[static_cast<std::size_t>(entity_index)].concepts) {
            std::string current = start;
            std::set<std::string> seen;
            while (seen.insert(current).second) {
                if (current == *target) {
                    return true;
                }
                const roht::Concept* c = concept_by_id(current);
                if (c == nullptr || !c->parent) {
                    break;
                }
                current = *c->parent;
            }
        }
        return false;
    }

    std::set<int> related(int entity_index, const std::string& predicate, bool forward) const {
        const std::string& id = kb.entities[static_cast<std::size_t>(entity_index)].id;
        std::set<int> out;
        for (const auto& fact : kb.relations) {
            if (fact.p != predicate) {
                continue;
            }
            if (forward && fact.s == id) {
                int o = index_of_entity_id(fact.o);
                if (o >= 0) {
                    out.insert(o);
                }
            } else if (!forward && fact.o == id) {
                int s = index_of_entity_id(fact.s);
                if (s >= 0) {
                    out.insert(s);
                }
            }
        }
        return out;
    }

    std::vector<const roht::AttributeFact*> facts_of(int entity_index,
                                                     const std::string& attr) const {
        const std::string& id = kb.entities[static_cast<std::size_t>(entity_index)].id;
        std::vector<const roht::AttributeFact*> out;
        for (const auto& fact : kb.attributes) {
            if (fact.entity == id && fact.attr == attr) {
                out.push_back(&fact);
            }
        }
        return out;
    }

    std::string base_of(const std::string& unit) const {
        auto it = kb.units.entries().find(unit);
        return it == kb.units.entries().end() ? unit : it->second.first;
    }

    double to_base(double value, const std::string& unit) const {
        auto it = kb.units.entries().find(unit);
        return it == kb.units.entries().end() ? value : value * it->second.second;
    }

    bool satisfies(const roht::AttributeLiteral& fact, const std::string& op,
                   const roht::AnswerValue& target) const {
        if (fact.numeric != target.is_numeric()) {
            throw roht::ExecError("oracle: numeric/textual mismatch");
        }
        if (fact.numeric) {
            if (base_of(fact.unit) != base_of(target.unit)) {
                throw roht::ExecError("oracle: incomparable units");
            }
            double lhs = to_base(fact.number, fact.unit);
            double rhs = to_base(target.number, target.unit);
            if (op == "=") return lhs == rhs;
            if (op == "!=") return lhs != rhs;
            if (op == "<") return lhs < rhs;
            if (op == ">") return lhs > rhs;
            throw roht::ExecError("oracle: unknown operator " + op);
        }
        if (op == "=") return fact.text == target.name;
        if (op == "!=") return fact.text != target.name;
        throw roht::ExecError("oracle: operator unsupported on text " + op);
    }
};

}  // namespace

std::vector<roht::AnswerValue> brute_force_execute(const roht::KnowledgeBase& kb,
                                                   const roht::Program& program) {
    if (program.calls.empty()) {
        return {};
    }
    KbScan scan{kb};

    struct Step {
        bool is_entities = true;
        std::vector<int> entities;  // ascending, unique
        std::vector<roht::AnswerValue> answers;
    };
    std::vector<Step> steps;

    for (std::size_t i = 0; i < program.calls.size(); ++i) {
        const roht::ProgramCall& call = program.calls[i];
        auto input = [&]() -> const std::vector<int>& {
            return steps[static_cast<std::size_t>(call.inputs.at(0))].entities;
        };
        Step step;
        if (call.fn == "Find") {
            for (std::size_t e = 0; e < kb.entities.size(); ++e) {
                if (kb.entities[e].name == call.args.at(0)) {
                    step.entities.push_back(static_cast<int>(e));
                }
            }
        } else if (call.fn == "FilterConcept") {
            for (int e : input()) {
                if (scan.in_concept(e, call.args.at(0))) {
                    step.entities.push_back(e);
                }
            }
        } else if (call.fn == "Relate") {
            bool forward = call.args.at(1) == "forward";
            std::set<int> out;
            for (int e : input()) {
                auto hits = scan.related(e, call.args.at(0), forward);
                out.insert(hits.begin(), hits.end());
            }
            step.entities.assign(out.begin(), out.end());
        } else if (call.fn == "FilterAttr") {
            roht::AnswerValue target = roht::parse_answer_value(call.args.at(2));
            for (int e : input()) {
                for (const auto* fact : scan.facts_of(e, call.args.at(0))) {
                    if (scan.satisfies(fact->value, call.args.at(1), target)) {
                        step.entities.push_back(e);
                        break;
                    }
                }
            }
        } else if (call.fn == "QueryAttr") {
            step.is_entities = false;
            for (int e : input()) {
                for (const auto* fact : scan.facts_of(e, call.args.at(0))) {
                    const std::string& owner = kb.entities[static_cast<std::size_t>(e)].name;
                    if (fact->value.numeric) {
                        step.answers.push_back(roht::AnswerValue::quantity(
                            fact->value.number, fact->value.unit, owner));
                    } else {
                        roht::AnswerValue v = roht::AnswerValue::entity(fact->value.text);
                        v.companion = owner;
                        step.answers.push_back(std::move(v));
                    }
                }
            }
        } else if (call.fn == "QueryName") {
            step.is_entities = false;
            for (int e : input()) {
                step.answers.push_back(
                    roht::AnswerValue::entity(kb.entities[static_cast<std::size_t>(e)].name));
            }
        } else if (call.fn == "SelectAmong") {
            step.is_entities = false;
            bool have = false;
            double best_value = 0.0;
            std::string best_name;
            std::string best_base;
            bool largest = call.args.at(1) == "largest";
            for (int e : input()) {
                for (const auto* fact : scan.facts_of(e, call.args.at(0))) {
                    if (!fact->value.numeric) {
                        throw roht::ExecError("oracle: SelectAmong on text");
                    }
                    std::string base = scan.base_of(fact->value.unit);
                    double value = scan.to_base(fact->value.number, fact->value.unit);
                    const std::string& name = kb.entities[static_cast<std::size_t>(e)].name;
                    if (have && base != best_base) {
                        throw roht::ExecError("oracle: mixed bases");
                    }
                    bool better = !have;
                    if (have && value != best_value) {
                        better = largest ? value > best_value : value < best_value;
                    } else if (have && name < best_name) {
                        better = true;
                    }
                    if (better) {
                        have = true;
                        best_value = value;
                        best_name = name;
                        best_base = base;
                    }
                }
            }
            if (have) {
                step.answers.push_back(roht::AnswerValue::entity(best_name));
            }
        } else if (call.fn == "Count") {
            step.is_entities = false;
            step.answers.push_back(
                roht::AnswerValue::count(static_cast<double>(input().size())));
        } else {
            throw roht::ExecError("oracle: unknown function " + call.fn);
        }
        steps.push_back(std::move(step));
    }

    const Step& last = steps.back();
    if (!last.is_entities) {
        return last.answers;
    }
    std::vector<roht::AnswerValue> out;
    for (int e : last.entities) {
        out.push_back(roht::AnswerValue::entity(kb.entities[static_cast<std::size_t>(e)].name));
    }
    return out;
}

bool same_answer_values(const std::vector<roht::AnswerValue>& a,
                        const std::vector<roht::AnswerValue>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].kind != b[i].kind || a[i].surface() != b[i].surface() ||
            a[i].companion != b[i].companion) {
            return false;
        }
    }
    return true;
}

// --- Retrieval -----------------------------------------------------------------

double bm25_reference_score(const roht::Corpus& corpus, const std::string& query,
                            int paragraph_index, double k1, double b) {
    const std::size_t n = corpus.paragraphs.size();
    if (n == 0 || paragraph_index < 0 || static_cast<std::size_t>(paragraph_index) >= n) {
        return 0.0;
    }
    std::vector<std::vector<std::string>> docs;
    docs.reserve(n);
    long long total_len = 0;
    for (const auto& p : corpus.paragraphs) {
        docs.push_back(roht::tokenize(p.title + " " + p.text));
        total_len += static_cast<long long>(docs.back().size());
    }
    double avg_len = std::max(1.0, static_cast<double>(total_len) / static_cast<double>(n));
    const auto& doc = docs[static_cast<std::size_t>(paragraph_index)];

    double total = 0.0;
    for (const auto& term : roht::tokenize(query)) {
        double tf = static_cast<double>(std::count(doc.begin(), doc.end(), term));
        if (tf == 0.0) {
            continue;
        }
        double df = 0.0;
        for (const auto& other : docs) {
            if (std::find(other.begin(), other.end(), term) != other.end()) {
                df += 1.0;
            }
        }
        double idf = std::log(1.0 + (static_cast<double>(n) - df + 0.5) / (df + 0.5));
        double len = static_cast<double>(doc.size());
        total += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * len / avg_len));
    }
    return total;
}

namespace {

const std::vector<std::string>& corpus_vocab() {
    static const std::vector<std::string> vocab = {
        "river",  "mountain", "city",   "height", "length", "country", "located", "largest",
        "flows",  "through",  "peak",   "valley", "north",  "south",   "stands",  "ancient",
        "bridge", "stone",    "water",  "metre",  "km",     "summit",  "plain",   "coast",
        "forest", "lake",     "region", "border", "trail",  "harbor"};
    return vocab;
}

}  // namespace

roht::Corpus random_corpus(std::mt19937_64& rng, int paragraphs) {
    const auto& vocab = corpus_vocab();
    roht::Corpus corpus;
    for (int i = 0; i < paragraphs; ++i) {
        roht::Paragraph p;
        p.id = i;
        std::size_t title_words = 1 + pick(rng, 2);
        for (std::size_t j = 0; j < title_words; ++j) {
            p.title += (j == 0 ? "" : " ") + vocab[pick(rng, vocab.size())];
        }
        std::size_t text_words = 3 + pick(rng, 10);
        for (std::size_t j = 0; j < text_words; ++j) {
            p.text += (j == 0 ? "" : " ") + vocab[pick(rng, vocab.size())];
        }
        p.text += ".";
        corpus.paragraphs.push_back(std::move(p));
        // Occasionally duplicate a paragraph body under a new id so score ties
        // exercise the id-based ordering.
        if (pick(rng, 12) == 0 && !corpus.paragraphs.empty()) {
            roht::Paragraph copy = corpus.paragraphs[pick(rng, corpus.paragraphs.size())];
            copy.id = 100000 + i;
            corpus.paragraphs.push_back(std::move(copy));
        }
    }
    return corpus;
}

std::string random_query(std::mt19937_64& rng) {
    const auto& vocab = corpus_vocab();
    std::size_t words = 1 + pick(rng, 5);
    std::string query;
    for (std::size_t j = 0; j < words; ++j) {
        std::string word = pick(rng, 10) == 0 ? "zzz" : vocab[pick(rng, vocab.size())];
        // Duplicate terms sometimes: each occurrence must contribute.
        if (pick(rng, 5) == 0) {
            word += " " + word;
        }
        query += (j == 0 ? "" : " ") + word;
    }
    return query;
}

// --- Aggregation -----------------------------------------------------------------

roht::AnswerList reference_merge(const std::vector<roht::ScoredAnswer>& raw, int k) {
    std::vector<std::pair<std::string, roht::ScoredAnswer>> kept;
    for (const auto& answer : raw) {
        std::string key = roht::normalize_surface(answer.value.surface());
        bool found = false;
        for (auto& [existing_key, existing] : kept) {
            if (existing_key != key) {
                continue;
            }
            found = true;
            bool better = answer.score > existing.score ||
                          (answer.score == existing.score &&
                           static_cast<int>(answer.source) < static_cast<int>(existing.source));
            if (better) {
                existing = answer;
            }
            break;
        }
        if (!found) {
            kept.emplace_back(std::move(key), answer);
        }
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second.score != b.second.score) {
            return a.second.score > b.second.score;
        }
        if (a.second.source != b.second.source) {
            return static_cast<int>(a.second.source) < static_cast<int>(b.second.source);
        }
        return a.first < b.first;
    });
    roht::AnswerList out;
    for (auto& [key, answer] : kept) {
        (void)key;
        if (k > 0 && out.size() >= k) {
            break;
        }
        out.answers.push_back(answer);
    }
    return out;
}

bool same_answer_lists(const roht::AnswerList& a, const roht::AnswerList& b, double tol) {
    if (a.answers.size() != b.answers.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.answers.size(); ++i) {
        const auto& x = a.answers[i];
        const auto& y = b.answers[i];
        if (x.value.surface() != y.value.surface() || x.source != y.source ||
            std::abs(x.score - y.score) > tol) {
            return false;
        }
    }
    return true;
}

std::vector<roht::ScoredAnswer> random_answers(std::mt19937_64& rng) {
    static const std::vector<std::string> surfaces = {
        "Apple",  "apple",  " apple ", "Orange", "orange", "Peach",
        "peach ", "Plum",   "plum",    "Cherry", "cherry", "8848 metre",
        "yes",    "no",     "3",       "Fig",    "fig",    "GRAPE",
        "grape",  "Melon "};
    std::vector<roht::ScoredAnswer> raw;
    std::size_t count = pick(rng, 12);
    for (std::size_t i = 0; i < count; ++i) {
        roht::ScoredAnswer answer;
        answer.value = roht::parse_answer_value(surfaces[pick(rng, surfaces.size())]);
        answer.score = random_certainty(rng);
        // Exact score ties across sources matter: quantize some scores.
        if (pick(rng, 3) == 0) {
            answer.score = 0.5;
        }
        answer.source = static_cast<roht::Source>(pick(rng, 3));
        raw.push_back(std::move(answer));
    }
    return raw;
}

}  // namespace testsupport
