#pragma once
// In-memory knowledge base, a small program interpreter over it (Find /
// FilterConcept / Relate / FilterAttr / QueryAttr / QueryName / SelectAmong /
// Count), semantic-parser interfaces, the per-skeleton precision table, and
// seeded fact ablation.

#include "roht/answer.hpp"
#include "roht/question.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace roht {

struct Entity {
    std::string id;
    std::string name;
    std::vector<std::string> concepts;  // concept ids
};

struct Concept {
    std::string id;
    std::string name;
    std::optional<std::string> parent;  // concept id
};

struct RelationFact {
    std::string s;  // subject entity id
    std::string p;  // predicate
    std::string o;  // object entity id
};

struct AttributeLiteral {
    bool numeric = true;
    double number = 0.0;
    std::string text;  // payload when not numeric
    std::string unit;  // for numeric values; may be empty

    std::string surface() const;
};

struct AttributeFact {
    std::string entity;  // entity id
    std::string attr;
    AttributeLiteral value;
};

struct KnowledgeBase {
    std::vector<Entity> entities;
    std::vector<Concept> concepts;
    std::vector<RelationFact> relations;
    std::vector<AttributeFact> attributes;
    UnitTable units;
};

// Throws ValidationError on dangling ids, duplicate ids, or duplicate names
// within a kind.
KnowledgeBase kb_from_json(const std::string& json_text);
std::string kb_to_json(const KnowledgeBase& kb);
KnowledgeBase load_kb(const std::string& path);
void save_kb(const KnowledgeBase& kb, const std::string& path);

// Read-only lookup structures over a loaded KB; build once, share freely.
class KbView {
public:
    explicit KbView(const KnowledgeBase& kb);

    const KnowledgeBase& kb() const { return *kb_; }
    const UnitTable& units() const { return kb_->units; }

    std::vector<int> entities_named(const std::string& name) const;
    const Entity& entity(int index) const { return kb_->entities[static_cast<std::size_t>(index)]; }
    // True when the entity belongs to the concept or any descendant of it.
    bool entity_in_concept(int entity_index, const std::string& concept_name) const;
    std::vector<int> related(int entity_index, const std::string& predicate, bool forward) const;
    std::vector<const AttributeFact*> attributes_of(int entity_index,
                                                    const std::string& attr) const;

private:
    const KnowledgeBase* kb_;
    std::map<std::string, std::vector<int>> by_name_;
    std::map<std::string, int> entity_by_id_;
    std::map<std::string, const Concept*> concept_by_id_;
    std::map<std::string, std::string> concept_id_by_name_;
    std::map<int, std::map<std::string, std::vector<int>>> forward_, backward_;
    std::map<int, std::vector<const AttributeFact*>> attr_by_entity_;
};

struct ProgramCall {
    std::string fn;
    std::vector<std::string> args;
    std::vector<int> inputs;  // indices of earlier calls feeding this one

    bool operator==(const ProgramCall&) const = default;
};

struct Program {
    std::vector<ProgramCall> calls;

    bool operator==(const Program&) const = default;
};

// Dash-joined function names in program order ("Find-Relate-QueryName").
std::string function_skeleton(const Program& program);

Program program_from_json(const std::string& json_text);
std::string program_to_json(const Program& program);

// Denotational evaluation of a program chain. Unknown names yield empty sets;
// structural problems (bad arity, non-final answer producer, unknown function,
// type-mismatched or unit-incomparable comparisons) throw ExecError.
std::vector<AnswerValue> execute_program(const KbView& view, const Program& program);
std::vector<AnswerValue> execute_program(const KnowledgeBase& kb, const Program& program);

struct ParsedProgram {
    Program program;
    double p_parse = 1.0;  // in (0, 1]
};

class SemanticParser {
public:
    virtual ~SemanticParser() = default;
    // nullopt when the question is outside the parser's competence.
    virtual std::optional<ParsedProgram> parse(const std::string& question) const = 0;
};

// File-backed parser: JSON array of {question, program: [{fn, args, inputs}], p_parse}.
class FixtureSemanticParser : public SemanticParser {
public:
    static FixtureSemanticParser from_file(const std::string& path);
    static FixtureSemanticParser from_json_text(const std::string& json_text);

    std::optional<ParsedProgram> parse(const std::string& question) const override;

private:
    std::map<std::string, ParsedProgram> entries_;
};

// Every answer scored p_g * p_parse. Parse failure or execution error yields
// an empty list (the reason is the caller's to record).
AnswerList kb_answers(const Question& q, double p_g, const KbView& view,
                      const SemanticParser& parser);

struct PrecisionTable {
    std::map<std::string, double> by_skeleton;

    // Missing skeletons are distinct from precision 0.
    std::optional<double> lookup(const std::string& skeleton) const;
};

PrecisionTable precision_table_from_json(const std::string& json_text);
std::string precision_table_to_json(const PrecisionTable& table);

struct TrainExample {
    std::string question;
    std::vector<std::string> golds;
};

// Per-skeleton fraction of training questions whose top KB answer
// exact-matches a gold answer. Unparseable questions contribute nothing.
PrecisionTable build_precision_table(const std::vector<TrainExample>& train, const KbView& view,
                                     const SemanticParser& parser);

// Removes floor(fraction * (relations + attributes)) facts, chosen uniformly
// by the seeded generator; entities, concepts and units are kept.
KnowledgeBase ablate_kb(const KnowledgeBase& kb, double fraction, std::uint64_t seed);

}  // namespace roht
