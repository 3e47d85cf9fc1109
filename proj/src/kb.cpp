#include "roht/kb.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
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

std::string AttributeLiteral::surface() const {
    if (!numeric) {
        return text;
    }
    return unit.empty() ? render_number(number) : render_number(number) + " " + unit;
}

namespace {

AttributeLiteral literal_from_json(const nlohmann::json& value, const nlohmann::json& fact) {
    AttributeLiteral lit;
    if (value.is_number()) {
        lit.numeric = true;
        lit.number = value.get<double>();
    } else if (value.is_string()) {
        lit.numeric = false;
        lit.text = value.get<std::string>();
    } else {
        throw ValidationError("attribute value must be a number or string: " + fact.dump());
    }
    if (fact.contains("unit")) {
        if (!lit.numeric) {
            throw ValidationError("string attribute cannot carry a unit: " + fact.dump());
        }
        lit.unit = fact.at("unit").get<std::string>();
    }
    return lit;
}

}  // namespace

KnowledgeBase kb_from_json(const std::string& json_text) {
    nlohmann::json doc = parse_json(json_text, "knowledge base");
    KnowledgeBase kb;

    std::set<std::string> entity_ids, entity_names, concept_ids, concept_names;
    for (const auto& e : doc.value("entities", nlohmann::json::array())) {
        Entity entity;
        entity.id = e.at("id").get<std::string>();
        entity.name = e.at("name").get<std::string>();
        for (const auto& c : e.value("concepts", nlohmann::json::array())) {
            entity.concepts.push_back(c.get<std::string>());
        }
        if (!entity_ids.insert(entity.id).second) {
            throw ValidationError("duplicate entity id: " + entity.id);
        }
        if (!entity_names.insert(entity.name).second) {
            throw ValidationError("duplicate entity name: " + entity.name);
        }
        kb.entities.push_back(std::move(entity));
    }
    for (const auto& c : doc.value("concepts", nlohmann::json::array())) {
        Concept conc;
        conc.id = c.at("id").get<std::string>();
        conc.name = c.at("name").get<std::string>();
        if (c.contains("parent") && !c.at("parent").is_null()) {
            conc.parent = c.at("parent").get<std::string>();
        }
        if (!concept_ids.insert(conc.id).second) {
            throw ValidationError("duplicate concept id: " + conc.id);
        }
        if (!concept_names.insert(conc.name).second) {
            throw ValidationError("duplicate concept name: " + conc.name);
        }
        kb.concepts.push_back(std::move(conc));
    }
    for (const auto& entity : kb.entities) {
        for (const auto& cid : entity.concepts) {
            if (!concept_ids.count(cid)) {
                throw ValidationError("entity " + entity.id + " lists unknown concept " + cid);
            }
        }
    }
    for (const auto& conc : kb.concepts) {
        if (conc.parent && !concept_ids.count(*conc.parent)) {
            throw ValidationError("concept " + conc.id + " has unknown parent " + *conc.parent);
        }
    }
    for (const auto& r : doc.value("relations", nlohmann::json::array())) {
        RelationFact fact{r.at("s").get<std::string>(), r.at("p").get<std::string>(),
                          r.at("o").get<std::string>()};
        if (!entity_ids.count(fact.s) || !entity_ids.count(fact.o)) {
            throw ValidationError("relation endpoint unknown: " + fact.s + " -" + fact.p + "-> " +
                                  fact.o);
        }
        kb.relations.push_back(std::move(fact));
    }
    for (const auto& a : doc.value("attributes", nlohmann::json::array())) {
        AttributeFact fact;
        fact.entity = a.at("e").get<std::string>();
        fact.attr = a.at("a").get<std::string>();
        fact.value = literal_from_json(a.at("value"), a);
        if (!entity_ids.count(fact.entity)) {
            throw ValidationError("attribute on unknown entity: " + fact.entity);
        }
        kb.attributes.push_back(std::move(fact));
    }
    for (const auto& u : doc.value("units", nlohmann::json::array())) {
        kb.units.declare(u.at("name").get<std::string>(), u.at("base").get<std::string>(),
                         u.at("factor").get<double>());
    }
    return kb;
}

std::string kb_to_json(const KnowledgeBase& kb) {
    nlohmann::json doc;
    doc["entities"] = nlohmann::json::array();
    for (const auto& e : kb.entities) {
        doc["entities"].push_back({{"id", e.id}, {"name", e.name}, {"concepts", e.concepts}});
    }
    doc["concepts"] = nlohmann::json::array();
    for (const auto& c : kb.concepts) {
        nlohmann::json j{{"id", c.id}, {"name", c.name}};
        j["parent"] = c.parent ? nlohmann::json(*c.parent) : nlohmann::json(nullptr);
        doc["concepts"].push_back(std::move(j));
    }
    doc["relations"] = nlohmann::json::array();
    for (const auto& r : kb.relations) {
        doc["relations"].push_back({{"s", r.s}, {"p", r.p}, {"o", r.o}});
    }
    doc["attributes"] = nlohmann::json::array();
    for (const auto& a : kb.attributes) {
        nlohmann::json j{{"e", a.entity}, {"a", a.attr}};
        if (a.value.numeric) {
            j["value"] = a.value.number;
            if (!a.value.unit.empty()) {
                j["unit"] = a.value.unit;
            }
        } else {
            j["value"] = a.value.text;
        }
        doc["attributes"].push_back(std::move(j));
    }
    doc["units"] = nlohmann::json::array();
    for (const auto& [name, entry] : kb.units.entries()) {
        doc["units"].push_back({{"name", name}, {"base", entry.first}, {"factor", entry.second}});
    }
    return doc.dump(2) + "\n";
}

KnowledgeBase load_kb(const std::string& path) { return kb_from_json(read_file(path)); }

void save_kb(const KnowledgeBase& kb, const std::string& path) { write_file(path, kb_to_json(kb)); }

KbView::KbView(const KnowledgeBase& kb) : kb_(&kb) {
    for (std::size_t i = 0; i < kb.entities.size(); ++i) {
        by_name_[kb.entities[i].name].push_back(static_cast<int>(i));
        entity_by_id_[kb.entities[i].id] = static_cast<int>(i);
    }
    for (const auto& conc : kb.concepts) {
        concept_by_id_[conc.id] = &conc;
        concept_id_by_name_[conc.name] = conc.id;
    }
    for (const auto& fact : kb.relations) {
        auto s = entity_by_id_.find(fact.s);
        auto o = entity_by_id_.find(fact.o);
        if (s == entity_by_id_.end() || o == entity_by_id_.end()) {
            continue;  // unvalidated hand-built KBs: dangling facts are inert
        }
        forward_[s->second][fact.p].push_back(o->second);
        backward_[o->second][fact.p].push_back(s->second);
    }
    for (const auto& fact : kb.attributes) {
        auto e = entity_by_id_.find(fact.entity);
        if (e != entity_by_id_.end()) {
            attr_by_entity_[e->second].push_back(&fact);
        }
    }
}

std::vector<int> KbView::entities_named(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? std::vector<int>{} : it->second;
}

bool KbView::entity_in_concept(int entity_index, const std::string& concept_name) const {
    auto target = concept_id_by_name_.find(concept_name);
    if (target == concept_id_by_name_.end()) {
        return false;
    }
    const std::size_t max_depth = kb_->concepts.size() + 1;
    for (const auto& cid : entity(entity_index).concepts) {
        std::string current = cid;
        for (std::size_t depth = 0; depth < max_depth; ++depth) {
            if (current == target->second) {
                return true;
            }
            auto it = concept_by_id_.find(current);
            if (it == concept_by_id_.end() || !it->second->parent) {
                break;
            }
            current = *it->second->parent;
        }
    }
    return false;
}

std::vector<int> KbView::related(int entity_index, const std::string& predicate,
                                 bool forward) const {
    const auto& table = forward ? forward_ : backward_;
    auto by_entity = table.find(entity_index);
    if (by_entity == table.end()) {
        return {};
    }
    auto it = by_entity->second.find(predicate);
    return it == by_entity->second.end() ? std::vector<int>{} : it->second;
}

std::vector<const AttributeFact*> KbView::attributes_of(int entity_index,
                                                        const std::string& attr) const {
    std::vector<const AttributeFact*> out;
    auto it = attr_by_entity_.find(entity_index);
    if (it == attr_by_entity_.end()) {
        return out;
    }
    for (const AttributeFact* fact : it->second) {
        if (fact->attr == attr) {
            out.push_back(fact);
        }
    }
    return out;
}

std::string function_skeleton(const Program& program) {
    std::string out;
    for (const auto& call : program.calls) {
        out += (out.empty() ? "" : "-") + call.fn;
    }
    return out;
}

Program program_from_json(const std::string& json_text) {
    nlohmann::json doc = parse_json(json_text, "program");
    if (!doc.is_array()) {
        throw ValidationError("program must be a JSON array of calls");
    }
    Program program;
    for (const auto& c : doc) {
        ProgramCall call;
        call.fn = c.at("fn").get<std::string>();
        for (const auto& a : c.value("args", nlohmann::json::array())) {
            call.args.push_back(a.get<std::string>());
        }
        for (const auto& i : c.value("inputs", nlohmann::json::array())) {
            call.inputs.push_back(i.get<int>());
        }
        program.calls.push_back(std::move(call));
    }
    return program;
}

std::string program_to_json(const Program& program) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& call : program.calls) {
        doc.push_back({{"fn", call.fn}, {"args", call.args}, {"inputs", call.inputs}});
    }
    return doc.dump(2) + "\n";
}

namespace {

struct Flow {
    bool is_entities = true;
    std::vector<int> entities;           // sorted, unique
    std::vector<AnswerValue> answers;    // terminal values
};

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

void require_call_shape(const ProgramCall& call, std::size_t args, std::size_t inputs) {
    if (call.args.size() != args) {
        throw ExecError(call.fn + " takes " + std::to_string(args) + " argument(s), got " +
                        std::to_string(call.args.size()));
    }
    if (call.inputs.size() != inputs) {
        throw ExecError(call.fn + " takes " + std::to_string(inputs) + " input(s), got " +
                        std::to_string(call.inputs.size()));
    }
}

// Compares an attribute fact against a parsed comparison target.
bool literal_satisfies(const AttributeLiteral& fact, const std::string& op,
                       const AnswerValue& target, const UnitTable& units) {
    if (fact.numeric != target.is_numeric()) {
        throw ExecError("comparison between numeric and textual values");
    }
    if (fact.numeric) {
        if (!units.comparable(fact.unit, target.unit)) {
            throw ExecError("cannot compare unit '" + fact.unit + "' with '" + target.unit + "'");
        }
        double lhs = units.to_base(fact.number, fact.unit);
        double rhs = units.to_base(target.number, target.unit);
        if (op == "=") return lhs == rhs;
        if (op == "!=") return lhs != rhs;
        if (op == "<") return lhs < rhs;
        if (op == ">") return lhs > rhs;
        throw ExecError("unknown comparison operator: " + op);
    }
    if (op == "=") return fact.text == target.name;
    if (op == "!=") return fact.text != target.name;
    throw ExecError("textual values only support = and !=, got " + op);
}

}  // namespace

std::vector<AnswerValue> execute_program(const KbView& view, const Program& program) {
    if (program.calls.empty()) {
        return {};
    }
    std::vector<Flow> results;
    results.reserve(program.calls.size());

    for (std::size_t i = 0; i < program.calls.size(); ++i) {
        const ProgramCall& call = program.calls[i];
        const bool is_last = i + 1 == program.calls.size();
        for (int input : call.inputs) {
            if (input < 0 || static_cast<std::size_t>(input) >= i) {
                throw ExecError(call.fn + " input must reference an earlier call");
            }
            if (!results[static_cast<std::size_t>(input)].is_entities) {
                throw ExecError(call.fn + " consumes a non-entity result");
            }
        }
        auto in = [&]() -> const std::vector<int>& {
            return results[static_cast<std::size_t>(call.inputs[0])].entities;
        };

        Flow flow;
        if (call.fn == "Find") {
            require_call_shape(call, 1, 0);
            flow.entities = sorted_unique(view.entities_named(call.args[0]));
        } else if (call.fn == "FilterConcept") {
            require_call_shape(call, 1, 1);
            for (int e : in()) {
                if (view.entity_in_concept(e, call.args[0])) {
                    flow.entities.push_back(e);
                }
            }
        } else if (call.fn == "Relate") {
            require_call_shape(call, 2, 1);
            bool forward = call.args[1] == "forward";
            if (!forward && call.args[1] != "backward") {
                throw ExecError("Relate direction must be forward or backward, got '" +
                                call.args[1] + "'");
            }
            std::vector<int> out;
            for (int e : in()) {
                for (int o : view.related(e, call.args[0], forward)) {
                    out.push_back(o);
                }
            }
            flow.entities = sorted_unique(std::move(out));
        } else if (call.fn == "FilterAttr") {
            require_call_shape(call, 3, 1);
            AnswerValue target = parse_answer_value(call.args[2]);
            for (int e : in()) {
                bool keep = false;
                for (const AttributeFact* fact : view.attributes_of(e, call.args[0])) {
                    if (literal_satisfies(fact->value, call.args[1], target, view.units())) {
                        keep = true;
                        break;
                    }
                }
                if (keep) {
                    flow.entities.push_back(e);
                }
            }
        } else if (call.fn == "QueryAttr") {
            require_call_shape(call, 1, 1);
            flow.is_entities = false;
            for (int e : in()) {
                for (const AttributeFact* fact : view.attributes_of(e, call.args[0])) {
                    if (fact->value.numeric) {
                        flow.answers.push_back(AnswerValue::quantity(
                            fact->value.number, fact->value.unit, view.entity(e).name));
                    } else {
                        AnswerValue v = AnswerValue::entity(fact->value.text);
                        v.companion = view.entity(e).name;
                        flow.answers.push_back(std::move(v));
                    }
                }
            }
        } else if (call.fn == "QueryName") {
            require_call_shape(call, 0, 1);
            flow.is_entities = false;
            for (int e : in()) {
                flow.answers.push_back(AnswerValue::entity(view.entity(e).name));
            }
        } else if (call.fn == "SelectAmong") {
            require_call_shape(call, 2, 1);
            const std::string& attr = call.args[0];
            const std::string& extreme = call.args[1];
            if (extreme != "largest" && extreme != "smallest") {
                throw ExecError("SelectAmong extreme must be largest or smallest, got '" + extreme +
                                "'");
            }
            flow.is_entities = false;
            bool have = false;
            double best_value = 0.0;
            std::string best_name, best_unit_base;
            for (int e : in()) {
                for (const AttributeFact* fact : view.attributes_of(e, attr)) {
                    if (!fact->value.numeric) {
                        throw ExecError("SelectAmong needs numeric attribute values");
                    }
                    std::string base = view.units().base_of(fact->value.unit);
                    double value = view.units().to_base(fact->value.number, fact->value.unit);
                    const std::string& name = view.entity(e).name;
                    if (have && base != best_unit_base) {
                        throw ExecError("cannot compare unit '" + fact->value.unit +
                                        "' with base '" + best_unit_base + "'");
                    }
                    bool better = !have;
                    if (have && value != best_value) {
                        better = extreme == "largest" ? value > best_value : value < best_value;
                    } else if (have && name < best_name) {
                        better = true;
                    }
                    if (better) {
                        have = true;
                        best_value = value;
                        best_name = name;
                        best_unit_base = base;
                    }
                }
            }
            if (have) {
                flow.answers.push_back(AnswerValue::entity(best_name));
            }
        } else if (call.fn == "Count") {
            require_call_shape(call, 0, 1);
            flow.is_entities = false;
            flow.answers.push_back(AnswerValue::count(static_cast<double>(in().size())));
        } else {
            throw ExecError("unknown function: " + call.fn);
        }

        if (!flow.is_entities && !is_last) {
            throw ExecError(call.fn + " must be the final call of a program");
        }
        results.push_back(std::move(flow));
    }

    const Flow& last = results.back();
    if (!last.is_entities) {
        return last.answers;
    }
    std::vector<AnswerValue> out;
    for (int e : last.entities) {
        out.push_back(AnswerValue::entity(view.entity(e).name));
    }
    return out;
}

std::vector<AnswerValue> execute_program(const KnowledgeBase& kb, const Program& program) {
    return execute_program(KbView(kb), program);
}

FixtureSemanticParser FixtureSemanticParser::from_file(const std::string& path) {
    return from_json_text(read_file(path));
}

FixtureSemanticParser FixtureSemanticParser::from_json_text(const std::string& json_text) {
    nlohmann::json doc = parse_json(json_text, "parser fixture");
    if (!doc.is_array()) {
        throw ValidationError("parser fixture must be a JSON array");
    }
    FixtureSemanticParser parser;
    for (const auto& entry : doc) {
        std::string question = entry.at("question").get<std::string>();
        ParsedProgram parsed;
        parsed.program = program_from_json(entry.at("program").dump());
        if (entry.contains("p_parse")) {
            parsed.p_parse = entry.at("p_parse").get<double>();
            if (!(parsed.p_parse > 0.0 && parsed.p_parse <= 1.0)) {
                throw ValidationError("p_parse must be in (0, 1] for question: " + question);
            }
        }
        auto [it, inserted] = parser.entries_.emplace(question, parsed);
        if (!inserted && !(it->second.program == parsed.program)) {
            throw ValidationError("conflicting parser fixture entries for: " + question);
        }
    }
    return parser;
}

std::optional<ParsedProgram> FixtureSemanticParser::parse(const std::string& question) const {
    auto it = entries_.find(question);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

AnswerList kb_answers(const Question& q, double p_g, const KbView& view,
                      const SemanticParser& parser) {
    std::optional<ParsedProgram> parsed = parser.parse(q.render());
    if (!parsed) {
        return {};
    }
    std::vector<AnswerValue> values;
    try {
        values = execute_program(view, parsed->program);
    } catch (const ExecError&) {
        return {};
    }
    std::vector<ScoredAnswer> raw;
    raw.reserve(values.size());
    for (auto& value : values) {
        raw.push_back({std::move(value), p_g * parsed->p_parse, Source::Kb});
    }
    return finalize_answers(std::move(raw), 0);
}

std::optional<double> PrecisionTable::lookup(const std::string& skeleton) const {
    auto it = by_skeleton.find(skeleton);
    if (it == by_skeleton.end()) {
        return std::nullopt;
    }
    return it->second;
}

PrecisionTable precision_table_from_json(const std::string& json_text) {
    nlohmann::json doc = parse_json(json_text, "precision table");
    PrecisionTable table;
    const nlohmann::json& map = doc.contains("skeletons") ? doc.at("skeletons") : doc;
    if (!map.is_object()) {
        throw ValidationError("precision table must map skeletons to precisions");
    }
    for (const auto& [skeleton, precision] : map.items()) {
        table.by_skeleton[skeleton] = precision.get<double>();
    }
    return table;
}

std::string precision_table_to_json(const PrecisionTable& table) {
    nlohmann::json doc;
    doc["skeletons"] = nlohmann::json::object();
    for (const auto& [skeleton, precision] : table.by_skeleton) {
        doc["skeletons"][skeleton] = precision;
    }
    return doc.dump(2) + "\n";
}

PrecisionTable build_precision_table(const std::vector<TrainExample>& train, const KbView& view,
                                     const SemanticParser& parser) {
    std::map<std::string, std::pair<int, int>> counts;  // skeleton -> (correct, total)
    for (const auto& example : train) {
        std::optional<ParsedProgram> parsed = parser.parse(example.question);
        if (!parsed) {
            continue;
        }
        std::string skeleton = function_skeleton(parsed->program);
        auto& [correct, total] = counts[skeleton];
        ++total;
        std::vector<AnswerValue> values;
        try {
            values = execute_program(view, parsed->program);
        } catch (const ExecError&) {
            continue;
        }
        std::vector<ScoredAnswer> raw;
        for (auto& value : values) {
            raw.push_back({std::move(value), 1.0, Source::Kb});
        }
        AnswerList ranked = finalize_answers(std::move(raw), 0);
        if (!ranked.empty() && exact_match(ranked.top().value.surface(), example.golds) == 1) {
            ++correct;
        }
    }
    PrecisionTable table;
    for (const auto& [skeleton, pair] : counts) {
        table.by_skeleton[skeleton] =
            pair.second == 0 ? 0.0
                             : static_cast<double>(pair.first) / static_cast<double>(pair.second);
    }
    return table;
}

KnowledgeBase ablate_kb(const KnowledgeBase& kb, double fraction, std::uint64_t seed) {
    if (fraction < 0.0 || fraction > 1.0) {
        throw ValidationError("ablation fraction must lie in [0, 1]");
    }
    const std::size_t pool =
        kb.relations.size() + kb.attributes.size();
    const std::size_t removed_count =
        static_cast<std::size_t>(fraction * static_cast<double>(pool));
    KnowledgeBase out;
    out.entities = kb.entities;
    out.concepts = kb.concepts;
    out.units = kb.units;
    if (removed_count == 0) {
        out.relations = kb.relations;
        out.attributes = kb.attributes;
        return out;
    }

    // Partial Fisher-Yates with explicit modulo sampling so every platform
    // draws the same sequence for a given seed.
    std::mt19937_64 gen(seed);
    std::vector<std::size_t> indices(pool);
    for (std::size_t i = 0; i < pool; ++i) {
        indices[i] = i;
    }
    std::vector<bool> removed(pool, false);
    for (std::size_t i = 0; i < removed_count; ++i) {
        std::size_t j = i + static_cast<std::size_t>(gen() % (pool - i));
        std::swap(indices[i], indices[j]);
        removed[indices[i]] = true;
    }
    for (std::size_t i = 0; i < kb.relations.size(); ++i) {
        if (!removed[i]) {
            out.relations.push_back(kb.relations[i]);
        }
    }
    for (std::size_t i = 0; i < kb.attributes.size(); ++i) {
        if (!removed[kb.relations.size() + i]) {
            out.attributes.push_back(kb.attributes[i]);
        }
    }
    return out;
}

}  // namespace roht
