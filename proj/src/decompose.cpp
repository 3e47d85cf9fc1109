#include "roht/decompose.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "roht/errors.hpp"

namespace roht {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw NotFoundError("cannot open fixture file: " + path);
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

nlohmann::json parse_fixture_array(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("fixture is not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) {
        throw ValidationError("fixture must be a JSON array of entries");
    }
    return doc;
}

double read_likelihood(const nlohmann::json& entry, const char* key) {
    if (!entry.contains(key)) {
        return 1.0;
    }
    if (!entry.at(key).is_number()) {
        throw ValidationError(std::string("fixture likelihood '") + key + "' must be a number");
    }
    double v = entry.at(key).get<double>();
    if (!(v > 0.0 && v <= 1.0)) {
        throw ValidationError(std::string("fixture likelihood '") + key +
                              "' must be in (0, 1], got " + std::to_string(v));
    }
    return v;
}

}  // namespace

FixtureDecomposer FixtureDecomposer::from_file(const std::string& path) {
    return from_json_text(read_file(path));
}

FixtureDecomposer FixtureDecomposer::from_json_text(const std::string& json_text) {
    FixtureDecomposer d;
    for (const auto& entry : parse_fixture_array(json_text)) {
        if (!entry.is_object() || !entry.contains("question") || !entry.contains("atoms")) {
            throw ValidationError("fixture entry must carry 'question' and 'atoms'");
        }
        std::string question = entry.at("question").get<std::string>();
        DecomposeResult result;
        result.likelihood = read_likelihood(entry, "l_d");
        if (!entry.at("atoms").is_array() || entry.at("atoms").empty()) {
            throw ValidationError("fixture atoms for '" + question + "' must be a non-empty array");
        }
        for (const auto& atom : entry.at("atoms")) {
            result.atoms.atoms.push_back(parse_question(atom.get<std::string>()));
        }
        auto [it, inserted] = d.entries_.emplace(question, result);
        if (!inserted && !(it->second.atoms == result.atoms &&
                           it->second.likelihood == result.likelihood)) {
            throw ValidationError("conflicting fixture entries for question: " + question);
        }
    }
    return d;
}

DecomposeResult FixtureDecomposer::decompose(const std::string& question) const {
    auto it = entries_.find(question);
    if (it == entries_.end()) {
        throw NotFoundError("no decomposition fixture for question: " + question);
    }
    return it->second;
}

FixtureGenerator FixtureGenerator::from_file(const std::string& path) {
    return from_json_text(read_file(path));
}

FixtureGenerator FixtureGenerator::from_json_text(const std::string& json_text) {
    FixtureGenerator g;
    for (const auto& entry : parse_fixture_array(json_text)) {
        if (!entry.is_object() || !entry.contains("generated")) {
            continue;  // decomposition-only entry
        }
        if (!entry.at("generated").is_object()) {
            throw ValidationError("fixture 'generated' must map serialized atoms to questions");
        }
        for (const auto& [serialized, gen] : entry.at("generated").items()) {
            GenerateResult result;
            if (gen.is_string()) {
                result.question = parse_question(gen.get<std::string>());
            } else if (gen.is_object() && gen.contains("text")) {
                result.question = parse_question(gen.at("text").get<std::string>());
                result.likelihood = read_likelihood(gen, "l_g");
            } else {
                throw ValidationError("generated entry for '" + serialized +
                                      "' must be a string or {text, l_g}");
            }
            auto [it, inserted] = g.entries_.emplace(serialized, result);
            if (!inserted && !(it->second.question == result.question &&
                               it->second.likelihood == result.likelihood)) {
                throw ValidationError("conflicting generated questions for atoms: " + serialized);
            }
        }
    }
    return g;
}

GenerateResult FixtureGenerator::generate(const std::string& serialized_atoms) const {
    auto it = entries_.find(serialized_atoms);
    if (it == entries_.end()) {
        throw NotFoundError("no generation fixture for atoms: " + serialized_atoms);
    }
    return it->second;
}

AtomicRepresentation rearrange_ref_tokens(const std::vector<std::pair<int, Question>>& group) {
    std::map<int, int> local_position;
    for (std::size_t j = 0; j < group.size(); ++j) {
        local_position[group[j].first] = static_cast<int>(j) + 1;
    }
    AtomicRepresentation out;
    for (const auto& [original, question] : group) {
        std::map<int, int> mapping;
        for (int r : get_ref_tokens(question)) {
            auto it = local_position.find(r);
            if (it == local_position.end()) {
                throw InvalidGroupError("atom " + std::to_string(original) + " references #" +
                                        std::to_string(r) + " outside its group");
            }
            mapping[r] = it->second;
        }
        out.atoms.push_back(mapping.empty() ? question : remap_ref_tokens(question, mapping));
    }
    return out;
}

namespace {

// One grouping step pending its generated question: `id` is the provisional
// node id, `children` the ordered provisional ids below it, `covered` the
// original atom positions of its subtree in ascending order.
struct PendingGroup {
    int id = 0;
    std::vector<int> children;
    std::vector<int> covered;
};

}  // namespace

Hqdt build_hqdt(const std::string& question, const Decomposer& decomposer,
                const QuestionGenerator& generator) {
    Question root_question = parse_question(question);
    if (root_question.kind() != QuestionKind::NaturalLanguage) {
        throw BuildError("input question must be natural language: " + question);
    }

    DecomposeResult decomposed = decomposer.decompose(question);
    {
        std::vector<std::string> violations = validate_atoms(decomposed.atoms);
        if (!violations.empty()) {
            std::string joined;
            for (const auto& v : violations) {
                joined += (joined.empty() ? "" : "; ") + v;
            }
            throw BuildError("invalid atomic representation for '" + question + "': " + joined);
        }
    }

    const std::vector<Question>& atoms = decomposed.atoms.atoms;
    const int n = static_cast<int>(atoms.size());
    if (n == 1) {
        // Nothing to group: the question answers itself at the root.
        Hqdt tree;
        tree.nodes.push_back(HqdtNode{0, root_question, 1.0, std::nullopt, {}});
        return tree;
    }

    // Provisional ids: atoms take 1..n, grouping nodes take n+1, n+2, ...
    // `owner[id]` is the grouping node an id was absorbed into (0 = still
    // top-level); `exposed[g]` is the child whose answer node g passes up.
    std::map<int, int> owner;
    std::map<int, int> exposed;
    std::map<int, std::vector<int>> covered;
    std::map<int, Question> leaf_question;
    for (int i = 1; i <= n; ++i) {
        covered[i] = {i};
        leaf_question[i] = atoms[static_cast<std::size_t>(i - 1)];
    }

    std::vector<PendingGroup> groups;
    int next_id = n + 1;
    for (int i = 1; i <= n; ++i) {
        std::vector<int> refs = get_ref_tokens(atoms[static_cast<std::size_t>(i - 1)]);
        if (refs.empty()) {
            if (i == n) {
                throw BuildError("final atom of a multi-atom representation must reference "
                                 "earlier answers: " + atoms.back().render());
            }
            continue;
        }

        // Resolve each referenced atom to its current top-level node,
        // insisting that every hop preserves the referenced answer.
        std::map<int, int> resolved;  // original ref target -> top-level id
        std::vector<int> child_order;
        for (int r : refs) {
            if (resolved.count(r)) {
                continue;
            }
            int t = r;
            while (true) {
                auto up = owner.find(t);
                if (up == owner.end() || up->second == 0) {
                    break;
                }
                if (exposed.at(up->second) != t) {
                    throw BuildError("atom " + std::to_string(i) + " references #" +
                                     std::to_string(r) +
                                     ", which is not the exposed answer of its group");
                }
                t = up->second;
            }
            if (std::find(child_order.begin(), child_order.end(), t) != child_order.end()) {
                throw BuildError("atom " + std::to_string(i) +
                                 " references two answers from the same group");
            }
            resolved[r] = t;
            child_order.push_back(t);
        }
        if (static_cast<int>(child_order.size()) > 2) {
            throw BuildError("atom " + std::to_string(i) + " references " +
                             std::to_string(child_order.size()) +
                             " distinct answers; grouping nodes take at most three children");
        }

        leaf_question[i] = remap_ref_tokens(atoms[static_cast<std::size_t>(i - 1)], resolved);

        PendingGroup group;
        group.id = next_id++;
        group.children = child_order;
        group.children.push_back(i);
        for (int c : group.children) {
            owner[c] = group.id;
            auto& cov = covered[group.id];
            cov.insert(cov.end(), covered.at(c).begin(), covered.at(c).end());
        }
        std::sort(covered[group.id].begin(), covered[group.id].end());
        group.covered = covered[group.id];
        exposed[group.id] = i;
        groups.push_back(std::move(group));
    }

    const PendingGroup& top = groups.back();
    if (static_cast<int>(top.covered.size()) != n) {
        throw BuildError("atomic representation does not connect into a single tree: " +
                         std::to_string(n - top.covered.size()) + " atom(s) unreachable");
    }

    std::vector<ProvisionalNode> nodes;
    for (int i = 1; i <= n; ++i) {
        ProvisionalNode leaf;
        leaf.id = i;
        leaf.question = leaf_question.at(i);
        leaf.certainty = decomposed.likelihood;
        leaf.parent = owner.at(i);
        nodes.push_back(std::move(leaf));
    }
    for (const PendingGroup& group : groups) {
        ProvisionalNode node;
        node.id = group.id;
        node.children = group.children;
        if (group.id == top.id) {
            node.question = root_question;
            node.certainty = 1.0;
        } else {
            std::vector<std::pair<int, Question>> members;
            for (int pos : group.covered) {
                members.emplace_back(pos, atoms[static_cast<std::size_t>(pos - 1)]);
            }
            GenerateResult generated = generator.generate(serialize_atoms(rearrange_ref_tokens(members)));
            if (generated.question.kind() != QuestionKind::NaturalLanguage) {
                throw BuildError("generated question must be natural language: " +
                                 generated.question.render());
            }
            node.question = generated.question;
            node.certainty = decomposed.likelihood * generated.likelihood;
            node.parent = owner.at(group.id);
        }
        nodes.push_back(std::move(node));
    }

    Hqdt tree = reindex_bfs(nodes);
    std::vector<std::string> violations = validate(tree);
    if (!violations.empty()) {
        std::string joined;
        for (const auto& v : violations) {
            joined += (joined.empty() ? "" : "; ") + v;
        }
        throw BuildError("constructed tree violates invariants: " + joined);
    }
    return tree;
}

}  // namespace roht
