#include "roht/hqdt.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "json.hpp"

namespace roht {

std::vector<std::string> validate_atoms(const AtomicRepresentation& ar) {
    std::vector<std::string> violations;
    if (ar.atoms.empty()) {
        violations.push_back("atomic representation is empty");
        return violations;
    }
    for (std::size_t j = 0; j < ar.atoms.size(); ++j) {
        for (int r : get_ref_tokens(ar.atoms[j])) {
            if (r < 1 || static_cast<std::size_t>(r) > j) {
                violations.push_back("atom " + std::to_string(j + 1) + " references #" +
                                     std::to_string(r) + " which is not an earlier position");
            }
        }
    }
    return violations;
}

std::vector<std::string> validate(const Hqdt& tree) {
    std::vector<std::string> violations;
    const int n = tree.size();
    if (n == 0) {
        violations.push_back("tree has no nodes");
        return violations;
    }

    for (int i = 0; i < n; ++i) {
        const HqdtNode& node = tree.nodes[static_cast<std::size_t>(i)];
        if (node.index != i)
            violations.push_back("node at position " + std::to_string(i) + " carries index " +
                                 std::to_string(node.index));
        if (!(node.certainty > 0.0 && node.certainty <= 1.0))
            violations.push_back("node " + std::to_string(i) + " certainty out of (0,1]");
        for (int c : node.children) {
            if (c < 0 || c >= n) {
                violations.push_back("node " + std::to_string(i) + " lists child " +
                                     std::to_string(c) + " outside the tree");
            } else if (!tree.node(c).parent || *tree.node(c).parent != i) {
                violations.push_back("child " + std::to_string(c) + " does not point back to parent " +
                                     std::to_string(i));
            }
        }
    }

    if (tree.root().parent)
        violations.push_back("node 0 has a parent");
    if (tree.root().certainty != 1.0)
        violations.push_back("root certainty must be 1.0");
    for (int i = 1; i < n; ++i)
        if (!tree.node(i).parent)
            violations.push_back("node " + std::to_string(i) + " has no parent (forest)");

    // BFS enumeration: visiting children in order from the root must count
    // 0,1,2,... with no index skipped or revisited.
    {
        std::deque<int> queue{0};
        std::set<int> seen{0};
        int expected = 0;
        bool order_ok = true;
        while (!queue.empty()) {
            int i = queue.front();
            queue.pop_front();
            if (i != expected) order_ok = false;
            ++expected;
            if (i < 0 || i >= n) break;
            for (int c : tree.node(i).children) {
                if (c < 0 || c >= n || !seen.insert(c).second) {
                    order_ok = false;
                    continue;
                }
                queue.push_back(c);
            }
        }
        if (expected != n || !order_ok)
            violations.push_back("node indices are not a BFS enumeration");
    }

    for (int i = 0; i < n; ++i) {
        const HqdtNode& node = tree.node(i);
        if (node.is_leaf()) continue;
        if (node.question.kind() != QuestionKind::NaturalLanguage)
            violations.push_back("non-leaf node " + std::to_string(i) + " is not a natural language question");
        if (node.children.size() < 2 || node.children.size() > 3)
            violations.push_back("node " + std::to_string(i) + " has " +
                                 std::to_string(node.children.size()) + " children (want 2 or 3)");
        for (std::size_t k = 0; k < node.children.size(); ++k) {
            int c = node.children[k];
            if (c < 0 || c >= n) continue;
            QuestionKind kind = tree.node(c).question.kind();
            bool last = k + 1 == node.children.size();
            if (!last && kind != QuestionKind::NaturalLanguage)
                violations.push_back("child " + std::to_string(c) + " of node " + std::to_string(i) +
                                     " must be a natural language question");
            if (last && kind == QuestionKind::NaturalLanguage)
                violations.push_back("last child " + std::to_string(c) + " of node " + std::to_string(i) +
                                     " must be a bridge or symbolic operation question");
        }
    }

    // Leaf references point at earlier siblings.
    for (int i = 0; i < n; ++i) {
        const HqdtNode& node = tree.node(i);
        if (!node.is_leaf()) {
            if (!get_ref_tokens(node.question).empty())
                violations.push_back("internal node " + std::to_string(i) + " contains reference tokens");
            continue;
        }
        auto refs = get_ref_tokens(node.question);
        if (refs.empty()) continue;
        if (!node.parent) {
            violations.push_back("root leaf " + std::to_string(i) + " contains reference tokens");
            continue;
        }
        const auto& siblings = tree.node(*node.parent).children;
        auto self = std::find(siblings.begin(), siblings.end(), i);
        for (int r : refs) {
            auto target = std::find(siblings.begin(), siblings.end(), r);
            if (target == siblings.end() || target >= self)
                violations.push_back("leaf " + std::to_string(i) + " references #" + std::to_string(r) +
                                     " which is not an earlier sibling");
        }
    }

    return violations;
}

AtomicRepresentation atoms_from_leaves(const Hqdt& tree, int index) {
    if (index < 0 || index >= tree.size())
        throw InvalidTreeError("node index " + std::to_string(index) + " outside tree");

    AtomicRepresentation ar;
    std::map<int, int> positions;  // leaf node index -> 1-based DFS position

    auto dfs = [&](auto&& self, int i) -> void {
        const HqdtNode& node = tree.node(i);
        if (!node.is_leaf()) {
            for (int c : node.children) self(self, c);
            return;
        }
        positions[i] = static_cast<int>(positions.size()) + 1;
        std::map<int, int> remap;
        for (int r : get_ref_tokens(node.question)) {
            if (remap.count(r)) continue;
            int leaf;
            if (r >= 0 && r < tree.size() && !tree.node(r).is_leaf())
                leaf = tree.node(r).children.back();  // position of q^{ed_r}
            else
                leaf = r;
            auto it = positions.find(leaf);
            if (it == positions.end())
                throw InvalidTreeError("leaf " + std::to_string(i) + " references node " +
                                       std::to_string(r) + " outside the subtree");
            remap[r] = it->second;
        }
        ar.atoms.push_back(remap.empty() ? node.question : remap_ref_tokens(node.question, remap));
    };
    dfs(dfs, index);
    return ar;
}

Hqdt reindex_bfs(const std::vector<ProvisionalNode>& nodes) {
    if (nodes.empty())
        throw InvalidTreeError("no nodes");

    std::map<int, const ProvisionalNode*> by_id;
    for (const auto& node : nodes)
        if (!by_id.emplace(node.id, &node).second)
            throw InvalidTreeError("duplicate provisional id " + std::to_string(node.id));

    const ProvisionalNode* root = nullptr;
    for (const auto& node : nodes) {
        for (int c : node.children) {
            auto it = by_id.find(c);
            if (it == by_id.end())
                throw InvalidTreeError("node " + std::to_string(node.id) + " lists unknown child " +
                                       std::to_string(c));
            if (!it->second->parent || *it->second->parent != node.id)
                throw InvalidTreeError("child " + std::to_string(c) + " does not point back to " +
                                       std::to_string(node.id));
        }
        if (node.parent) {
            auto it = by_id.find(*node.parent);
            if (it == by_id.end())
                throw InvalidTreeError("node " + std::to_string(node.id) + " has unknown parent " +
                                       std::to_string(*node.parent));
            const auto& c = it->second->children;
            if (std::find(c.begin(), c.end(), node.id) == c.end())
                throw InvalidTreeError("parent " + std::to_string(*node.parent) + " does not list child " +
                                       std::to_string(node.id));
        } else {
            if (root)
                throw InvalidTreeError("multiple roots (forest)");
            root = &node;
        }
    }
    if (!root)
        throw InvalidTreeError("no root (cycle)");

    std::map<int, int> new_id;
    std::deque<const ProvisionalNode*> queue{root};
    new_id[root->id] = 0;
    std::vector<const ProvisionalNode*> order;
    while (!queue.empty()) {
        const ProvisionalNode* node = queue.front();
        queue.pop_front();
        order.push_back(node);
        for (int c : node->children) {
            if (new_id.count(c))
                throw InvalidTreeError("node " + std::to_string(c) + " reachable twice (cycle)");
            new_id[c] = static_cast<int>(new_id.size());
            queue.push_back(by_id.at(c));
        }
    }
    if (order.size() != nodes.size())
        throw InvalidTreeError("unreachable nodes (forest or cycle)");

    Hqdt tree;
    tree.nodes.reserve(order.size());
    for (const ProvisionalNode* node : order) {
        HqdtNode out;
        out.index = new_id.at(node->id);
        out.certainty = node->certainty;
        if (node->parent) out.parent = new_id.at(*node->parent);
        for (int c : node->children) out.children.push_back(new_id.at(c));

        auto refs = get_ref_tokens(node->question);
        if (refs.empty()) {
            out.question = node->question;
        } else {
            std::map<int, int> remap;
            for (int r : refs) {
                auto it = new_id.find(r);
                if (it == new_id.end())
                    throw InvalidTreeError("question of node " + std::to_string(node->id) +
                                           " references unknown node " + std::to_string(r));
                remap[r] = it->second;
            }
            out.question = remap_ref_tokens(node->question, remap);
        }
        tree.nodes.push_back(std::move(out));
    }
    return tree;
}

namespace {
constexpr const char* kSep = " <sep> ";
}

std::string serialize_atoms(const AtomicRepresentation& ar) {
    std::string out;
    for (std::size_t i = 0; i < ar.atoms.size(); ++i) {
        if (i) out += kSep;
        out += ar.atoms[i].render();
    }
    return out;
}

AtomicRepresentation deserialize_atoms(const std::string& text) {
    AtomicRepresentation ar;
    std::size_t start = 0;
    const std::string sep = kSep;
    while (true) {
        std::size_t pos = text.find(sep, start);
        std::string piece = pos == std::string::npos ? text.substr(start)
                                                     : text.substr(start, pos - start);
        ar.atoms.push_back(parse_question(piece));
        if (pos == std::string::npos) break;
        start = pos + sep.size();
    }
    return ar;
}

std::string hqdt_to_json(const Hqdt& tree) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& node : tree.nodes) {
        nlohmann::json j;
        j["index"] = node.index;
        j["kind"] = to_string(node.question.kind());
        j["text"] = node.question.render();
        j["certainty"] = node.certainty;
        if (node.parent)
            j["parent"] = *node.parent;
        else
            j["parent"] = nullptr;
        j["children"] = node.children;
        nodes.push_back(std::move(j));
    }
    return nlohmann::json{{"nodes", nodes}}.dump(2);
}

Hqdt hqdt_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    Hqdt tree;
    for (const auto& n : j.at("nodes")) {
        HqdtNode node;
        node.index = n.at("index").get<int>();
        node.question = parse_question(n.at("text").get<std::string>());
        node.certainty = n.at("certainty").get<double>();
        if (!n.at("parent").is_null()) node.parent = n.at("parent").get<int>();
        node.children = n.at("children").get<std::vector<int>>();
        tree.nodes.push_back(std::move(node));
    }
    std::sort(tree.nodes.begin(), tree.nodes.end(),
              [](const HqdtNode& a, const HqdtNode& b) { return a.index < b.index; });
    return tree;
}

}  // namespace roht
