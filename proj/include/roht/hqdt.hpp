#pragma once
// Hierarchical question decomposition trees: BFS-indexed 3-ary ordered trees
// of scored questions, plus the deterministic algorithms that move between a
// tree and the flat atomic representation of any of its subtrees.

#include "roht/question.hpp"

#include <optional>
#include <string>
#include <vector>

namespace roht {

// Ordered list of atomic questions. Reference tokens inside atoms are
// 1-based positions into the list and may only point backwards.
struct AtomicRepresentation {
    std::vector<Question> atoms;

    bool operator==(const AtomicRepresentation&) const = default;
};

// All invariant violations (not just the first); empty means valid.
std::vector<std::string> validate_atoms(const AtomicRepresentation& ar);

struct HqdtNode {
    int index = 0;
    Question question;
    double certainty = 1.0;          // p_g, in (0, 1]
    std::optional<int> parent;
    std::vector<int> children;       // BFS indices, ordered

    bool is_leaf() const { return children.empty(); }
};

struct Hqdt {
    std::vector<HqdtNode> nodes;     // position == BFS index

    int size() const { return static_cast<int>(nodes.size()); }
    const HqdtNode& node(int index) const { return nodes.at(static_cast<std::size_t>(index)); }
    const HqdtNode& root() const { return nodes.at(0); }
};

// Every violation of the tree invariants: single BFS-consistent root with
// certainty 1.0, 2-3 children per internal node, bridge/operation questions
// only at leaves and only in the last-child slot, leaf references pointing at
// earlier siblings, certainties in (0,1].
std::vector<std::string> validate(const Hqdt& tree);

// DFS over the subtree rooted at `index`; leaves are emitted in DFS order
// with their node-index references remapped to 1-based list positions (a
// reference to an internal node resolves to the position of that node's last
// leaf). Throws InvalidTreeError on references that leave the subtree.
AtomicRepresentation atoms_from_leaves(const Hqdt& tree, int index);

// Node carrying caller-chosen ids, used as reindex_bfs input.
struct ProvisionalNode {
    int id = 0;
    Question question;
    double certainty = 1.0;
    std::optional<int> parent;       // provisional id
    std::vector<int> children;       // provisional ids, ordered
};

// Renumbers a single rooted tree into BFS order, rewriting parent/children
// links and every in-question node reference. Throws InvalidTreeError on
// forests, cycles, duplicate ids or dangling links.
Hqdt reindex_bfs(const std::vector<ProvisionalNode>& nodes);

// Atoms rendered and joined by the literal separator token "<sep>".
std::string serialize_atoms(const AtomicRepresentation& ar);
AtomicRepresentation deserialize_atoms(const std::string& text);

std::string hqdt_to_json(const Hqdt& tree);
Hqdt hqdt_from_json(const std::string& json_text);

}  // namespace roht
