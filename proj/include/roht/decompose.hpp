#pragma once
// Tree construction: pluggable decomposer/generator interfaces and the
// bottom-up builder that turns an atomic representation into a scored HQDT.

#include "roht/hqdt.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace roht {

struct DecomposeResult {
    AtomicRepresentation atoms;
    double likelihood = 1.0;  // l_d in (0,1]
};

class Decomposer {
public:
    virtual ~Decomposer() = default;
    // Must be deterministic and reentrant.
    virtual DecomposeResult decompose(const std::string& question) const = 0;
};

struct GenerateResult {
    Question question;        // always NaturalLanguage
    double likelihood = 1.0;  // l_g in (0,1]
};

class QuestionGenerator {
public:
    virtual ~QuestionGenerator() = default;
    // Input is the "<sep>"-serialized atomic representation of the node.
    virtual GenerateResult generate(const std::string& serialized_atoms) const = 0;
};

// File-backed stand-ins for the trained decomposer/generator. Fixture format:
// JSON array of {question, atoms: [string], l_d, generated: {serialized -> {text, l_g}}};
// l_d / l_g default to 1.0 when omitted.
class FixtureDecomposer : public Decomposer {
public:
    static FixtureDecomposer from_file(const std::string& path);
    static FixtureDecomposer from_json_text(const std::string& json_text);

    DecomposeResult decompose(const std::string& question) const override;

private:
    std::map<std::string, DecomposeResult> entries_;
};

class FixtureGenerator : public QuestionGenerator {
public:
    static FixtureGenerator from_file(const std::string& path);
    static FixtureGenerator from_json_text(const std::string& json_text);

    GenerateResult generate(const std::string& serialized_atoms) const override;

private:
    std::map<std::string, GenerateResult> entries_;
};

// Renumbers a group's references to 1-based positions within the group,
// preserving order. Throws InvalidGroupError when a reference leaves the group.
AtomicRepresentation rearrange_ref_tokens(const std::vector<std::pair<int, Question>>& group);

// Builds the HQDT for `question` bottom-up: every atom becomes a leaf with
// certainty l_d, every reference-bearing atom closes an internal node over
// the groups it references (question text and likelihood from `generator`,
// certainty l_d * l_g), the final group is replaced by the original question
// as root with certainty 1.0, and the whole tree is BFS-reindexed.
Hqdt build_hqdt(const std::string& question, const Decomposer& decomposer,
                const QuestionGenerator& generator);

}  // namespace roht
