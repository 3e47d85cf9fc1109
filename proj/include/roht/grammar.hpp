#pragma once
// Deterministic template grammar shared by the synthetic world generator and
// the pluggable components that stand in for learned models: a decomposer, a
// sub-question generator, a semantic parser, and a span extractor. All four
// recognize exactly the question forms the generator emits, so seeded corpora
// and question sets are answerable end to end.

#include "roht/decompose.hpp"
#include "roht/kb.hpp"
#include "roht/text.hpp"

#include <optional>
#include <string>
#include <vector>

namespace roht {

// --- Corpus sentence builders (one sentence per paragraph) -----------------

std::string height_sentence(const std::string& name, long long value);
std::string length_sentence(const std::string& name, long long value);
std::string located_sentence(const std::string& name, const std::string& concept_name,
                             const std::string& country);
std::string born_sentence(const std::string& person, const std::string& country);
std::string directed_sentence(const std::string& film, const std::string& person);
std::string created_sentence(const std::string& artwork, const std::string& person);
std::string count_sentence(long long count, const std::string& concept_plural,
                           const std::string& country);
std::string largest_city_sentence(const std::string& country, const std::string& city);
std::string death_sentence(const std::string& artwork, const std::string& city);

// --- Question builders ------------------------------------------------------

std::string q_attribute(const std::string& attr, const std::string& name);
std::string q_located_country(const std::string& name);
std::string q_directed(const std::string& film);
std::string q_created(const std::string& artwork);
std::string q_born_country(const std::string& person);
std::string q_maker_born_country(const std::string& role, const std::string& work);
std::string q_things_in(const std::string& concept_plural, const std::string& country);
std::string q_count_in(const std::string& concept_plural, const std::string& country);
std::string q_compare(const std::string& adjective, const std::string& a,
                      const std::string& b);
std::string q_verify_height(const std::string& name, const std::string& relation,
                            long long value);
std::string q_in_both(const std::string& c1, const std::string& c2);
std::string q_in_either(const std::string& c1, const std::string& c2);
std::string q_extreme_mountain(const std::string& country, const std::string& extreme);
std::string q_largest_city(const std::string& country);
std::string q_creator_death_country(const std::string& artwork);

// --- Pluggable components ---------------------------------------------------

// Splits recognized composite forms into atoms; anything unrecognized becomes
// its own single atom (the question is kept whole and answered directly).
class TemplateDecomposer : public Decomposer {
public:
    DecomposeResult decompose(const std::string& question) const override;
};

// Produces the natural-language question for a group of atoms. Knows the two
// group shapes the decomposer creates (attribute-over-set, maker-death) and
// falls back to a generic readable rewrite otherwise.
class TemplateGenerator : public QuestionGenerator {
public:
    GenerateResult generate(const std::string& serialized_atoms) const override;
};

// Maps recognized single-hop and chained forms onto KB programs; composite
// forms (comparisons, verifications, set algebra) and unknown phrasings
// return nullopt.
class TemplateSemanticParser : public SemanticParser {
public:
    std::optional<ParsedProgram> parse(const std::string& question) const override;
};

// Binds the question's slots into sentence regexes and reads answers out of
// the evidence paragraphs; spans are scored with a fixed extraction
// confidence of 0.95.
class PatternSpanExtractor : public SpanExtractor {
public:
    std::vector<Extraction> extract(const std::string& question,
                                    const std::vector<const Paragraph*>& evidence) const override;
};

}  // namespace roht
