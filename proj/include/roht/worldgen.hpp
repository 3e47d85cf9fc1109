#pragma once
// Seeded synthetic world: a knowledge base, a one-sentence-per-paragraph
// corpus telling the same facts in prose, and three question datasets (a
// six-family main set, a deep-composition suite whose middle hop exists only
// in text, and a scheduler suite containing a deliberately unreliable parse).
// Identical spec + seed always yields byte-identical artifacts.

#include "roht/dataset.hpp"
#include "roht/kb.hpp"
#include "roht/text.hpp"

#include <cstdint>
#include <string>

namespace roht {

struct GenSpec {
    int countries = 20;
    int cities_per_country = 2;
    int mountains = 40;          // at most 2 per country before sharing
    int shared_mountains = 10;   // mountains straddling a second country
    int rivers = 24;
    int films = 40;
    int artworks = 40;
    int hierarchy_artworks = 24;

    // Question budgets for the pair-sampled families.
    int comparisons = 160;
    int verifications = 160;
    int unions = 60;

    // Scheduler-suite composition: how many seat-equals-largest countries
    // land in each split of the "largest city" questions.
    int trap_train_match = 10;
    int trap_train_mismatch = 6;
    int trap_dev_match = 2;
    int trap_dev_mismatch = 2;
};

// Partial override: absent fields keep their defaults. Throws ValidationError
// on malformed JSON or unknown keys.
GenSpec gen_spec_from_json(const std::string& json_text);

struct SyntheticWorld {
    KnowledgeBase kb;
    Corpus corpus;
    Dataset questions;         // families: multihop, comparison, logical, count,
                               // verify, selectamong
    Dataset hierarchy_suite;   // three-hop questions bridged through text-only facts
    Dataset scheduler_suite;   // mixes reliable parses with the seat-of-government trap
};

// Throws GenError when the spec is unsatisfiable (e.g. more mountains than
// country capacity, or trap counts exceeding the country count).
SyntheticWorld generate_synthetic_world(const GenSpec& spec, std::uint64_t seed);

}  // namespace roht
