#include "roht/grammar.hpp"

#include "roht/errors.hpp"
#include "roht/hqdt.hpp"

#include <regex>
#include <sstream>

namespace roht {

namespace {

std::string escape_regex(const std::string& literal) {
    static const std::string specials = R"(\^$.|?*+()[]{})";
    std::string out;
    out.reserve(literal.size());
    for (char c : literal) {
        if (specials.find(c) != std::string::npos) out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

// Captured slots feed KB name lookups and sentence regexes; composite
// phrasings must fall through to other handlers instead.
bool plain_slot(const std::string& text) {
    return text.find(" or ") == std::string::npos &&
           text.find(" and ") == std::string::npos && text.rfind("both ", 0) != 0 &&
           text.rfind("each ", 0) != 0 && text.find(" each ") == std::string::npos;
}

std::string singular(const std::string& plural) {
    if (plural.size() > 3 && plural.compare(plural.size() - 3, 3, "ies") == 0) {
        return plural.substr(0, plural.size() - 3) + "y";
    }
    if (!plural.empty() && plural.back() == 's') return plural.substr(0, plural.size() - 1);
    return plural;
}

constexpr double kExtractionConfidence = 0.95;

}  // namespace

// --- Corpus sentence builders -----------------------------------------------

std::string height_sentence(const std::string& name, long long value) {
    return name + " has a height of " + std::to_string(value) + " metre.";
}

std::string length_sentence(const std::string& name, long long value) {
    return name + " has a length of " + std::to_string(value) + " km.";
}

std::string located_sentence(const std::string& name, const std::string& concept_name,
                             const std::string& country) {
    return name + " is a " + concept_name + " located in " + country + ".";
}

std::string born_sentence(const std::string& person, const std::string& country) {
    return person + " was born in " + country + ".";
}

std::string directed_sentence(const std::string& film, const std::string& person) {
    return film + " was directed by " + person + ".";
}

std::string created_sentence(const std::string& artwork, const std::string& person) {
    return artwork + " was created by " + person + ".";
}

std::string count_sentence(long long count, const std::string& concept_plural,
                           const std::string& country) {
    return country + " has " + std::to_string(count) + " " + concept_plural + ".";
}

std::string largest_city_sentence(const std::string& country, const std::string& city) {
    return "The largest city of " + country + " is " + city + ".";
}

std::string death_sentence(const std::string& artwork, const std::string& city) {
    return "The creator of " + artwork + " died in " + city + ".";
}

// --- Question builders ------------------------------------------------------

std::string q_attribute(const std::string& attr, const std::string& name) {
    return "What is the " + attr + " of " + name + "?";
}

std::string q_located_country(const std::string& name) {
    return "In which country is " + name + " located?";
}

std::string q_directed(const std::string& film) { return "Who directed " + film + "?"; }

std::string q_created(const std::string& artwork) { return "Who created " + artwork + "?"; }

std::string q_born_country(const std::string& person) {
    return "In which country was " + person + " born?";
}

std::string q_maker_born_country(const std::string& role, const std::string& work) {
    return "In which country was the " + role + " of " + work + " born?";
}

std::string q_things_in(const std::string& concept_plural, const std::string& country) {
    return "Which " + concept_plural + " are located in " + country + "?";
}

std::string q_count_in(const std::string& concept_plural, const std::string& country) {
    return "How many " + concept_plural + " has " + country + "?";
}

std::string q_compare(const std::string& adjective, const std::string& a,
                      const std::string& b) {
    return "Which is " + adjective + ", " + a + " or " + b + "?";
}

std::string q_verify_height(const std::string& name, const std::string& relation,
                            long long value) {
    return "Is the height of " + name + " " + relation + " than " + std::to_string(value) +
           " metre?";
}

std::string q_in_both(const std::string& c1, const std::string& c2) {
    return "Which mountains are located in both " + c1 + " and " + c2 + "?";
}

std::string q_in_either(const std::string& c1, const std::string& c2) {
    return "Which mountains are located in " + c1 + " or " + c2 + "?";
}

std::string q_extreme_mountain(const std::string& country, const std::string& extreme) {
    return "Which mountain located in " + country + " is the " + extreme + "?";
}

std::string q_largest_city(const std::string& country) {
    return "What is the largest city of " + country + "?";
}

std::string q_creator_death_country(const std::string& artwork) {
    return "In which country did the creator of " + artwork + " die?";
}

// --- Decomposer ---------------------------------------------------------------

DecomposeResult TemplateDecomposer::decompose(const std::string& question) const {
    auto result = [](std::vector<std::string> texts) {
        AtomicRepresentation ar;
        for (const std::string& text : texts) ar.atoms.push_back(parse_question(text));
        return DecomposeResult{std::move(ar), 1.0};
    };
    std::smatch m;

    static const std::regex compare_re(R"(^Which is (higher|longer), (.+) or (.+)\?$)");
    if (std::regex_match(question, m, compare_re)) {
        const std::string attr = m[1] == "higher" ? "height" : "length";
        return result({q_attribute(attr, m[2]), q_attribute(attr, m[3]),
                       "[SelectBetween] [greater] #1 #2"});
    }

    static const std::regex verify_re(
        R"(^Is the height of (.+) (greater|less) than ([0-9]+) metre\?$)");
    if (std::regex_match(question, m, verify_re)) {
        const std::string cmp = m[2] == "greater" ? ">" : "<";
        return result({q_attribute("height", m[1]),
                       "[Verify] [" + std::string(m[3]) + " metre] [" + cmp + "] #1"});
    }

    static const std::regex both_re(R"(^Which mountains are located in both (.+) and (.+)\?$)");
    if (std::regex_match(question, m, both_re) && plain_slot(m[1]) && plain_slot(m[2])) {
        return result({q_things_in("mountains", m[1]), q_things_in("mountains", m[2]),
                       "[Intersection] #1 #2"});
    }

    static const std::regex either_re(R"(^Which mountains are located in (.+) or (.+)\?$)");
    if (std::regex_match(question, m, either_re) && plain_slot(m[1]) && plain_slot(m[2])) {
        return result({q_things_in("mountains", m[1]), q_things_in("mountains", m[2]),
                       "[Union] #1 #2"});
    }

    static const std::regex count_re(R"(^How many (mountains|cities) has (.+)\?$)");
    if (std::regex_match(question, m, count_re) && plain_slot(m[2])) {
        return result({q_things_in(m[1], m[2]), "[Count] #1"});
    }

    static const std::regex extreme_re(
        R"(^Which mountain located in (.+) is the (highest|lowest)\?$)");
    if (std::regex_match(question, m, extreme_re) && plain_slot(m[1])) {
        const std::string extreme = m[2] == "highest" ? "largest" : "smallest";
        return result({q_things_in("mountains", m[1]), "What is the height of #1?",
                       "[SelectAmong] [" + extreme + "] #2"});
    }

    static const std::regex death_re(R"(^In which country did the creator of (.+) die\?$)");
    if (std::regex_match(question, m, death_re)) {
        return result({q_created(m[1]), "Where did #1 die?",
                       "In which country is #2 located?"});
    }

    static const std::regex maker_born_re(
        R"(^In which country was the (director|creator) of (.+) born\?$)");
    if (std::regex_match(question, m, maker_born_re)) {
        const std::string first = m[1] == "director" ? q_directed(m[2]) : q_created(m[2]);
        return result({first, "In which country was #1 born?"});
    }

    return result({question});
}

// --- Generator ----------------------------------------------------------------

GenerateResult TemplateGenerator::generate(const std::string& serialized_atoms) const {
    std::smatch m;

    static const std::regex attr_over_set_re(
        R"(^Which mountains are located in (.+)\? <sep> What is the height of #1\?$)");
    if (std::regex_match(serialized_atoms, m, attr_over_set_re)) {
        return {parse_question("What is the height of each mountain located in " +
                               std::string(m[1]) + "?"),
                1.0};
    }

    static const std::regex maker_death_re(
        R"(^Who created (.+)\? <sep> Where did #1 die\?$)");
    if (std::regex_match(serialized_atoms, m, maker_death_re)) {
        return {parse_question("Where did the creator of " + std::string(m[1]) + " die?"),
                1.0};
    }

    // Generic fallback: render each atom as plain words (references become
    // "that", operation tokens keep their literal text) and conjoin.
    AtomicRepresentation ar = deserialize_atoms(serialized_atoms);
    std::vector<std::string> parts;
    for (const Question& atom : ar.atoms) {
        std::ostringstream part;
        bool first = true;
        for (const Token& token : atom.tokens()) {
            std::string word;
            switch (token.kind) {
                case Token::Kind::Word: word = token.text; break;
                case Token::Kind::Ref: word = "that"; break;
                case Token::Kind::OpName: word = to_string(token.op); break;
                case Token::Kind::OpArg: word = token.text; break;
            }
            while (!word.empty() && (word.back() == '?' || word.back() == '.')) {
                word.pop_back();
            }
            if (word.empty()) continue;
            if (!first) part << ' ';
            part << word;
            first = false;
        }
        if (!part.str().empty()) parts.push_back(part.str());
    }
    std::ostringstream joined;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) joined << " and ";
        joined << parts[i];
    }
    std::string text = joined.str();
    if (text.empty()) throw GenError("cannot phrase an empty atom group");
    return {parse_question(text + "?"), 1.0};
}

// --- Semantic parser ------------------------------------------------------------

namespace {

ParsedProgram make_program(std::vector<ProgramCall> calls) {
    Program program;
    program.calls = std::move(calls);
    return {std::move(program), 1.0};
}

ProgramCall chained(std::string fn, std::vector<std::string> args, int input) {
    return {std::move(fn), std::move(args), {input}};
}

}  // namespace

std::optional<ParsedProgram> TemplateSemanticParser::parse(const std::string& question) const {
    std::smatch m;

    static const std::regex maker_born_re(
        R"(^In which country was the (director|creator) of (.+) born\?$)");
    if (std::regex_match(question, m, maker_born_re) && plain_slot(m[2])) {
        const std::string relation = m[1] == "director" ? "directed_by" : "created_by";
        return make_program({{"Find", {m[2]}, {}},
                             chained("Relate", {relation, "forward"}, 0),
                             chained("Relate", {"born_in", "forward"}, 1),
                             chained("QueryName", {}, 2)});
    }

    static const std::regex attr_re(R"(^What is the (height|length) of (.+)\?$)");
    if (std::regex_match(question, m, attr_re) && plain_slot(m[2])) {
        return make_program({{"Find", {m[2]}, {}}, chained("QueryAttr", {m[1]}, 0)});
    }

    static const std::regex located_re(R"(^In which country is (.+) located\?$)");
    if (std::regex_match(question, m, located_re) && plain_slot(m[1])) {
        return make_program({{"Find", {m[1]}, {}},
                             chained("Relate", {"located_in", "forward"}, 0),
                             chained("QueryName", {}, 1)});
    }

    static const std::regex directed_re(R"(^Who directed (.+)\?$)");
    if (std::regex_match(question, m, directed_re) && plain_slot(m[1])) {
        return make_program({{"Find", {m[1]}, {}},
                             chained("Relate", {"directed_by", "forward"}, 0),
                             chained("QueryName", {}, 1)});
    }

    static const std::regex created_re(R"(^Who created (.+)\?$)");
    if (std::regex_match(question, m, created_re) && plain_slot(m[1])) {
        return make_program({{"Find", {m[1]}, {}},
                             chained("Relate", {"created_by", "forward"}, 0),
                             chained("QueryName", {}, 1)});
    }

    static const std::regex born_re(R"(^In which country was (.+) born\?$)");
    if (std::regex_match(question, m, born_re) && plain_slot(m[1])) {
        return make_program({{"Find", {m[1]}, {}},
                             chained("Relate", {"born_in", "forward"}, 0),
                             chained("QueryName", {}, 1)});
    }

    static const std::regex things_re(R"(^Which (mountains|cities) are located in (.+)\?$)");
    if (std::regex_match(question, m, things_re) && plain_slot(m[2])) {
        return make_program({{"Find", {m[2]}, {}},
                             chained("Relate", {"located_in", "backward"}, 0),
                             chained("FilterConcept", {singular(m[1])}, 1),
                             chained("QueryName", {}, 2)});
    }

    static const std::regex count_re(R"(^How many (mountains|cities) has (.+)\?$)");
    if (std::regex_match(question, m, count_re) && plain_slot(m[2])) {
        return make_program({{"Find", {m[2]}, {}},
                             chained("Relate", {"located_in", "backward"}, 0),
                             chained("FilterConcept", {singular(m[1])}, 1),
                             chained("Count", {}, 2)});
    }

    static const std::regex extreme_re(
        R"(^Which mountain located in (.+) is the (highest|lowest)\?$)");
    if (std::regex_match(question, m, extreme_re) && plain_slot(m[1])) {
        const std::string extreme = m[2] == "highest" ? "largest" : "smallest";
        return make_program({{"Find", {m[1]}, {}},
                             chained("Relate", {"located_in", "backward"}, 0),
                             chained("FilterConcept", {"mountain"}, 1),
                             chained("SelectAmong", {"height", extreme}, 2)});
    }

    // Deliberate shortcut: treats the seat of government as the largest city,
    // which is only sometimes true. Its per-skeleton precision is what the
    // scheduler is expected to catch.
    static const std::regex largest_city_re(R"(^What is the largest city of (.+)\?$)");
    if (std::regex_match(question, m, largest_city_re) && plain_slot(m[1])) {
        return make_program({{"Find", {m[1]}, {}},
                             chained("Relate", {"seat_of_government", "forward"}, 0),
                             chained("QueryName", {}, 1)});
    }

    return std::nullopt;
}

// --- Span extractor ---------------------------------------------------------------

std::vector<Extraction> PatternSpanExtractor::extract(
    const std::string& question, const std::vector<const Paragraph*>& evidence) const {
    std::smatch m;
    std::vector<Extraction> out;

    // Scans every evidence paragraph with a sentence regex whose slots are
    // bound from the question; `group` selects the capture used as the span.
    auto scan = [&](const std::string& sentence_re, int group,
                    std::optional<std::string> companion,
                    const std::string& suffix = std::string{}) {
        const std::regex re(sentence_re);
        std::smatch sm;
        for (const Paragraph* para : evidence) {
            if (std::regex_match(para->text, sm, re)) {
                out.push_back({sm[static_cast<std::size_t>(group)].str() + suffix,
                               kExtractionConfidence, companion});
            }
        }
    };

    static const std::regex attr_re(R"(^What is the (height|length) of (.+)\?$)");
    if (std::regex_match(question, m, attr_re) && plain_slot(m[2])) {
        const std::string unit = m[1] == "height" ? "metre" : "km";
        scan("^" + escape_regex(m[2]) + " has a " + std::string(m[1]) +
                 " of ([0-9]+) " + unit + "\\.$",
             1, std::string(m[2]), " " + unit);
        return out;
    }

    static const std::regex located_re(R"(^In which country is (.+) located\?$)");
    if (std::regex_match(question, m, located_re) && plain_slot(m[1])) {
        scan("^" + escape_regex(m[1]) + " is a (?:mountain|city) located in (.+)\\.$", 1,
             std::string(m[1]));
        return out;
    }

    static const std::regex directed_re(R"(^Who directed (.+)\?$)");
    if (std::regex_match(question, m, directed_re) && plain_slot(m[1])) {
        scan("^" + escape_regex(m[1]) + " was directed by (.+)\\.$", 1, std::string(m[1]));
        return out;
    }

    static const std::regex created_re(R"(^Who created (.+)\?$)");
    if (std::regex_match(question, m, created_re) && plain_slot(m[1])) {
        scan("^" + escape_regex(m[1]) + " was created by (.+)\\.$", 1, std::string(m[1]));
        return out;
    }

    static const std::regex born_re(R"(^In which country was (.+) born\?$)");
    if (std::regex_match(question, m, born_re) && plain_slot(m[1])) {
        scan("^" + escape_regex(m[1]) + " was born in (.+)\\.$", 1, std::string(m[1]));
        return out;
    }

    static const std::regex things_re(R"(^Which (mountains|cities) are located in (.+)\?$)");
    if (std::regex_match(question, m, things_re) && plain_slot(m[2])) {
        scan("^(.+) is a " + singular(m[1]) + " located in " + escape_regex(m[2]) + "\\.$",
             1, std::nullopt);
        return out;
    }

    static const std::regex count_re(R"(^How many (mountains|cities) has (.+)\?$)");
    if (std::regex_match(question, m, count_re) && plain_slot(m[2])) {
        scan("^" + escape_regex(m[2]) + " has ([0-9]+) " + std::string(m[1]) + "\\.$", 1,
             std::nullopt);
        return out;
    }

    static const std::regex largest_city_re(R"(^What is the largest city of (.+)\?$)");
    if (std::regex_match(question, m, largest_city_re) && plain_slot(m[1])) {
        scan("^The largest city of " + escape_regex(m[1]) + " is (.+)\\.$", 1, std::nullopt);
        return out;
    }

    static const std::regex death_re(R"(^Where did the creator of (.+) die\?$)");
    if (std::regex_match(question, m, death_re) && plain_slot(m[1])) {
        scan("^The creator of " + escape_regex(m[1]) + " died in (.+)\\.$", 1, std::nullopt);
        return out;
    }

    return out;
}

}  // namespace roht
