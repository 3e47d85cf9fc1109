#pragma once
// Answer values and scored answer lists: the currency every knowledge source
// and operation trades in. Values render to a surface form; lists are
// deduplicated by normalized surface, sorted by score, and capped.

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace roht {

// Where an answer came from; doubles as the tie-breaking priority
// (kb beats text beats child recursion at equal score).
enum class Source { Kb = 0, Text = 1, Child = 2 };

std::string to_string(Source source);

// Deterministic decimal rendering: integral values print without a decimal
// point, everything else with up to 10 significant digits.
std::string render_number(double value);

struct AnswerValue {
    enum class Kind { Entity, Quantity, Boolean, Number };

    Kind kind = Kind::Entity;
    std::string name;                       // Entity surface form
    double number = 0.0;                    // Quantity / Number magnitude
    std::string unit;                       // Quantity unit (may be empty)
    bool truth = false;                     // Boolean payload
    std::optional<std::string> companion;   // entity a Quantity describes, for comparisons

    static AnswerValue entity(std::string name);
    static AnswerValue quantity(double number, std::string unit,
                                std::optional<std::string> companion = std::nullopt);
    static AnswerValue boolean(bool truth);
    static AnswerValue count(double number);

    bool is_numeric() const { return kind == Kind::Quantity || kind == Kind::Number; }

    // "Everest", "8848 metre", "yes", "3"
    std::string surface() const;
};

// Lowercased, whitespace-collapsed surface form; the dedup key everywhere.
std::string normalize_surface(const std::string& surface);

// "8848 metre" → Quantity, "3" → Number, "yes"/"no" → Boolean, else Entity.
AnswerValue parse_answer_value(const std::string& text);

struct ScoredAnswer {
    AnswerValue value;
    double score = 1.0;          // in (0, 1]
    Source source = Source::Child;
};

struct AnswerList {
    std::vector<ScoredAnswer> answers;

    bool empty() const { return answers.empty(); }
    int size() const { return static_cast<int>(answers.size()); }
    const ScoredAnswer& top() const { return answers.front(); }
};

// Canonical list construction: merge duplicates by normalized surface keeping
// the highest score (ties keep the higher-priority source), sort by
// descending score (ties by source priority, then surface), cap at k
// (k <= 0 means uncapped).
AnswerList finalize_answers(std::vector<ScoredAnswer> raw, int k);

// Fixture-declared unit conversions. Every unit maps to a base unit and a
// multiplicative factor; unlisted units are their own base with factor 1.
// Two quantities are comparable when their bases agree.
class UnitTable {
public:
    void declare(const std::string& name, const std::string& base, double factor);

    std::string base_of(const std::string& unit) const;
    double factor_of(const std::string& unit) const;
    bool comparable(const std::string& a, const std::string& b) const;
    // Magnitude expressed in the unit's base. Precondition: none (unlisted
    // units are identity).
    double to_base(double value, const std::string& unit) const;

    const std::map<std::string, std::pair<std::string, double>>& entries() const {
        return entries_;
    }

private:
    std::map<std::string, std::pair<std::string, double>> entries_;  // unit -> (base, factor)
};

}  // namespace roht
