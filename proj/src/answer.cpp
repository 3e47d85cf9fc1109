#include "roht/answer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace roht {

std::string to_string(Source source) {
    switch (source) {
        case Source::Kb: return "kb";
        case Source::Text: return "text";
        case Source::Child: return "child";
    }
    return "child";
}

std::string render_number(double value) {
    if (std::isfinite(value) && value == std::floor(value) && std::fabs(value) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", value);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

AnswerValue AnswerValue::entity(std::string name) {
    AnswerValue v;
    v.kind = Kind::Entity;
    v.name = std::move(name);
    return v;
}

AnswerValue AnswerValue::quantity(double number, std::string unit,
                                  std::optional<std::string> companion) {
    AnswerValue v;
    v.kind = Kind::Quantity;
    v.number = number;
    v.unit = std::move(unit);
    v.companion = std::move(companion);
    return v;
}

AnswerValue AnswerValue::boolean(bool truth) {
    AnswerValue v;
    v.kind = Kind::Boolean;
    v.truth = truth;
    return v;
}

AnswerValue AnswerValue::count(double number) {
    AnswerValue v;
    v.kind = Kind::Number;
    v.number = number;
    return v;
}

std::string AnswerValue::surface() const {
    switch (kind) {
        case Kind::Entity:
            return name;
        case Kind::Quantity:
            return unit.empty() ? render_number(number) : render_number(number) + " " + unit;
        case Kind::Boolean:
            return truth ? "yes" : "no";
        case Kind::Number:
            return render_number(number);
    }
    return name;
}

std::string normalize_surface(const std::string& surface) {
    std::string out;
    bool pending_space = false;
    for (unsigned char ch : surface) {
        if (std::isspace(ch)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(ch)));
    }
    return out;
}

namespace {

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) {
        return false;
    }
    std::size_t consumed = 0;
    try {
        out = std::stod(text, &consumed);
    } catch (const std::exception&) {
        return false;
    }
    return consumed == text.size();
}

}  // namespace

AnswerValue parse_answer_value(const std::string& text) {
    std::string norm = normalize_surface(text);
    if (norm == "yes") {
        return AnswerValue::boolean(true);
    }
    if (norm == "no") {
        return AnswerValue::boolean(false);
    }

    std::istringstream in(text);
    std::vector<std::string> words;
    for (std::string w; in >> w;) {
        words.push_back(w);
    }
    double number = 0.0;
    if (!words.empty() && parse_double(words[0], number)) {
        if (words.size() == 1) {
            return AnswerValue::count(number);
        }
        std::string unit = words[1];
        for (std::size_t i = 2; i < words.size(); ++i) {
            unit += " " + words[i];
        }
        return AnswerValue::quantity(number, unit);
    }
    // Values like "8848m": number with the unit attached to the same word.
    if (!words.empty()) {
        std::size_t consumed = 0;
        try {
            number = std::stod(words[0], &consumed);
        } catch (const std::exception&) {
            consumed = 0;
        }
        if (consumed > 0 && consumed < words[0].size()) {
            std::string rest = words[0].substr(consumed);
            if (std::all_of(rest.begin(), rest.end(),
                            [](unsigned char c) { return std::isalpha(c) != 0; })) {
                std::string unit = rest;
                for (std::size_t i = 1; i < words.size(); ++i) {
                    unit += " " + words[i];
                }
                return AnswerValue::quantity(number, unit);
            }
        }
    }
    std::string joined;
    for (const auto& w : words) {
        joined += (joined.empty() ? "" : " ") + w;
    }
    return AnswerValue::entity(joined);
}

AnswerList finalize_answers(std::vector<ScoredAnswer> raw, int k) {
    // Merge duplicates: highest score wins, source priority breaks exact ties.
    std::map<std::string, ScoredAnswer> best;
    for (auto& answer : raw) {
        std::string key = normalize_surface(answer.value.surface());
        auto it = best.find(key);
        if (it == best.end()) {
            best.emplace(std::move(key), std::move(answer));
        } else if (answer.score > it->second.score ||
                   (answer.score == it->second.score &&
                    static_cast<int>(answer.source) < static_cast<int>(it->second.source))) {
            it->second = std::move(answer);
        }
    }

    std::vector<ScoredAnswer> merged;
    merged.reserve(best.size());
    for (auto& [key, answer] : best) {
        (void)key;
        merged.push_back(std::move(answer));
    }
    std::stable_sort(merged.begin(), merged.end(), [](const ScoredAnswer& a, const ScoredAnswer& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        if (a.source != b.source) {
            return static_cast<int>(a.source) < static_cast<int>(b.source);
        }
        return normalize_surface(a.value.surface()) < normalize_surface(b.value.surface());
    });
    if (k > 0 && static_cast<int>(merged.size()) > k) {
        merged.resize(static_cast<std::size_t>(k));
    }
    return AnswerList{std::move(merged)};
}

void UnitTable::declare(const std::string& name, const std::string& base, double factor) {
    entries_[name] = {base, factor};
}

std::string UnitTable::base_of(const std::string& unit) const {
    auto it = entries_.find(unit);
    return it == entries_.end() ? unit : it->second.first;
}

double UnitTable::factor_of(const std::string& unit) const {
    auto it = entries_.find(unit);
    return it == entries_.end() ? 1.0 : it->second.second;
}

bool UnitTable::comparable(const std::string& a, const std::string& b) const {
    return base_of(a) == base_of(b);
}

double UnitTable::to_base(double value, const std::string& unit) const {
    return value * factor_of(unit);
}

}  // namespace roht
