#include "roht/ops.hpp"

#include <algorithm>
#include <map>

#include "roht/errors.hpp"

namespace roht {

namespace {

double avg2(double a, double b) { return (a + b) / 2.0; }

void require_arity(OpName op, const std::vector<std::string>& args, std::size_t want_args,
                   const std::vector<AnswerList>& inputs, std::size_t want_inputs) {
    if (args.size() != want_args) {
        throw OpError(to_string(op) + " takes " + std::to_string(want_args) + " argument(s), got " +
                      std::to_string(args.size()));
    }
    if (inputs.size() != want_inputs) {
        throw OpError(to_string(op) + " takes " + std::to_string(want_inputs) + " input list(s), got " +
                      std::to_string(inputs.size()));
    }
}

double numeric_base(const ScoredAnswer& answer, const UnitTable& units, OpName op) {
    if (!answer.value.is_numeric()) {
        throw OpError(to_string(op) + " needs numeric values, got '" + answer.value.surface() + "'");
    }
    return units.to_base(answer.value.number, answer.value.unit);
}

void require_comparable(const ScoredAnswer& a, const ScoredAnswer& b, const UnitTable& units,
                        OpName op) {
    if (!units.comparable(a.value.unit, b.value.unit)) {
        throw OpError(to_string(op) + " cannot compare unit '" + a.value.unit + "' with '" +
                      b.value.unit + "'");
    }
}

std::string companion_of(const ScoredAnswer& answer, OpName op) {
    if (!answer.value.companion) {
        throw OpError(to_string(op) + " needs values paired with the entity they describe, got '" +
                      answer.value.surface() + "'");
    }
    return *answer.value.companion;
}

AnswerList op_verify(const std::vector<std::string>& args, const std::vector<AnswerList>& inputs,
                     double p_g, const UnitTable& units) {
    require_arity(OpName::Verify, args, 2, inputs, 1);
    AnswerValue target = parse_answer_value(args[0]);
    if (!target.is_numeric()) {
        throw OpError("Verify needs a numeric argument, got '" + args[0] + "'");
    }
    const std::string& cmp = args[1];
    if (cmp != ">" && cmp != "<" && cmp != "=" && cmp != "!=") {
        throw OpError("Verify comparator must be one of > < = !=, got '" + cmp + "'");
    }
    double target_base = units.to_base(target.number, target.unit);

    std::vector<ScoredAnswer> out;
    for (const ScoredAnswer& answer : inputs[0].answers) {
        double value = numeric_base(answer, units, OpName::Verify);
        if (!units.comparable(answer.value.unit, target.unit)) {
            throw OpError("Verify cannot compare unit '" + answer.value.unit + "' with '" +
                          target.unit + "'");
        }
        bool truth = false;
        if (cmp == ">") truth = value > target_base;
        else if (cmp == "<") truth = value < target_base;
        else if (cmp == "=") truth = value == target_base;
        else truth = value != target_base;
        out.push_back({AnswerValue::boolean(truth), avg2(p_g, answer.score), Source::Child});
    }
    return finalize_answers(std::move(out), 0);
}

AnswerList op_select_between(const std::vector<std::string>& args,
                             const std::vector<AnswerList>& inputs, double p_g,
                             const UnitTable& units) {
    require_arity(OpName::SelectBetween, args, 1, inputs, 2);
    if (args[0] != "greater" && args[0] != "smaller") {
        throw OpError("SelectBetween direction must be greater or smaller, got '" + args[0] + "'");
    }
    if (inputs[0].empty() || inputs[1].empty()) {
        return {};
    }
    const ScoredAnswer& a = inputs[0].top();
    const ScoredAnswer& b = inputs[1].top();
    double va = numeric_base(a, units, OpName::SelectBetween);
    double vb = numeric_base(b, units, OpName::SelectBetween);
    require_comparable(a, b, units, OpName::SelectBetween);
    std::string name_a = companion_of(a, OpName::SelectBetween);
    std::string name_b = companion_of(b, OpName::SelectBetween);

    const ScoredAnswer* winner = nullptr;
    const std::string* winner_name = nullptr;
    if (va != vb) {
        bool first = (args[0] == "greater") == (va > vb);
        winner = first ? &a : &b;
        winner_name = first ? &name_a : &name_b;
    } else if (a.score != b.score) {
        winner = a.score > b.score ? &a : &b;
        winner_name = a.score > b.score ? &name_a : &name_b;
    } else {
        winner = name_a <= name_b ? &a : &b;
        winner_name = name_a <= name_b ? &name_a : &name_b;
    }
    std::vector<ScoredAnswer> out;
    out.push_back({AnswerValue::entity(*winner_name), avg2(p_g, winner->score), Source::Child});
    return finalize_answers(std::move(out), 0);
}

AnswerList op_select_among(const std::vector<std::string>& args,
                           const std::vector<AnswerList>& inputs, double p_g,
                           const UnitTable& units) {
    require_arity(OpName::SelectAmong, args, 1, inputs, 1);
    if (args[0] != "largest" && args[0] != "smallest") {
        throw OpError("SelectAmong extreme must be largest or smallest, got '" + args[0] + "'");
    }
    if (inputs[0].empty()) {
        return {};
    }
    const bool largest = args[0] == "largest";
    const ScoredAnswer* winner = nullptr;
    std::string winner_name;
    double winner_value = 0.0;
    for (const ScoredAnswer& answer : inputs[0].answers) {
        double value = numeric_base(answer, units, OpName::SelectAmong);
        if (winner != nullptr) {
            require_comparable(*winner, answer, units, OpName::SelectAmong);
        }
        std::string name = companion_of(answer, OpName::SelectAmong);
        bool better;
        if (winner == nullptr) {
            better = true;
        } else if (value != winner_value) {
            better = largest ? value > winner_value : value < winner_value;
        } else if (answer.score != winner->score) {
            better = answer.score > winner->score;
        } else {
            better = name < winner_name;
        }
        if (better) {
            winner = &answer;
            winner_name = std::move(name);
            winner_value = value;
        }
    }
    std::vector<ScoredAnswer> out;
    out.push_back({AnswerValue::entity(winner_name), avg2(p_g, winner->score), Source::Child});
    return finalize_answers(std::move(out), 0);
}

AnswerList op_count(const std::vector<std::string>& args, const std::vector<AnswerList>& inputs,
                    double p_g) {
    require_arity(OpName::Count, args, 0, inputs, 1);
    if (inputs[0].empty()) {
        return {};
    }
    std::map<std::string, bool> seen;
    double score_sum = 0.0;
    for (const ScoredAnswer& answer : inputs[0].answers) {
        seen[normalize_surface(answer.value.surface())] = true;
        score_sum += answer.score;
    }
    double mean = score_sum / static_cast<double>(inputs[0].answers.size());
    std::vector<ScoredAnswer> out;
    out.push_back({AnswerValue::count(static_cast<double>(seen.size())), avg2(p_g, mean),
                   Source::Child});
    return finalize_answers(std::move(out), 0);
}

// Shared by Intersection and Union: per normalized surface, the merged score
// is the max over occurrences in either input.
std::map<std::string, ScoredAnswer> merge_by_surface(const AnswerList& list) {
    std::map<std::string, ScoredAnswer> merged;
    for (const ScoredAnswer& answer : list.answers) {
        std::string key = normalize_surface(answer.value.surface());
        auto it = merged.find(key);
        if (it == merged.end() || answer.score > it->second.score) {
            merged[key] = answer;
        }
    }
    return merged;
}

AnswerList op_intersection(const std::vector<std::string>& args,
                           const std::vector<AnswerList>& inputs, double p_g) {
    require_arity(OpName::Intersection, args, 0, inputs, 2);
    auto left = merge_by_surface(inputs[0]);
    auto right = merge_by_surface(inputs[1]);
    std::vector<ScoredAnswer> out;
    for (const auto& [key, answer] : left) {
        auto it = right.find(key);
        if (it == right.end()) {
            continue;
        }
        const ScoredAnswer& best = answer.score >= it->second.score ? answer : it->second;
        out.push_back({best.value, avg2(p_g, best.score), Source::Child});
    }
    return finalize_answers(std::move(out), 0);
}

AnswerList op_union(const std::vector<std::string>& args, const std::vector<AnswerList>& inputs,
                    double p_g) {
    require_arity(OpName::Union, args, 0, inputs, 2);
    auto left = merge_by_surface(inputs[0]);
    for (const auto& [key, answer] : merge_by_surface(inputs[1])) {
        auto it = left.find(key);
        if (it == left.end() || answer.score > it->second.score) {
            left[key] = answer;
        }
    }
    std::vector<ScoredAnswer> out;
    for (const auto& [key, answer] : left) {
        (void)key;
        out.push_back({answer.value, avg2(p_g, answer.score), Source::Child});
    }
    return finalize_answers(std::move(out), 0);
}

}  // namespace

AnswerList apply_operation(OpName op, const std::vector<std::string>& args,
                           const std::vector<AnswerList>& inputs, double p_g,
                           const UnitTable& units) {
    switch (op) {
        case OpName::Verify: return op_verify(args, inputs, p_g, units);
        case OpName::SelectBetween: return op_select_between(args, inputs, p_g, units);
        case OpName::SelectAmong: return op_select_among(args, inputs, p_g, units);
        case OpName::Count: return op_count(args, inputs, p_g);
        case OpName::Intersection: return op_intersection(args, inputs, p_g);
        case OpName::Union: return op_union(args, inputs, p_g);
    }
    throw OpError("unknown operation");
}

}  // namespace roht
