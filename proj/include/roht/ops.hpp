#pragma once
// The six symbolic operations over scored answer lists: Verify, SelectBetween,
// SelectAmong, Count, Intersection, Union. Every output score is the
// arithmetic mean of the node certainty and the consumed input scores.

#include "roht/answer.hpp"
#include "roht/question.hpp"

#include <string>
#include <vector>

namespace roht {

// `args` are the literal operation arguments in written order (e.g. for
// "[Verify] [2005] [<]" they are {"2005", "<"}); `inputs` are the referenced
// answer lists in reference order. Throws OpError on arity mismatch, unknown
// arguments, non-numeric values fed to comparisons, or incomparable units;
// an empty required input yields an empty output instead.
AnswerList apply_operation(OpName op, const std::vector<std::string>& args,
                           const std::vector<AnswerList>& inputs, double p_g,
                           const UnitTable& units = UnitTable{});

}  // namespace roht
