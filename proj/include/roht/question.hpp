#pragma once
// Questions as token sequences over three vocabularies: plain words,
// reference tokens ("#k") and symbolic-operation tokens ("[Name]"/"[arg]").
// A question's kind is a pure function of its token content.

#include "roht/errors.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace roht {

enum class OpName { Verify, SelectBetween, SelectAmong, Count, Intersection, Union };

std::string to_string(OpName op);
std::optional<OpName> op_name_from_string(std::string_view s);

struct Token {
    enum class Kind { Word, Ref, OpName, OpArg };

    Kind kind = Kind::Word;
    std::string text;           // Word text or OpArg literal
    int target = 0;             // Ref target, >= 1
    roht::OpName op = roht::OpName::Verify;

    static Token word(std::string text);
    static Token ref(int target);
    static Token op_name(roht::OpName op);
    static Token op_arg(std::string literal);

    bool operator==(const Token&) const = default;

    std::string render() const;
};

enum class QuestionKind { NaturalLanguage, Bridge, SymbolicOperation };

std::string to_string(QuestionKind kind);

class Question {
public:
    Question() = default;

    // Throws ParseError if the tokens fit none of the three kinds.
    static Question from_tokens(std::vector<Token> tokens);

    const std::vector<Token>& tokens() const { return tokens_; }
    QuestionKind kind() const { return kind_; }

    bool operator==(const Question& other) const { return tokens_ == other.tokens_; }

    // Single-space joined surface form; a word that starts with attaching
    // punctuation (?!.,:;) glues to the previous token.
    std::string render() const;

private:
    std::vector<Token> tokens_;
    QuestionKind kind_ = QuestionKind::NaturalLanguage;
};

// Lex + classify. "#" and "[" are reserved: "#" must be followed by a positive
// integer, brackets must be balanced and non-empty. Bracket content naming one
// of the six operations lexes as an OpName token, anything else as an OpArg.
Question parse_question(const std::string& text);

// Targets of all Ref tokens in left-to-right order, duplicates preserved.
std::vector<int> get_ref_tokens(const Question& q);

// Replaces every Ref(old_target) with Ref(new_target).
// Throws NotFoundError when no Ref(old_target) is present.
Question modify_ref_token(const Question& q, int old_target, int new_target);

// Simultaneous substitution: every Ref token is rewritten through `mapping`
// keyed on its original target, so chained renumberings cannot collide.
// Throws NotFoundError if a ref target is missing from the mapping.
Question remap_ref_tokens(const Question& q, const std::map<int, int>& mapping);

}  // namespace roht
