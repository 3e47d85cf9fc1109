#include "roht/question.hpp"

#include <array>
#include <cctype>

namespace roht {

namespace {

constexpr std::array<std::pair<OpName, std::string_view>, 6> kOpNames{{
    {OpName::Verify, "Verify"},
    {OpName::SelectBetween, "SelectBetween"},
    {OpName::SelectAmong, "SelectAmong"},
    {OpName::Count, "Count"},
    {OpName::Intersection, "Intersection"},
    {OpName::Union, "Union"},
}};

bool attaches_left(const std::string& word) {
    if (word.empty()) return false;
    switch (word.front()) {
        case '?': case '!': case '.': case ',': case ':': case ';':
            return true;
        default:
            return false;
    }
}

}  // namespace

std::string to_string(OpName op) {
    for (const auto& [value, name] : kOpNames)
        if (value == op) return std::string(name);
    return "?";
}

std::optional<OpName> op_name_from_string(std::string_view s) {
    for (const auto& [value, name] : kOpNames)
        if (name == s) return value;
    return std::nullopt;
}

std::string to_string(QuestionKind kind) {
    switch (kind) {
        case QuestionKind::NaturalLanguage: return "natural_language";
        case QuestionKind::Bridge: return "bridge";
        case QuestionKind::SymbolicOperation: return "symbolic_operation";
    }
    return "?";
}

Token Token::word(std::string text) {
    Token t;
    t.kind = Kind::Word;
    t.text = std::move(text);
    return t;
}

Token Token::ref(int target) {
    Token t;
    t.kind = Kind::Ref;
    t.target = target;
    return t;
}

Token Token::op_name(roht::OpName op) {
    Token t;
    t.kind = Kind::OpName;
    t.op = op;
    return t;
}

Token Token::op_arg(std::string literal) {
    Token t;
    t.kind = Kind::OpArg;
    t.text = std::move(literal);
    return t;
}

std::string Token::render() const {
    switch (kind) {
        case Kind::Word: return text;
        case Kind::Ref: return "#" + std::to_string(target);
        case Kind::OpName: return "[" + to_string(op) + "]";
        case Kind::OpArg: return "[" + text + "]";
    }
    return "";
}

namespace {

// Fits tokens to one of the three kinds, or reports why none matches.
std::optional<QuestionKind> classify(const std::vector<Token>& tokens) {
    if (tokens.empty()) return std::nullopt;

    bool all_words = true;
    bool has_word = false, has_ref = false, has_op_name = false, has_op_arg = false;
    for (const auto& t : tokens) {
        switch (t.kind) {
            case Token::Kind::Word: has_word = true; break;
            case Token::Kind::Ref: has_ref = true; all_words = false; break;
            case Token::Kind::OpName: has_op_name = true; all_words = false; break;
            case Token::Kind::OpArg: has_op_arg = true; all_words = false; break;
        }
    }
    if (all_words) return QuestionKind::NaturalLanguage;

    // [Op] [arg]* #r+ and nothing else.
    if (tokens.front().kind == Token::Kind::OpName) {
        std::size_t i = 1;
        while (i < tokens.size() && tokens[i].kind == Token::Kind::OpArg) ++i;
        std::size_t first_ref = i;
        while (i < tokens.size() && tokens[i].kind == Token::Kind::Ref) ++i;
        if (i == tokens.size() && i > first_ref) return QuestionKind::SymbolicOperation;
        return std::nullopt;
    }

    if (has_ref && has_word && !has_op_name && !has_op_arg) return QuestionKind::Bridge;
    return std::nullopt;
}

}  // namespace

Question Question::from_tokens(std::vector<Token> tokens) {
    auto kind = classify(tokens);
    if (!kind) {
        std::string rendered;
        for (const auto& t : tokens) {
            if (!rendered.empty()) rendered += ' ';
            rendered += t.render();
        }
        throw ParseError("token sequence fits no question kind: \"" + rendered + "\"", 0);
    }
    Question q;
    q.tokens_ = std::move(tokens);
    q.kind_ = *kind;
    return q;
}

std::string Question::render() const {
    std::string out;
    for (const auto& t : tokens_) {
        bool attach = t.kind == Token::Kind::Word && attaches_left(t.text);
        if (!out.empty() && !attach) out += ' ';
        out += t.render();
    }
    return out;
}

Question parse_question(const std::string& text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();

    while (i < n) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') {
            std::size_t start = i++;
            std::size_t digits_begin = i;
            while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (i == digits_begin)
                throw ParseError("'#' must be followed by a positive integer", start);
            if (i - digits_begin > 9)
                throw ParseError("reference token target too large", start);
            int target = std::stoi(text.substr(digits_begin, i - digits_begin));
            if (target < 1)
                throw ParseError("reference token target must be >= 1", start);
            tokens.push_back(Token::ref(target));
            continue;
        }
        if (c == '[') {
            std::size_t start = i++;
            std::string content;
            while (i < n && text[i] != ']') {
                if (text[i] == '[')
                    throw ParseError("nested '[' inside bracket token", i);
                content += text[i++];
            }
            if (i == n)
                throw ParseError("unterminated '['", start);
            ++i;  // consume ']'
            if (content.empty())
                throw ParseError("empty bracket token", start);
            if (auto op = op_name_from_string(content))
                tokens.push_back(Token::op_name(*op));
            else
                tokens.push_back(Token::op_arg(content));
            continue;
        }
        if (c == ']')
            throw ParseError("']' without matching '['", i);

        std::string word;
        while (i < n) {
            char w = text[i];
            if (std::isspace(static_cast<unsigned char>(w)) || w == '#' || w == '[' || w == ']')
                break;
            word += w;
            ++i;
        }
        tokens.push_back(Token::word(std::move(word)));
    }

    if (tokens.empty())
        throw ParseError("empty question", 0);
    return Question::from_tokens(std::move(tokens));
}

std::vector<int> get_ref_tokens(const Question& q) {
    std::vector<int> refs;
    for (const auto& t : q.tokens())
        if (t.kind == Token::Kind::Ref) refs.push_back(t.target);
    return refs;
}

Question modify_ref_token(const Question& q, int old_target, int new_target) {
    bool found = false;
    std::vector<Token> tokens = q.tokens();
    for (auto& t : tokens) {
        if (t.kind == Token::Kind::Ref && t.target == old_target) {
            t.target = new_target;
            found = true;
        }
    }
    if (!found)
        throw NotFoundError("no reference token #" + std::to_string(old_target) +
                            " in \"" + q.render() + "\"");
    return Question::from_tokens(std::move(tokens));
}

Question remap_ref_tokens(const Question& q, const std::map<int, int>& mapping) {
    std::vector<Token> tokens = q.tokens();
    for (auto& t : tokens) {
        if (t.kind != Token::Kind::Ref) continue;
        auto it = mapping.find(t.target);
        if (it == mapping.end())
            throw NotFoundError("reference token #" + std::to_string(t.target) +
                                " has no remap entry");
        t.target = it->second;
    }
    return Question::from_tokens(std::move(tokens));
}

}  // namespace roht
