#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "idiomine/error.hpp"
#include "idiomine/grammar.hpp"
#include "idiomine/parse_tree.hpp"

// A small statements-only Java-like language used to produce parse trees
// for idiom mining: blocks, if/else, while, integer for, try/catch, throw,
// return, declarations, assignments, calls, field access and `new`.
namespace idiomine::minilang {

enum class TokenKind : std::uint8_t { keyword, punct, identifier, integer, string };

struct Token {
    TokenKind kind;
    std::string lexeme;
    int line = 1;
    int column = 1;
};

struct SourceProgram {
    std::string text;
    std::string origin;
    // Line of `text` within its origin file.
    int first_line = 1;
};

// Lexical or syntax error in mini-language source; positions are 1-based.
class SourceError : public Error {
public:
    SourceError(const std::string& message, int line, int column, std::set<std::string> expected = {});

    const std::string& message() const noexcept { return message_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::set<std::string>& expected() const noexcept { return expected_; }

private:
    std::string message_;
    int line_;
    int column_;
    std::set<std::string> expected_;
};

std::vector<Token> tokenize(std::string_view text);

// The built-in grammar. Name, IntLit and StrLit are lexical classes whose
// rules are added by the parser as new lexemes are seen.
Grammar mini_grammar();

// Parses one program into a tree under `grammar`, which must contain every
// rule of mini_grammar() and may be extended with lexical rules.
ParseTree parse(std::string_view text, Grammar& grammar);

// Programs separated by lines consisting of "%%".
std::vector<SourceProgram> split_corpus(std::string_view text, const std::string& origin);
std::string join_corpus(const std::vector<SourceProgram>& programs);

// Deterministic template-sampled corpus exercising every construct.
std::vector<SourceProgram> generate_demo_corpus(std::uint64_t seed, std::size_t count);

} // namespace idiomine::minilang
