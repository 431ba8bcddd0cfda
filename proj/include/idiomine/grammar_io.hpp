#pragma once

#include <string>
#include <string_view>

#include "idiomine/grammar.hpp"

namespace idiomine {

inline constexpr int kGrammarFormatVersion = 1;

// JSON grammar file:
//   {"format_version": 1, "nonterminals": [...], "terminals": [...],
//    "lexical": [...], "start": "S", "rules": [{"lhs": "S", "rhs": [...]}]}
// Rule ids are array indices. An rhs entry names a nonterminal when one of
// that name exists, otherwise a terminal; "'x" forces the terminal x.
// Only base rules are written.
std::string grammar_to_json(const Grammar& grammar);
Grammar grammar_from_json(std::string_view text);

Grammar read_grammar_file(const std::string& path);
void write_grammar_file(const std::string& path, const Grammar& grammar);

// Single rhs entry in the encoding above.
std::string encode_rhs_symbol(const Grammar& grammar, SymbolId symbol);
SymbolId decode_rhs_symbol(const Grammar& grammar, std::string_view entry);

} // namespace idiomine
