#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idiomine/grammar.hpp"
#include "idiomine/parse_tree.hpp"

namespace idiomine {

// Parenthesized single-line form: (LHS@ruleId child ...). Terminal children
// are double-quoted lexemes (escapes: \" \\ \n), nonterminal slots are bare
// names, internal children recurse.
std::string serialize_tree(const ParseTree& tree, const Grammar& grammar);

// Inverse of serialize_tree. Throws SyntaxError (with byte offset) on
// malformed text or unknown symbols, InvalidTree when the result does not
// conform to `grammar`.
ParseTree deserialize_tree(std::string_view text, const Grammar& grammar, Slots slots = Slots::forbid);

// One tree per line; blank lines are skipped. Errors are prefixed with the
// 1-based line number.
std::vector<ParseTree> read_trees(std::istream& in, const Grammar& grammar, Slots slots = Slots::forbid);
std::vector<ParseTree> read_tree_file(const std::string& path, const Grammar& grammar, Slots slots = Slots::forbid);

void write_trees(std::ostream& out, std::span<const ParseTree> trees, const Grammar& grammar);

} // namespace idiomine
