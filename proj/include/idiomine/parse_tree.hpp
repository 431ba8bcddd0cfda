#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "idiomine/grammar.hpp"

namespace idiomine {

// Ordered derivation tree. Internal nodes carry the id of the rule applied
// at them; leaves are terminals, or nonterminal slots in pattern templates.
struct ParseTree {
    SymbolId symbol = -1;
    RuleId rule = kNoRule;
    std::vector<ParseTree> children;

    static ParseTree leaf(SymbolId symbol) { return ParseTree{symbol, kNoRule, {}}; }

    bool is_internal() const noexcept { return rule != kNoRule; }

    friend bool operator==(const ParseTree&, const ParseTree&) = default;
};

// Pre-order (leftmost derivation) list of applied rule ids.
using RuleSequence = std::vector<RuleId>;

// Whether nonterminal leaves are acceptable (templates, partial trees).
enum class Slots { forbid, allow };

struct Violation {
    std::vector<std::size_t> path;
    std::string message;
};

struct ValidationResult {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    explicit operator bool() const noexcept { return ok(); }
    std::string to_string() const;
};

ValidationResult validate_tree(const ParseTree& tree, const Grammar& grammar, Slots slots = Slots::forbid);

// Throws InvalidTree with the first violation.
void check_tree(const ParseTree& tree, const Grammar& grammar, Slots slots = Slots::forbid);

// Builds an internal node for `rule`. Children default to the rule's rhs as
// leaves; pass explicit children to nest.
ParseTree make_node(const Grammar& grammar, RuleId rule);
ParseTree make_node(const Grammar& grammar, RuleId rule, std::vector<ParseTree> children);

std::size_t internal_node_count(const ParseTree& tree);

// Leaf symbols left to right, slots included.
std::vector<SymbolId> frontier(const ParseTree& tree);

// Terminal lexemes left to right.
std::vector<std::string> yield(const ParseTree& tree, const Grammar& grammar);

// Does not validate; the tree is assumed to conform to its grammar.
RuleSequence rule_sequence(const ParseTree& tree);

// Rebuilds a complete tree by always expanding the leftmost unexpanded
// nonterminal. Throws InvalidTree on an inapplicable rule, premature
// exhaustion or leftover rules.
ParseTree replay(std::span<const RuleId> sequence, const Grammar& grammar,
                 std::optional<SymbolId> root = std::nullopt);

} // namespace idiomine
