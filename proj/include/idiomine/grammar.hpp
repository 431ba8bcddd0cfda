#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace idiomine {

using SymbolId = std::int32_t;
using RuleId = std::int32_t;

inline constexpr RuleId kNoRule = -1;

enum class SymbolKind : std::uint8_t { nonterminal, terminal };

struct Symbol {
    std::string name;
    SymbolKind kind = SymbolKind::terminal;

    bool is_terminal() const noexcept { return kind == SymbolKind::terminal; }
};

struct ProductionRule {
    RuleId id = kNoRule;
    SymbolId lhs = -1;
    std::vector<SymbolId> rhs;
    // 0 for base rules, otherwise the 1-based extraction rank of the idiom.
    int idiom_rank = 0;
    // Unary rule of a lexical class (Name -> "System").
    bool lexical = false;

    bool is_idiom() const noexcept { return idiom_rank > 0; }
};

// Symbol inventory plus production rules. Base rules occupy ids
// [0, base_rule_count()); idiom rules follow in rank order.
class Grammar {
public:
    SymbolId add_nonterminal(std::string_view name);
    // Interning: returns the existing id when the terminal is already known.
    SymbolId add_terminal(std::string_view name);

    std::optional<SymbolId> find_nonterminal(std::string_view name) const;
    std::optional<SymbolId> find_terminal(std::string_view name) const;

    const Symbol& symbol(SymbolId id) const { return symbols_.at(static_cast<std::size_t>(id)); }
    std::size_t symbol_count() const noexcept { return symbols_.size(); }
    bool is_terminal(SymbolId id) const { return symbol(id).is_terminal(); }

    void set_start(SymbolId nonterminal);
    SymbolId start() const noexcept { return start_; }

    // Nonterminals whose unary rules are materialized on demand from lexemes.
    void add_lexical_class(SymbolId nonterminal);
    bool is_lexical_class(SymbolId nonterminal) const;
    const std::vector<SymbolId>& lexical_classes() const noexcept { return lexical_classes_; }

    RuleId add_rule(SymbolId lhs, std::vector<SymbolId> rhs);
    RuleId add_idiom_rule(SymbolId lhs, std::vector<SymbolId> rhs, int rank);
    // Finds or appends the base rule `lexical_class -> lexeme`.
    RuleId lexical_rule(SymbolId lexical_class, std::string_view lexeme);

    bool has_rule(RuleId id) const noexcept {
        return id >= 0 && static_cast<std::size_t>(id) < rules_.size();
    }
    const ProductionRule& rule(RuleId id) const { return rules_.at(static_cast<std::size_t>(id)); }
    std::span<const ProductionRule> rules() const noexcept { return rules_; }
    std::size_t rule_count() const noexcept { return rules_.size(); }
    std::size_t base_rule_count() const noexcept { return base_rule_count_; }
    std::size_t idiom_rule_count() const noexcept { return rules_.size() - base_rule_count_; }

    // Content hash of nonterminals, lexical classes, start symbol and the
    // first `base_prefix` base rules. Idiom rules never contribute.
    std::uint64_t fingerprint(std::size_t base_prefix) const;
    std::uint64_t fingerprint() const { return fingerprint(base_rule_count_); }

    // Copy without idiom rules.
    Grammar base_only() const;

    // "Statement -> if ( Expr )" with terminals bare; slots optionally marked.
    std::string rule_to_string(RuleId id, bool mark_slots = false) const;

private:
    void check_symbol(SymbolId id) const;

    std::vector<Symbol> symbols_;
    std::unordered_map<std::string, SymbolId> nonterminal_index_;
    std::unordered_map<std::string, SymbolId> terminal_index_;
    std::vector<SymbolId> lexical_classes_;
    std::map<std::pair<SymbolId, SymbolId>, RuleId> lexical_index_;
    std::vector<ProductionRule> rules_;
    std::size_t base_rule_count_ = 0;
    SymbolId start_ = -1;
};

std::string fingerprint_hex(std::uint64_t fingerprint);

} // namespace idiomine
