#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "idiomine/grammar.hpp"
#include "idiomine/parse_tree.hpp"

namespace idiomine {

// A parent rule application whose child at `child_pos` is expanded by
// `child`. Every child of both nodes is included, so the pattern is a
// depth-2 subtree that respects the all-or-none constraint.
struct Depth2Pattern {
    RuleId parent = kNoRule;
    std::int32_t child_pos = 0;
    RuleId child = kNoRule;

    friend auto operator<=>(const Depth2Pattern&, const Depth2Pattern&) = default;
};

struct Depth2PatternHash {
    std::size_t operator()(const Depth2Pattern& p) const noexcept {
        std::uint64_t h = static_cast<std::uint32_t>(p.parent);
        h = h * 0x9e3779b97f4a7c15ULL + static_cast<std::uint32_t>(p.child_pos);
        h = h * 0x9e3779b97f4a7c15ULL + static_cast<std::uint32_t>(p.child);
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

using PatternCounts = std::unordered_map<Depth2Pattern, std::int64_t, Depth2PatternHash>;

// Order among equally frequent patterns.
enum class TieBreak : std::uint8_t {
    lexicographic,         // smallest (parent, child_pos, child) wins
    reverse_lexicographic, // largest wins
};

std::string_view to_string(TieBreak policy);
std::optional<TieBreak> tie_break_from_string(std::string_view name);

struct MiningConfig {
    std::size_t max_idioms = 200;
    std::int64_t min_count = 2;
    TieBreak tie_break = TieBreak::lexicographic;
    // Admit patterns whose child is a lexical rule (Name -> "System").
    bool identifier_idioms = true;
    // Not part of the result; any value yields identical output.
    std::size_t workers = 1;
};

struct Idiom {
    int rank = 0;
    ProductionRule rule;
    Depth2Pattern provenance;
    std::int64_t support = 0;
};

// Mined idioms in extraction order. Rule ids inside (idiom rule ids and
// provenance references) use the numbering of the grammar the set was mined
// under: idiom of rank r has id base_rule_count + r - 1.
struct IdiomSet {
    std::vector<Idiom> idioms;
    std::uint64_t fingerprint = 0;
    std::size_t base_rule_count = 0;
    MiningConfig config;

    std::size_t size() const noexcept { return idioms.size(); }
    bool empty() const noexcept { return idioms.empty(); }
    RuleId rule_id(int rank) const { return static_cast<RuleId>(base_rule_count) + rank - 1; }
    bool is_idiom_id(RuleId id) const noexcept { return id >= static_cast<RuleId>(base_rule_count); }
    const Idiom& by_rule_id(RuleId id) const;
    // First k idioms.
    IdiomSet prefix(std::size_t k) const;
};

enum class HaltReason : std::uint8_t { budget_reached, below_min_count };

std::string_view to_string(HaltReason reason);

struct ExtractionResult {
    IdiomSet idioms;
    // Input corpus with every extracted idiom collapsed (valid under `grammar`).
    std::vector<ParseTree> corpus;
    // Base grammar plus the idiom rules.
    Grammar grammar;
    HaltReason halt = HaltReason::budget_reached;
};

// Counts every (internal node, internal child) incidence, overlaps included.
PatternCounts count_patterns(std::span<const ParseTree> corpus, std::size_t workers = 1);

// Highest-count pattern with count >= min_count, ties broken by `policy`.
std::optional<Depth2Pattern> most_frequent(const PatternCounts& counts, std::int64_t min_count = 2,
                                           TieBreak policy = TieBreak::lexicographic);

// New rule: the parent's lhs, with the child nonterminal at the pattern
// position replaced by the child's rhs. The returned rule has no id yet.
ProductionRule collapse_pattern(const Depth2Pattern& pattern, const Grammar& grammar);

// Replaces every occurrence of `pattern` by one node applying `new_rule`,
// scanning in pre-order. Returns the number of replacements.
std::size_t rewrite_tree(ParseTree& tree, const Depth2Pattern& pattern, RuleId new_rule);
std::size_t rewrite_corpus(std::vector<ParseTree>& corpus, const Depth2Pattern& pattern, RuleId new_rule,
                           std::size_t workers = 1);

// Iterated count / select / collapse / rewrite over the corpus. `grammar`
// must not contain idiom rules; trees may contain nonterminal slots.
ExtractionResult extract_idioms(std::vector<ParseTree> corpus, const Grammar& grammar, const MiningConfig& config);

// Base-grammar derivation witnessing the idiom: provenance is expanded
// recursively and the leaves form the idiom's rhs (nonterminals as slots).
ParseTree expand_idiom(const Idiom& idiom, const IdiomSet& set, const Grammar& grammar);

// Checks that `set` was mined under (a prefix of) `base`'s base rules.
void check_fingerprint(const IdiomSet& set, const Grammar& base);

// Maps a rule id in the set's numbering into `base`'s numbering.
RuleId map_rule_id(const IdiomSet& set, const Grammar& base, RuleId id);

// `base` plus the set's idiom rules (ids base_rule_count() + rank - 1).
// Throws FingerprintMismatch when the set belongs to another grammar.
Grammar augment_grammar(const Grammar& base, const IdiomSet& set);

} // namespace idiomine
