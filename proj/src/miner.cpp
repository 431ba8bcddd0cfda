#include "idiomine/miner.hpp"

#include <algorithm>
#include <iterator>

#include "idiomine/detail/parallel.hpp"
#include "idiomine/error.hpp"

namespace idiomine {

namespace {

void count_node(const ParseTree& node, PatternCounts& counts) {
    if (!node.is_internal()) {
        return;
    }
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        const ParseTree& child = node.children[i];
        if (child.is_internal()) {
            ++counts[{node.rule, static_cast<std::int32_t>(i), child.rule}];
            count_node(child, counts);
        }
    }
}

bool better(const Depth2Pattern& a, std::int64_t count_a, const Depth2Pattern& b, std::int64_t count_b,
            TieBreak policy) {
    if (count_a != count_b) {
        return count_a > count_b;
    }
    return policy == TieBreak::lexicographic ? a < b : b < a;
}

std::size_t rewrite_node(ParseTree& node, const Depth2Pattern& pattern, RuleId new_rule) {
    if (!node.is_internal()) {
        return 0;
    }
    std::size_t replaced = 0;
    auto pos = static_cast<std::size_t>(pattern.child_pos);
    while (node.rule == pattern.parent && pos < node.children.size() && node.children[pos].rule == pattern.child) {
        std::vector<ParseTree> grandchildren = std::move(node.children[pos].children);
        auto at = node.children.erase(node.children.begin() + static_cast<std::ptrdiff_t>(pos));
        node.children.insert(at, std::make_move_iterator(grandchildren.begin()),
                             std::make_move_iterator(grandchildren.end()));
        node.rule = new_rule;
        ++replaced;
    }
    for (auto& child : node.children) {
        replaced += rewrite_node(child, pattern, new_rule);
    }
    return replaced;
}

// Replaces the `index`-th leaf (in frontier order) of `tree` by `replacement`.
bool replace_leaf(ParseTree& tree, std::size_t& index, ParseTree& replacement) {
    if (tree.children.empty()) {
        if (index == 0) {
            tree = std::move(replacement);
            return true;
        }
        --index;
        return false;
    }
    for (auto& child : tree.children) {
        if (replace_leaf(child, index, replacement)) {
            return true;
        }
    }
    return false;
}

ParseTree idiom_template(RuleId id, const IdiomSet& set, const Grammar& grammar, int max_rank) {
    if (!set.is_idiom_id(id)) {
        if (!grammar.has_rule(id) || static_cast<std::size_t>(id) >= grammar.base_rule_count()) {
            throw Error("dangling provenance: unknown base rule " + std::to_string(id));
        }
        return make_node(grammar, id);
    }
    int rank = id - static_cast<RuleId>(set.base_rule_count) + 1;
    if (rank >= max_rank || rank > static_cast<int>(set.size())) {
        throw Error("dangling provenance: idiom rule " + std::to_string(id) + " referenced before extraction");
    }
    const Idiom& idiom = set.idioms[static_cast<std::size_t>(rank - 1)];
    ParseTree tree = idiom_template(idiom.provenance.parent, set, grammar, rank);
    ParseTree child = idiom_template(idiom.provenance.child, set, grammar, rank);
    std::size_t index = static_cast<std::size_t>(idiom.provenance.child_pos);
    if (!replace_leaf(tree, index, child)) {
        throw Error("dangling provenance: child position out of range for idiom " + std::to_string(rank));
    }
    return tree;
}

} // namespace

std::string_view to_string(TieBreak policy) {
    return policy == TieBreak::lexicographic ? "lexicographic" : "reverse-lexicographic";
}

std::optional<TieBreak> tie_break_from_string(std::string_view name) {
    if (name == "lexicographic") {
        return TieBreak::lexicographic;
    }
    if (name == "reverse-lexicographic") {
        return TieBreak::reverse_lexicographic;
    }
    return std::nullopt;
}

std::string_view to_string(HaltReason reason) {
    return reason == HaltReason::budget_reached ? "budget reached" : "no pattern reaches min_count";
}

const Idiom& IdiomSet::by_rule_id(RuleId id) const {
    auto index = static_cast<std::size_t>(id) - base_rule_count;
    if (!is_idiom_id(id) || index >= idioms.size()) {
        throw Error("unknown idiom rule id " + std::to_string(id));
    }
    return idioms[index];
}

IdiomSet IdiomSet::prefix(std::size_t k) const {
    IdiomSet out = *this;
    out.idioms.resize(std::min(k, idioms.size()));
    return out;
}

PatternCounts count_patterns(std::span<const ParseTree> corpus, std::size_t workers) {
    std::vector<PatternCounts> partial(std::max<std::size_t>(1, std::min(workers, corpus.size())));
    detail::parallel_slices(corpus.size(), workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
        for (std::size_t i = begin; i < end; ++i) {
            count_node(corpus[i], partial[w]);
        }
    });
    PatternCounts total = std::move(partial.front());
    for (std::size_t w = 1; w < partial.size(); ++w) {
        for (const auto& [pattern, n] : partial[w]) {
            total[pattern] += n;
        }
    }
    return total;
}

std::optional<Depth2Pattern> most_frequent(const PatternCounts& counts, std::int64_t min_count, TieBreak policy) {
    std::optional<Depth2Pattern> best;
    std::int64_t best_count = 0;
    for (const auto& [pattern, n] : counts) {
        if (n < min_count || n <= 0) {
            continue;
        }
        if (!best || better(pattern, n, *best, best_count, policy)) {
            best = pattern;
            best_count = n;
        }
    }
    return best;
}

ProductionRule collapse_pattern(const Depth2Pattern& pattern, const Grammar& grammar) {
    if (!grammar.has_rule(pattern.parent) || !grammar.has_rule(pattern.child)) {
        throw Error("pattern references an unknown rule");
    }
    const ProductionRule& parent = grammar.rule(pattern.parent);
    const ProductionRule& child = grammar.rule(pattern.child);
    if (pattern.child_pos < 0 || static_cast<std::size_t>(pattern.child_pos) >= parent.rhs.size()) {
        throw Error("pattern child position " + std::to_string(pattern.child_pos) + " out of range for rule " +
                    std::to_string(parent.id));
    }
    auto pos = static_cast<std::size_t>(pattern.child_pos);
    if (parent.rhs[pos] != child.lhs) {
        throw Error("pattern lhs mismatch: rule " + std::to_string(child.id) + " cannot expand position " +
                    std::to_string(pos) + " of rule " + std::to_string(parent.id));
    }
    ProductionRule rule;
    rule.lhs = parent.lhs;
    rule.rhs.reserve(parent.rhs.size() + child.rhs.size() - 1);
    rule.rhs.insert(rule.rhs.end(), parent.rhs.begin(), parent.rhs.begin() + static_cast<std::ptrdiff_t>(pos));
    rule.rhs.insert(rule.rhs.end(), child.rhs.begin(), child.rhs.end());
    rule.rhs.insert(rule.rhs.end(), parent.rhs.begin() + static_cast<std::ptrdiff_t>(pos) + 1, parent.rhs.end());
    return rule;
}

std::size_t rewrite_tree(ParseTree& tree, const Depth2Pattern& pattern, RuleId new_rule) {
    return rewrite_node(tree, pattern, new_rule);
}

std::size_t rewrite_corpus(std::vector<ParseTree>& corpus, const Depth2Pattern& pattern, RuleId new_rule,
                           std::size_t workers) {
    std::vector<std::size_t> replaced(corpus.size(), 0);
    detail::parallel_for(corpus.size(), workers,
                         [&](std::size_t i) { replaced[i] = rewrite_node(corpus[i], pattern, new_rule); });
    std::size_t total = 0;
    for (std::size_t n : replaced) {
        total += n;
    }
    return total;
}

ExtractionResult extract_idioms(std::vector<ParseTree> corpus, const Grammar& grammar, const MiningConfig& config) {
    if (grammar.idiom_rule_count() != 0) {
        throw Error("extract_idioms expects a base grammar without idiom rules");
    }
    if (config.min_count < 1) {
        throw Error("min_count must be at least 1");
    }
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        auto result = validate_tree(corpus[i], grammar, Slots::allow);
        if (!result.ok()) {
            throw InvalidTree("tree " + std::to_string(i) + ": " + result.to_string());
        }
    }

    ExtractionResult out{IdiomSet{}, std::move(corpus), grammar, HaltReason::budget_reached};
    out.idioms.fingerprint = grammar.fingerprint();
    out.idioms.base_rule_count = grammar.base_rule_count();
    out.idioms.config = config;
    out.idioms.config.workers = 1;

    for (std::size_t step = 1; step <= config.max_idioms; ++step) {
        PatternCounts counts = count_patterns(out.corpus, config.workers);
        if (!config.identifier_idioms) {
            std::erase_if(counts, [&](const auto& entry) { return out.grammar.rule(entry.first.child).lexical; });
        }
        auto best = most_frequent(counts, config.min_count, config.tie_break);
        if (!best) {
            out.halt = HaltReason::below_min_count;
            break;
        }
        int rank = static_cast<int>(step);
        ProductionRule collapsed = collapse_pattern(*best, out.grammar);
        RuleId id = out.grammar.add_idiom_rule(collapsed.lhs, collapsed.rhs, rank);
        rewrite_corpus(out.corpus, *best, id, config.workers);
        out.idioms.idioms.push_back(Idiom{rank, out.grammar.rule(id), *best, counts.at(*best)});
    }
    return out;
}

ParseTree expand_idiom(const Idiom& idiom, const IdiomSet& set, const Grammar& grammar) {
    if (idiom.rank < 1 || static_cast<std::size_t>(idiom.rank) > set.size()) {
        throw Error("idiom rank " + std::to_string(idiom.rank) + " is not in the set");
    }
    return idiom_template(set.rule_id(idiom.rank), set, grammar, idiom.rank + 1);
}

void check_fingerprint(const IdiomSet& set, const Grammar& base) {
    if (base.base_rule_count() < set.base_rule_count || base.fingerprint(set.base_rule_count) != set.fingerprint) {
        throw FingerprintMismatch("idiom set fingerprint " + fingerprint_hex(set.fingerprint) + " (" +
                                  std::to_string(set.base_rule_count) + " base rules) does not match grammar " +
                                  fingerprint_hex(base.fingerprint(set.base_rule_count)) + " (" +
                                  std::to_string(base.base_rule_count()) + " base rules)");
    }
}

RuleId map_rule_id(const IdiomSet& set, const Grammar& base, RuleId id) {
    if (!set.is_idiom_id(id)) {
        return id;
    }
    return static_cast<RuleId>(base.base_rule_count()) + (id - static_cast<RuleId>(set.base_rule_count));
}

Grammar augment_grammar(const Grammar& base, const IdiomSet& set) {
    Grammar g = base.base_only();
    check_fingerprint(set, g);
    for (const Idiom& idiom : set.idioms) {
        Depth2Pattern mapped{map_rule_id(set, g, idiom.provenance.parent), idiom.provenance.child_pos,
                             map_rule_id(set, g, idiom.provenance.child)};
        if (mapped.parent >= static_cast<RuleId>(g.rule_count()) || mapped.child >= static_cast<RuleId>(g.rule_count())) {
            throw Error("idiom " + std::to_string(idiom.rank) + " references a later idiom");
        }
        ProductionRule collapsed = collapse_pattern(mapped, g);
        g.add_idiom_rule(collapsed.lhs, std::move(collapsed.rhs), idiom.rank);
    }
    return g;
}

} // namespace idiomine
