#include "idiomine/parse_tree.hpp"

#include <algorithm>

#include "idiomine/error.hpp"

namespace idiomine {

namespace {

std::string path_to_string(const std::vector<std::size_t>& path) {
    std::string out = "[";
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i != 0) {
            out += ',';
        }
        out += std::to_string(path[i]);
    }
    return out + "]";
}

void validate_node(const ParseTree& node, const Grammar& grammar, Slots slots, std::vector<std::size_t>& path,
                   std::vector<Violation>& out) {
    if (node.symbol < 0 || static_cast<std::size_t>(node.symbol) >= grammar.symbol_count()) {
        out.push_back({path, "unknown symbol id " + std::to_string(node.symbol)});
        return;
    }
    const Symbol& sym = grammar.symbol(node.symbol);
    if (sym.is_terminal()) {
        if (node.is_internal() || !node.children.empty()) {
            out.push_back({path, "terminal with children '" + sym.name + "'"});
        }
        return;
    }
    if (!node.is_internal()) {
        if (!node.children.empty()) {
            out.push_back({path, "nonterminal '" + sym.name + "' has children but no rule"});
        } else if (slots == Slots::forbid) {
            out.push_back({path, "unexpanded nonterminal '" + sym.name + "'"});
        }
        return;
    }
    if (!grammar.has_rule(node.rule)) {
        out.push_back({path, "unknown rule id " + std::to_string(node.rule)});
        return;
    }
    const ProductionRule& rule = grammar.rule(node.rule);
    if (rule.lhs != node.symbol) {
        out.push_back({path, "lhs mismatch: rule " + std::to_string(rule.id) + " expands '" +
                                 grammar.symbol(rule.lhs).name + "', node is '" + sym.name + "'"});
        return;
    }
    bool same = node.children.size() == rule.rhs.size() &&
                std::equal(rule.rhs.begin(), rule.rhs.end(), node.children.begin(),
                           [](SymbolId s, const ParseTree& c) { return s == c.symbol; });
    if (!same) {
        out.push_back({path, "rhs mismatch for rule " + std::to_string(rule.id)});
        return;
    }
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        path.push_back(i);
        validate_node(node.children[i], grammar, slots, path, out);
        path.pop_back();
    }
}

void collect_frontier(const ParseTree& node, std::vector<SymbolId>& out) {
    if (node.children.empty()) {
        out.push_back(node.symbol);
        return;
    }
    for (const auto& child : node.children) {
        collect_frontier(child, out);
    }
}

void collect_rules(const ParseTree& node, RuleSequence& out) {
    if (!node.is_internal()) {
        return;
    }
    out.push_back(node.rule);
    for (const auto& child : node.children) {
        collect_rules(child, out);
    }
}

class Replayer {
public:
    Replayer(std::span<const RuleId> seq, const Grammar& grammar) : seq_(seq), grammar_(grammar) {}

    void expand(ParseTree& node) {
        // Each pending nonterminal consumes at least one rule.
        if (seq_.size() - pos_ < pending_) {
            throw InvalidTree("premature exhaustion: " + std::to_string(pending_) +
                              " nonterminal(s) left to expand with " + std::to_string(seq_.size() - pos_) +
                              " rule(s) remaining");
        }
        RuleId id = seq_[pos_];
        if (!grammar_.has_rule(id)) {
            throw InvalidTree("unknown rule id " + std::to_string(id) + " at position " + std::to_string(pos_));
        }
        const ProductionRule& rule = grammar_.rule(id);
        if (rule.lhs != node.symbol) {
            throw InvalidTree("rule " + std::to_string(id) + " inapplicable at position " + std::to_string(pos_) +
                              ": leftmost nonterminal is '" + grammar_.symbol(node.symbol).name + "'");
        }
        ++pos_;
        --pending_;
        node.rule = id;
        node.children.reserve(rule.rhs.size());
        for (SymbolId s : rule.rhs) {
            node.children.push_back(ParseTree::leaf(s));
            if (!grammar_.is_terminal(s)) {
                ++pending_;
            }
        }
        for (auto& child : node.children) {
            if (!grammar_.is_terminal(child.symbol)) {
                expand(child);
            }
        }
    }

    std::size_t consumed() const noexcept { return pos_; }

private:
    std::span<const RuleId> seq_;
    const Grammar& grammar_;
    std::size_t pos_ = 0;
    std::size_t pending_ = 1;
};

} // namespace

std::string ValidationResult::to_string() const {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) {
            out += "; ";
        }
        out += "at " + path_to_string(v.path) + ": " + v.message;
    }
    return out;
}

ValidationResult validate_tree(const ParseTree& tree, const Grammar& grammar, Slots slots) {
    ValidationResult result;
    std::vector<std::size_t> path;
    validate_node(tree, grammar, slots, path, result.violations);
    return result;
}

void check_tree(const ParseTree& tree, const Grammar& grammar, Slots slots) {
    auto result = validate_tree(tree, grammar, slots);
    if (!result.ok()) {
        throw InvalidTree(result.to_string());
    }
}

ParseTree make_node(const Grammar& grammar, RuleId rule) {
    const auto& r = grammar.rule(rule);
    ParseTree node{r.lhs, rule, {}};
    for (SymbolId s : r.rhs) {
        node.children.push_back(ParseTree::leaf(s));
    }
    return node;
}

ParseTree make_node(const Grammar& grammar, RuleId rule, std::vector<ParseTree> children) {
    return ParseTree{grammar.rule(rule).lhs, rule, std::move(children)};
}

std::size_t internal_node_count(const ParseTree& tree) {
    if (!tree.is_internal()) {
        return 0;
    }
    std::size_t n = 1;
    for (const auto& child : tree.children) {
        n += internal_node_count(child);
    }
    return n;
}

std::vector<SymbolId> frontier(const ParseTree& tree) {
    std::vector<SymbolId> out;
    collect_frontier(tree, out);
    return out;
}

std::vector<std::string> yield(const ParseTree& tree, const Grammar& grammar) {
    std::vector<std::string> out;
    for (SymbolId s : frontier(tree)) {
        if (grammar.is_terminal(s)) {
            out.push_back(grammar.symbol(s).name);
        }
    }
    return out;
}

RuleSequence rule_sequence(const ParseTree& tree) {
    RuleSequence out;
    collect_rules(tree, out);
    return out;
}

ParseTree replay(std::span<const RuleId> sequence, const Grammar& grammar, std::optional<SymbolId> root) {
    if (sequence.empty()) {
        throw InvalidTree("empty rule sequence");
    }
    SymbolId root_symbol = root.value_or(grammar.start());
    if (root_symbol < 0 || grammar.is_terminal(root_symbol)) {
        throw InvalidTree("replay root must be a nonterminal");
    }
    ParseTree tree = ParseTree::leaf(root_symbol);
    Replayer replayer(sequence, grammar);
    replayer.expand(tree);
    if (replayer.consumed() != sequence.size()) {
        throw InvalidTree("leftover rules: " + std::to_string(sequence.size() - replayer.consumed()) +
                          " rule(s) after the tree was complete");
    }
    return tree;
}

} // namespace idiomine
