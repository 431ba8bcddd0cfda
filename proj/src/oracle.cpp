#include "idiomine/oracle.hpp"

#include <map>
#include <utility>

#include "idiomine/error.hpp"

namespace idiomine::oracle {

namespace {

using SortedCounts = std::map<std::tuple<RuleId, std::int32_t, RuleId>, std::int64_t>;

SortedCounts sorted_counts(std::span<const ParseTree> corpus) {
    std::vector<const ParseTree*> internal;
    for (const auto& tree : corpus) {
        std::vector<const ParseTree*> stack{&tree};
        while (!stack.empty()) {
            const ParseTree* node = stack.back();
            stack.pop_back();
            if (node->rule == kNoRule) {
                continue;
            }
            internal.push_back(node);
            for (const auto& child : node->children) {
                stack.push_back(&child);
            }
        }
    }
    SortedCounts counts;
    for (const ParseTree* node : internal) {
        for (std::size_t i = 0; i < node->children.size(); ++i) {
            if (node->children[i].rule != kNoRule) {
                counts[{node->rule, static_cast<std::int32_t>(i), node->children[i].rule}] += 1;
            }
        }
    }
    return counts;
}

ParseTree* first_occurrence(ParseTree& root, RuleId parent, std::int32_t pos, RuleId child) {
    std::vector<ParseTree*> stack{&root};
    while (!stack.empty()) {
        ParseTree* node = stack.back();
        stack.pop_back();
        if (node->rule == parent && static_cast<std::size_t>(pos) < node->children.size() &&
            node->children[static_cast<std::size_t>(pos)].rule == child) {
            return node;
        }
        for (std::size_t i = node->children.size(); i-- > 0;) {
            stack.push_back(&node->children[i]);
        }
    }
    return nullptr;
}

void collapse_at(ParseTree& node, std::int32_t pos, RuleId new_rule) {
    std::vector<ParseTree> children;
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i == static_cast<std::size_t>(pos)) {
            for (auto& grandchild : node.children[i].children) {
                children.push_back(grandchild);
            }
        } else {
            children.push_back(node.children[i]);
        }
    }
    node.children = std::move(children);
    node.rule = new_rule;
}

} // namespace

std::vector<std::string> BpeMerge::merged() const {
    std::vector<std::string> out = left;
    out.insert(out.end(), right.begin(), right.end());
    return out;
}

PatternCounts brute_force_counts(std::span<const ParseTree> corpus) {
    PatternCounts out;
    for (const auto& [key, n] : sorted_counts(corpus)) {
        out[{std::get<0>(key), std::get<1>(key), std::get<2>(key)}] = n;
    }
    return out;
}

ReferenceResult reference_extract(std::vector<ParseTree> corpus, const Grammar& grammar, const MiningConfig& config) {
    ReferenceResult out{IdiomSet{}, std::move(corpus)};
    out.idioms.fingerprint = grammar.fingerprint();
    out.idioms.base_rule_count = grammar.base_rule_count();
    out.idioms.config = config;
    out.idioms.config.workers = 1;
    Grammar g = grammar;

    for (std::size_t step = 1; step <= config.max_idioms; ++step) {
        SortedCounts counts = sorted_counts(out.corpus);
        bool found = false;
        std::tuple<RuleId, std::int32_t, RuleId> best{};
        std::int64_t best_count = 0;
        for (const auto& [key, n] : counts) {
            if (!config.identifier_idioms && g.rule(std::get<2>(key)).lexical) {
                continue;
            }
            if (n < config.min_count) {
                continue;
            }
            bool take = config.tie_break == TieBreak::lexicographic ? n > best_count : n >= best_count;
            if (!found || take) {
                best = key;
                best_count = n;
                found = true;
            }
        }
        if (!found) {
            break;
        }
        auto [parent, pos, child] = best;
        const ProductionRule& p = g.rule(parent);
        const ProductionRule& c = g.rule(child);
        std::vector<SymbolId> rhs;
        for (std::size_t i = 0; i < p.rhs.size(); ++i) {
            if (i == static_cast<std::size_t>(pos)) {
                for (SymbolId s : c.rhs) {
                    rhs.push_back(s);
                }
            } else {
                rhs.push_back(p.rhs[i]);
            }
        }
        int rank = static_cast<int>(step);
        RuleId id = g.add_idiom_rule(p.lhs, rhs, rank);
        for (auto& tree : out.corpus) {
            while (ParseTree* at = first_occurrence(tree, parent, pos, child)) {
                collapse_at(*at, pos, id);
            }
        }
        out.idioms.idioms.push_back(Idiom{rank, g.rule(id), Depth2Pattern{parent, pos, child}, best_count});
    }
    return out;
}

std::vector<BpeMerge> reference_pair_bpe(const std::vector<std::vector<std::string>>& sequences,
                                         const std::vector<std::string>& vocabulary, std::size_t max_merges,
                                         std::int64_t min_count, TieBreak policy) {
    std::vector<std::vector<std::string>> tokens;
    std::map<std::vector<std::string>, int> ids;
    for (const auto& v : vocabulary) {
        ids.emplace(std::vector<std::string>{v}, static_cast<int>(tokens.size()));
        tokens.push_back({v});
    }
    std::vector<std::vector<int>> seqs;
    for (const auto& s : sequences) {
        std::vector<int> ids_of;
        for (const auto& t : s) {
            auto it = ids.find({t});
            if (it == ids.end()) {
                throw Error("token '" + t + "' is not in the vocabulary");
            }
            ids_of.push_back(it->second);
        }
        seqs.push_back(std::move(ids_of));
    }

    std::vector<BpeMerge> merges;
    while (merges.size() < max_merges) {
        std::map<std::pair<int, int>, std::int64_t> pairs;
        for (const auto& s : seqs) {
            for (std::size_t i = 0; i + 1 < s.size(); ++i) {
                pairs[{s[i], s[i + 1]}] += 1;
            }
        }
        std::pair<int, int> best{-1, -1};
        std::int64_t best_count = 0;
        for (const auto& [pair, n] : pairs) {
            if (n < min_count) {
                continue;
            }
            if (n > best_count || (n == best_count && policy == TieBreak::reverse_lexicographic)) {
                best = pair;
                best_count = n;
            }
        }
        if (best_count == 0) {
            break;
        }
        int merged_id = static_cast<int>(tokens.size());
        BpeMerge merge{tokens[static_cast<std::size_t>(best.first)], tokens[static_cast<std::size_t>(best.second)]};
        tokens.push_back(merge.merged());
        merges.push_back(std::move(merge));
        for (auto& s : seqs) {
            std::vector<int> next;
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (i + 1 < s.size() && s[i] == best.first && s[i + 1] == best.second) {
                    next.push_back(merged_id);
                    ++i;
                } else {
                    next.push_back(s[i]);
                }
            }
            s = std::move(next);
        }
    }
    return merges;
}

Grammar chain_grammar(const std::vector<std::string>& alphabet) {
    Grammar g;
    SymbolId seq = g.add_nonterminal("Seq");
    g.set_start(seq);
    for (const auto& token : alphabet) {
        if (token == kChainEnd) {
            throw Error("the end marker cannot be part of the alphabet");
        }
        g.add_rule(seq, {g.add_terminal(token), seq});
    }
    g.add_rule(seq, {g.add_terminal(kChainEnd)});
    return g;
}

ParseTree chain_tree(const std::vector<std::string>& tokens, const Grammar& grammar) {
    SymbolId seq = grammar.start();
    auto end = grammar.find_terminal(kChainEnd);
    if (!end) {
        throw Error("not a chain grammar");
    }
    ParseTree tree{seq, static_cast<RuleId>(grammar.base_rule_count() - 1), {ParseTree::leaf(*end)}};
    for (std::size_t i = tokens.size(); i-- > 0;) {
        auto t = grammar.find_terminal(tokens[i]);
        if (!t) {
            throw Error("token '" + tokens[i] + "' is not in the chain grammar");
        }
        // Rule ids follow alphabet order, one per token.
        RuleId rule = kNoRule;
        for (RuleId r = 0; static_cast<std::size_t>(r) + 1 < grammar.base_rule_count(); ++r) {
            if (grammar.rule(r).rhs[0] == *t) {
                rule = r;
            }
        }
        tree = ParseTree{seq, rule, {ParseTree::leaf(*t), std::move(tree)}};
    }
    return tree;
}

std::vector<std::string> chain_token(const ProductionRule& rule, const Grammar& grammar) {
    std::vector<std::string> out;
    for (SymbolId s : rule.rhs) {
        if (grammar.is_terminal(s)) {
            out.push_back(grammar.symbol(s).name);
        }
    }
    return out;
}

} // namespace idiomine::oracle
