#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "idiomine/grammar.hpp"
#include "idiomine/miner.hpp"
#include "idiomine/minilang.hpp"
#include "idiomine/oracle.hpp"
#include "idiomine/parse_tree.hpp"

namespace idiomine::fixtures {

// Statement -> if ParExpr Statement IfOrElse   (rule 0)
// ParExpr   -> ( Expr )                        (rule 1)
// IfOrElse  -> else Statement                  (rule 2)
inline Grammar if_grammar() {
    Grammar g;
    SymbolId stmt = g.add_nonterminal("Statement");
    SymbolId par = g.add_nonterminal("ParExpr");
    SymbolId expr = g.add_nonterminal("Expr");
    SymbolId ifelse = g.add_nonterminal("IfOrElse");
    g.set_start(stmt);
    g.add_rule(stmt, {g.add_terminal("if"), par, stmt, ifelse});
    g.add_rule(par, {g.add_terminal("("), expr, g.add_terminal(")")});
    g.add_rule(ifelse, {g.add_terminal("else"), stmt});
    return g;
}

inline ParseTree slot(const Grammar& g, const char* name) { return ParseTree::leaf(*g.find_nonterminal(name)); }

// if (Expr) Statement else Statement, optionally with the else branch left as a slot.
inline ParseTree if_tree(const Grammar& g, bool with_else) {
    ParseTree ifelse = with_else ? make_node(g, 2) : slot(g, "IfOrElse");
    return make_node(g, 0, {ParseTree::leaf(*g.find_terminal("if")), make_node(g, 1), slot(g, "Statement"),
                            std::move(ifelse)});
}

// Three if-else trees and one if tree whose else part is unexpanded.
inline std::vector<ParseTree> if_else_corpus(const Grammar& g) {
    return {if_tree(g, true), if_tree(g, true), if_tree(g, true), if_tree(g, false)};
}

// Outer if whose then-branch is an inner if; the outer else is expanded.
inline ParseTree nested_if_tree(const Grammar& g) {
    ParseTree inner = if_tree(g, false);
    return make_node(g, 0, {ParseTree::leaf(*g.find_terminal("if")), make_node(g, 1), std::move(inner),
                            make_node(g, 2)});
}

// Random grammar over nonterminals N0..N{k-1} and terminals a..e. Every
// nonterminal has at least one all-terminal rule so derivations can stop.
inline Grammar random_grammar(std::mt19937_64& rng) {
    Grammar g;
    int nonterminals = 2 + static_cast<int>(rng() % 3);
    std::vector<SymbolId> nts;
    for (int i = 0; i < nonterminals; ++i) {
        nts.push_back(g.add_nonterminal("N" + std::to_string(i)));
    }
    std::vector<SymbolId> ts;
    for (char c : std::string("abcde")) {
        ts.push_back(g.add_terminal(std::string(1, c)));
    }
    g.set_start(nts[0]);
    for (SymbolId nt : nts) {
        g.add_rule(nt, {ts[rng() % ts.size()]});
        int extra = 1 + static_cast<int>(rng() % 3);
        for (int r = 0; r < extra; ++r) {
            std::vector<SymbolId> rhs;
            int len = 1 + static_cast<int>(rng() % 3);
            for (int s = 0; s < len; ++s) {
                rhs.push_back(rng() % 2 == 0 ? nts[rng() % nts.size()] : ts[rng() % ts.size()]);
            }
            g.add_rule(nt, rhs);
        }
    }
    return g;
}

// Random derivation from `symbol`; beyond `depth` only all-terminal rules
// are used, and with `slots` some nonterminals are left unexpanded.
inline ParseTree random_tree(const Grammar& g, std::mt19937_64& rng, SymbolId symbol, int depth, bool slots) {
    if (g.is_terminal(symbol)) {
        return ParseTree::leaf(symbol);
    }
    if (slots && rng() % 16 == 0) {
        return ParseTree::leaf(symbol);
    }
    std::vector<RuleId> options;
    std::vector<RuleId> closing;
    for (const auto& rule : g.rules()) {
        if (rule.lhs != symbol) {
            continue;
        }
        options.push_back(rule.id);
        bool terminal_only = true;
        for (SymbolId s : rule.rhs) {
            terminal_only = terminal_only && g.is_terminal(s);
        }
        if (terminal_only) {
            closing.push_back(rule.id);
        }
    }
    const auto& pool = depth <= 0 ? closing : options;
    RuleId id = pool[rng() % pool.size()];
    ParseTree node{symbol, id, {}};
    for (SymbolId s : g.rule(id).rhs) {
        node.children.push_back(random_tree(g, rng, s, depth - 1, slots));
    }
    return node;
}

inline std::vector<ParseTree> random_corpus(const Grammar& g, std::mt19937_64& rng, std::size_t max_trees,
                                            bool slots = true) {
    std::size_t n = 1 + rng() % max_trees;
    std::vector<ParseTree> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(random_tree(g, rng, g.start(), 2 + static_cast<int>(rng() % 5), slots));
    }
    return out;
}

struct DemoCorpus {
    Grammar grammar;
    std::vector<ParseTree> trees;
};

inline DemoCorpus demo_corpus(std::uint64_t seed, std::size_t count) {
    DemoCorpus out{minilang::mini_grammar(), {}};
    for (const auto& program : minilang::generate_demo_corpus(seed, count)) {
        out.trees.push_back(minilang::parse(program.text, out.grammar));
    }
    return out;
}

// Runs the extraction loop step by step, comparing count_patterns with the
// brute-force counts on every iteration. Returns the first failing step or 0.
inline std::size_t first_count_divergence(std::vector<ParseTree> corpus, Grammar grammar, const MiningConfig& config) {
    for (std::size_t step = 1; step <= config.max_idioms + 1; ++step) {
        PatternCounts counts = count_patterns(corpus, config.workers);
        if (counts != oracle::brute_force_counts(corpus)) {
            return step;
        }
        auto best = most_frequent(counts, config.min_count, config.tie_break);
        if (!best || step > config.max_idioms) {
            return 0;
        }
        ProductionRule r = collapse_pattern(*best, grammar);
        RuleId id = grammar.add_idiom_rule(r.lhs, r.rhs, static_cast<int>(step));
        rewrite_corpus(corpus, *best, id, config.workers);
    }
    return 0;
}

struct BpeCase {
    std::vector<std::string> alphabet;
    std::vector<std::vector<std::string>> sequences;
};

inline BpeCase random_bpe_case(std::mt19937_64& rng) {
    BpeCase out;
    std::size_t letters = 2 + rng() % 4;
    for (std::size_t i = 0; i < letters; ++i) {
        out.alphabet.push_back(std::string(1, static_cast<char>('a' + i)));
    }
    std::size_t n = 1 + rng() % 12;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> seq;
        std::size_t len = 1 + rng() % 14;
        for (std::size_t j = 0; j < len; ++j) {
            seq.push_back(out.alphabet[rng() % letters]);
        }
        out.sequences.push_back(std::move(seq));
    }
    return out;
}

// Idiom frontiers from chain-tree mining and the BPE merge strings, which
// should agree element for element.
inline std::pair<std::vector<std::vector<std::string>>, std::vector<std::vector<std::string>>>
bpe_comparison(const BpeCase& c, std::size_t merges, std::size_t workers = 1) {
    Grammar g = oracle::chain_grammar(c.alphabet);
    std::vector<ParseTree> trees;
    std::vector<std::vector<std::string>> closed;
    for (const auto& s : c.sequences) {
        trees.push_back(oracle::chain_tree(s, g));
        closed.push_back(s);
        closed.back().push_back(oracle::kChainEnd);
    }
    MiningConfig config;
    config.max_idioms = merges;
    config.workers = workers;
    auto mined = extract_idioms(trees, g, config);
    std::vector<std::vector<std::string>> frontiers;
    for (const auto& idiom : mined.idioms.idioms) {
        frontiers.push_back(oracle::chain_token(idiom.rule, mined.grammar));
    }
    std::vector<std::string> vocabulary = c.alphabet;
    vocabulary.push_back(oracle::kChainEnd);
    std::vector<std::vector<std::string>> bpe;
    for (const auto& m : oracle::reference_pair_bpe(closed, vocabulary, merges)) {
        bpe.push_back(m.merged());
    }
    return {frontiers, bpe};
}

} // namespace idiomine::fixtures
