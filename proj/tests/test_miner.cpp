#include <gtest/gtest.h>

#include "idiomine/error.hpp"
#include "idiomine/idiom_io.hpp"
#include "idiomine/miner.hpp"
#include "idiomine/oracle.hpp"
#include "idiomine/tree_io.hpp"
#include "support.hpp"

using namespace idiomine;

namespace {

// S -> A B (0), A -> a (1), B -> b (2), S -> A (3)
struct Small {
    Grammar g;
    Small() {
        SymbolId S = g.add_nonterminal("S");
        SymbolId A = g.add_nonterminal("A");
        SymbolId B = g.add_nonterminal("B");
        g.set_start(S);
        g.add_rule(S, {A, B});
        g.add_rule(A, {g.add_terminal("a")});
        g.add_rule(B, {g.add_terminal("b")});
        g.add_rule(S, {A});
    }
    ParseTree ab() const { return make_node(g, 0, {make_node(g, 1), make_node(g, 2)}); }
};

// E -> E + y (0), E -> x (1)
struct Chain {
    Grammar g;
    Chain() {
        SymbolId E = g.add_nonterminal("E");
        g.set_start(E);
        g.add_rule(E, {E, g.add_terminal("+"), g.add_terminal("y")});
        g.add_rule(E, {g.add_terminal("x")});
    }
    // k applications of E -> E + y above E -> x.
    ParseTree spine(int k) const {
        ParseTree t = make_node(g, 1);
        for (int i = 0; i < k; ++i) {
            ParseTree n = make_node(g, 0);
            n.children[0] = std::move(t);
            t = std::move(n);
        }
        return t;
    }
};

std::size_t template_rules(const ParseTree& t) { return internal_node_count(t); }

} // namespace

TEST(CountPatterns, ThreeCopies) {
    Small s;
    std::vector<ParseTree> corpus{s.ab(), s.ab(), s.ab()};
    PatternCounts counts = count_patterns(corpus);
    PatternCounts expected{{{0, 0, 1}, 3}, {{0, 1, 2}, 3}};
    EXPECT_EQ(counts, expected);
    EXPECT_EQ(counts, oracle::brute_force_counts(corpus));
}

TEST(CountPatterns, SingleRuleTreesAndEmpty) {
    Small s;
    std::vector<ParseTree> corpus{make_node(s.g, 1), make_node(s.g, 2)};
    EXPECT_TRUE(count_patterns(corpus).empty());
    EXPECT_TRUE(count_patterns({}).empty());
    EXPECT_TRUE(oracle::brute_force_counts({}).empty());
}

TEST(CountPatterns, ChainSpine) {
    Chain c;
    for (int k = 1; k <= 12; ++k) {
        std::vector<ParseTree> corpus{c.spine(k)};
        PatternCounts counts = count_patterns(corpus);
        Depth2Pattern spine{0, 0, 0};
        EXPECT_EQ(counts.count(spine) ? counts.at(spine) : 0, k - 1) << "k=" << k;
        EXPECT_EQ(counts.at({0, 0, 1}), 1);
    }
}

TEST(CountPatterns, WorkersAgree) {
    auto demo = fixtures::demo_corpus(3, 80);
    EXPECT_EQ(count_patterns(demo.trees, 1), count_patterns(demo.trees, 4));
}

TEST(MostFrequent, Basic) {
    Depth2Pattern p1{3, 0, 1};
    Depth2Pattern p2{0, 1, 2};
    EXPECT_EQ(most_frequent({{p1, 5}, {p2, 3}}), p1);
    EXPECT_EQ(most_frequent({{p1, 5}, {p2, 5}}), p2);
    EXPECT_EQ(most_frequent({{p1, 5}, {p2, 5}}, 2, TieBreak::reverse_lexicographic), p1);
    EXPECT_EQ(most_frequent({{p1, 1}, {p2, 1}}), std::nullopt);
    EXPECT_EQ(most_frequent({{p1, 1}, {p2, 1}}, 1), p2);
    EXPECT_EQ(most_frequent({}), std::nullopt);
}

TEST(TieBreak, Names) {
    EXPECT_EQ(tie_break_from_string("lexicographic"), TieBreak::lexicographic);
    EXPECT_EQ(tie_break_from_string(to_string(TieBreak::reverse_lexicographic)), TieBreak::reverse_lexicographic);
    EXPECT_EQ(tie_break_from_string("random"), std::nullopt);
}

TEST(Collapse, ParExprIntoIf) {
    Grammar g = fixtures::if_grammar();
    ProductionRule r = collapse_pattern({0, 1, 1}, g);
    g.add_idiom_rule(r.lhs, r.rhs, 1);
    EXPECT_EQ(g.rule_to_string(3), "Statement -> if ( Expr ) Statement IfOrElse");
}

TEST(Collapse, UnaryChain) {
    Small s;
    ProductionRule r = collapse_pattern({3, 0, 1}, s.g);
    EXPECT_EQ(r.lhs, *s.g.find_nonterminal("S"));
    EXPECT_EQ(r.rhs, std::vector<SymbolId>{*s.g.find_terminal("a")});
    EXPECT_THROW(collapse_pattern({3, 0, 2}, s.g), Error);
    EXPECT_THROW(collapse_pattern({3, 1, 1}, s.g), Error);
}

TEST(Rewrite, SingleOccurrence) {
    Small s;
    Grammar g = s.g;
    ProductionRule r = collapse_pattern({0, 0, 1}, g);
    RuleId id = g.add_idiom_rule(r.lhs, r.rhs, 1);
    ParseTree t = s.ab();
    std::size_t before = internal_node_count(t);
    EXPECT_EQ(rewrite_tree(t, {0, 0, 1}, id), 1u);
    EXPECT_EQ(internal_node_count(t), before - 1);
    EXPECT_TRUE(validate_tree(t, g).ok());
    EXPECT_EQ(serialize_tree(t, g), "(S@4 \"a\" (B@2 \"b\"))");
}

TEST(Rewrite, SelfOverlappingSpine) {
    Chain c;
    Grammar g = c.g;
    ProductionRule r = collapse_pattern({0, 0, 0}, g);
    RuleId id = g.add_idiom_rule(r.lhs, r.rhs, 1);
    std::vector<ParseTree> corpus{c.spine(3)};
    std::size_t n = rewrite_corpus(corpus, {0, 0, 0}, id);
    EXPECT_GE(n, 1u);
    EXPECT_EQ(count_patterns(corpus).count({0, 0, 0}), 0u);
    EXPECT_TRUE(validate_tree(corpus[0], g).ok());
    EXPECT_EQ(yield(corpus[0], g), yield(c.spine(3), c.g));
}

TEST(Rewrite, AbsentPatternIsIdentity) {
    Small s;
    ParseTree t = s.ab();
    EXPECT_EQ(rewrite_tree(t, {3, 0, 1}, 4), 0u);
    EXPECT_EQ(t, s.ab());
}

TEST(Extract, ZeroBudget) {
    Small s;
    std::vector<ParseTree> corpus{s.ab(), s.ab()};
    MiningConfig config;
    config.max_idioms = 0;
    auto result = extract_idioms(corpus, s.g, config);
    EXPECT_TRUE(result.idioms.empty());
    EXPECT_EQ(result.corpus, corpus);
}

TEST(Extract, ComposedIfElse) {
    Grammar g = fixtures::if_grammar();
    MiningConfig config;
    config.max_idioms = 2;
    auto result = extract_idioms(fixtures::if_else_corpus(g), g, config);
    ASSERT_EQ(result.idioms.size(), 2u);
    const Idiom& first = result.idioms.idioms[0];
    const Idiom& second = result.idioms.idioms[1];
    EXPECT_EQ(first.provenance, (Depth2Pattern{0, 1, 1}));
    EXPECT_EQ(first.support, 4);
    EXPECT_EQ(result.grammar.rule_to_string(first.rule.id), "Statement -> if ( Expr ) Statement IfOrElse");
    EXPECT_EQ(second.provenance, (Depth2Pattern{first.rule.id, 5, 2}));
    EXPECT_EQ(second.support, 3);
    EXPECT_EQ(result.grammar.rule_to_string(second.rule.id), "Statement -> if ( Expr ) Statement else Statement");

    ParseTree t1 = expand_idiom(first, result.idioms, g);
    ParseTree t2 = expand_idiom(second, result.idioms, g);
    EXPECT_EQ(template_rules(t1), 2u);
    EXPECT_EQ(template_rules(t2), 3u);
    EXPECT_EQ(frontier(t2), second.rule.rhs);
    EXPECT_TRUE(validate_tree(t2, g, Slots::allow).ok());
}

TEST(Extract, HaltsBelowMinCount) {
    Small s;
    std::vector<ParseTree> corpus{s.ab()};
    auto result = extract_idioms(corpus, s.g, {});
    EXPECT_TRUE(result.idioms.empty());
    EXPECT_EQ(result.halt, HaltReason::below_min_count);
}

TEST(Extract, IdentifierIdiomsToggle) {
    auto demo = fixtures::demo_corpus(1, 60);
    MiningConfig config;
    config.max_idioms = 80;
    config.identifier_idioms = false;
    auto result = extract_idioms(demo.trees, demo.grammar, config);
    for (const auto& idiom : result.idioms.idioms) {
        EXPECT_FALSE(result.grammar.rule(idiom.provenance.child).lexical);
    }
    config.identifier_idioms = true;
    auto with = extract_idioms(demo.trees, demo.grammar, config);
    bool any = false;
    for (const auto& idiom : with.idioms.idioms) {
        any = any || with.grammar.rule(idiom.provenance.child).lexical;
    }
    EXPECT_TRUE(any);
}

TEST(Extract, Invariants) {
    auto demo = fixtures::demo_corpus(5, 100);
    MiningConfig config;
    config.max_idioms = 60;
    auto result = extract_idioms(demo.trees, demo.grammar, config);
    ASSERT_EQ(result.idioms.size(), 60u);
    for (std::size_t i = 0; i < result.idioms.size(); ++i) {
        const Idiom& idiom = result.idioms.idioms[i];
        EXPECT_EQ(idiom.rank, static_cast<int>(i + 1));
        EXPECT_EQ(idiom.rule.id, result.idioms.rule_id(idiom.rank));
        EXPECT_GE(idiom.support, config.min_count);
        ParseTree tmpl = expand_idiom(idiom, result.idioms, demo.grammar);
        EXPECT_GE(internal_node_count(tmpl), 2u);
        EXPECT_EQ(frontier(tmpl), idiom.rule.rhs);
        EXPECT_EQ(tmpl.symbol, idiom.rule.lhs);
    }
    for (std::size_t i = 0; i < demo.trees.size(); ++i) {
        EXPECT_TRUE(validate_tree(result.corpus[i], result.grammar).ok());
        EXPECT_EQ(yield(result.corpus[i], result.grammar), yield(demo.trees[i], demo.grammar));
    }
    for (const auto& idiom : result.idioms.idioms) {
        EXPECT_EQ(count_patterns(result.corpus).count(idiom.provenance), 0u);
    }
}

TEST(Extract, RejectsInvalidCorpus) {
    Small s;
    ParseTree bad = s.ab();
    bad.children[1].rule = 1;
    EXPECT_THROW(extract_idioms({bad}, s.g, {}), InvalidTree);
}

TEST(IdiomIo, RoundTrip) {
    auto demo = fixtures::demo_corpus(1, 80);
    MiningConfig config;
    config.max_idioms = 40;
    auto result = extract_idioms(demo.trees, demo.grammar, config);
    std::string text = idiom_set_to_json(result.idioms, result.grammar);
    IdiomSet back = idiom_set_from_json(text, demo.grammar);
    ASSERT_EQ(back.size(), result.idioms.size());
    EXPECT_EQ(idiom_set_to_json(back, augment_grammar(demo.grammar, back)), text);
    EXPECT_EQ(back.fingerprint, result.idioms.fingerprint);
}

TEST(IdiomIo, FingerprintMismatch) {
    auto demo = fixtures::demo_corpus(1, 40);
    MiningConfig config;
    config.max_idioms = 5;
    auto result = extract_idioms(demo.trees, demo.grammar, config);
    std::string text = idiom_set_to_json(result.idioms, result.grammar);
    Grammar other = fixtures::if_grammar();
    try {
        idiom_set_from_json(text, other);
        FAIL() << "expected a mismatch";
    } catch (const FingerprintMismatch& e) {
        std::string what = e.what();
        EXPECT_NE(what.find(fingerprint_hex(result.idioms.fingerprint)), std::string::npos);
        EXPECT_NE(what.find(fingerprint_hex(other.fingerprint(result.idioms.base_rule_count))), std::string::npos)
            << what;
    }
}

TEST(IdiomIo, PortableToExtendedGrammar) {
    auto demo = fixtures::demo_corpus(1, 40);
    MiningConfig config;
    config.max_idioms = 20;
    auto result = extract_idioms(demo.trees, demo.grammar, config);
    std::string text = idiom_set_to_json(result.idioms, result.grammar);
    Grammar extended = demo.grammar;
    minilang::parse("zzz = qqq;", extended);
    ASSERT_GT(extended.base_rule_count(), demo.grammar.base_rule_count());
    IdiomSet set = idiom_set_from_json(text, extended);
    Grammar augmented = augment_grammar(extended, set);
    for (const auto& idiom : set.idioms) {
        RuleId id = static_cast<RuleId>(extended.base_rule_count()) + idiom.rank - 1;
        EXPECT_EQ(augmented.rule_to_string(id), result.grammar.rule_to_string(idiom.rule.id));
    }
}

TEST(IdiomIo, RejectsTampering) {
    Grammar g = fixtures::if_grammar();
    MiningConfig config;
    config.max_idioms = 2;
    auto result = extract_idioms(fixtures::if_else_corpus(g), g, config);
    std::string text = idiom_set_to_json(result.idioms, result.grammar);
    std::string bad_rank = text;
    bad_rank.replace(bad_rank.find("\"rank\": 2"), 9, "\"rank\": 3");
    EXPECT_THROW(idiom_set_from_json(bad_rank, g), Error);
    EXPECT_THROW(idiom_set_from_json("{\"format_version\": 2}", g), Error);
}
