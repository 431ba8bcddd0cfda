#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "idiomine/grammar.hpp"
#include "idiomine/miner.hpp"
#include "idiomine/parse_tree.hpp"

// Naive reference implementations used to cross-check the miner. Nothing
// here shares counting, selection or rewriting code with miner.cpp.
namespace idiomine::oracle {

// Explicit-stack enumeration of all internal nodes, then a nested loop over
// each node's children.
PatternCounts brute_force_counts(std::span<const ParseTree> corpus);

struct ReferenceResult {
    IdiomSet idioms;
    std::vector<ParseTree> corpus;
};

// Literal transcription of the extraction loop: full recount every step,
// rewriting by repeatedly locating the first occurrence and restarting.
ReferenceResult reference_extract(std::vector<ParseTree> corpus, const Grammar& grammar, const MiningConfig& config);

struct BpeMerge {
    std::vector<std::string> left;
    std::vector<std::string> right;

    std::vector<std::string> merged() const;
};

// Pair-merge BPE with overlapping pair counts and left-to-right
// non-overlapping replacement. Ties go to the lexicographically smallest
// (left id, right id) where `vocabulary` fixes the initial token ids and
// each merge gets the next id.
std::vector<BpeMerge> reference_pair_bpe(const std::vector<std::vector<std::string>>& sequences,
                                         const std::vector<std::string>& vocabulary, std::size_t max_merges,
                                         std::int64_t min_count = 2, TieBreak policy = TieBreak::lexicographic);

inline constexpr const char* kChainEnd = "$";

// Grammar whose trees are right-branching token chains: Seq -> x Seq for
// every token x (in alphabet order) and Seq -> $ closing each chain.
Grammar chain_grammar(const std::vector<std::string>& alphabet);

// Chain tree of `tokens` followed by the end marker.
ParseTree chain_tree(const std::vector<std::string>& tokens, const Grammar& grammar);

// Terminals of an idiom rule's rhs, i.e. the token string it stands for.
std::vector<std::string> chain_token(const ProductionRule& rule, const Grammar& grammar);

} // namespace idiomine::oracle
