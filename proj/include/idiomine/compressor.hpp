#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "idiomine/grammar.hpp"
#include "idiomine/miner.hpp"
#include "idiomine/parse_tree.hpp"

namespace idiomine {

inline constexpr std::size_t kAllIdioms = std::numeric_limits<std::size_t>::max();

struct CompressOptions {
    // Apply only the first k idioms.
    std::size_t k = kAllIdioms;
    // Repeat the ordered pass until nothing changes (not the default single pass).
    bool fixpoint = false;
    std::size_t workers = 1;
};

struct TreeCompression {
    std::size_t original_rules = 0;
    std::size_t compressed_rules = 0;
    double ratio = 0.0;
};

struct CompressionReport {
    std::size_t k = 0;
    bool fixpoint = false;
    std::vector<TreeCompression> trees;
    double mean_ratio = 0.0;
    double median_ratio = 0.0;
    std::size_t total_before = 0;
    std::size_t total_after = 0;
    // Replacements per idiom, indexed by rank - 1; sums to total_before - total_after.
    std::vector<std::size_t> applications;
};

struct SweepRow {
    std::size_t k = 0;
    double mean_ratio = 0.0;
    std::size_t total_before = 0;
    std::size_t total_after = 0;
};

double compression_ratio(std::size_t original_rules, std::size_t compressed_rules);

// Binds an idiom set to a base grammar: verifies the fingerprint, builds the
// augmented grammar and caches idiom templates.
class Compressor {
public:
    Compressor(const Grammar& grammar, IdiomSet set);

    const Grammar& grammar() const noexcept { return augmented_; }
    const IdiomSet& idioms() const noexcept { return set_; }

    // Applies idioms in rank order, each exhaustively. `applications`, when
    // given, is incremented per replacement (indexed by rank - 1).
    ParseTree compress(ParseTree tree, std::size_t k = kAllIdioms, bool fixpoint = false,
                       std::vector<std::size_t>* applications = nullptr) const;

    // Replaces each idiom node by its base-grammar template.
    ParseTree expand(const ParseTree& tree) const;

    // Template of the idiom with the given rank (base rule ids, slot leaves).
    const ParseTree& idiom_template(int rank) const;

private:
    void expand_into(const ParseTree& node, ParseTree& out) const;

    Grammar augmented_;
    IdiomSet set_;
    std::vector<Depth2Pattern> patterns_;
    std::vector<ParseTree> templates_;
};

ParseTree compress_tree(const ParseTree& tree, const IdiomSet& set, const Grammar& grammar,
                        const CompressOptions& options = {});
ParseTree expand_tree(const ParseTree& tree, const IdiomSet& set, const Grammar& grammar);

struct CompressedCorpus {
    std::vector<ParseTree> trees;
    CompressionReport report;
};

CompressedCorpus compress_corpus(std::span<const ParseTree> corpus, const Compressor& compressor,
                                 const CompressOptions& options = {});
CompressedCorpus compress_corpus(std::span<const ParseTree> corpus, const IdiomSet& set, const Grammar& grammar,
                                 const CompressOptions& options = {});

// One row per prefix size; ks must be ascending and <= set size.
std::vector<SweepRow> k_sweep(std::span<const ParseTree> corpus, const Compressor& compressor,
                              std::span<const std::size_t> ks, std::size_t workers = 1);

std::string report_to_json(const CompressionReport& report);
std::string report_to_table(const CompressionReport& report);
std::string sweep_to_json(std::span<const SweepRow> rows);
std::string sweep_to_table(std::span<const SweepRow> rows);

} // namespace idiomine
