#include "idiomine/compressor.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "idiomine/detail/parallel.hpp"
#include "idiomine/error.hpp"

namespace idiomine {

namespace {

void fill_slots(ParseTree& node, std::vector<ParseTree>& children, std::size_t& next) {
    if (node.children.empty()) {
        node = std::move(children[next++]);
        return;
    }
    for (auto& child : node.children) {
        fill_slots(child, children, next);
    }
}

double mean(const std::vector<TreeCompression>& trees) {
    if (trees.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& t : trees) {
        sum += t.ratio;
    }
    return sum / static_cast<double>(trees.size());
}

double median(const std::vector<TreeCompression>& trees) {
    if (trees.empty()) {
        return 0.0;
    }
    std::vector<double> ratios;
    ratios.reserve(trees.size());
    for (const auto& t : trees) {
        ratios.push_back(t.ratio);
    }
    std::sort(ratios.begin(), ratios.end());
    std::size_t mid = ratios.size() / 2;
    return ratios.size() % 2 == 1 ? ratios[mid] : (ratios[mid - 1] + ratios[mid]) / 2.0;
}

std::string fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

} // namespace

double compression_ratio(std::size_t original_rules, std::size_t compressed_rules) {
    if (original_rules == 0) {
        return 0.0;
    }
    return 1.0 - static_cast<double>(compressed_rules) / static_cast<double>(original_rules);
}

Compressor::Compressor(const Grammar& grammar, IdiomSet set)
    : augmented_(augment_grammar(grammar, set)), set_(std::move(set)) {
    Grammar base = grammar.base_only();
    patterns_.reserve(set_.size());
    templates_.reserve(set_.size());
    for (const Idiom& idiom : set_.idioms) {
        patterns_.push_back({map_rule_id(set_, base, idiom.provenance.parent), idiom.provenance.child_pos,
                             map_rule_id(set_, base, idiom.provenance.child)});
        templates_.push_back(expand_idiom(idiom, set_, base));
    }
}

const ParseTree& Compressor::idiom_template(int rank) const {
    if (rank < 1 || static_cast<std::size_t>(rank) > templates_.size()) {
        throw Error("no idiom with rank " + std::to_string(rank));
    }
    return templates_[static_cast<std::size_t>(rank - 1)];
}

ParseTree Compressor::compress(ParseTree tree, std::size_t k, bool fixpoint,
                               std::vector<std::size_t>* applications) const {
    k = std::min(k, patterns_.size());
    if (applications && applications->size() < k) {
        applications->resize(k, 0);
    }
    auto first_idiom = static_cast<RuleId>(augmented_.base_rule_count());
    for (;;) {
        std::size_t pass = 0;
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t n = rewrite_tree(tree, patterns_[i], first_idiom + static_cast<RuleId>(i));
            if (applications) {
                (*applications)[i] += n;
            }
            pass += n;
        }
        if (!fixpoint || pass == 0) {
            return tree;
        }
    }
}

void Compressor::expand_into(const ParseTree& node, ParseTree& out) const {
    if (!node.is_internal()) {
        out = node;
        return;
    }
    std::vector<ParseTree> children(node.children.size());
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        expand_into(node.children[i], children[i]);
    }
    if (!augmented_.has_rule(node.rule)) {
        throw Error("unknown idiom rule id " + std::to_string(node.rule));
    }
    const ProductionRule& rule = augmented_.rule(node.rule);
    if (!rule.is_idiom()) {
        out = ParseTree{node.symbol, node.rule, std::move(children)};
        return;
    }
    out = templates_[static_cast<std::size_t>(rule.idiom_rank - 1)];
    if (frontier(out).size() != children.size()) {
        throw InvalidTree("idiom node for rule " + std::to_string(node.rule) + " has the wrong arity");
    }
    std::size_t next = 0;
    fill_slots(out, children, next);
}

ParseTree Compressor::expand(const ParseTree& tree) const {
    ParseTree out;
    expand_into(tree, out);
    return out;
}

ParseTree compress_tree(const ParseTree& tree, const IdiomSet& set, const Grammar& grammar,
                        const CompressOptions& options) {
    Compressor compressor(grammar, set);
    check_tree(tree, grammar.base_only(), Slots::allow);
    return compressor.compress(tree, options.k, options.fixpoint);
}

ParseTree expand_tree(const ParseTree& tree, const IdiomSet& set, const Grammar& grammar) {
    Compressor compressor(grammar, set);
    check_tree(tree, compressor.grammar(), Slots::allow);
    return compressor.expand(tree);
}

CompressedCorpus compress_corpus(std::span<const ParseTree> corpus, const Compressor& compressor,
                                 const CompressOptions& options) {
    const Grammar base = compressor.grammar().base_only();
    std::size_t k = std::min(options.k, compressor.idioms().size());
    CompressedCorpus out;
    out.trees.resize(corpus.size());
    out.report.k = k;
    out.report.fixpoint = options.fixpoint;
    out.report.trees.resize(corpus.size());
    std::vector<std::vector<std::size_t>> applications(std::max<std::size_t>(1, std::min(options.workers, corpus.size())),
                                                       std::vector<std::size_t>(k, 0));
    detail::parallel_slices(corpus.size(), options.workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
        for (std::size_t i = begin; i < end; ++i) {
            auto valid = validate_tree(corpus[i], base, Slots::allow);
            if (!valid.ok()) {
                throw InvalidTree("tree " + std::to_string(i) + ": " + valid.to_string());
            }
            out.trees[i] = compressor.compress(corpus[i], k, options.fixpoint, &applications[w]);
            auto& stats = out.report.trees[i];
            stats.original_rules = internal_node_count(corpus[i]);
            stats.compressed_rules = internal_node_count(out.trees[i]);
            stats.ratio = compression_ratio(stats.original_rules, stats.compressed_rules);
        }
    });
    out.report.applications.assign(k, 0);
    for (const auto& partial : applications) {
        for (std::size_t i = 0; i < k; ++i) {
            out.report.applications[i] += partial[i];
        }
    }
    for (const auto& t : out.report.trees) {
        out.report.total_before += t.original_rules;
        out.report.total_after += t.compressed_rules;
    }
    out.report.mean_ratio = mean(out.report.trees);
    out.report.median_ratio = median(out.report.trees);
    return out;
}

CompressedCorpus compress_corpus(std::span<const ParseTree> corpus, const IdiomSet& set, const Grammar& grammar,
                                 const CompressOptions& options) {
    return compress_corpus(corpus, Compressor(grammar, set), options);
}

std::vector<SweepRow> k_sweep(std::span<const ParseTree> corpus, const Compressor& compressor,
                              std::span<const std::size_t> ks, std::size_t workers) {
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] > compressor.idioms().size()) {
            throw Error("sweep K=" + std::to_string(ks[i]) + " exceeds the " +
                        std::to_string(compressor.idioms().size()) + " available idioms");
        }
        if (i > 0 && ks[i] < ks[i - 1]) {
            throw Error("sweep sizes must be ascending");
        }
    }
    for (std::size_t k : ks) {
        CompressOptions options;
        options.k = k;
        options.workers = workers;
        auto result = compress_corpus(corpus, compressor, options);
        rows.push_back({k, result.report.mean_ratio, result.report.total_before, result.report.total_after});
    }
    return rows;
}

std::string report_to_json(const CompressionReport& report) {
    nlohmann::json doc;
    doc["format_version"] = 1;
    doc["kind"] = "compression_report";
    doc["k"] = report.k;
    doc["fixpoint"] = report.fixpoint;
    nlohmann::json trees = nlohmann::json::array();
    for (std::size_t i = 0; i < report.trees.size(); ++i) {
        const auto& t = report.trees[i];
        trees.push_back({{"index", i},
                         {"original_rules", t.original_rules},
                         {"compressed_rules", t.compressed_rules},
                         {"ratio", t.ratio}});
    }
    doc["trees"] = std::move(trees);
    doc["aggregate"] = {{"mean_ratio", report.mean_ratio},
                        {"median_ratio", report.median_ratio},
                        {"total_before", report.total_before},
                        {"total_after", report.total_after}};
    nlohmann::json apps = nlohmann::json::array();
    for (std::size_t i = 0; i < report.applications.size(); ++i) {
        apps.push_back({{"rank", i + 1}, {"applications", report.applications[i]}});
    }
    doc["idiom_applications"] = std::move(apps);
    return doc.dump(1) + "\n";
}

std::string report_to_table(const CompressionReport& report) {
    std::ostringstream out;
    out << "trees " << report.trees.size() << ", K=" << report.k << (report.fixpoint ? " (fixpoint)" : "") << '\n';
    out << pad_left("tree", 6) << pad_left("|p|", 8) << pad_left("|r|", 8) << pad_left("ratio", 9) << '\n';
    for (std::size_t i = 0; i < report.trees.size(); ++i) {
        const auto& t = report.trees[i];
        out << pad_left(std::to_string(i), 6) << pad_left(std::to_string(t.original_rules), 8)
            << pad_left(std::to_string(t.compressed_rules), 8) << pad_left(fixed(t.ratio, 4), 9) << '\n';
    }
    out << "total rules " << report.total_before << " -> " << report.total_after << ", mean ratio "
        << fixed(report.mean_ratio, 4) << ", median ratio " << fixed(report.median_ratio, 4) << '\n';
    return out.str();
}

std::string sweep_to_json(std::span<const SweepRow> rows) {
    nlohmann::json doc;
    doc["format_version"] = 1;
    doc["kind"] = "k_sweep";
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows) {
        out.push_back({{"k", row.k},
                       {"mean_ratio", row.mean_ratio},
                       {"total_before", row.total_before},
                       {"total_after", row.total_after}});
    }
    doc["rows"] = std::move(out);
    return doc.dump(1) + "\n";
}

std::string sweep_to_table(std::span<const SweepRow> rows) {
    std::ostringstream out;
    out << pad_left("K", 6) << pad_left("mean ratio", 12) << pad_left("rules before", 14) << pad_left("rules after", 13)
        << '\n';
    for (const auto& row : rows) {
        out << pad_left(std::to_string(row.k), 6) << pad_left(fixed(row.mean_ratio, 4), 12)
            << pad_left(std::to_string(row.total_before), 14) << pad_left(std::to_string(row.total_after), 13) << '\n';
    }
    return out.str();
}

} // namespace idiomine
