#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "idiomine/compressor.hpp"
#include "idiomine/error.hpp"
#include "idiomine/grammar_io.hpp"
#include "idiomine/idiom_io.hpp"
#include "idiomine/miner.hpp"
#include "idiomine/minilang.hpp"
#include "idiomine/oracle.hpp"
#include "idiomine/tree_io.hpp"

namespace idiomine::cli {

namespace {

constexpr const char* kBuiltinMini = "builtin:mini";

struct RunConfig {
    std::string grammar;
    std::string grammar_out;
    std::vector<std::string> sources;
    std::string trees;
    std::string idioms;
    std::string output;
    std::string rewritten;
    std::string report;
    std::string sweep_json;
    std::string verify;
    std::size_t n = 200;
    std::int64_t min_count = 2;
    std::string tie_break = "lexicographic";
    bool no_identifier_idioms = false;
    bool fixpoint = false;
    bool strict = false;
    bool table = false;
    std::size_t workers = 1;
    std::uint64_t seed = 1;
    std::size_t count = 500;
    std::optional<std::size_t> k;
    std::vector<std::size_t> sweep;
    std::optional<std::size_t> top;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw Error("cannot write '" + path + "'");
    }
    file << content;
}

Grammar load_grammar(const std::string& spec) {
    if (spec == kBuiltinMini) {
        return minilang::mini_grammar();
    }
    return read_grammar_file(spec);
}

std::string trees_text(std::span<const ParseTree> trees, const Grammar& grammar) {
    std::ostringstream out;
    write_trees(out, trees, grammar);
    return out.str();
}

MiningConfig mining_config(const RunConfig& cfg) {
    MiningConfig config;
    config.max_idioms = cfg.n;
    config.min_count = cfg.min_count;
    auto policy = tie_break_from_string(cfg.tie_break);
    if (!policy) {
        throw CLI::ValidationError("--tie-break", "unknown policy '" + cfg.tie_break + "'");
    }
    config.tie_break = *policy;
    config.identifier_idioms = !cfg.no_identifier_idioms;
    config.workers = cfg.workers;
    return config;
}

void render_template(std::string& out, const ParseTree& node, const Grammar& grammar) {
    const Symbol& sym = grammar.symbol(node.symbol);
    if (sym.is_terminal()) {
        out += sym.name;
        return;
    }
    if (!node.is_internal()) {
        out += '<' + sym.name + '>';
        return;
    }
    out += '(' + sym.name + '@' + std::to_string(node.rule);
    for (const auto& child : node.children) {
        out += ' ';
        render_template(out, child, grammar);
    }
    out += ')';
}

int cmd_parse(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Grammar grammar = load_grammar(cfg.grammar);
    std::vector<ParseTree> trees;
    std::size_t failures = 0;
    for (const auto& path : cfg.sources) {
        for (const auto& program : minilang::split_corpus(read_text(path), path)) {
            try {
                trees.push_back(minilang::parse(program.text, grammar));
            } catch (const minilang::SourceError& e) {
                ++failures;
                err << path << ':' << (program.first_line + e.line() - 1) << ':' << e.column() << ": " << e.message()
                    << '\n';
            }
        }
    }
    if (failures == 0 || !cfg.strict) {
        emit(cfg.output, trees_text(trees, grammar), out);
        if (!cfg.grammar_out.empty()) {
            write_grammar_file(cfg.grammar_out, grammar);
        } else if (grammar.base_rule_count() != load_grammar(cfg.grammar).base_rule_count()) {
            err << "warning: lexical rules were added to the grammar; pass --grammar-out to keep them\n";
        }
    }
    if (failures != 0) {
        err << failures << " program(s) failed to parse\n";
        return kDomainError;
    }
    return kOk;
}

int cmd_demo_corpus(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    if (cfg.count < 1) {
        throw CLI::ValidationError("--count", "must be at least 1");
    }
    emit(cfg.output, minilang::join_corpus(minilang::generate_demo_corpus(cfg.seed, cfg.count)), out);
    return kOk;
}

int cmd_extract(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    MiningConfig config = mining_config(cfg);
    Grammar grammar = load_grammar(cfg.grammar);
    if (grammar.idiom_rule_count() != 0) {
        grammar = grammar.base_only();
    }
    auto corpus = read_tree_file(cfg.trees, grammar, Slots::allow);
    std::size_t before = 0;
    for (const auto& t : corpus) {
        before += internal_node_count(t);
    }
    auto result = extract_idioms(std::move(corpus), grammar, config);
    std::size_t after = 0;
    for (const auto& t : result.corpus) {
        after += internal_node_count(t);
    }
    emit(cfg.output, idiom_set_to_json(result.idioms, result.grammar), out);
    if (!cfg.rewritten.empty()) {
        emit(cfg.rewritten, trees_text(result.corpus, result.grammar), out);
    }
    if (!cfg.output.empty()) {
        out << "extracted " << result.idioms.size() << " idioms (halt: " << to_string(result.halt)
            << "); corpus rules " << before << " -> " << after << '\n';
    }
    return kOk;
}

int cmd_compress(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    Grammar grammar = load_grammar(cfg.grammar).base_only();
    Compressor compressor(grammar, read_idiom_file(cfg.idioms, grammar));
    auto corpus = read_tree_file(cfg.trees, grammar, Slots::allow);

    if (!cfg.sweep.empty()) {
        auto rows = k_sweep(corpus, compressor, cfg.sweep, cfg.workers);
        if (!cfg.sweep_json.empty()) {
            emit(cfg.sweep_json, sweep_to_json(rows), out);
        }
        out << sweep_to_table(rows);
        return kOk;
    }

    CompressOptions options;
    if (cfg.k) {
        if (*cfg.k > compressor.idioms().size()) {
            throw CLI::ValidationError("--k", "exceeds the " + std::to_string(compressor.idioms().size()) +
                                                  " idioms in the file");
        }
        options.k = *cfg.k;
    }
    options.fixpoint = cfg.fixpoint;
    options.workers = cfg.workers;
    auto result = compress_corpus(corpus, compressor, options);
    emit(cfg.output, trees_text(result.trees, compressor.grammar()), out);
    if (!cfg.report.empty()) {
        emit(cfg.report, report_to_json(result.report), out);
    }
    if (cfg.table) {
        out << report_to_table(result.report);
    } else if (!cfg.output.empty()) {
        char ratio[32];
        std::snprintf(ratio, sizeof ratio, "%.4f", result.report.mean_ratio);
        out << "compressed " << result.trees.size() << " trees with K=" << result.report.k << "; rules "
            << result.report.total_before << " -> " << result.report.total_after << "; mean ratio " << ratio << '\n';
    }
    return kOk;
}

int cmd_expand(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Grammar grammar = load_grammar(cfg.grammar).base_only();
    Compressor compressor(grammar, read_idiom_file(cfg.idioms, grammar));
    auto compressed = read_tree_file(cfg.trees, compressor.grammar(), Slots::allow);
    std::vector<ParseTree> expanded;
    expanded.reserve(compressed.size());
    for (const auto& tree : compressed) {
        expanded.push_back(compressor.expand(tree));
    }
    emit(cfg.output, trees_text(expanded, grammar), out);
    if (cfg.verify.empty()) {
        return kOk;
    }
    auto original = read_tree_file(cfg.verify, grammar, Slots::allow);
    std::size_t mismatches = 0;
    std::size_t common = std::min(original.size(), expanded.size());
    for (std::size_t i = 0; i < common; ++i) {
        if (!(original[i] == expanded[i])) {
            ++mismatches;
            err << "line " << (i + 1) << ": expanded tree differs from the original\n";
        }
    }
    if (original.size() != expanded.size()) {
        ++mismatches;
        err << "tree count differs: " << expanded.size() << " expanded vs " << original.size() << " original\n";
    }
    if (mismatches != 0) {
        err << mismatches << " mismatch(es)\n";
        return kDomainError;
    }
    err << "verified " << expanded.size() << " trees, 0 mismatches\n";
    return kOk;
}

int cmd_catalog(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    Grammar grammar = load_grammar(cfg.grammar).base_only();
    Compressor compressor(grammar, read_idiom_file(cfg.idioms, grammar));
    const IdiomSet& set = compressor.idioms();
    std::size_t limit = std::min(cfg.top.value_or(set.size()), set.size());
    std::string text;
    for (std::size_t i = 0; i < limit; ++i) {
        const Idiom& idiom = set.idioms[i];
        RuleId id = compressor.grammar().base_rule_count() + i;
        text += '#' + std::to_string(idiom.rank) + "  " + compressor.grammar().rule_to_string(id, true) +
                "    [support " + std::to_string(idiom.support) + "]\n";
        text += "    ";
        render_template(text, compressor.idiom_template(idiom.rank), grammar);
        text += '\n';
    }
    emit(cfg.output, text, out);
    return kOk;
}

int cmd_oracle_counts(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    Grammar grammar = load_grammar(cfg.grammar).base_only();
    auto corpus = read_tree_file(cfg.trees, grammar, Slots::allow);
    auto counts = oracle::brute_force_counts(corpus);
    std::map<Depth2Pattern, std::int64_t> sorted(counts.begin(), counts.end());
    std::string text;
    for (const auto& [p, n] : sorted) {
        text += std::to_string(p.parent) + ' ' + std::to_string(p.child_pos) + ' ' + std::to_string(p.child) + ' ' +
                std::to_string(n) + '\n';
    }
    emit(cfg.output, text, out);
    return kOk;
}

int cmd_oracle_extract(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    MiningConfig config = mining_config(cfg);
    Grammar grammar = load_grammar(cfg.grammar).base_only();
    auto corpus = read_tree_file(cfg.trees, grammar, Slots::allow);
    auto result = oracle::reference_extract(std::move(corpus), grammar, config);
    emit(cfg.output, idiom_set_to_json(result.idioms, augment_grammar(grammar, result.idioms)), out);
    return kOk;
}

void add_workers(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--workers", cfg.workers, "Worker threads for per-tree work")->check(CLI::PositiveNumber);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Mine frequent depth-2 subtree idioms from parse trees and compress trees with them", "idiomine"};
    app.require_subcommand(1);

    auto* parse = app.add_subcommand("parse", "Parse mini-language sources into a tree file");
    parse->add_option("sources", cfg.sources, "Source files; '%%' lines separate programs")->required();
    parse->add_option("--grammar", cfg.grammar, "Grammar file or builtin:mini")->required();
    parse->add_option("--grammar-out", cfg.grammar_out, "Write the grammar including added lexical rules");
    parse->add_option("-o,--output", cfg.output, "Tree file (default stdout)");
    parse->add_flag("--strict", cfg.strict, "Emit nothing if any program fails to parse");

    auto* demo = app.add_subcommand("demo-corpus", "Generate the deterministic demo corpus");
    demo->add_option("--seed", cfg.seed, "Generator seed");
    demo->add_option("--count", cfg.count, "Number of programs");
    demo->add_option("-o,--output", cfg.output, "Corpus file (default stdout)");

    auto* extract = app.add_subcommand("extract", "Extract idioms from a tree file");
    extract->add_option("--trees", cfg.trees, "Tree file")->required();
    extract->add_option("--grammar", cfg.grammar, "Grammar file or builtin:mini")->required();
    extract->add_option("-n", cfg.n, "Maximum number of idioms")->check(CLI::NonNegativeNumber);
    extract->add_option("--min-count", cfg.min_count, "Minimum pattern support")->check(CLI::PositiveNumber);
    extract->add_option("--tie-break", cfg.tie_break, "lexicographic | reverse-lexicographic");
    extract->add_flag("--no-identifier-idioms", cfg.no_identifier_idioms, "Skip patterns whose child is a lexical rule");
    extract->add_option("-o,--output", cfg.output, "Idiom file (default stdout)");
    extract->add_option("--rewritten", cfg.rewritten, "Also write the rewritten corpus");
    add_workers(extract, cfg);

    auto* compress = app.add_subcommand("compress", "Compress trees with an idiom set");
    compress->add_option("--trees", cfg.trees, "Tree file")->required();
    compress->add_option("--idioms", cfg.idioms, "Idiom file")->required();
    compress->add_option("--grammar", cfg.grammar, "Grammar file or builtin:mini")->required();
    compress->add_option("--k", cfg.k, "Use only the top K idioms")->check(CLI::NonNegativeNumber);
    compress->add_option("--sweep", cfg.sweep, "Comma-separated ascending K values")->delimiter(',');
    compress->add_option("--sweep-json", cfg.sweep_json, "Write the sweep table as JSON");
    compress->add_flag("--fixpoint", cfg.fixpoint, "Repeat the idiom pass until nothing changes");
    compress->add_option("-o,--output", cfg.output, "Compressed tree file (default stdout)");
    compress->add_option("--report", cfg.report, "Write the compression report as JSON");
    compress->add_flag("--table", cfg.table, "Print the per-tree report table");
    add_workers(compress, cfg);

    auto* expand = app.add_subcommand("expand", "Expand idiom nodes back to base-grammar trees");
    expand->add_option("--trees", cfg.trees, "Compressed tree file")->required();
    expand->add_option("--idioms", cfg.idioms, "Idiom file")->required();
    expand->add_option("--grammar", cfg.grammar, "Grammar file or builtin:mini")->required();
    expand->add_option("--verify", cfg.verify, "Compare against the original tree file");
    expand->add_option("-o,--output", cfg.output, "Tree file (default stdout)");

    auto* catalog = app.add_subcommand("catalog", "Print idioms with their expanded templates");
    catalog->add_option("--idioms", cfg.idioms, "Idiom file")->required();
    catalog->add_option("--grammar", cfg.grammar, "Grammar file or builtin:mini")->required();
    catalog->add_option("--top", cfg.top, "Only the first K idioms");
    catalog->add_option("-o,--output", cfg.output, "Output file (default stdout)");

    auto* oracle_cmd = app.add_subcommand("oracle", "Reference implementations (debugging)");
    oracle_cmd->group("");
    oracle_cmd->require_subcommand(1);
    auto* oracle_counts = oracle_cmd->add_subcommand("counts", "Brute-force pattern counts");
    oracle_counts->add_option("--trees", cfg.trees)->required();
    oracle_counts->add_option("--grammar", cfg.grammar)->required();
    oracle_counts->add_option("-o,--output", cfg.output);
    auto* oracle_extract = oracle_cmd->add_subcommand("extract", "Reference idiom extraction");
    oracle_extract->add_option("--trees", cfg.trees)->required();
    oracle_extract->add_option("--grammar", cfg.grammar)->required();
    oracle_extract->add_option("-n", cfg.n);
    oracle_extract->add_option("--min-count", cfg.min_count)->check(CLI::PositiveNumber);
    oracle_extract->add_option("--tie-break", cfg.tie_break);
    oracle_extract->add_flag("--no-identifier-idioms", cfg.no_identifier_idioms);
    oracle_extract->add_option("-o,--output", cfg.output);

    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (*parse) {
            return cmd_parse(cfg, out, err);
        }
        if (*demo) {
            return cmd_demo_corpus(cfg, out, err);
        }
        if (*extract) {
            return cmd_extract(cfg, out, err);
        }
        if (*compress) {
            return cmd_compress(cfg, out, err);
        }
        if (*expand) {
            return cmd_expand(cfg, out, err);
        }
        if (*catalog) {
            return cmd_catalog(cfg, out, err);
        }
        if (*oracle_counts) {
            return cmd_oracle_counts(cfg, out, err);
        }
        if (*oracle_extract) {
            return cmd_oracle_extract(cfg, out, err);
        }
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    }
    return kUsageError;
}

} // namespace idiomine::cli
