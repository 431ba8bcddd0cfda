#include "idiomine/grammar_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "idiomine/error.hpp"

namespace idiomine {

using nlohmann::json;

std::string encode_rhs_symbol(const Grammar& grammar, SymbolId symbol) {
    const Symbol& s = grammar.symbol(symbol);
    if (!s.is_terminal()) {
        return s.name;
    }
    if (grammar.find_nonterminal(s.name) || s.name.front() == '\'') {
        return "'" + s.name;
    }
    return s.name;
}

SymbolId decode_rhs_symbol(const Grammar& grammar, std::string_view entry) {
    if (!entry.empty() && entry.front() == '\'') {
        if (auto t = grammar.find_terminal(entry.substr(1))) {
            return *t;
        }
        throw Error("unknown terminal '" + std::string(entry.substr(1)) + "'");
    }
    if (auto n = grammar.find_nonterminal(entry)) {
        return *n;
    }
    if (auto t = grammar.find_terminal(entry)) {
        return *t;
    }
    throw Error("unknown symbol '" + std::string(entry) + "'");
}

std::string grammar_to_json(const Grammar& grammar) {
    json doc;
    doc["format_version"] = kGrammarFormatVersion;
    json nonterminals = json::array();
    json terminals = json::array();
    for (std::size_t i = 0; i < grammar.symbol_count(); ++i) {
        const Symbol& s = grammar.symbol(static_cast<SymbolId>(i));
        (s.is_terminal() ? terminals : nonterminals).push_back(s.name);
    }
    doc["nonterminals"] = std::move(nonterminals);
    doc["terminals"] = std::move(terminals);
    json lexical = json::array();
    for (SymbolId c : grammar.lexical_classes()) {
        lexical.push_back(grammar.symbol(c).name);
    }
    doc["lexical"] = std::move(lexical);
    doc["start"] = grammar.start() >= 0 ? grammar.symbol(grammar.start()).name : "";
    json rules = json::array();
    for (std::size_t i = 0; i < grammar.base_rule_count(); ++i) {
        const auto& rule = grammar.rule(static_cast<RuleId>(i));
        json rhs = json::array();
        for (SymbolId s : rule.rhs) {
            rhs.push_back(encode_rhs_symbol(grammar, s));
        }
        rules.push_back({{"lhs", grammar.symbol(rule.lhs).name}, {"rhs", std::move(rhs)}});
    }
    doc["rules"] = std::move(rules);
    return doc.dump(1) + "\n";
}

Grammar grammar_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SyntaxError(std::string("grammar file: ") + e.what(), e.byte);
    }
    try {
        if (!doc.contains("format_version")) {
            throw Error("grammar file: missing format_version");
        }
        if (doc.at("format_version").get<int>() != kGrammarFormatVersion) {
            throw Error("grammar file: unsupported format_version " + doc.at("format_version").dump());
        }
        Grammar g;
        for (const auto& name : doc.at("nonterminals")) {
            g.add_nonterminal(name.get<std::string>());
        }
        for (const auto& name : doc.value("terminals", json::array())) {
            g.add_terminal(name.get<std::string>());
        }
        for (const auto& name : doc.value("lexical", json::array())) {
            auto id = g.find_nonterminal(name.get<std::string>());
            if (!id) {
                throw Error("grammar file: unknown lexical class '" + name.get<std::string>() + "'");
            }
            g.add_lexical_class(*id);
        }
        auto start = g.find_nonterminal(doc.at("start").get<std::string>());
        if (!start) {
            throw Error("grammar file: start symbol is not a nonterminal");
        }
        g.set_start(*start);
        for (const auto& rule : doc.at("rules")) {
            auto lhs = g.find_nonterminal(rule.at("lhs").get<std::string>());
            if (!lhs) {
                throw Error("grammar file: unknown lhs '" + rule.at("lhs").get<std::string>() + "'");
            }
            std::vector<SymbolId> rhs;
            for (const auto& entry : rule.at("rhs")) {
                rhs.push_back(decode_rhs_symbol(g, entry.get<std::string>()));
            }
            g.add_rule(*lhs, std::move(rhs));
        }
        return g;
    } catch (const json::exception& e) {
        throw Error(std::string("grammar file: ") + e.what());
    }
}

Grammar read_grammar_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open grammar file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return grammar_from_json(buf.str());
}

void write_grammar_file(const std::string& path, const Grammar& grammar) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write grammar file '" + path + "'");
    }
    out << grammar_to_json(grammar);
}

} // namespace idiomine
