#include "idiomine/idiom_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "idiomine/error.hpp"
#include "idiomine/grammar_io.hpp"

namespace idiomine {

using nlohmann::json;

namespace {

std::uint64_t parse_fingerprint(const std::string& hex) {
    if (hex.size() != 16 || hex.find_first_not_of("0123456789abcdef") != std::string::npos) {
        throw Error("idiom file: malformed fingerprint '" + hex + "'");
    }
    return std::stoull(hex, nullptr, 16);
}

json rhs_json(const Grammar& grammar, const std::vector<SymbolId>& rhs) {
    json out = json::array();
    for (SymbolId s : rhs) {
        out.push_back(encode_rhs_symbol(grammar, s));
    }
    return out;
}

} // namespace

std::string idiom_set_to_json(const IdiomSet& set, const Grammar& grammar) {
    json doc;
    doc["format_version"] = kIdiomFormatVersion;
    doc["kind"] = "idiom_set";
    doc["fingerprint"] = fingerprint_hex(set.fingerprint);
    doc["base_rule_count"] = set.base_rule_count;
    doc["config"] = {{"n", set.config.max_idioms},
                     {"min_count", set.config.min_count},
                     {"tie_break", std::string(to_string(set.config.tie_break))},
                     {"identifier_idioms", set.config.identifier_idioms},
                     {"counting", "all-incidences"},
                     {"unit", "single-child"}};
    json idioms = json::array();
    for (const Idiom& idiom : set.idioms) {
        idioms.push_back({{"rank", idiom.rank},
                          {"rule_id", set.rule_id(idiom.rank)},
                          {"lhs", grammar.symbol(idiom.rule.lhs).name},
                          {"rhs", rhs_json(grammar, idiom.rule.rhs)},
                          {"provenance",
                           {{"parent_rule", idiom.provenance.parent},
                            {"child_pos", idiom.provenance.child_pos},
                            {"child_rule", idiom.provenance.child}}},
                          {"support", idiom.support}});
    }
    doc["idioms"] = std::move(idioms);
    return doc.dump(1) + "\n";
}

IdiomSet idiom_set_from_json(std::string_view text, const Grammar& grammar) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SyntaxError(std::string("idiom file: ") + e.what(), e.byte);
    }
    IdiomSet set;
    std::vector<std::pair<std::string, json>> recorded;
    try {
        if (!doc.contains("format_version") || doc.at("format_version").get<int>() != kIdiomFormatVersion) {
            throw Error("idiom file: unsupported or missing format_version");
        }
        if (doc.value("kind", "") != "idiom_set") {
            throw Error("idiom file: kind is not idiom_set");
        }
        set.fingerprint = parse_fingerprint(doc.at("fingerprint").get<std::string>());
        set.base_rule_count = doc.at("base_rule_count").get<std::size_t>();
        const json& config = doc.at("config");
        set.config.max_idioms = config.at("n").get<std::size_t>();
        set.config.min_count = config.at("min_count").get<std::int64_t>();
        auto policy = tie_break_from_string(config.at("tie_break").get<std::string>());
        if (!policy) {
            throw Error("idiom file: unknown tie_break policy");
        }
        set.config.tie_break = *policy;
        set.config.identifier_idioms = config.at("identifier_idioms").get<bool>();
        int expected_rank = 1;
        for (const json& record : doc.at("idioms")) {
            Idiom idiom;
            idiom.rank = record.at("rank").get<int>();
            if (idiom.rank != expected_rank++) {
                throw Error("idiom file: ranks are not contiguous at rank " + std::to_string(idiom.rank));
            }
            const json& prov = record.at("provenance");
            idiom.provenance = {prov.at("parent_rule").get<RuleId>(), prov.at("child_pos").get<std::int32_t>(),
                                prov.at("child_rule").get<RuleId>()};
            RuleId own = set.rule_id(idiom.rank);
            if (idiom.provenance.parent < 0 || idiom.provenance.child < 0 || idiom.provenance.parent >= own ||
                idiom.provenance.child >= own) {
                throw Error("idiom file: idiom " + std::to_string(idiom.rank) + " has dangling provenance");
            }
            if (record.contains("rule_id") && record.at("rule_id").get<RuleId>() != own) {
                throw Error("idiom file: idiom " + std::to_string(idiom.rank) + " has rule_id " +
                            record.at("rule_id").dump() + ", expected " + std::to_string(own));
            }
            idiom.support = record.at("support").get<std::int64_t>();
            recorded.emplace_back(record.at("lhs").get<std::string>(), record.at("rhs"));
            set.idioms.push_back(std::move(idiom));
        }
    } catch (const json::exception& e) {
        throw Error(std::string("idiom file: ") + e.what());
    }

    Grammar augmented = augment_grammar(grammar, set);
    for (std::size_t i = 0; i < set.idioms.size(); ++i) {
        Idiom& idiom = set.idioms[i];
        idiom.rule = augmented.rule(static_cast<RuleId>(augmented.base_rule_count() + i));
        idiom.rule.id = set.rule_id(idiom.rank);
        std::vector<std::string> rhs;
        for (SymbolId s : idiom.rule.rhs) {
            rhs.push_back(encode_rhs_symbol(augmented, s));
        }
        const auto& [lhs, rhs_recorded] = recorded[i];
        if (lhs != augmented.symbol(idiom.rule.lhs).name || rhs_recorded != json(rhs)) {
            throw Error("idiom file: idiom " + std::to_string(idiom.rank) +
                        " does not match the collapse of its provenance");
        }
    }
    return set;
}

IdiomSet read_idiom_file(const std::string& path, const Grammar& grammar) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open idiom file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return idiom_set_from_json(buf.str(), grammar);
}

void write_idiom_file(const std::string& path, const IdiomSet& set, const Grammar& grammar) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write idiom file '" + path + "'");
    }
    out << idiom_set_to_json(set, grammar);
}

} // namespace idiomine
