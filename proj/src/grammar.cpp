#include "idiomine/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "idiomine/error.hpp"

namespace idiomine {

namespace {

// FNV-1a, 64 bit, over length-prefixed fields.
class Fnv1a {
public:
    void bytes(std::string_view data) {
        for (unsigned char c : data) {
            hash_ ^= c;
            hash_ *= 0x100000001b3ULL;
        }
    }
    void field(std::string_view data) {
        number(data.size());
        bytes(data);
    }
    void number(std::uint64_t value) {
        for (int i = 0; i < 8; ++i) {
            unsigned char c = static_cast<unsigned char>(value >> (8 * i));
            bytes(std::string_view(reinterpret_cast<const char*>(&c), 1));
        }
    }
    std::uint64_t value() const noexcept { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

} // namespace

SymbolId Grammar::add_nonterminal(std::string_view name) {
    std::string key(name);
    if (nonterminal_index_.contains(key)) {
        throw Error("duplicate nonterminal '" + key + "'");
    }
    bool bad = name.empty() || name.front() == '\'' || std::any_of(name.begin(), name.end(), [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"' || c == '@';
    });
    if (bad) {
        throw Error("invalid nonterminal name '" + key + "'");
    }
    auto id = static_cast<SymbolId>(symbols_.size());
    symbols_.push_back({key, SymbolKind::nonterminal});
    nonterminal_index_.emplace(std::move(key), id);
    return id;
}

SymbolId Grammar::add_terminal(std::string_view name) {
    std::string key(name);
    if (auto it = terminal_index_.find(key); it != terminal_index_.end()) {
        return it->second;
    }
    if (name.empty()) {
        throw Error("empty terminal name");
    }
    auto id = static_cast<SymbolId>(symbols_.size());
    symbols_.push_back({key, SymbolKind::terminal});
    terminal_index_.emplace(std::move(key), id);
    return id;
}

std::optional<SymbolId> Grammar::find_nonterminal(std::string_view name) const {
    if (auto it = nonterminal_index_.find(std::string(name)); it != nonterminal_index_.end()) {
        return it->second;
    }
    return std::nullopt;
}

std::optional<SymbolId> Grammar::find_terminal(std::string_view name) const {
    if (auto it = terminal_index_.find(std::string(name)); it != terminal_index_.end()) {
        return it->second;
    }
    return std::nullopt;
}

void Grammar::check_symbol(SymbolId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= symbols_.size()) {
        throw Error("unknown symbol id " + std::to_string(id));
    }
}

void Grammar::set_start(SymbolId nonterminal) {
    check_symbol(nonterminal);
    if (is_terminal(nonterminal)) {
        throw Error("start symbol must be a nonterminal");
    }
    start_ = nonterminal;
}

void Grammar::add_lexical_class(SymbolId nonterminal) {
    check_symbol(nonterminal);
    if (is_terminal(nonterminal)) {
        throw Error("lexical class must be a nonterminal");
    }
    if (is_lexical_class(nonterminal)) {
        return;
    }
    lexical_classes_.push_back(nonterminal);
    for (auto& rule : rules_) {
        if (rule.lhs == nonterminal && !rule.is_idiom() && rule.rhs.size() == 1 && is_terminal(rule.rhs[0])) {
            rule.lexical = true;
            lexical_index_.try_emplace({nonterminal, rule.rhs[0]}, rule.id);
        }
    }
}

bool Grammar::is_lexical_class(SymbolId nonterminal) const {
    return std::find(lexical_classes_.begin(), lexical_classes_.end(), nonterminal) != lexical_classes_.end();
}

RuleId Grammar::add_rule(SymbolId lhs, std::vector<SymbolId> rhs) {
    if (idiom_rule_count() != 0) {
        throw Error("base rules cannot be added after idiom rules");
    }
    check_symbol(lhs);
    if (is_terminal(lhs)) {
        throw Error("rule lhs '" + symbol(lhs).name + "' is a terminal");
    }
    if (rhs.empty()) {
        throw Error("rule for '" + symbol(lhs).name + "' has an empty right-hand side");
    }
    for (SymbolId s : rhs) {
        check_symbol(s);
    }
    ProductionRule rule;
    rule.id = static_cast<RuleId>(rules_.size());
    rule.lhs = lhs;
    rule.rhs = std::move(rhs);
    rule.lexical = is_lexical_class(lhs) && rule.rhs.size() == 1 && is_terminal(rule.rhs[0]);
    if (rule.lexical) {
        lexical_index_.try_emplace({lhs, rule.rhs[0]}, rule.id);
    }
    rules_.push_back(std::move(rule));
    base_rule_count_ = rules_.size();
    return rules_.back().id;
}

RuleId Grammar::add_idiom_rule(SymbolId lhs, std::vector<SymbolId> rhs, int rank) {
    check_symbol(lhs);
    if (is_terminal(lhs) || rhs.empty()) {
        throw Error("malformed idiom rule");
    }
    if (rank != static_cast<int>(idiom_rule_count()) + 1) {
        throw Error("idiom rank " + std::to_string(rank) + " registered out of order");
    }
    for (SymbolId s : rhs) {
        check_symbol(s);
    }
    ProductionRule rule;
    rule.id = static_cast<RuleId>(rules_.size());
    rule.lhs = lhs;
    rule.rhs = std::move(rhs);
    rule.idiom_rank = rank;
    rules_.push_back(std::move(rule));
    return rules_.back().id;
}

RuleId Grammar::lexical_rule(SymbolId lexical_class, std::string_view lexeme) {
    if (!is_lexical_class(lexical_class)) {
        throw Error("'" + symbol(lexical_class).name + "' is not a lexical class");
    }
    SymbolId terminal = add_terminal(lexeme);
    if (auto it = lexical_index_.find({lexical_class, terminal}); it != lexical_index_.end()) {
        return it->second;
    }
    return add_rule(lexical_class, {terminal});
}

std::uint64_t Grammar::fingerprint(std::size_t base_prefix) const {
    base_prefix = std::min(base_prefix, base_rule_count_);
    Fnv1a h;
    h.field("idiomine-grammar");
    for (const auto& s : symbols_) {
        if (!s.is_terminal()) {
            h.field(s.name);
        }
    }
    h.field("lexical");
    for (SymbolId c : lexical_classes_) {
        h.field(symbol(c).name);
    }
    h.field("start");
    h.field(start_ >= 0 ? symbol(start_).name : std::string());
    h.field("rules");
    h.number(base_prefix);
    for (std::size_t i = 0; i < base_prefix; ++i) {
        const auto& rule = rules_[i];
        h.field(symbol(rule.lhs).name);
        h.number(rule.rhs.size());
        for (SymbolId s : rule.rhs) {
            h.field(is_terminal(s) ? "t" : "n");
            h.field(symbol(s).name);
        }
    }
    return h.value();
}

Grammar Grammar::base_only() const {
    Grammar copy = *this;
    copy.rules_.resize(base_rule_count_);
    return copy;
}

std::string Grammar::rule_to_string(RuleId id, bool mark_slots) const {
    const auto& r = rule(id);
    std::string out = symbol(r.lhs).name + " ->";
    for (SymbolId s : r.rhs) {
        out += ' ';
        if (mark_slots && !is_terminal(s)) {
            out += '<' + symbol(s).name + '>';
        } else {
            out += symbol(s).name;
        }
    }
    return out;
}

std::string fingerprint_hex(std::uint64_t fingerprint) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fingerprint));
    return buf;
}

} // namespace idiomine
