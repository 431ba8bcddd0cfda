#include "idiomine/tree_io.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

#include "idiomine/error.hpp"

namespace idiomine {

namespace {

void append_quoted(std::string& out, std::string_view lexeme) {
    out += '"';
    for (char c : lexeme) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        default: out += c;
        }
    }
    out += '"';
}

void append_tree(std::string& out, const ParseTree& node, const Grammar& grammar) {
    const Symbol& sym = grammar.symbol(node.symbol);
    if (sym.is_terminal()) {
        append_quoted(out, sym.name);
        return;
    }
    if (!node.is_internal()) {
        out += sym.name;
        return;
    }
    out += '(';
    out += sym.name;
    out += '@';
    out += std::to_string(node.rule);
    for (const auto& child : node.children) {
        out += ' ';
        append_tree(out, child, grammar);
    }
    out += ')';
}

bool is_name_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '"' && c != '@';
}

class TreeReader {
public:
    TreeReader(std::string_view text, const Grammar& grammar) : text_(text), grammar_(grammar) {}

    ParseTree read() {
        skip_space();
        if (at_end() || peek() != '(') {
            fail("expected '('");
        }
        ParseTree tree = node();
        skip_space();
        if (!at_end()) {
            fail("trailing characters after tree");
        }
        return tree;
    }

private:
    ParseTree node() {
        std::size_t start = pos_;
        ++pos_; // '('
        std::string name = read_name();
        if (name.empty()) {
            fail("expected nonterminal name");
        }
        if (at_end() || peek() != '@') {
            fail("expected '@' after '" + name + "'");
        }
        ++pos_;
        std::size_t digits = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            ++pos_;
        }
        if (digits == pos_ || pos_ - digits > 9) {
            fail("expected rule id");
        }
        auto symbol = grammar_.find_nonterminal(name);
        if (!symbol) {
            fail_at(start + 1, "unknown nonterminal '" + name + "'");
        }
        ParseTree tree{*symbol, std::stoi(std::string(text_.substr(digits, pos_ - digits))), {}};
        for (;;) {
            std::size_t before = pos_;
            skip_space();
            if (at_end()) {
                fail_at(start, "unbalanced '('");
            }
            char c = peek();
            if (c == ')') {
                ++pos_;
                break;
            }
            if (before == pos_) {
                fail("expected whitespace before child");
            }
            if (c == '(') {
                tree.children.push_back(node());
            } else if (c == '"') {
                tree.children.push_back(terminal());
            } else {
                std::size_t at = pos_;
                std::string slot = read_name();
                if (slot.empty()) {
                    fail("unexpected character '" + std::string(1, c) + "'");
                }
                auto id = grammar_.find_nonterminal(slot);
                if (!id) {
                    fail_at(at, "unknown nonterminal '" + slot + "'");
                }
                tree.children.push_back(ParseTree::leaf(*id));
            }
        }
        return tree;
    }

    ParseTree terminal() {
        std::size_t start = pos_;
        ++pos_; // opening quote
        std::string lexeme;
        for (;;) {
            if (at_end()) {
                fail_at(start, "unterminated lexeme");
            }
            char c = text_[pos_++];
            if (c == '"') {
                break;
            }
            if (c == '\\') {
                if (at_end()) {
                    fail_at(start, "unterminated lexeme");
                }
                char e = text_[pos_++];
                if (e == 'n') {
                    lexeme += '\n';
                } else if (e == '"' || e == '\\') {
                    lexeme += e;
                } else {
                    fail_at(pos_ - 2, "bad escape");
                }
            } else {
                lexeme += c;
            }
        }
        auto id = grammar_.find_terminal(lexeme);
        if (!id) {
            fail_at(start, "unknown terminal \"" + lexeme + "\"");
        }
        return ParseTree::leaf(*id);
    }

    std::string read_name() {
        std::size_t start = pos_;
        while (!at_end() && is_name_char(peek())) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
            ++pos_;
        }
    }

    bool at_end() const noexcept { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(message, pos_); }
    [[noreturn]] void fail_at(std::size_t at, const std::string& message) const { throw SyntaxError(message, at); }

    std::string_view text_;
    const Grammar& grammar_;
    std::size_t pos_ = 0;
};

bool blank(std::string_view line) {
    for (char c : line) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

} // namespace

std::string serialize_tree(const ParseTree& tree, const Grammar& grammar) {
    std::string out;
    append_tree(out, tree, grammar);
    return out;
}

ParseTree deserialize_tree(std::string_view text, const Grammar& grammar, Slots slots) {
    ParseTree tree = TreeReader(text, grammar).read();
    check_tree(tree, grammar, slots);
    return tree;
}

std::vector<ParseTree> read_trees(std::istream& in, const Grammar& grammar, Slots slots) {
    std::vector<ParseTree> trees;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) {
            continue;
        }
        try {
            trees.push_back(deserialize_tree(line, grammar, slots));
        } catch (const SyntaxError& e) {
            throw SyntaxError("line " + std::to_string(line_no) + ": " + e.message(), e.offset());
        } catch (const InvalidTree& e) {
            throw InvalidTree("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return trees;
}

std::vector<ParseTree> read_tree_file(const std::string& path, const Grammar& grammar, Slots slots) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open tree file '" + path + "'");
    }
    return read_trees(in, grammar, slots);
}

void write_trees(std::ostream& out, std::span<const ParseTree> trees, const Grammar& grammar) {
    for (const auto& tree : trees) {
        out << serialize_tree(tree, grammar) << '\n';
    }
}

} // namespace idiomine
