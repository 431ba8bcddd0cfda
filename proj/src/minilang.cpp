#include "idiomine/minilang.hpp"

#include <array>
#include <cctype>
#include <sstream>
#include <unordered_map>

namespace idiomine::minilang {

namespace {

constexpr std::array kKeywords = {"if",  "else", "while",   "for",  "try",   "catch", "throw", "return",
                                  "new", "int",  "boolean", "true", "false", "null",  "this"};

// Longest match first.
constexpr std::array kPunct = {"++", "--", "<=", ">=", "==", "!=", "{", "}", "(", ")", ";", ",",
                               ".",  "=",  "<",  ">",  "+",  "-",  "*", "/", "%", "!"};

// Base productions, in rule-id order.
constexpr std::array kRules = {
    "Program -> StmtList",
    "StmtList -> Statement StmtList",
    "StmtList -> Statement",
    "Statement -> Block",
    "Statement -> if ParExpr Statement IfOrElse",
    "Statement -> if ParExpr Statement",
    "Statement -> while ParExpr Statement",
    "Statement -> for ( ForInit ; Expr ; Expr ) Statement",
    "Statement -> try Block CatchClause",
    "Statement -> throw Expr ;",
    "Statement -> return Expr ;",
    "Statement -> return ;",
    "Statement -> LocalVarDecl ;",
    "Statement -> Expr ;",
    "Block -> { StmtList }",
    "Block -> { }",
    "IfOrElse -> else Statement",
    "ParExpr -> ( Expr )",
    "ForInit -> LocalVarDecl",
    "ForInit -> Expr",
    "CatchClause -> catch ( Type Name ) Block",
    "LocalVarDecl -> Type VarDeclarator",
    "VarDeclarator -> Name = Expr",
    "VarDeclarator -> Name",
    "Type -> PrimitiveType",
    "Type -> Name",
    "PrimitiveType -> int",
    "PrimitiveType -> boolean",
    "Expr -> RelExpr = Expr",
    "Expr -> RelExpr",
    "RelExpr -> AddExpr RelOp AddExpr",
    "RelExpr -> AddExpr",
    "RelOp -> <",
    "RelOp -> >",
    "RelOp -> <=",
    "RelOp -> >=",
    "RelOp -> ==",
    "RelOp -> !=",
    "AddExpr -> AddExpr AddOp MulExpr",
    "AddExpr -> MulExpr",
    "AddOp -> +",
    "AddOp -> -",
    "MulExpr -> MulExpr MulOp UnaryExpr",
    "MulExpr -> UnaryExpr",
    "MulOp -> *",
    "MulOp -> /",
    "MulOp -> %",
    "UnaryExpr -> - UnaryExpr",
    "UnaryExpr -> ! UnaryExpr",
    "UnaryExpr -> PostfixExpr",
    "PostfixExpr -> PostfixExpr ++",
    "PostfixExpr -> PostfixExpr --",
    "PostfixExpr -> Primary",
    "Primary -> Primary . Name Arguments",
    "Primary -> Primary . Name",
    "Primary -> Name Arguments",
    "Primary -> Name",
    "Primary -> Literal",
    "Primary -> NewExpr",
    "Primary -> ParExpr",
    "Primary -> this",
    "NewExpr -> new Name Arguments",
    "Arguments -> ( ArgList )",
    "Arguments -> ( )",
    "ArgList -> Expr , ArgList",
    "ArgList -> Expr",
    "Literal -> IntLit",
    "Literal -> StrLit",
    "Literal -> true",
    "Literal -> false",
    "Literal -> null",
};

constexpr std::array kLexicalClasses = {"Name", "IntLit", "StrLit"};

std::vector<std::string_view> words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ') {
            ++j;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

bool is_keyword(std::string_view word) {
    for (const char* k : kKeywords) {
        if (word == k) {
            return true;
        }
    }
    return false;
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space_and_comments();
            if (pos_ >= text_.size()) {
                return out;
            }
            out.push_back(next());
        }
    }

private:
    Token next() {
        int line = line_;
        int column = column_;
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                advance();
            }
            std::string word(text_.substr(start, pos_ - start));
            return {is_keyword(word) ? TokenKind::keyword : TokenKind::identifier, word, line, column};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                advance();
            }
            if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                throw SourceError("malformed integer literal", line, column);
            }
            return {TokenKind::integer, std::string(text_.substr(start, pos_ - start)), line, column};
        }
        if (c == '"') {
            std::size_t start = pos_;
            advance();
            for (;;) {
                if (pos_ >= text_.size() || text_[pos_] == '\n') {
                    throw SourceError("unterminated string literal", line, column);
                }
                char s = text_[pos_];
                advance();
                if (s == '"') {
                    break;
                }
                if (s == '\\') {
                    if (pos_ >= text_.size() || text_[pos_] == '\n') {
                        throw SourceError("unterminated string literal", line, column);
                    }
                    advance();
                }
            }
            return {TokenKind::string, std::string(text_.substr(start, pos_ - start)), line, column};
        }
        for (const char* p : kPunct) {
            std::string_view punct(p);
            if (text_.substr(pos_, punct.size()) == punct) {
                for (std::size_t i = 0; i < punct.size(); ++i) {
                    advance();
                }
                return {TokenKind::punct, std::string(punct), line, column};
            }
        }
        std::string shown = std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c) : "\\x" + hex(c);
        throw SourceError("illegal character '" + shown + "'", line, column);
    }

    static std::string hex(char c) {
        static constexpr char digits[] = "0123456789abcdef";
        auto u = static_cast<unsigned char>(c);
        return {digits[u >> 4], digits[u & 15]};
    }

    void skip_space_and_comments() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    advance();
                }
            } else {
                return;
            }
        }
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

class Parser {
public:
    Parser(Grammar& grammar, std::vector<Token> tokens) : grammar_(grammar), tokens_(std::move(tokens)) {
        for (RuleId id = 0; static_cast<std::size_t>(id) < grammar_.base_rule_count(); ++id) {
            if (!grammar_.rule(id).lexical) {
                rules_.try_emplace(grammar_.rule_to_string(id), id);
            }
        }
        name_ = lexical_class("Name");
        int_lit_ = lexical_class("IntLit");
        str_lit_ = lexical_class("StrLit");
    }

    ParseTree program() {
        if (at_end()) {
            throw error("expected statement", statement_starts());
        }
        ParseTree list = stmt_list();
        if (!at_end()) {
            throw error("expected statement", statement_starts());
        }
        return node("Program -> StmtList", {std::move(list)});
    }

private:
    ParseTree stmt_list() {
        ParseTree first = statement();
        if (at_end() || is("}")) {
            return node("StmtList -> Statement", {std::move(first)});
        }
        return node("StmtList -> Statement StmtList", {std::move(first), stmt_list()});
    }

    ParseTree statement() {
        if (is("{")) {
            return node("Statement -> Block", {block()});
        }
        if (is("if")) {
            ParseTree kw = term("if");
            ParseTree cond = par_expr();
            ParseTree then = statement();
            if (is("else")) {
                ParseTree else_kw = term("else");
                ParseTree otherwise = node("IfOrElse -> else Statement", {std::move(else_kw), statement()});
                return node("Statement -> if ParExpr Statement IfOrElse",
                            {std::move(kw), std::move(cond), std::move(then), std::move(otherwise)});
            }
            return node("Statement -> if ParExpr Statement", {std::move(kw), std::move(cond), std::move(then)});
        }
        if (is("while")) {
            ParseTree kw = term("while");
            ParseTree cond = par_expr();
            return node("Statement -> while ParExpr Statement", {std::move(kw), std::move(cond), statement()});
        }
        if (is("for")) {
            std::vector<ParseTree> kids;
            kids.push_back(term("for"));
            kids.push_back(term("("));
            kids.push_back(for_init());
            kids.push_back(term(";"));
            kids.push_back(expr());
            kids.push_back(term(";"));
            kids.push_back(expr());
            kids.push_back(term(")"));
            kids.push_back(statement());
            return node("Statement -> for ( ForInit ; Expr ; Expr ) Statement", std::move(kids));
        }
        if (is("try")) {
            ParseTree kw = term("try");
            ParseTree body = block();
            return node("Statement -> try Block CatchClause", {std::move(kw), std::move(body), catch_clause()});
        }
        if (is("throw")) {
            ParseTree kw = term("throw");
            ParseTree value = expr();
            return node("Statement -> throw Expr ;", {std::move(kw), std::move(value), term(";")});
        }
        if (is("return")) {
            ParseTree kw = term("return");
            if (is(";")) {
                return node("Statement -> return ;", {std::move(kw), term(";")});
            }
            ParseTree value = expr();
            return node("Statement -> return Expr ;", {std::move(kw), std::move(value), term(";")});
        }
        if (decl_start()) {
            ParseTree decl = local_var_decl();
            return node("Statement -> LocalVarDecl ;", {std::move(decl), term(";")});
        }
        if (!expr_start()) {
            throw error("expected statement", statement_starts());
        }
        ParseTree value = expr();
        return node("Statement -> Expr ;", {std::move(value), term(";")});
    }

    ParseTree block() {
        ParseTree open = term("{");
        if (is("}")) {
            return node("Block -> { }", {std::move(open), term("}")});
        }
        ParseTree list = stmt_list();
        return node("Block -> { StmtList }", {std::move(open), std::move(list), term("}")});
    }

    ParseTree par_expr() {
        ParseTree open = term("(");
        ParseTree inner = expr();
        return node("ParExpr -> ( Expr )", {std::move(open), std::move(inner), term(")")});
    }

    ParseTree for_init() {
        if (decl_start()) {
            return node("ForInit -> LocalVarDecl", {local_var_decl()});
        }
        return node("ForInit -> Expr", {expr()});
    }

    ParseTree catch_clause() {
        std::vector<ParseTree> kids;
        kids.push_back(term("catch"));
        kids.push_back(term("("));
        kids.push_back(type());
        kids.push_back(name());
        kids.push_back(term(")"));
        kids.push_back(block());
        return node("CatchClause -> catch ( Type Name ) Block", std::move(kids));
    }

    ParseTree local_var_decl() {
        ParseTree t = type();
        return node("LocalVarDecl -> Type VarDeclarator", {std::move(t), var_declarator()});
    }

    ParseTree var_declarator() {
        ParseTree n = name();
        if (is("=")) {
            ParseTree eq = term("=");
            return node("VarDeclarator -> Name = Expr", {std::move(n), std::move(eq), expr()});
        }
        return node("VarDeclarator -> Name", {std::move(n)});
    }

    ParseTree type() {
        if (is("int") || is("boolean")) {
            std::string kw = peek().lexeme;
            return node("Type -> PrimitiveType", {node("PrimitiveType -> " + kw, {term(kw)})});
        }
        return node("Type -> Name", {name()});
    }

    ParseTree expr() {
        ParseTree lhs = rel_expr();
        if (is("=")) {
            ParseTree eq = term("=");
            return node("Expr -> RelExpr = Expr", {std::move(lhs), std::move(eq), expr()});
        }
        return node("Expr -> RelExpr", {std::move(lhs)});
    }

    ParseTree rel_expr() {
        ParseTree lhs = add_expr();
        for (const char* op : {"<", ">", "<=", ">=", "==", "!="}) {
            if (is(op)) {
                ParseTree o = node(std::string("RelOp -> ") + op, {term(op)});
                return node("RelExpr -> AddExpr RelOp AddExpr", {std::move(lhs), std::move(o), add_expr()});
            }
        }
        return node("RelExpr -> AddExpr", {std::move(lhs)});
    }

    ParseTree add_expr() {
        ParseTree left = node("AddExpr -> MulExpr", {mul_expr()});
        while (is("+") || is("-")) {
            std::string op = peek().lexeme;
            ParseTree o = node("AddOp -> " + op, {term(op)});
            left = node("AddExpr -> AddExpr AddOp MulExpr", {std::move(left), std::move(o), mul_expr()});
        }
        return left;
    }

    ParseTree mul_expr() {
        ParseTree left = node("MulExpr -> UnaryExpr", {unary_expr()});
        while (is("*") || is("/") || is("%")) {
            std::string op = peek().lexeme;
            ParseTree o = node("MulOp -> " + op, {term(op)});
            left = node("MulExpr -> MulExpr MulOp UnaryExpr", {std::move(left), std::move(o), unary_expr()});
        }
        return left;
    }

    ParseTree unary_expr() {
        if (is("-") || is("!")) {
            std::string op = peek().lexeme;
            ParseTree o = term(op);
            return node("UnaryExpr -> " + op + " UnaryExpr", {std::move(o), unary_expr()});
        }
        return node("UnaryExpr -> PostfixExpr", {postfix_expr()});
    }

    ParseTree postfix_expr() {
        ParseTree p = node("PostfixExpr -> Primary", {primary()});
        while (is("++") || is("--")) {
            std::string op = peek().lexeme;
            p = node("PostfixExpr -> PostfixExpr " + op, {std::move(p), term(op)});
        }
        return p;
    }

    ParseTree primary() {
        ParseTree p = primary_base();
        while (is(".")) {
            ParseTree dot = term(".");
            ParseTree member = name();
            if (is("(")) {
                p = node("Primary -> Primary . Name Arguments",
                         {std::move(p), std::move(dot), std::move(member), arguments()});
            } else {
                p = node("Primary -> Primary . Name", {std::move(p), std::move(dot), std::move(member)});
            }
        }
        return p;
    }

    ParseTree primary_base() {
        if (!at_end() && peek().kind == TokenKind::identifier) {
            ParseTree n = name();
            if (is("(")) {
                return node("Primary -> Name Arguments", {std::move(n), arguments()});
            }
            return node("Primary -> Name", {std::move(n)});
        }
        if (!at_end() && (peek().kind == TokenKind::integer || peek().kind == TokenKind::string || is("true") ||
                          is("false") || is("null"))) {
            return node("Primary -> Literal", {literal()});
        }
        if (is("new")) {
            ParseTree kw = term("new");
            ParseTree type_name = name();
            ParseTree created = node("NewExpr -> new Name Arguments", {std::move(kw), std::move(type_name), arguments()});
            return node("Primary -> NewExpr", {std::move(created)});
        }
        if (is("(")) {
            return node("Primary -> ParExpr", {par_expr()});
        }
        if (is("this")) {
            return node("Primary -> this", {term("this")});
        }
        throw error("expected expression", {"identifier", "literal", "new", "(", "this"});
    }

    ParseTree arguments() {
        ParseTree open = term("(");
        if (is(")")) {
            return node("Arguments -> ( )", {std::move(open), term(")")});
        }
        ParseTree list = arg_list();
        return node("Arguments -> ( ArgList )", {std::move(open), std::move(list), term(")")});
    }

    ParseTree arg_list() {
        ParseTree first = expr();
        if (is(",")) {
            ParseTree comma = term(",");
            return node("ArgList -> Expr , ArgList", {std::move(first), std::move(comma), arg_list()});
        }
        return node("ArgList -> Expr", {std::move(first)});
    }

    ParseTree literal() {
        const Token& t = peek();
        if (t.kind == TokenKind::integer) {
            return node("Literal -> IntLit", {lexical(int_lit_)});
        }
        if (t.kind == TokenKind::string) {
            return node("Literal -> StrLit", {lexical(str_lit_)});
        }
        std::string kw = t.lexeme;
        return node("Literal -> " + kw, {term(kw)});
    }

    ParseTree name() {
        if (at_end() || peek().kind != TokenKind::identifier) {
            throw error("expected identifier", {"identifier"});
        }
        return lexical(name_);
    }

    ParseTree lexical(SymbolId cls) {
        const Token& t = peek();
        RuleId id = grammar_.lexical_rule(cls, t.lexeme);
        ++pos_;
        return make_node(grammar_, id);
    }

    ParseTree term(std::string_view lexeme) {
        if (!is(lexeme)) {
            throw error("expected '" + std::string(lexeme) + "'", {std::string(lexeme)});
        }
        ++pos_;
        auto id = grammar_.find_terminal(lexeme);
        if (!id) {
            throw Error("grammar lacks terminal '" + std::string(lexeme) + "'");
        }
        return ParseTree::leaf(*id);
    }

    ParseTree node(const std::string& signature, std::vector<ParseTree> children) {
        auto it = rules_.find(signature);
        if (it == rules_.end()) {
            throw Error("grammar lacks rule '" + signature + "'");
        }
        return ParseTree{grammar_.rule(it->second).lhs, it->second, std::move(children)};
    }

    SymbolId lexical_class(std::string_view name) const {
        auto id = grammar_.find_nonterminal(name);
        if (!id || !grammar_.is_lexical_class(*id)) {
            throw Error("grammar lacks lexical class '" + std::string(name) + "'");
        }
        return *id;
    }

    bool decl_start() const {
        if (is("int") || is("boolean")) {
            return true;
        }
        return pos_ + 1 < tokens_.size() && tokens_[pos_].kind == TokenKind::identifier &&
               tokens_[pos_ + 1].kind == TokenKind::identifier;
    }

    bool expr_start() const {
        if (at_end()) {
            return false;
        }
        const Token& t = peek();
        if (t.kind == TokenKind::identifier || t.kind == TokenKind::integer || t.kind == TokenKind::string) {
            return true;
        }
        for (const char* s : {"(", "-", "!", "new", "this", "true", "false", "null"}) {
            if (t.lexeme == s) {
                return true;
            }
        }
        return false;
    }

    static std::set<std::string> statement_starts() {
        return {"{", "if", "while", "for", "try", "throw", "return", "int", "boolean", "identifier", "literal",
                "new", "(", "this", "-", "!"};
    }

    SourceError error(const std::string& message, std::set<std::string> expected) const {
        int line = 1;
        int column = 1;
        std::string found = "end of input";
        if (!at_end()) {
            line = peek().line;
            column = peek().column;
            found = "'" + peek().lexeme + "'";
        } else if (!tokens_.empty()) {
            line = tokens_.back().line;
            column = tokens_.back().column + static_cast<int>(tokens_.back().lexeme.size());
        }
        return SourceError(message + ", found " + found, line, column, std::move(expected));
    }

    bool at_end() const noexcept { return pos_ >= tokens_.size(); }
    const Token& peek() const { return tokens_[pos_]; }
    bool is(std::string_view lexeme) const {
        return !at_end() && peek().lexeme == lexeme && peek().kind != TokenKind::string;
    }

    Grammar& grammar_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::unordered_map<std::string, RuleId> rules_;
    SymbolId name_ = -1;
    SymbolId int_lit_ = -1;
    SymbolId str_lit_ = -1;
};

std::string position_prefix(int line, int column) {
    return std::to_string(line) + ":" + std::to_string(column) + ": ";
}

} // namespace

SourceError::SourceError(const std::string& message, int line, int column, std::set<std::string> expected)
    : Error(position_prefix(line, column) + message),
      message_(message),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

Grammar mini_grammar() {
    Grammar g;
    for (const char* rule : kRules) {
        auto w = words(rule);
        if (!g.find_nonterminal(w[0])) {
            g.add_nonterminal(w[0]);
        }
    }
    for (const char* cls : kLexicalClasses) {
        g.add_lexical_class(g.add_nonterminal(cls));
    }
    g.set_start(*g.find_nonterminal("Program"));
    for (const char* rule : kRules) {
        auto w = words(rule);
        std::vector<SymbolId> rhs;
        for (std::size_t i = 2; i < w.size(); ++i) {
            auto nt = g.find_nonterminal(w[i]);
            rhs.push_back(nt ? *nt : g.add_terminal(w[i]));
        }
        g.add_rule(*g.find_nonterminal(w[0]), std::move(rhs));
    }
    return g;
}

ParseTree parse(std::string_view text, Grammar& grammar) {
    return Parser(grammar, tokenize(text)).program();
}

std::vector<SourceProgram> split_corpus(std::string_view text, const std::string& origin) {
    std::vector<SourceProgram> programs;
    SourceProgram current{"", origin, 1};
    int line_no = 0;
    bool has_content = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        bool last = end == std::string_view::npos;
        std::string_view line = text.substr(pos, last ? std::string_view::npos : end - pos);
        ++line_no;
        std::string_view trimmed = line;
        if (!trimmed.empty() && trimmed.back() == '\r') {
            trimmed.remove_suffix(1);
        }
        if (trimmed == "%%") {
            if (has_content) {
                programs.push_back(std::move(current));
            }
            current = SourceProgram{"", origin, line_no + 1};
            has_content = false;
        } else {
            if (!last || !line.empty()) {
                current.text.append(line);
                if (!last) {
                    current.text += '\n';
                }
            }
            for (char c : line) {
                if (!std::isspace(static_cast<unsigned char>(c))) {
                    has_content = true;
                }
            }
        }
        if (last) {
            break;
        }
        pos = end + 1;
    }
    if (has_content) {
        programs.push_back(std::move(current));
    }
    return programs;
}

std::string join_corpus(const std::vector<SourceProgram>& programs) {
    std::string out;
    for (std::size_t i = 0; i < programs.size(); ++i) {
        if (i != 0) {
            out += "%%\n";
        }
        out += programs[i].text;
        if (!programs[i].text.empty() && programs[i].text.back() != '\n') {
            out += '\n';
        }
    }
    return out;
}

} // namespace idiomine::minilang
