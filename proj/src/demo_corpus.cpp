#include <array>
#include <random>
#include <string>
#include <vector>

#include "idiomine/minilang.hpp"

namespace idiomine::minilang {

namespace {

constexpr std::array kVariables = {"x",     "y",     "i",    "j",    "n",     "count", "sum",    "total",
                                   "index", "value", "result", "size", "name", "item",  "list",   "map",
                                   "buffer", "data", "key",   "node", "left",  "right", "offset", "limit"};
constexpr std::array kTypes = {"String", "Integer", "ArrayList", "HashMap", "StringBuilder", "Node", "Point", "File"};
constexpr std::array kExceptions = {"Exception", "IOException", "IllegalArgumentException", "RuntimeException",
                                    "IllegalStateException"};
constexpr std::array kMethods = {"get",    "add",    "put",  "size", "append", "toString", "remove",
                                 "contains", "length", "close", "clear", "isEmpty"};
constexpr std::array kInts = {"0", "1", "2", "3", "5", "10", "16", "42", "100", "255", "1000"};
constexpr std::array kStrings = {"\"error\"",   "\"done\"",    "\"hello\"",    "\"value: \"", "\"invalid input\"",
                                 "\"not found\"", "\"start\"", "\"finished\"", "\"null key\"", "\"empty\"",
                                 "\"index out of range\""};
constexpr std::array kRelOps = {"<", ">", "<=", ">=", "==", "!="};
constexpr std::array kArith = {"+", "-", "*", "/", "%"};

// Statement templates, skewed towards the recurring library-call shapes.
class ProgramWriter {
public:
    explicit ProgramWriter(std::uint64_t seed) : rng_(seed) {}

    std::string program() {
        out_.clear();
        std::size_t statements = 2 + below(4);
        for (std::size_t i = 0; i < statements; ++i) {
            statement(0);
        }
        return out_;
    }

private:
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

    // Zipf-like pick: low indices dominate.
    template <std::size_t N>
    const char* pick(const std::array<const char*, N>& pool) {
        std::size_t a = below(N);
        std::size_t b = below(N);
        return pool[a < b ? a : b];
    }

    template <std::size_t N>
    const char* uniform(const std::array<const char*, N>& pool) {
        return pool[below(N)];
    }

    void line(int depth, const std::string& text) {
        out_.append(static_cast<std::size_t>(depth) * 2, ' ');
        out_ += text;
        out_ += '\n';
    }

    std::string var() { return pick(kVariables); }

    std::string atom() {
        switch (below(6)) {
        case 0: return pick(kInts);
        case 1: return var() + "." + pick(kMethods) + "()";
        default: return var();
        }
    }

    std::string expression() {
        switch (below(5)) {
        case 0: return atom() + " " + uniform(kArith) + " " + atom();
        case 1: return var() + "." + pick(kMethods) + "(" + atom() + ")";
        case 2: return "new " + std::string(pick(kTypes)) + "(" + arguments() + ")";
        default: return atom();
        }
    }

    std::string arguments() {
        switch (below(4)) {
        case 0: return "";
        case 1: return atom() + ", " + atom();
        case 2: return pick(kStrings);
        default: return atom();
        }
    }

    std::string condition() {
        switch (below(4)) {
        case 0: return var() + " == null";
        case 1: return var() + "." + "isEmpty()";
        default: return var() + " " + uniform(kRelOps) + " " + atom();
        }
    }

    void body(int depth) {
        line(depth, "{");
        std::size_t n = 1 + below(2);
        for (std::size_t i = 0; i < n; ++i) {
            statement(depth + 1);
        }
        line(depth, "}");
    }

    void simple_statement(int depth) {
        switch (below(8)) {
        case 0:
        case 1: line(depth, "System.out.println(" + std::string(pick(kStrings)) + ");"); break;
        case 2: line(depth, var() + " = " + expression() + ";"); break;
        case 3: line(depth, var() + "." + pick(kMethods) + "(" + arguments() + ");"); break;
        case 4: line(depth, "return " + expression() + ";"); break;
        case 5: {
            std::string type = pick(kTypes);
            line(depth, type + " " + var() + " = new " + type + "(" + arguments() + ");");
            break;
        }
        case 6: line(depth, "int " + var() + " = " + atom() + ";"); break;
        default: line(depth, var() + "++;"); break;
        }
    }

    void statement(int depth) {
        if (depth >= 2) {
            simple_statement(depth);
            return;
        }
        switch (below(12)) {
        case 0: // if-then-else
            line(depth, "if (" + condition() + ")");
            body(depth);
            line(depth, "else");
            body(depth);
            break;
        case 1: // if-then-throw
            line(depth, "if (" + condition() + ")");
            line(depth + 1, "throw new " + std::string(pick(kExceptions)) + "(" + pick(kStrings) + ");");
            break;
        case 2: { // integer for loop
            std::string v = below(3) == 0 ? "j" : "i";
            line(depth, "for (int " + v + " = 0; " + v + " < " + atom() + "; " + v + "++)");
            body(depth);
            break;
        }
        case 3: // try-catch
            line(depth, "try");
            body(depth);
            line(depth, "catch (" + std::string(pick(kExceptions)) + " e)");
            line(depth, "{");
            line(depth + 1, "System.out.println(" + std::string(pick(kStrings)) + ");");
            line(depth, "}");
            break;
        case 4: // while
            line(depth, "while (" + condition() + ")");
            body(depth);
            break;
        default: simple_statement(depth); break;
        }
    }

    std::mt19937_64 rng_;
    std::string out_;
};

} // namespace

std::vector<SourceProgram> generate_demo_corpus(std::uint64_t seed, std::size_t count) {
    ProgramWriter writer(seed);
    std::vector<SourceProgram> programs;
    programs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        programs.push_back({writer.program(), "demo:" + std::to_string(seed) + ":" + std::to_string(i), 1});
    }
    return programs;
}

} // namespace idiomine::minilang
