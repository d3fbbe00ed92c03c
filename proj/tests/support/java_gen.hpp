// SPDX-License-Identifier: Apache-2.0
//
// Random Java compilation units for property tests. A snippet is a list of
// lexemes; rendering joins them with whitespace, so the lexer must give back
// exactly these lexemes.

#pragma once

#include <random>
#include <string>
#include <vector>

namespace srceq::testing {

struct Snippet {
    std::vector<std::string> lexemes;
};

class JavaGen {
public:
    explicit JavaGen(std::uint32_t seed) : rng_(seed) {}

    std::mt19937& rng() { return rng_; }

    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

    std::string ident() {
        static const char* names[] = {"value", "count", "index", "builder", "name", "VERSION", "input", "result",
                                      "node", "buffer", "item", "key", "map", "list", "state", "tmp", "x", "y",
                                      "$proxy", "_field", "record", "var", "yield", "sealed", "permits", "module"};
        std::string base = names[pick(std::size(names))];
        if (chance(0.3)) base += std::to_string(pick(10));
        return base;
    }

    std::string type_name() {
        static const char* types[] = {"String", "Object", "Integer", "List", "Map", "Builder", "Node", "Foo"};
        return types[pick(std::size(types))];
    }

    std::string literal() {
        switch (pick(12)) {
        case 0: return std::to_string(pick(100000));
        case 1: return "0x" + hex(1 + pick(8)) + (chance(0.5) ? "L" : "");
        case 2: return "0b1010_0101";
        case 3: return std::to_string(pick(1000)) + "." + std::to_string(pick(1000)) + (chance(0.5) ? "e-3" : "d");
        case 4: return "1_000_000L";
        case 5: return "\"" + words() + "\"";
        case 6: return "\"esc\\t\\\"q\\\"\\\\ \\u0041\"";
        case 7: return "'" + std::string(1, static_cast<char>('a' + pick(26))) + "'";
        case 8: return "'\\n'";
        case 9: return "\"\"\"\n    text " + words() + "\n    block\"\"\"";
        case 10: return chance(0.5) ? "true" : "null";
        default: return "0x1.8p1";
        }
    }

    Snippet unit() {
        Snippet s;
        auto& t = s.lexemes;
        push(t, {"package", "com", ".", "example", ".", ident(), ";"});
        for (std::size_t i = pick(3); i-- > 0;) push(t, {"import", "java", ".", "util", ".", type_name(), ";"});
        if (chance(0.3)) push(t, {"@", "SuppressWarnings", "(", "\"unchecked\"", ")"});
        push(t, {"public", "class", "Gen" + std::to_string(pick(1000))});
        if (chance(0.3)) push(t, {"<", "T", "extends", type_name(), ">"});
        t.push_back("{");
        for (std::size_t i = 1 + pick(3); i-- > 0;) field(t);
        for (std::size_t i = 1 + pick(3); i-- > 0;) method(t);
        t.push_back("}");
        return s;
    }

    /// Joins lexemes with random whitespace. `style` 0 gives single spaces.
    std::string render(const Snippet& s, int style = 0) {
        static const char* ws[] = {" ", "  ", "\t", "\n", "\r\n", " \n\t ", "\n\n"};
        std::string out;
        for (std::size_t i = 0; i < s.lexemes.size(); ++i) {
            if (i) out += style == 0 ? " " : ws[pick(std::size(ws))];
            out += s.lexemes[i];
        }
        out += "\n";
        return out;
    }

private:
    static void push(std::vector<std::string>& t, std::initializer_list<std::string> xs) { t.insert(t.end(), xs); }

    std::string hex(std::size_t n) {
        static const char* digits = "0123456789abcdefABCDEF";
        std::string out;
        for (std::size_t i = 0; i < n; ++i) out += digits[pick(22)];
        return out;
    }

    std::string words() {
        static const char* ws[] = {"hello", "build", "${x.y}", "a b", "semi;colon", "/* not a comment */", "// nor this"};
        return ws[pick(std::size(ws))];
    }

    void field(std::vector<std::string>& t) {
        push(t, {"private", "static", "final", type_name(), ident(), "=", literal(), ";"});
    }

    void expr(std::vector<std::string>& t, int depth) {
        switch (depth > 2 ? pick(2) : pick(7)) {
        case 0: t.push_back(ident()); break;
        case 1: t.push_back(literal()); break;
        case 2: {
            static const char* ops[] = {"+", "-", "*", "/", "%", "<<", ">>", ">>>", "&", "|", "^", "&&", "||",
                                        "==", "!=", "<", ">", "<=", ">="};
            expr(t, depth + 1);
            t.push_back(ops[pick(std::size(ops))]);
            expr(t, depth + 1);
            break;
        }
        case 3:
            push(t, {ident(), ".", ident(), "("});
            expr(t, depth + 1);
            push(t, {",", ident(), ")"});
            break;
        case 4:
            push(t, {"(", ident(), ")", "->"});
            expr(t, depth + 1);
            break;
        case 5: push(t, {type_name(), "::", "valueOf"}); break;
        default:
            push(t, {"new", type_name(), "<", ">", "(", ")"});
            break;
        }
    }

    void statement(std::vector<std::string>& t, int depth) {
        switch (depth > 1 ? pick(3) : pick(6)) {
        case 0:
            push(t, {"var", ident(), "="});
            expr(t, 0);
            t.push_back(";");
            break;
        case 1:
            push(t, {ident(), "+=", literal(), ";"});
            break;
        case 2:
            t.push_back("return");
            expr(t, 0);
            t.push_back(";");
            break;
        case 3:
            push(t, {"if", "("});
            expr(t, 0);
            push(t, {")", "{"});
            statement(t, depth + 1);
            push(t, {"}", "else", "{"});
            statement(t, depth + 1);
            t.push_back("}");
            break;
        case 4:
            push(t, {"for", "(", "int", "i", "=", "0", ";", "i", "<", ident(), ";", "i", "++", ")", "{"});
            statement(t, depth + 1);
            t.push_back("}");
            break;
        default:
            push(t, {"while", "(", ident(), ".", "hasNext", "(", ")", "||", "!", ident(), ")", "{"});
            statement(t, depth + 1);
            t.push_back("}");
            break;
        }
    }

    void method(std::vector<std::string>& t) {
        if (chance(0.3)) push(t, {"@", "Override"});
        push(t, {"public", type_name(), ident(), "(", "final", type_name(), ident(), ",", "int", "[", "]", ident(), ")", "{"});
        for (std::size_t i = 1 + pick(4); i-- > 0;) statement(t, 0);
        t.push_back("}");
    }

    std::mt19937 rng_;
};

} // namespace srceq::testing
