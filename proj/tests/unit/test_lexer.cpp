// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <set>

#include "srceq/lexer.hpp"
#include "support/java_gen.hpp"

using namespace srceq;

namespace {

std::vector<std::string> texts(const TokenStream& s) {
    std::vector<std::string> out;
    for (const auto& t : s.tokens) out.push_back(t.text);
    return out;
}

std::vector<TokenKind> kinds(const TokenStream& s) {
    std::vector<TokenKind> out;
    for (const auto& t : s.tokens) out.push_back(t.kind);
    return out;
}

} // namespace

TEST_CASE("keyword set matches the Java 17 reserved words") {
    // Independent transcription of the reserved keywords plus literal words.
    const std::set<std::string> expected{
        "abstract", "assert",     "boolean",  "break",     "byte",       "case",     "catch",   "char",
        "class",    "const",      "continue", "default",   "do",         "double",   "else",    "enum",
        "extends",  "final",      "finally",  "float",     "for",        "if",       "goto",    "implements",
        "import",   "instanceof", "int",      "interface", "long",       "native",   "new",     "package",
        "private",  "protected",  "public",   "return",    "short",      "static",   "strictfp", "super",
        "switch",   "synchronized", "this",   "throw",     "throws",     "transient", "try",    "void",
        "volatile", "while",      "_",        "true",      "false",      "null"};
    std::set<std::string> actual(detail::java_keywords().begin(), detail::java_keywords().end());
    CHECK(actual == expected);
    for (const char* contextual : {"var", "yield", "record", "sealed", "permits", "module", "open", "exports"}) {
        auto s = tokenize(contextual);
        REQUIRE(s.size() == 1);
        CHECK(s[0].kind == TokenKind::Identifier);
    }
}

TEST_CASE("comments are dropped and flagged") {
    auto s = tokenize("int /* a */ x // b\n = 1; /** doc */");
    CHECK(texts(s) == std::vector<std::string>{"int", "x", "=", "1", ";"});
    CHECK(s.had_comments);
    auto kept = tokenize("a /* c */ b", {.strip_comments = false});
    REQUIRE(kept.size() == 3);
    CHECK(kept[1].kind == TokenKind::Comment);
    CHECK(kept[1].text == "/* c */");
}

TEST_CASE("operators use maximal munch") {
    auto s = tokenize("a>>>=b>>c->d::e...f<<=g!=h&&i||j++");
    CHECK(texts(s) == std::vector<std::string>{"a", ">>>=", "b", ">>", "c", "->", "d", "::", "e", "...", "f",
                                               "<<=", "g", "!=", "h", "&&", "i", "||", "j", "++"});
    CHECK(tokenize("@")[0].kind == TokenKind::Separator);
    CHECK(tokenize("::")[0].kind == TokenKind::Separator);
    CHECK(tokenize("+=")[0].kind == TokenKind::Operator);
}

TEST_CASE("numeric literals") {
    struct Case {
        const char* text;
        TokenKind kind;
    };
    const Case cases[] = {
        {"0", TokenKind::IntLiteral},          {"123_456", TokenKind::IntLiteral},   {"0x7fff_ffffL", TokenKind::IntLiteral},
        {"0b1010", TokenKind::IntLiteral},     {"0777", TokenKind::IntLiteral},      {"0xCAFEBABE", TokenKind::IntLiteral},
        {"0xFF", TokenKind::IntLiteral},       {"1.5", TokenKind::FloatLiteral},     {".5", TokenKind::FloatLiteral},
        {"1.", TokenKind::FloatLiteral},       {"1e10", TokenKind::FloatLiteral},    {"1.5e-3f", TokenKind::FloatLiteral},
        {"2d", TokenKind::FloatLiteral},       {"0x1.8p1", TokenKind::FloatLiteral}, {"0x1p-2d", TokenKind::FloatLiteral},
        {"1_0.0_1F", TokenKind::FloatLiteral},
    };
    for (const auto& c : cases) {
        INFO(c.text);
        auto s = tokenize(c.text);
        REQUIRE(s.size() == 1);
        CHECK(s[0].kind == c.kind);
        CHECK(s[0].text == c.text);
    }
    CHECK(texts(tokenize("1..2")) == std::vector<std::string>{"1.", ".2"});
    CHECK(texts(tokenize("x.y")) == std::vector<std::string>{"x", ".", "y"});
}

TEST_CASE("malformed numbers are lexical errors") {
    for (const char* bad : {"0x", "0b", "0x1.0", "1e", "1.5L", "12abc", "0b102"}) {
        INFO(bad);
        CHECK_THROWS_AS(tokenize(bad), LexError);
    }
}

TEST_CASE("string, char and text block literals") {
    auto s = tokenize(R"(x = "a \"b\" // c"; c = '\''; d = '\u0041';)");
    CHECK(texts(s) == std::vector<std::string>{"x", "=", R"("a \"b\" // c")", ";", "c", "=", R"('\'')", ";", "d", "=", "'A'", ";"});
    CHECK(s[2].kind == TokenKind::StringLiteral);
    CHECK(s[6].kind == TokenKind::CharLiteral);

    auto tb = tokenize("String s = \"\"\"\n  hello \"quoted\" \\\n  world\"\"\";");
    REQUIRE(tb.size() == 5);
    CHECK(tb[3].kind == TokenKind::TextBlockLiteral);
    CHECK(tb[3].text == "\"\"\"\n  hello \"quoted\" \\\n  world\"\"\"");
    CHECK_THROWS_AS(tokenize("\"\"\"abc\"\"\""), LexError);
}

TEST_CASE("unicode escapes are translated before lexing") {
    CHECK(texts(tokenize("\\u0069nt x;")) == std::vector<std::string>{"int", "x", ";"});
    CHECK(kinds(tokenize("\\u0069nt"))[0] == TokenKind::Keyword);
    CHECK(texts(tokenize("a\\uuuu002Bb")) == std::vector<std::string>{"a", "+", "b"});
    // An escaped backslash does not start a unicode escape.
    CHECK(texts(tokenize(R"("\\u0041")")) == std::vector<std::string>{R"("\\u0041")"});
    // Surrogate pair becomes one UTF-8 code point.
    auto s = tokenize(R"("\uD83D\uDE00")");
    CHECK(s[0].text == "\"\xF0\x9F\x98\x80\"");
    CHECK_THROWS_AS(tokenize("\\u00G1"), LexError);
}

TEST_CASE("token offsets slice the raw input") {
    std::string raw = "class A { String s = \"\\u0041\"; \\u0069nt n; }";
    auto s = tokenize(raw);
    for (const auto& t : s.tokens) {
        auto slice = raw.substr(t.offset, t.length);
        if (slice.find("\\u") == std::string::npos) CHECK(slice == t.text);
    }
    CHECK(raw.substr(s[6].offset, s[6].length) == "\"\\u0041\"");
    CHECK(raw.substr(s[8].offset, s[8].length) == "\\u0069nt");
}

TEST_CASE("line and column positions") {
    auto s = tokenize("package a;\n\n  class B {\r\n\tint x; /* multi\nline */ int y;\r}");
    auto find = [&](const std::string& text, int nth = 0) {
        for (const auto& t : s.tokens)
            if (t.text == text && nth-- == 0) return t;
        FAIL("missing " << text);
        return Token{};
    };
    CHECK(find("package").line == 1);
    CHECK(find("package").col == 1);
    CHECK(find("class").line == 3);
    CHECK(find("class").col == 3);
    CHECK(find("x").line == 4);
    CHECK(find("x").col == 6);
    CHECK(find("y").line == 5);
    CHECK(find("y").col == 13);
    CHECK(find("}").line == 6);
    CHECK(find("}").col == 1);
}

TEST_CASE("columns count code points") {
    auto s = tokenize("String \xC3\xA9t\xC3\xA9 = x;");
    REQUIRE(s.size() == 5);
    CHECK(s[1].text == "\xC3\xA9t\xC3\xA9");
    CHECK(s[2].col == 12);
}

TEST_CASE("byte order mark and trailing SUB are ignored") {
    auto s = tokenize("\xEF\xBB\xBFint x;\x1a");
    CHECK(texts(s) == std::vector<std::string>{"int", "x", ";"});
    CHECK(s[0].col == 1);
}

TEST_CASE("lexical errors carry positions") {
    struct Case {
        const char* text;
        std::uint32_t line, col;
    };
    const Case cases[] = {
        {"int x = \"abc;\n", 1, 9}, {"a\n  /* never closed", 2, 3}, {"x = 'ab';", 1, 5},
        {"x = '';", 1, 5},          {"int #x;", 1, 5},              {"s = \"\\q\";", 1, 6},
        {"c = '\n';", 1, 5},
    };
    for (const auto& c : cases) {
        INFO(c.text);
        try {
            tokenize(c.text);
            FAIL("expected LexError");
        } catch (const LexError& e) {
            CHECK(e.line() == c.line);
            CHECK(e.col() == c.col);
        }
    }
}

TEST_CASE("generated snippets lex back to their lexemes") {
    testing::JavaGen gen(7);
    for (int i = 0; i < 300; ++i) {
        auto snippet = gen.unit();
        std::string raw = gen.render(snippet, i % 2);
        auto s = tokenize(raw);
        REQUIRE(s.size() == snippet.lexemes.size());
        for (std::size_t k = 0; k < s.size(); ++k) CHECK(raw.substr(s[k].offset, s[k].length) == snippet.lexemes[k]);
    }
}

TEST_CASE("join_tokens re-lexes to the same stream") {
    testing::JavaGen gen(11);
    for (int i = 0; i < 200; ++i) {
        auto s = tokenize(gen.render(gen.unit(), 1));
        CHECK(normalized_equal(tokenize(join_tokens(s)), s));
    }
}
