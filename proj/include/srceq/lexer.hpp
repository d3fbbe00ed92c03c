// SPDX-License-Identifier: Apache-2.0
//
// Java (17) lexical analysis. The token stream produced here is what source
// equivalence is decided on: comments are dropped, whitespace is discarded and
// only (kind, text) pairs take part in comparisons.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace srceq {

enum class TokenKind : std::uint8_t {
    Identifier,
    Keyword,
    IntLiteral,
    FloatLiteral,
    StringLiteral,
    TextBlockLiteral,
    CharLiteral,
    Separator,
    Operator,
    Comment,
};

inline std::string_view to_string(TokenKind kind) {
    switch (kind) {
    case TokenKind::Identifier: return "Identifier";
    case TokenKind::Keyword: return "Keyword";
    case TokenKind::IntLiteral: return "IntLiteral";
    case TokenKind::FloatLiteral: return "FloatLiteral";
    case TokenKind::StringLiteral: return "StringLiteral";
    case TokenKind::TextBlockLiteral: return "TextBlockLiteral";
    case TokenKind::CharLiteral: return "CharLiteral";
    case TokenKind::Separator: return "Separator";
    case TokenKind::Operator: return "Operator";
    case TokenKind::Comment: return "Comment";
    }
    return "?";
}

inline bool is_literal(TokenKind kind) {
    switch (kind) {
    case TokenKind::IntLiteral:
    case TokenKind::FloatLiteral:
    case TokenKind::StringLiteral:
    case TokenKind::TextBlockLiteral:
    case TokenKind::CharLiteral: return true;
    default: return false;
    }
}

/// A single lexeme. `text` is the lexeme after unicode-escape translation;
/// `offset`/`length` locate the untranslated lexeme in the original text, so
/// `raw.substr(offset, length)` is always an exact slice of the input.
struct Token {
    TokenKind kind = TokenKind::Identifier;
    std::string text;
    std::uint32_t line = 1;
    std::uint32_t col = 1;
    std::size_t offset = 0;
    std::size_t length = 0;

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    bool is_sep(std::string_view t) const { return is(TokenKind::Separator, t); }
    bool is_op(std::string_view t) const { return is(TokenKind::Operator, t); }
    bool is_kw(std::string_view t) const { return is(TokenKind::Keyword, t); }
    bool is_ident() const { return kind == TokenKind::Identifier; }
};

struct TokenStream {
    std::vector<Token> tokens;
    bool had_comments = false;

    std::size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
    const Token& operator[](std::size_t i) const { return tokens[i]; }
};

struct LexOptions {
    bool strip_comments = true;
    bool decode_unicode_escapes = true;
};

class LexError : public std::runtime_error {
public:
    LexError(std::uint32_t line, std::uint32_t col, std::string reason)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + reason),
          line_(line), col_(col), reason_(std::move(reason)) {}

    std::uint32_t line() const { return line_; }
    std::uint32_t col() const { return col_; }
    const std::string& reason() const { return reason_; }

private:
    std::uint32_t line_;
    std::uint32_t col_;
    std::string reason_;
};

namespace detail {

inline const std::unordered_set<std::string_view>& java_keywords() {
    // Reserved words of Java 17 plus the boolean and null literals. Contextual
    // keywords (var, record, yield, sealed, permits, module, ...) are identifiers.
    static const std::unordered_set<std::string_view> kw = {
        "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char",
        "class", "const", "continue", "default", "do", "double", "else", "enum",
        "extends", "final", "finally", "float", "for", "goto", "if", "implements",
        "import", "instanceof", "int", "interface", "long", "native", "new",
        "package", "private", "protected", "public", "return", "short", "static",
        "strictfp", "super", "switch", "synchronized", "this", "throw", "throws",
        "transient", "try", "void", "volatile", "while", "_", "true", "false", "null",
    };
    return kw;
}

// Longest first, so a linear scan implements maximal munch.
inline constexpr std::array<std::string_view, 50> punctuation = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "==", ">=", "<=", "!=", "&&",
    "||", "++", "--", "<<", ">>", "+=", "-=", "*=", "/=", "&=", "|=", "^=", "%=",
    "(", ")", "{", "}", "[", "]", ";", ",", ".", "@", "=", ">", "<", "!", "~",
    "?", ":", "+", "-", "*", "/", "&", "|", "^", "%",
};

inline bool is_separator(std::string_view p) {
    return p == "(" || p == ")" || p == "{" || p == "}" || p == "[" || p == "]" || p == ";" ||
           p == "," || p == "." || p == "..." || p == "@" || p == "::";
}

inline bool is_ident_start(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}
inline bool is_ident_part(unsigned char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_hex(char c) {
    return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

inline void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

/// Maps raw byte offsets to 1-based line/column. Columns count code points.
class LineMap {
public:
    explicit LineMap(std::string_view raw) : raw_(raw) {
        starts_.push_back(0);
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] == '\r') {
                if (i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
                starts_.push_back(i + 1);
            } else if (raw[i] == '\n') {
                starts_.push_back(i + 1);
            }
        }
    }

    std::pair<std::uint32_t, std::uint32_t> locate(std::size_t offset) const {
        auto it = std::upper_bound(starts_.begin(), starts_.end(), offset);
        std::size_t line = static_cast<std::size_t>(it - starts_.begin());
        std::size_t start = starts_[line - 1];
        std::uint32_t col = 1;
        for (std::size_t i = start; i < offset && i < raw_.size(); ++i) {
            if ((static_cast<unsigned char>(raw_[i]) & 0xC0) != 0x80) ++col;
        }
        return {static_cast<std::uint32_t>(line), col};
    }

private:
    std::string_view raw_;
    std::vector<std::size_t> starts_;
};

/// Text after the unicode-escape translation phase, with a per-byte map back
/// into the raw input.
struct Translated {
    std::string text;
    std::vector<std::size_t> origin; // size text.size() + 1
};

inline Translated translate(std::string_view raw, std::size_t begin, bool decode, const LineMap& lines) {
    Translated out;
    out.text.reserve(raw.size() - begin);
    out.origin.reserve(raw.size() - begin + 1);
    auto emit = [&](std::string_view bytes, std::size_t from) {
        out.text.append(bytes);
        out.origin.insert(out.origin.end(), bytes.size(), from);
    };

    // Reads one escape at i (raw[i] == '\\', eligible). Returns code unit and end.
    auto read_escape = [&](std::size_t i) -> std::pair<std::uint32_t, std::size_t> {
        std::size_t j = i + 1;
        while (j < raw.size() && raw[j] == 'u') ++j;
        if (j + 4 > raw.size() || !is_hex(raw[j]) || !is_hex(raw[j + 1]) || !is_hex(raw[j + 2]) ||
            !is_hex(raw[j + 3])) {
            auto [line, col] = lines.locate(i);
            throw LexError(line, col, "malformed unicode escape");
        }
        auto unit = static_cast<std::uint32_t>(std::stoul(std::string(raw.substr(j, 4)), nullptr, 16));
        return {unit, j + 4};
    };

    std::size_t i = begin;
    std::size_t backslashes = 0;
    while (i < raw.size()) {
        char c = raw[i];
        bool eligible = decode && c == '\\' && backslashes % 2 == 0 && i + 1 < raw.size() && raw[i + 1] == 'u';
        if (!eligible) {
            backslashes = c == '\\' ? backslashes + 1 : 0;
            out.text.push_back(c);
            out.origin.push_back(i);
            ++i;
            continue;
        }
        backslashes = 0;
        auto [unit, next] = read_escape(i);
        std::uint32_t cp = unit;
        if (unit >= 0xD800 && unit <= 0xDBFF && next + 1 < raw.size() && raw[next] == '\\' && raw[next + 1] == 'u') {
            auto [low, after] = read_escape(next);
            if (low >= 0xDC00 && low <= 0xDFFF) {
                cp = 0x10000 + ((unit - 0xD800) << 10) + (low - 0xDC00);
                next = after;
            }
        }
        if (cp >= 0xD800 && cp <= 0xDFFF) cp = 0xFFFD;
        std::string bytes;
        append_utf8(bytes, cp);
        emit(bytes, i);
        i = next;
    }
    out.origin.push_back(raw.size());
    return out;
}

class Lexer {
public:
    Lexer(std::string_view raw, const LexOptions& options) : raw_(raw), options_(options), lines_(raw) {
        std::size_t begin = raw.starts_with("\xEF\xBB\xBF") ? 3 : 0;
        src_ = translate(raw, begin, options.decode_unicode_escapes, lines_);
        s_ = src_.text;
        cursor_ = begin;
    }

    TokenStream run() {
        TokenStream out;
        while (true) {
            skip_whitespace();
            if (pos_ >= s_.size()) break;
            std::size_t start = pos_;
            TokenKind kind = scan_token();
            if (kind == TokenKind::Comment) {
                out.had_comments = true;
                if (options_.strip_comments) continue;
            }
            out.tokens.push_back(make(kind, start, pos_));
        }
        return out;
    }

private:
    Token make(TokenKind kind, std::size_t start, std::size_t end) {
        Token t;
        t.kind = kind;
        t.text = std::string(s_.substr(start, end - start));
        t.offset = src_.origin[start];
        t.length = src_.origin[end] - t.offset;
        advance_cursor(t.offset);
        t.line = line_;
        t.col = col_;
        return t;
    }

    // Tokens are produced in order, so positions are tracked incrementally.
    void advance_cursor(std::size_t offset) {
        for (; cursor_ < offset; ++cursor_) {
            char c = raw_[cursor_];
            if (c == '\n' || (c == '\r' && (cursor_ + 1 >= raw_.size() || raw_[cursor_ + 1] != '\n'))) {
                ++line_;
                col_ = 1;
            } else if (c != '\r' && (static_cast<unsigned char>(c) & 0xC0) != 0x80) {
                ++col_;
            }
        }
    }

    [[noreturn]] void fail(std::size_t at, std::string reason) const {
        auto [line, col] = lines_.locate(src_.origin[std::min(at, s_.size())]);
        throw LexError(line, col, std::move(reason));
    }

    char peek(std::size_t k = 0) const { return pos_ + k < s_.size() ? s_[pos_ + k] : '\0'; }
    bool at_end(std::size_t k = 0) const { return pos_ + k >= s_.size(); }

    void skip_whitespace() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == ' ' || c == '\t' || c == '\f' || c == '\n' || c == '\r') {
                ++pos_;
            } else if (c == '\x1a' && pos_ + 1 == s_.size()) {
                ++pos_; // trailing SUB is permitted
            } else {
                break;
            }
        }
    }

    TokenKind scan_token() {
        char c = peek();
        if (c == '/' && peek(1) == '/') {
            while (!at_end() && peek() != '\n' && peek() != '\r') ++pos_;
            return TokenKind::Comment;
        }
        if (c == '/' && peek(1) == '*') {
            std::size_t close = s_.find("*/", pos_ + 2);
            if (close == std::string_view::npos) fail(pos_, "unterminated comment");
            pos_ = close + 2;
            return TokenKind::Comment;
        }
        if (is_ident_start(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (!at_end() && is_ident_part(static_cast<unsigned char>(peek()))) ++pos_;
            return java_keywords().contains(s_.substr(start, pos_ - start)) ? TokenKind::Keyword
                                                                            : TokenKind::Identifier;
        }
        if (is_digit(c) || (c == '.' && is_digit(peek(1)))) return scan_number();
        if (c == '"') {
            if (peek(1) == '"' && peek(2) == '"') return scan_text_block();
            return scan_string();
        }
        if (c == '\'') return scan_char();
        for (std::string_view p : punctuation) {
            if (p[0] == c && s_.substr(pos_).starts_with(p)) {
                pos_ += p.size();
                return is_separator(p) ? TokenKind::Separator : TokenKind::Operator;
            }
        }
        fail(pos_, std::string("illegal character '") + c + "'");
    }

    std::size_t digits(bool (*accept)(char)) {
        std::size_t n = 0;
        while (!at_end() && (accept(peek()) || peek() == '_')) {
            if (peek() != '_') ++n;
            ++pos_;
        }
        return n;
    }

    void exponent(char lower, std::size_t start) {
        if (peek() == lower || peek() == static_cast<char>(lower - 'a' + 'A')) {
            ++pos_;
            if (peek() == '+' || peek() == '-') ++pos_;
            if (digits([](char ch) { return is_digit(ch); }) == 0) fail(start, "malformed floating-point literal");
        }
    }

    TokenKind scan_number() {
        std::size_t start = pos_;
        TokenKind kind = TokenKind::IntLiteral;
        auto hex = [](char ch) { return is_hex(ch); };
        auto dec = [](char ch) { return is_digit(ch); };
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
            pos_ += 2;
            std::size_t n = digits(hex);
            if (peek() == '.' || peek() == 'p' || peek() == 'P') {
                if (peek() == '.') {
                    ++pos_;
                    n += digits(hex);
                }
                if (n == 0 || (peek() != 'p' && peek() != 'P')) fail(start, "malformed hexadecimal floating-point literal");
                exponent('p', start);
                kind = TokenKind::FloatLiteral;
            } else if (n == 0) {
                fail(start, "hexadecimal literal without digits");
            }
        } else if (peek() == '0' && (peek(1) == 'b' || peek(1) == 'B')) {
            pos_ += 2;
            if (digits([](char ch) { return ch == '0' || ch == '1'; }) == 0) fail(start, "binary literal without digits");
        } else {
            digits(dec);
            if (peek() == '.') {
                ++pos_;
                digits(dec);
                kind = TokenKind::FloatLiteral;
            }
            if (peek() == 'e' || peek() == 'E') {
                exponent('e', start);
                kind = TokenKind::FloatLiteral;
            }
        }
        char suffix = peek();
        if (suffix == 'l' || suffix == 'L') {
            if (kind == TokenKind::FloatLiteral) fail(start, "malformed numeric literal");
            ++pos_;
        } else if (suffix == 'f' || suffix == 'F' || suffix == 'd' || suffix == 'D') {
            // hexadecimal digits already absorbed any f/d; binary literals take no such suffix
            bool radix_int = kind == TokenKind::IntLiteral && s_.size() > start + 1 && s_[start] == '0' &&
                             (s_[start + 1] == 'b' || s_[start + 1] == 'B');
            if (!radix_int) {
                ++pos_;
                kind = TokenKind::FloatLiteral;
            }
        }
        if (!at_end() && is_ident_part(static_cast<unsigned char>(peek()))) fail(start, "malformed numeric literal");
        return kind;
    }

    static bool valid_escape(char e) {
        return e == 'b' || e == 's' || e == 't' || e == 'n' || e == 'f' || e == 'r' || e == '"' || e == '\'' ||
               e == '\\' || (e >= '0' && e <= '7');
    }

    TokenKind scan_string() {
        std::size_t start = pos_++;
        while (true) {
            if (at_end() || peek() == '\n' || peek() == '\r') fail(start, "unterminated string literal");
            char c = s_[pos_++];
            if (c == '\\') {
                if (at_end() || peek() == '\n' || peek() == '\r') fail(start, "unterminated string literal");
                if (!valid_escape(peek())) fail(pos_ - 1, "illegal escape sequence");
                ++pos_;
            } else if (c == '"') {
                return TokenKind::StringLiteral;
            }
        }
    }

    TokenKind scan_text_block() {
        std::size_t start = pos_;
        pos_ += 3;
        while (peek() == ' ' || peek() == '\t' || peek() == '\f') ++pos_;
        if (peek() != '\n' && peek() != '\r') fail(start, "text block opening delimiter must be followed by a line terminator");
        while (true) {
            if (at_end()) fail(start, "unterminated text block");
            if (peek() == '\\') {
                if (at_end(1)) fail(start, "unterminated text block");
                char e = peek(1);
                if (!valid_escape(e) && e != '\n' && e != '\r') fail(pos_, "illegal escape sequence");
                pos_ += 2;
                continue;
            }
            if (peek() == '"' && peek(1) == '"' && peek(2) == '"') {
                pos_ += 3;
                return TokenKind::TextBlockLiteral;
            }
            ++pos_;
        }
    }

    TokenKind scan_char() {
        std::size_t start = pos_++;
        if (at_end() || peek() == '\n' || peek() == '\r') fail(start, "unterminated character literal");
        if (peek() == '\'') fail(start, "empty character literal");
        if (peek() == '\\') {
            ++pos_;
            if (at_end()) fail(start, "unterminated character literal");
            if (!valid_escape(peek())) fail(pos_ - 1, "illegal escape sequence");
            if (peek() >= '0' && peek() <= '7') {
                for (int k = 0; k < 3 && peek() >= '0' && peek() <= '7'; ++k) ++pos_;
            } else {
                ++pos_;
            }
        } else {
            ++pos_;
            while (!at_end() && (static_cast<unsigned char>(peek()) & 0xC0) == 0x80) ++pos_;
        }
        if (peek() != '\'') fail(start, "unterminated character literal");
        ++pos_;
        return TokenKind::CharLiteral;
    }

    std::string_view raw_;
    LexOptions options_;
    LineMap lines_;
    Translated src_;
    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t cursor_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t col_ = 1;
};

} // namespace detail

/// Tokenizes Java source text. Throws LexError on malformed input.
inline TokenStream tokenize(std::string_view text, const LexOptions& options = {}) {
    return detail::Lexer(text, options).run();
}

/// Token-sequence equality over (kind, text); positions are ignored.
inline bool normalized_equal(std::span<const Token> a, std::span<const Token> b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                      [](const Token& x, const Token& y) { return x.kind == y.kind && x.text == y.text; });
}

inline bool normalized_equal(const TokenStream& a, const TokenStream& b) {
    return normalized_equal(std::span<const Token>(a.tokens), std::span<const Token>(b.tokens));
}

/// Token texts joined by single spaces; the canonical normalized form.
inline std::string join_tokens(std::span<const Token> tokens) {
    std::string out;
    for (const Token& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t.text;
    }
    return out;
}

inline std::string join_tokens(const TokenStream& stream) { return join_tokens(std::span<const Token>(stream.tokens)); }

} // namespace srceq
