// SPDX-License-Identifier: Apache-2.0
//
// Shallow structural views over token sequences: bracket matching, dotted
// name runs and element splitting. Nothing here builds a syntax tree.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srceq/lexer.hpp"

namespace srceq {

/// Half-open token index range.
struct TokenRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool empty() const { return begin == end; }
    bool contains(std::size_t i) const { return i >= begin && i < end; }
    friend bool operator==(const TokenRange&, const TokenRange&) = default;
};

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

inline bool is_open_bracket(const Token& t) {
    return t.kind == TokenKind::Separator && (t.text == "(" || t.text == "[" || t.text == "{");
}
inline bool is_close_bracket(const Token& t) {
    return t.kind == TokenKind::Separator && (t.text == ")" || t.text == "]" || t.text == "}");
}

/// Partner index for every bracket token (npos for unmatched ones and for
/// non-bracket tokens). `balanced` is false when any bracket is unmatched or
/// closes the wrong kind.
struct BracketMatch {
    std::vector<std::size_t> partner;
    bool balanced = true;
};

inline BracketMatch match_brackets(std::span<const Token> tokens) {
    BracketMatch out;
    out.partner.assign(tokens.size(), npos);
    std::vector<std::size_t> stack;
    auto pairs = [](const std::string& open, const std::string& close) {
        return (open == "(" && close == ")") || (open == "[" && close == "]") || (open == "{" && close == "}");
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (is_open_bracket(tokens[i])) {
            stack.push_back(i);
        } else if (is_close_bracket(tokens[i])) {
            if (stack.empty() || !pairs(tokens[stack.back()].text, tokens[i].text)) {
                out.balanced = false;
                continue;
            }
            out.partner[i] = stack.back();
            out.partner[stack.back()] = i;
            stack.pop_back();
        }
    }
    if (!stack.empty()) out.balanced = false;
    return out;
}

/// Index of the innermost bracket pair strictly enclosing `range`, as
/// (open, close). nullopt when the range sits at top level.
inline std::optional<std::pair<std::size_t, std::size_t>>
enclosing_group(std::span<const Token> tokens, const BracketMatch& match, TokenRange range) {
    // Walk left from range.begin keeping a depth counter; the first unmatched
    // opener whose partner lies at or beyond range.end encloses the range.
    std::size_t depth = 0;
    for (std::size_t i = range.begin; i-- > 0;) {
        if (is_close_bracket(tokens[i])) {
            ++depth;
        } else if (is_open_bracket(tokens[i])) {
            if (depth > 0) {
                --depth;
                continue;
            }
            std::size_t close = match.partner[i];
            if (close != npos && close >= range.end) return std::make_pair(i, close);
        }
    }
    return std::nullopt;
}

/// Run id per token: maximal sequences `Ident (. Ident)*` share an id, every
/// other token gets npos.
inline std::vector<std::size_t> dotted_runs(std::span<const Token> tokens) {
    std::vector<std::size_t> run(tokens.size(), npos);
    std::size_t next_id = 0;
    std::size_t i = 0;
    while (i < tokens.size()) {
        if (!tokens[i].is_ident()) {
            ++i;
            continue;
        }
        std::size_t id = next_id++;
        run[i] = id;
        std::size_t j = i + 1;
        while (j + 1 < tokens.size() && tokens[j].is_sep(".") && tokens[j + 1].is_ident()) {
            run[j] = id;
            run[j + 1] = id;
            j += 2;
        }
        i = j;
    }
    return run;
}

/// Text of a dotted run (or single token) as "a.b.C".
inline std::string run_text(std::span<const Token> tokens, TokenRange r) {
    std::string out;
    for (std::size_t i = r.begin; i < r.end; ++i) out += tokens[i].text;
    return out;
}

/// Splits the tokens of `range` into sibling elements at nesting depth zero.
/// Elements end after `;`, at `,` `||` `&&` (separator dropped), or after a
/// closing `}` that ends a block statement or member. Used for comparing
/// statement lists, member lists and operand lists as multisets.
inline std::vector<TokenRange> split_elements(std::span<const Token> tokens, TokenRange range) {
    std::vector<TokenRange> out;
    std::size_t depth = 0;
    std::size_t start = range.begin;
    bool saw_assign = false;
    auto flush = [&](std::size_t end) {
        if (end > start) out.push_back({start, end});
    };
    for (std::size_t i = range.begin; i < range.end; ++i) {
        const Token& t = tokens[i];
        if (is_open_bracket(t)) {
            ++depth;
            continue;
        }
        if (is_close_bracket(t)) {
            if (depth > 0) --depth;
            if (depth == 0 && t.text == "}" && !saw_assign) {
                bool continues = false;
                if (i + 1 < range.end) {
                    const Token& n = tokens[i + 1];
                    continues = n.is_kw("else") || n.is_kw("catch") || n.is_kw("finally") || n.is_sep(";") ||
                                n.is_sep(",") || n.is_sep(".") || n.is_sep(")") || n.is_op("||") || n.is_op("&&") ||
                                (n.is_kw("while") && tokens[start].is_kw("do"));
                }
                if (!continues) {
                    flush(i + 1);
                    start = i + 1;
                    saw_assign = false;
                }
            }
            continue;
        }
        if (depth != 0) continue;
        if (t.is_op("=")) saw_assign = true;
        if (t.is_sep(";")) {
            flush(i + 1);
            start = i + 1;
            saw_assign = false;
        } else if (t.is_sep(",") || t.is_op("||") || t.is_op("&&")) {
            flush(i);
            start = i + 1;
            saw_assign = false;
        }
    }
    flush(range.end);
    return out;
}

/// Element token texts, joined with a unit separator; the multiset key.
inline std::string element_key(std::span<const Token> tokens, TokenRange r) {
    std::string key;
    for (std::size_t i = r.begin; i < r.end; ++i) {
        key += static_cast<char>('0' + static_cast<int>(tokens[i].kind));
        key += tokens[i].text;
        key += '\x1f';
    }
    return key;
}

} // namespace srceq
