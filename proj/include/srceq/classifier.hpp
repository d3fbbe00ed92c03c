// SPDX-License-Identifier: Apache-2.0
//
// Explains non-equivalent file pairs. Each detector inspects the diff hunks of
// a pair and reports which hunks it can account for; the share of explained
// hunks is the detector's confidence. Detectors run on the raw units because
// generator banners live in comments.

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "srceq/equivalence.hpp"
#include "srceq/repo_trace.hpp"
#include "srceq/source_model.hpp"
#include "srceq/structure.hpp"

namespace srceq {

enum class CauseLabel {
    CodegenMeta,
    CodegenGeneratedAnnotation,
    CodegenIstack,
    CodegenProto,
    CodegenAntlr,
    CodegenGroovy,
    Shading,
    InconsistentCommit,
    Unknown,
};

inline std::string_view to_string(CauseLabel label) {
    switch (label) {
    case CauseLabel::CodegenMeta: return "codegen/meta";
    case CauseLabel::CodegenGeneratedAnnotation: return "codegen/@generated";
    case CauseLabel::CodegenIstack: return "codegen/istack";
    case CauseLabel::CodegenProto: return "codegen/proto";
    case CauseLabel::CodegenAntlr: return "codegen/antlr";
    case CauseLabel::CodegenGroovy: return "codegen/groovy";
    case CauseLabel::Shading: return "shading";
    case CauseLabel::InconsistentCommit: return "inconsistentcommit";
    case CauseLabel::Unknown: return "unknown";
    }
    return "?";
}

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tunable lexicons, banners and thresholds. Loaded from a `key = value` file
/// (lists comma-separated, `#` starts a comment line).
struct HeuristicsConfig {
    std::vector<std::string> meta_lexicon{"VERSION", "REVISION", "BUILD", "TIMESTAMP", "COMMIT", "GIT",
                                          "ID",      "HASH",     "DATE",  "BRANCH",    "URL",    "USER"};
    std::vector<std::string> generated_annotations{"Generated"};
    std::vector<std::string> istack_class_names{"LocalizationMessages"};
    std::vector<std::string> proto_banners{"Generated by the protocol buffer compiler"};
    std::vector<std::string> proto_identifiers{"protobuf",          "GeneratedMessageV3", "GeneratedMessage",
                                               "GeneratedMessageLite", "CodedInputStream", "CodedOutputStream",
                                               "ExtensionRegistry", "ExtensionRegistryLite", "ByteString",
                                               "Descriptors",       "InvalidProtocolBufferException"};
    std::size_t proto_window = 4;
    std::vector<std::string> antlr_banners{"$ANTLR", "Generated from"};
    std::vector<std::string> antlr_base_types{"Parser", "Lexer", "DebugParser", "DebugLexer", "TreeParser"};
    double min_confidence = 0.0;
    double residual_confidence = 0.5;

    void set(std::string_view key, std::string_view value) {
        auto list = [&] {
            std::vector<std::string> out;
            std::stringstream ss{std::string(value)};
            std::string item;
            while (std::getline(ss, item, ',')) {
                auto b = item.find_first_not_of(" \t");
                auto e = item.find_last_not_of(" \t");
                if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
            }
            return out;
        };
        auto number = [&](double lo, double hi) {
            double v = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec != std::errc() || ptr != value.data() + value.size() || v < lo || v > hi)
                throw ConfigError("invalid value for " + std::string(key) + ": " + std::string(value));
            return v;
        };
        if (key == "meta.lexicon") meta_lexicon = list();
        else if (key == "generated.annotations") generated_annotations = list();
        else if (key == "istack.class_names") istack_class_names = list();
        else if (key == "proto.banners") proto_banners = list();
        else if (key == "proto.identifiers") proto_identifiers = list();
        else if (key == "proto.window") proto_window = static_cast<std::size_t>(number(0, 1000));
        else if (key == "antlr.banners") antlr_banners = list();
        else if (key == "antlr.base_types") antlr_base_types = list();
        else if (key == "confidence.min") min_confidence = number(0, 1);
        else if (key == "confidence.residual") residual_confidence = number(0, 1);
        else throw ConfigError("unknown heuristics key: " + std::string(key));
    }

    static HeuristicsConfig parse(std::string_view text) {
        HeuristicsConfig config;
        std::stringstream in{std::string(text)};
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos || line[b] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
            auto trim = [](std::string s) {
                auto l = s.find_first_not_of(" \t\r");
                auto r = s.find_last_not_of(" \t\r");
                return l == std::string::npos ? std::string() : s.substr(l, r - l + 1);
            };
            config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
        return config;
    }

    static HeuristicsConfig load(const std::filesystem::path& path) { return parse(read_file(path)); }
};

struct EvidenceSnippet {
    char side = 'a';
    std::uint32_t line = 1;
    std::uint32_t col = 1;
    std::size_t offset = 0;
    std::string text; // exact slice of that side's raw text

    friend bool operator<(const EvidenceSnippet& x, const EvidenceSnippet& y) {
        return std::tie(x.side, x.offset, x.text) < std::tie(y.side, y.offset, y.text);
    }
    friend bool operator==(const EvidenceSnippet& x, const EvidenceSnippet& y) {
        return x.side == y.side && x.offset == y.offset && x.text == y.text;
    }
};

/// Package relocation inferred from dotted-name rewrites, A side to B side.
struct ShadingMap {
    std::vector<std::pair<std::string, std::string>> prefix_pairs;

    /// Rewrites the longest matching prefix (on segment boundaries).
    std::string apply(std::string_view dotted) const {
        const std::pair<std::string, std::string>* best = nullptr;
        for (const auto& p : prefix_pairs) {
            bool hit = dotted == p.first ||
                       (dotted.size() > p.first.size() && dotted.starts_with(p.first) && dotted[p.first.size()] == '.');
            if (hit && (!best || p.first.size() > best->first.size())) best = &p;
        }
        if (!best) return std::string(dotted);
        return best->second + std::string(dotted.substr(best->first.size()));
    }

    /// Applies the map to every dotted-name run of a token sequence.
    std::vector<Token> apply(std::span<const Token> tokens) const {
        std::vector<Token> out;
        auto runs = dotted_runs(tokens);
        std::size_t i = 0;
        while (i < tokens.size()) {
            if (runs[i] == npos) {
                out.push_back(tokens[i++]);
                continue;
            }
            std::size_t j = i;
            while (j < tokens.size() && runs[j] == runs[i]) ++j;
            std::string rewritten = apply(run_text(tokens, {i, j}));
            std::size_t start = 0;
            while (true) {
                std::size_t dot = rewritten.find('.', start);
                Token seg = tokens[i];
                seg.kind = TokenKind::Identifier;
                seg.text = rewritten.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
                out.push_back(seg);
                if (dot == std::string::npos) break;
                Token sep = tokens[i];
                sep.kind = TokenKind::Separator;
                sep.text = ".";
                out.push_back(sep);
                start = dot + 1;
            }
            i = j;
        }
        return out;
    }
};

/// What one detector found for one pair.
struct DetectorResult {
    std::vector<bool> explained; // per hunk
    std::vector<EvidenceSnippet> evidence;
    std::optional<ShadingMap> shading;

    std::size_t explained_count() const { return static_cast<std::size_t>(std::count(explained.begin(), explained.end(), true)); }
    double confidence() const {
        return explained.empty() ? 0.0 : static_cast<double>(explained_count()) / static_cast<double>(explained.size());
    }
};

struct LabelEvidence {
    CauseLabel label = CauseLabel::Unknown;
    double confidence = 0.0;
    std::vector<EvidenceSnippet> evidence;
    std::optional<ShadingMap> shading;
};

struct CauseVerdict {
    std::string path;
    std::vector<LabelEvidence> labels; // ranked by confidence

    bool has(CauseLabel l) const {
        return std::any_of(labels.begin(), labels.end(), [&](const LabelEvidence& e) { return e.label == l; });
    }
    const LabelEvidence* find(CauseLabel l) const {
        for (const auto& e : labels)
            if (e.label == l) return &e;
        return nullptr;
    }
};

/// Everything a detector may look at.
struct PairContext {
    const std::vector<DiffHunk>& hunks;
    const SourceUnit& a;
    const SourceUnit& b;
    const HeuristicsConfig& config;

    std::span<const Token> ta() const { return a.stream.tokens; }
    std::span<const Token> tb() const { return b.stream.tokens; }
};

namespace detail {

inline std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

inline EvidenceSnippet slice(const SourceUnit& unit, char side, std::span<const Token> tokens, TokenRange r) {
    EvidenceSnippet e;
    e.side = side;
    const Token& first = tokens[r.begin];
    const Token& last = tokens[r.end - 1];
    e.line = first.line;
    e.col = first.col;
    e.offset = first.offset;
    e.text = unit.text.substr(first.offset, last.offset + last.length - first.offset);
    return e;
}

/// Snippet for a hunk: its A side, or its B side for pure insertions.
inline std::optional<EvidenceSnippet> hunk_snippet(const PairContext& ctx, const DiffHunk& h) {
    if (!h.a.empty()) return slice(ctx.a, 'a', ctx.ta(), h.a);
    if (!h.b.empty()) return slice(ctx.b, 'b', ctx.tb(), h.b);
    return std::nullopt;
}

inline DetectorResult start(const PairContext& ctx) {
    DetectorResult r;
    r.explained.assign(ctx.hunks.size(), false);
    return r;
}

inline void explain(DetectorResult& r, const PairContext& ctx, std::size_t hunk) {
    r.explained[hunk] = true;
    if (auto s = hunk_snippet(ctx, ctx.hunks[hunk])) r.evidence.push_back(*s);
}

inline void finish(DetectorResult& r) {
    std::sort(r.evidence.begin(), r.evidence.end());
    r.evidence.erase(std::unique(r.evidence.begin(), r.evidence.end()), r.evidence.end());
}

/// Comment tokens of the raw text; empty when the text does not lex.
inline std::vector<Token> comments_of(const SourceUnit& unit) {
    std::vector<Token> out;
    if (unit.lex_error) return out;
    try {
        for (Token& t : tokenize(unit.text, {.strip_comments = false}).tokens)
            if (t.kind == TokenKind::Comment) out.push_back(std::move(t));
    } catch (const LexError&) {
    }
    return out;
}

inline EvidenceSnippet token_snippet(const SourceUnit& unit, char side, const Token& t) {
    return {side, t.line, t.col, t.offset, unit.text.substr(t.offset, t.length)};
}

inline bool contains_any(std::string_view text, const std::vector<std::string>& needles) {
    return std::any_of(needles.begin(), needles.end(),
                       [&](const std::string& n) { return !n.empty() && text.find(n) != std::string_view::npos; });
}

/// Token spans of `@...Generated(...)` annotations and of imports of a
/// Generated type.
inline std::vector<bool> generated_mask(std::span<const Token> t, const std::vector<std::string>& names) {
    std::vector<bool> mask(t.size(), false);
    auto is_name = [&](const std::string& s) { return std::find(names.begin(), names.end(), s) != names.end(); };
    auto match = match_brackets(t);
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i].is_sep("@") && i + 1 < t.size() && t[i + 1].is_ident()) {
            std::size_t j = i + 1;
            while (j + 2 < t.size() && t[j + 1].is_sep(".") && t[j + 2].is_ident()) j += 2;
            if (!is_name(t[j].text)) continue;
            std::size_t end = j + 1;
            if (end < t.size() && t[end].is_sep("(") && match.partner[end] != npos) end = match.partner[end] + 1;
            std::fill(mask.begin() + static_cast<std::ptrdiff_t>(i), mask.begin() + static_cast<std::ptrdiff_t>(end), true);
        } else if (t[i].is_kw("import")) {
            std::size_t j = i + 1;
            if (j < t.size() && t[j].is_kw("static")) ++j;
            std::size_t k = j;
            while (k < t.size() && (t[k].is_ident() || t[k].is_sep("."))) ++k;
            if (k < t.size() && t[k].is_sep(";") && k > j && is_name(t[k - 1].text))
                std::fill(mask.begin() + static_cast<std::ptrdiff_t>(i), mask.begin() + static_cast<std::ptrdiff_t>(k + 1), true);
        }
    }
    return mask;
}

inline TokenRange class_body(std::span<const Token> t, const BracketMatch& match) {
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if ((t[i].is_kw("class") || t[i].is_kw("interface") || t[i].is_kw("enum")) && t[i + 1].is_ident()) {
            for (std::size_t j = i + 2; j < t.size(); ++j) {
                if (t[j].is_sep("{")) {
                    if (match.partner[j] == npos) return {0, 0};
                    return {j + 1, match.partner[j]};
                }
            }
        }
    }
    return {0, 0};
}

/// Dotted-run expansion of a hunk so both sides start and end on run
/// boundaries. Extensions consume the same common tokens on both sides.
inline std::optional<std::pair<TokenRange, TokenRange>> expand_to_runs(std::span<const Token> ta, std::span<const Token> tb,
                                                                      const std::vector<std::size_t>& ra,
                                                                      const std::vector<std::size_t>& rb, const DiffHunk& h) {
    TokenRange a = h.a, b = h.b;
    auto same_run = [](const std::vector<std::size_t>& runs, std::size_t left, std::size_t right, std::size_t n) {
        return left < n && right < n && runs[left] != npos && runs[left] == runs[right];
    };
    auto same_token = [](const Token& x, const Token& y) { return x.kind == y.kind && x.text == y.text; };
    for (int guard = 0; guard < 256; ++guard) {
        bool changed = false;
        if ((a.begin > 0 && same_run(ra, a.begin - 1, a.begin, ta.size())) ||
            (b.begin > 0 && same_run(rb, b.begin - 1, b.begin, tb.size()))) {
            if (a.begin == 0 || b.begin == 0 || !same_token(ta[a.begin - 1], tb[b.begin - 1])) return std::nullopt;
            --a.begin, --b.begin;
            changed = true;
        }
        if ((a.end > 0 && same_run(ra, a.end - 1, a.end, ta.size())) || (b.end > 0 && same_run(rb, b.end - 1, b.end, tb.size()))) {
            if (a.end >= ta.size() || b.end >= tb.size() || !same_token(ta[a.end], tb[b.end])) return std::nullopt;
            ++a.end, ++b.end;
            changed = true;
        }
        if (!changed) return std::make_pair(a, b);
    }
    return std::nullopt;
}

struct Item {
    TokenRange range;
    bool is_run = false;
};

inline std::vector<Item> items_of(const std::vector<std::size_t>& runs, TokenRange r) {
    std::vector<Item> out;
    std::size_t i = r.begin;
    while (i < r.end) {
        if (runs[i] == npos) {
            out.push_back({{i, i + 1}, false});
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < r.end && runs[j] == runs[i]) ++j;
        out.push_back({{i, j}, true});
        i = j;
    }
    return out;
}

inline std::vector<std::string> split_dots(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t dot = s.find('.', start);
        out.push_back(s.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return out;
}

inline std::string join_dots(const std::vector<std::string>& segs, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out += '.';
        out += segs[i];
    }
    return out;
}

/// Prefix pair relating two qualified names that share a trailing part. When
/// the shared part has two or more segments, its leading segment (the
/// relocated package's leaf) is kept in both prefixes.
inline std::optional<std::pair<std::string, std::string>> induce_prefix_pair(const std::string& from, const std::string& to) {
    auto sa = split_dots(from), sb = split_dots(to);
    std::size_t common = 0;
    while (common < sa.size() && common < sb.size() && sa[sa.size() - 1 - common] == sb[sb.size() - 1 - common]) ++common;
    if (common == 0) return std::nullopt;
    std::size_t keep = common >= 2 ? 1 : 0;
    std::size_t na = sa.size() - common + keep, nb = sb.size() - common + keep;
    if (na == 0 || nb == 0) return std::nullopt;
    return std::make_pair(join_dots(sa, na), join_dots(sb, nb));
}

/// Element key in which nested statement blocks and `||`/`&&` operand lists
/// are sorted, so reorderings at any depth compare equal. Comma lists keep
/// their order.
inline std::string canonical_key(std::span<const Token> t, const BracketMatch& match, TokenRange r) {
    std::string key;
    for (std::size_t i = r.begin; i < r.end; ++i) {
        key += static_cast<char>('0' + static_cast<int>(t[i].kind));
        key += t[i].text;
        key += '\x1f';
        if (!is_open_bracket(t[i]) || match.partner[i] == npos || match.partner[i] >= r.end) continue;
        TokenRange inner{i + 1, match.partner[i]};
        bool commas = false, sortable = t[i].text == "{";
        for (std::size_t j = inner.begin; j < inner.end; ++j) {
            if (is_open_bracket(t[j]) && match.partner[j] != npos) {
                j = match.partner[j];
                continue;
            }
            commas |= t[j].is_sep(",");
            sortable |= t[j].is_op("||") || t[j].is_op("&&");
        }
        std::vector<std::string> parts;
        for (TokenRange e : split_elements(t, inner)) parts.push_back(canonical_key(t, match, e));
        if (sortable && !commas) std::sort(parts.begin(), parts.end());
        for (const auto& part : parts) key += part + '\x1e';
        i = match.partner[i] - 1;
    }
    return key;
}

inline bool has_top_level_comma(std::span<const Token> t, const BracketMatch& match, TokenRange r) {
    for (std::size_t i = r.begin; i < r.end; ++i) {
        if (is_open_bracket(t[i]) && match.partner[i] != npos) i = match.partner[i];
        else if (t[i].is_sep(",")) return true;
    }
    return false;
}

/// Enclosing bracket groups of a range, innermost first.
inline std::vector<std::pair<std::size_t, std::size_t>> group_chain(std::span<const Token> t, const BracketMatch& match,
                                                                    TokenRange r) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    while (auto g = enclosing_group(t, match, r)) {
        out.push_back(*g);
        r = {g->first, g->second + 1};
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Detectors
// ---------------------------------------------------------------------------

/// Build metadata baked into literals: literal-only changes next to a
/// metadata-named identifier, or unresolved build variables in literals.
inline DetectorResult detect_meta(const PairContext& ctx) {
    DetectorResult r = detail::start(ctx);
    std::vector<std::string> lexicon;
    for (const auto& term : ctx.config.meta_lexicon) lexicon.push_back(detail::upper(term));
    auto ta = ctx.ta();

    auto named_like_metadata = [&](std::size_t index) {
        for (std::size_t i = index; i-- > 0;) {
            if (!ta[i].is_ident()) continue;
            std::string name = detail::upper(ta[i].text);
            return std::any_of(lexicon.begin(), lexicon.end(), [&](const std::string& t) { return name.find(t) != std::string::npos; });
        }
        return false;
    };
    auto unresolved = [](const std::vector<Token>& tokens) {
        return std::any_of(tokens.begin(), tokens.end(), [](const Token& t) {
            return (t.kind == TokenKind::StringLiteral || t.kind == TokenKind::TextBlockLiteral || t.kind == TokenKind::CharLiteral) &&
                   literal_has_template_marker(t.text);
        });
    };

    auto mask_a = detail::generated_mask(ta, ctx.config.generated_annotations);
    auto mask_b = detail::generated_mask(ctx.tb(), ctx.config.generated_annotations);
    auto masked = [](const std::vector<bool>& mask, TokenRange r) {
        return std::all_of(mask.begin() + static_cast<std::ptrdiff_t>(r.begin), mask.begin() + static_cast<std::ptrdiff_t>(r.end),
                           [](bool b) { return b; });
    };

    for (std::size_t k = 0; k < ctx.hunks.size(); ++k) {
        const DiffHunk& h = ctx.hunks[k];
        // Attributes of @Generated belong to that rule.
        if (masked(mask_a, h.a) && masked(mask_b, h.b)) continue;
        bool literal_only = !h.a_tokens.empty() && h.a_tokens.size() == h.b_tokens.size();
        bool any_diff = false;
        for (std::size_t i = 0; literal_only && i < h.a_tokens.size(); ++i) {
            const Token& x = h.a_tokens[i];
            const Token& y = h.b_tokens[i];
            if (x.kind == y.kind && x.text == y.text) continue;
            any_diff = true;
            if (!is_literal(x.kind) || !is_literal(y.kind) || !named_like_metadata(h.a.begin + i)) literal_only = false;
        }
        if ((literal_only && any_diff) || unresolved(h.a_tokens) || unresolved(h.b_tokens)) detail::explain(r, ctx, k);
    }
    detail::finish(r);
    return r;
}

/// Differences confined to @Generated annotations (and imports of the
/// annotation type), including an annotation present on one side only.
inline DetectorResult detect_generated_annotation(const PairContext& ctx) {
    DetectorResult r = detail::start(ctx);
    auto ta = ctx.ta(), tb = ctx.tb();
    auto mask_a = detail::generated_mask(ta, ctx.config.generated_annotations);
    auto mask_b = detail::generated_mask(tb, ctx.config.generated_annotations);
    for (std::size_t k = 0; k < ctx.hunks.size(); ++k) {
        const DiffHunk& h = ctx.hunks[k];
        std::vector<Token> rest_a, rest_b;
        bool excised = false;
        for (std::size_t i = h.a.begin; i < h.a.end; ++i) (mask_a[i] ? excised = true : (rest_a.push_back(ta[i]), false));
        for (std::size_t i = h.b.begin; i < h.b.end; ++i) (mask_b[i] ? excised = true : (rest_b.push_back(tb[i]), false));
        if (excised && normalized_equal(rest_a, rest_b)) detail::explain(r, ctx, k);
    }
    detail::finish(r);
    return r;
}

/// LocalizationMessages classes whose members differ only in order (one side
/// may add a private parameterless constructor).
inline DetectorResult detect_istack(const PairContext& ctx) {
    DetectorResult r = detail::start(ctx);
    const auto& names = ctx.config.istack_class_names;
    auto gated = [&](const SourceUnit& u) {
        return u.top_level_types.size() == 1 && std::find(names.begin(), names.end(), u.top_level_types[0]) != names.end();
    };
    if (!gated(ctx.a) || !gated(ctx.b) || ctx.a.top_level_types != ctx.b.top_level_types) return r;

    auto ta = ctx.ta(), tb = ctx.tb();
    auto ma = match_brackets(ta), mb = match_brackets(tb);
    TokenRange body_a = detail::class_body(ta, ma), body_b = detail::class_body(tb, mb);
    if (body_a.empty() || body_b.empty()) return r;
    const std::string& cls = ctx.a.top_level_types[0];

    struct Members {
        std::vector<TokenRange> ranges;
        std::vector<std::string> keys;
        std::vector<bool> allowed_ctor;
    };
    auto members_of = [&](std::span<const Token> t, TokenRange body) {
        Members m;
        for (TokenRange e : split_elements(t, body)) {
            m.ranges.push_back(e);
            m.keys.push_back(element_key(t, e));
            bool ctor = e.size() >= 6 && t[e.begin].is_kw("private") && t[e.begin + 1].is(TokenKind::Identifier, cls) &&
                        t[e.begin + 2].is_sep("(") && t[e.begin + 3].is_sep(")") && t[e.begin + 4].is_sep("{") &&
                        t[e.end - 1].is_sep("}");
            m.allowed_ctor.push_back(ctor);
        }
        return m;
    };
    Members ma_ = members_of(ta, body_a), mb_ = members_of(tb, body_b);

    std::map<std::string, long> balance;
    for (std::size_t i = 0; i < ma_.keys.size(); ++i)
        if (!ma_.allowed_ctor[i]) ++balance[ma_.keys[i]];
    for (std::size_t i = 0; i < mb_.keys.size(); ++i)
        if (!mb_.allowed_ctor[i]) --balance[mb_.keys[i]];
    bool multiset_equal = std::all_of(balance.begin(), balance.end(), [](const auto& kv) { return kv.second == 0; });

    auto touches_only_balanced = [&](const Members& m, TokenRange body, TokenRange h) {
        if (h.empty()) return h.begin >= body.begin && h.begin <= body.end;
        if (h.begin < body.begin || h.end > body.end) return false;
        for (std::size_t i = 0; i < m.ranges.size(); ++i) {
            const TokenRange& e = m.ranges[i];
            bool overlaps = e.begin < h.end && h.begin < e.end;
            if (overlaps && !m.allowed_ctor[i] && balance[m.keys[i]] != 0) return false;
        }
        // Tokens of the hunk outside every member (stray separators) are not explained.
        std::size_t covered = 0;
        for (const TokenRange& e : m.ranges) {
            std::size_t lo = std::max(e.begin, h.begin), hi = std::min(e.end, h.end);
            if (lo < hi) covered += hi - lo;
        }
        return covered == h.size();
    };
    for (std::size_t k = 0; k < ctx.hunks.size(); ++k) {
        const DiffHunk& h = ctx.hunks[k];
        if (touches_only_balanced(ma_, body_a, h.a) && touches_only_balanced(mb_, body_b, h.b)) detail::explain(r, ctx, k);
    }
    if (!multiset_equal && r.explained_count() == ctx.hunks.size() && !ctx.hunks.empty()) {
        // The member multisets differ, so the pair is not a pure permutation;
        // charge the imbalance to the last hunk so confidence stays below one.
        r.explained.back() = false;
    }
    detail::finish(r);
    return r;
}

/// protoc output: banner comment, or protobuf runtime identifiers near a hunk.
inline DetectorResult detect_proto(const PairContext& ctx) {
    DetectorResult r = detail::start(ctx);
    std::vector<EvidenceSnippet> banners;
    for (char side : {'a', 'b'}) {
        const SourceUnit& u = side == 'a' ? ctx.a : ctx.b;
        for (const Token& c : detail::comments_of(u))
            if (detail::contains_any(c.text, ctx.config.proto_banners)) banners.push_back(detail::token_snippet(u, side, c));
    }
    if (!banners.empty()) {
        for (std::size_t k = 0; k < ctx.hunks.size(); ++k) detail::explain(r, ctx, k);
        if (r.explained_count() > 0) r.evidence.insert(r.evidence.end(), banners.begin(), banners.end());
        detail::finish(r);
        return r;
    }
    const auto& ids = ctx.config.proto_identifiers;
    auto near_runtime = [&](std::span<const Token> t, TokenRange h) {
        std::size_t w = ctx.config.proto_window;
        std::size_t lo = h.begin > w ? h.begin - w : 0;
        std::size_t hi = std::min(t.size(), h.end + w);
        for (std::size_t i = lo; i < hi; ++i)
            if (t[i].is_ident() && std::find(ids.begin(), ids.end(), t[i].text) != ids.end()) return true;
        return false;
    };
    for (std::size_t k = 0; k < ctx.hunks.size(); ++k) {
        const DiffHunk& h = ctx.hunks[k];
        if (near_runtime(ctx.ta(), h.a) || near_runtime(ctx.tb(), h.b)) detail::explain(r, ctx, k);
    }
    detail::finish(r);
    return r;
}

/// antlr parsers: generator banner (or an antlr runtime base type) plus hunks
/// that only reorder sibling statements or operands.
inline DetectorResult detect_antlr(const PairContext& ctx) {
    DetectorResult r = detail::start(ctx);
    std::vector<EvidenceSnippet> gate;
    for (char side : {'a', 'b'}) {
        const SourceUnit& u = side == 'a' ? ctx.a : ctx.b;
        for (const Token& c : detail::comments_of(u))
            if (detail::contains_any(c.text, ctx.config.antlr_banners) && c.text.find(".g") != std::string::npos)
                gate.push_back(detail::token_snippet(u, side, c));
        if (gate.empty()) {
            auto t = std::span<const Token>(u.stream.tokens);
            for (std::size_t i = 0; i + 3 < t.size(); ++i) {
                if (!t[i].is_kw("class") || !t[i + 1].is_ident()) continue;
                const std::string& name = t[i + 1].text;
                if (!name.ends_with("Parser") && !name.ends_with("Lexer")) continue;
                if (!t[i + 2].is_kw("extends")) continue;
                std::size_t j = i + 3;
                bool antlr = false;
                std::string last;
                while (j < t.size() && (t[j].is_ident() || t[j].is_sep("."))) {
                    if (t[j].is_ident()) last = t[j].text;
                    if (t[j].text == "antlr" || t[j].text == "antlr4") antlr = true;
                    ++j;
                }
                const auto& bases = ctx.config.antlr_base_types;
                if (antlr || std::find(bases.begin(), bases.end(), last) != bases.end()) {
                    gate.push_back(detail::slice(u, side, t, {i, j}));
                    break;
                }
            }
        }
    }
    if (gate.empty()) return r;

    auto ta = ctx.ta(), tb = ctx.tb();
    auto ma = match_brackets(ta), mb = match_brackets(tb);
    auto multiset = [](std::span<const Token> t, const BracketMatch& m, TokenRange inner) {
        std::vector<std::string> keys;
        for (TokenRange e : split_elements(t, inner)) keys.push_back(detail::canonical_key(t, m, e));
        std::sort(keys.begin(), keys.end());
        return keys;
    };
    for (std::size_t k = 0; k < ctx.hunks.size(); ++k) {
        const DiffHunk& h = ctx.hunks[k];
        auto ca = detail::group_chain(ta, ma, h.a), cb = detail::group_chain(tb, mb, h.b);
        // Groups are paired by nesting depth, innermost common depth first.
        for (std::size_t d = std::min(ca.size(), cb.size()); d-- > 0;) {
            auto ga = ca[ca.size() - 1 - d], gb = cb[cb.size() - 1 - d];
            if (ta[ga.first].text != tb[gb.first].text) continue;
            TokenRange ia{ga.first + 1, ga.second}, ib{gb.first + 1, gb.second};
            if (detail::has_top_level_comma(ta, ma, ia) || detail::has_top_level_comma(tb, mb, ib)) continue;
            if (!normalized_equal(ta.subspan(ia.begin, ia.size()), tb.subspan(ib.begin, ib.size())) &&
                multiset(ta, ma, ia) == multiset(tb, mb, ib)) {
                detail::explain(r, ctx, k);
                break;
            }
        }
    }
    if (r.explained_count() > 0) r.evidence.insert(r.evidence.end(), gate.begin(), gate.end());
    detail::finish(r);
    return r;
}

/// Groovy stubs: a qualified type name on one side, its simple name on the
/// other.
inline DetectorResult detect_groovy(const PairContext& ctx) {
    DetectorResult r = detail::start(ctx);
    auto qualifier_only = [](std::span<const Token> t, TokenRange e) {
        // `a . b .` immediately followed by an identifier, not preceded by a dot
        if (e.empty() || e.size() % 2 != 0 || e.end >= t.size() || !t[e.end].is_ident()) return false;
        if (e.begin > 0 && t[e.begin - 1].is_sep(".")) return false;
        for (std::size_t i = e.begin; i < e.end; i += 2)
            if (!t[i].is_ident() || !t[i + 1].is_sep(".")) return false;
        return true;
    };
    auto qualified_vs_simple = [](std::span<const Token> q, TokenRange e, std::span<const Token> s, TokenRange f) {
        if (f.size() != 1 || !s[f.begin].is_ident() || e.size() < 3 || e.size() % 2 == 0) return false;
        if (e.begin > 0 && q[e.begin - 1].is_sep(".")) return false;
        if (e.end < q.size() && q[e.end].is_sep(".")) return false;
        for (std::size_t i = e.begin; i < e.end; ++i) {
            bool even = (i - e.begin) % 2 == 0;
            if (even ? !q[i].is_ident() : !q[i].is_sep(".")) return false;
        }
        return q[e.end - 1].text == s[f.begin].text;
    };
    auto ta = ctx.ta(), tb = ctx.tb();
    for (std::size_t k = 0; k < ctx.hunks.size(); ++k) {
        const DiffHunk& h = ctx.hunks[k];
        bool all = !h.edits.empty();
        for (const Edit& e : h.edits) {
            bool ok = (e.b.empty() && qualifier_only(ta, e.a)) || (e.a.empty() && qualifier_only(tb, e.b)) ||
                      qualified_vs_simple(ta, e.a, tb, e.b) || qualified_vs_simple(tb, e.b, ta, e.a);
            if (!ok) {
                all = false;
                break;
            }
        }
        if (all) detail::explain(r, ctx, k);
    }
    detail::finish(r);
    return r;
}

/// Package relocation: hunks that rewrite the prefix of qualified names. The
/// induced map must be consistent and must reproduce side B on every such
/// hunk, otherwise nothing is reported.
inline DetectorResult detect_shading(const PairContext& ctx) {
    DetectorResult r = detail::start(ctx);
    auto ta = ctx.ta(), tb = ctx.tb();
    auto runs_a = dotted_runs(ta), runs_b = dotted_runs(tb);

    struct Candidate {
        std::size_t hunk;
        std::vector<std::pair<TokenRange, TokenRange>> rewritten; // run pairs that differ
    };
    std::vector<Candidate> candidates;
    std::map<std::string, std::string> induced;
    bool conflict = false;

    for (std::size_t k = 0; k < ctx.hunks.size(); ++k) {
        auto expanded = detail::expand_to_runs(ta, tb, runs_a, runs_b, ctx.hunks[k]);
        if (!expanded) continue;
        auto items_a = detail::items_of(runs_a, expanded->first);
        auto items_b = detail::items_of(runs_b, expanded->second);
        if (items_a.size() != items_b.size()) continue;
        Candidate c{k, {}};
        std::vector<std::pair<std::string, std::string>> pairs;
        bool ok = true;
        for (std::size_t i = 0; ok && i < items_a.size(); ++i) {
            const auto& x = items_a[i];
            const auto& y = items_b[i];
            if (!x.is_run || !y.is_run) {
                ok = !x.is_run && !y.is_run && normalized_equal(ta.subspan(x.range.begin, 1), tb.subspan(y.range.begin, 1));
                continue;
            }
            std::string from = run_text(ta, x.range), to = run_text(tb, y.range);
            if (from == to) continue;
            auto pair = detail::induce_prefix_pair(from, to);
            if (!pair) {
                ok = false;
                continue;
            }
            pairs.push_back(*pair);
            c.rewritten.push_back({x.range, y.range});
        }
        if (!ok || pairs.empty()) continue;
        for (const auto& [from, to] : pairs) {
            auto [it, inserted] = induced.emplace(from, to);
            if (!inserted && it->second != to) conflict = true;
        }
        candidates.push_back(std::move(c));
    }
    if (candidates.empty() || conflict) return r;
    // A relocation moves names away from their origin; a prefix that is both
    // a source and a target indicates swapped names, not shading.
    for (const auto& [from, to] : induced)
        if (induced.contains(to)) return r;

    ShadingMap map;
    for (const auto& [from, to] : induced) {
        bool derivable = false;
        for (const auto& [f, t] : induced) {
            if (f.size() < from.size() && from.starts_with(f + ".") && to.size() > t.size() && to.starts_with(t + ".") &&
                from.substr(f.size()) == to.substr(t.size())) {
                derivable = true;
                break;
            }
        }
        if (!derivable) map.prefix_pairs.emplace_back(from, to);
    }
    for (const Candidate& c : candidates) {
        for (const auto& [x, y] : c.rewritten)
            if (map.apply(run_text(ta, x)) != run_text(tb, y)) return r;
    }
    for (const Candidate& c : candidates) detail::explain(r, ctx, c.hunk);
    r.shading = std::move(map);
    detail::finish(r);
    return r;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

/// Runs every detector in fixed order and ranks the labels that explain at
/// least one hunk. Falls back to inconsistent-commit (repository evidence, or
/// a residual hypothesis without a trace) or Unknown.
inline CauseVerdict classify_pair(const PairVerdict& verdict, const SourceUnit& ua, const SourceUnit& ub,
                                  const std::vector<const TraceResult*>& traces = {},
                                  const HeuristicsConfig& config = {}) {
    CauseVerdict out;
    out.path = verdict.path;
    PairContext ctx{verdict.diff_hunks, ua, ub, config};

    if (!verdict.raw_only) {
        const std::pair<CauseLabel, DetectorResult (*)(const PairContext&)> rules[] = {
            {CauseLabel::CodegenMeta, &detect_meta},
            {CauseLabel::CodegenGeneratedAnnotation, &detect_generated_annotation},
            {CauseLabel::CodegenIstack, &detect_istack},
            {CauseLabel::CodegenProto, &detect_proto},
            {CauseLabel::CodegenAntlr, &detect_antlr},
            {CauseLabel::CodegenGroovy, &detect_groovy},
            {CauseLabel::Shading, &detect_shading},
        };
        for (const auto& [label, rule] : rules) {
            DetectorResult res = rule(ctx);
            if (res.explained_count() == 0 || res.confidence() < config.min_confidence) continue;
            out.labels.push_back({label, res.confidence(), std::move(res.evidence), std::move(res.shading)});
        }
        std::stable_sort(out.labels.begin(), out.labels.end(),
                         [](const LabelEvidence& x, const LabelEvidence& y) { return x.confidence > y.confidence; });
    }
    if (!out.labels.empty()) return out;

    std::vector<EvidenceSnippet> all_hunks;
    for (const DiffHunk& h : verdict.diff_hunks)
        if (!verdict.raw_only)
            if (auto s = detail::hunk_snippet(ctx, h)) all_hunks.push_back(*s);
    if (traces.empty()) {
        out.labels.push_back({CauseLabel::InconsistentCommit, config.residual_confidence, std::move(all_hunks), std::nullopt});
        return out;
    }
    bool repo_differs = false;
    for (const TraceResult* t : traces) {
        for (const SourceUnit* u : {&ua, &ub}) {
            for (const QualifiedName& q : u->qualified_names()) {
                const TraceStatus* s = t->find(q);
                if (s && *s == TraceStatus::RepoBackedDiffers) repo_differs = true;
            }
        }
    }
    if (repo_differs) out.labels.push_back({CauseLabel::InconsistentCommit, 1.0, std::move(all_hunks), std::nullopt});
    else out.labels.push_back({CauseLabel::Unknown, 0.0, {}, std::nullopt});
    return out;
}

struct ArchiveClassification {
    std::vector<CauseVerdict> verdicts;
    std::map<CauseLabel, std::size_t> summary; // label -> number of files carrying it
};

inline ArchiveClassification classify_archive(const ArchiveVerdict& av, const SourceArchive& a, const SourceArchive& b,
                                              const std::vector<const TraceResult*>& traces = {},
                                              const HeuristicsConfig& config = {}) {
    ArchiveClassification out;
    for (const PairVerdict& v : av.pair_verdicts) {
        if (v.status != PairStatus::NonEquivalent) continue;
        CauseVerdict cv = classify_pair(v, a.units.at(v.path), b.units.at(v.b_path), traces, config);
        for (const LabelEvidence& l : cv.labels) out.summary[l.label]++;
        out.verdicts.push_back(std::move(cv));
    }
    return out;
}

} // namespace srceq
