// SPDX-License-Identifier: Apache-2.0
//
// Java source units and archives: loading from zips or directory trees, name
// extraction, and the validity check used to tell repository templates apart
// from ordinary sources.

#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <fnmatch.h>

#include "srceq/lexer.hpp"
#include "srceq/structure.hpp"
#include "srceq/zip.hpp"

namespace srceq {

enum class Validity { Valid, LexInvalid, StructInvalid, Template };

inline std::string_view to_string(Validity v) {
    switch (v) {
    case Validity::Valid: return "Valid";
    case Validity::LexInvalid: return "LexInvalid";
    case Validity::StructInvalid: return "StructInvalid";
    case Validity::Template: return "Template";
    }
    return "?";
}

struct QualifiedName {
    std::string package_name; // dotted, possibly empty
    std::string simple_name;

    std::string str() const { return package_name.empty() ? simple_name : package_name + "." + simple_name; }

    /// Splits "a.b.C" at the last dot. Returns nullopt unless every segment is
    /// a Java identifier.
    static std::optional<QualifiedName> parse(std::string_view dotted) {
        if (dotted.empty()) return std::nullopt;
        std::size_t start = 0;
        while (true) {
            std::size_t dot = dotted.find('.', start);
            std::string_view seg = dotted.substr(start, dot == std::string_view::npos ? dotted.npos : dot - start);
            if (seg.empty() || !detail::is_ident_start(static_cast<unsigned char>(seg[0])) ||
                !std::all_of(seg.begin(), seg.end(), [](char c) { return detail::is_ident_part(static_cast<unsigned char>(c)); }) ||
                detail::java_keywords().contains(seg)) {
                return std::nullopt;
            }
            if (dot == std::string_view::npos) break;
            start = dot + 1;
        }
        std::size_t last = dotted.rfind('.');
        if (last == std::string_view::npos) return QualifiedName{"", std::string(dotted)};
        return QualifiedName{std::string(dotted.substr(0, last)), std::string(dotted.substr(last + 1))};
    }

    friend auto operator<=>(const QualifiedName& a, const QualifiedName& b) { return a.str() <=> b.str(); }
    friend bool operator==(const QualifiedName& a, const QualifiedName& b) { return a.str() == b.str(); }
};

struct SourceUnit {
    std::string path;
    std::string text;
    TokenStream stream; // comments stripped
    std::optional<LexError> lex_error;
    std::string package_name;
    std::vector<std::string> top_level_types;
    Validity validity = Validity::Valid;
    std::vector<std::string> warnings;

    std::vector<QualifiedName> qualified_names() const {
        std::vector<QualifiedName> out;
        for (const auto& t : top_level_types) out.push_back({package_name, t});
        return out;
    }
};

struct NameInfo {
    std::string package_name;
    std::vector<std::string> top_level_types;
    bool duplicate_types = false;
};

/// Reads the package declaration and the simple names of all type
/// declarations at brace depth zero, in source order.
inline NameInfo extract_names(std::span<const Token> tokens) {
    NameInfo info;
    int depth = 0;
    auto dotted_from = [&](std::size_t i) {
        std::string name;
        while (i < tokens.size() && (tokens[i].is_ident() || tokens[i].is_sep("."))) name += tokens[i++].text;
        return name;
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        if (is_open_bracket(t)) {
            ++depth;
            continue;
        }
        if (is_close_bracket(t)) {
            depth = std::max(0, depth - 1);
            continue;
        }
        if (depth != 0) continue;
        bool after_dot = i > 0 && tokens[i - 1].is_sep(".");
        if (t.is_kw("package") && info.package_name.empty() && info.top_level_types.empty()) {
            info.package_name = dotted_from(i + 1);
            continue;
        }
        std::optional<std::string> declared;
        if ((t.is_kw("class") || t.is_kw("interface") || t.is_kw("enum")) && !after_dot && i + 1 < tokens.size() &&
            tokens[i + 1].is_ident()) {
            declared = tokens[i + 1].text;
        } else if (t.is(TokenKind::Identifier, "record") && i + 2 < tokens.size() && tokens[i + 1].is_ident() &&
                   (tokens[i + 2].is_sep("(") || tokens[i + 2].is_op("<"))) {
            declared = tokens[i + 1].text;
        }
        if (declared) {
            if (std::find(info.top_level_types.begin(), info.top_level_types.end(), *declared) != info.top_level_types.end()) {
                info.duplicate_types = true;
            } else {
                info.top_level_types.push_back(*declared);
            }
            ++i;
        }
    }
    return info;
}

inline NameInfo extract_names(const TokenStream& stream) { return extract_names(std::span<const Token>(stream.tokens)); }

/// True for `${` (a `$`-terminated identifier immediately followed by `{`) or
/// an identifier shaped `$NAME$`, outside literals and comments.
inline bool has_template_marker(std::span<const Token> tokens) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        if (!t.is_ident() || t.text.find('$') == std::string::npos) continue;
        if (t.text.size() >= 3 && t.text.front() == '$' && t.text.back() == '$' &&
            std::any_of(t.text.begin() + 1, t.text.end() - 1, [](char c) { return std::isalpha(static_cast<unsigned char>(c)); })) {
            return true;
        }
        if (t.text.back() == '$' && i + 1 < tokens.size() && tokens[i + 1].is_sep("{") &&
            tokens[i + 1].offset == t.offset + t.length) {
            bool declares_type = i > 0 && (tokens[i - 1].is_kw("class") || tokens[i - 1].is_kw("interface") ||
                                           tokens[i - 1].is_kw("enum") || tokens[i - 1].is(TokenKind::Identifier, "record"));
            if (!declares_type) return true;
        }
    }
    return false;
}

/// Unresolved build variable inside literal text: `${...}` or `$NAME$`.
inline bool literal_has_template_marker(std::string_view literal) {
    static const std::regex marker(R"(\$\{[^}\s]+\}|\$[A-Za-z_][A-Za-z0-9_.]*\$)");
    return std::regex_search(literal.begin(), literal.end(), marker);
}

inline bool is_descriptor_file(std::string_view path) {
    return path.ends_with("package-info.java") || path.ends_with("module-info.java");
}

/// Lexical validity, then template markers, then delimiter balance and the
/// presence of a top-level type.
inline Validity check_validity(const SourceUnit& unit) {
    if (unit.lex_error) return Validity::LexInvalid;
    std::span<const Token> tokens(unit.stream.tokens);
    if (has_template_marker(tokens)) return Validity::Template;
    if (!match_brackets(tokens).balanced) return Validity::StructInvalid;
    if (!tokens.empty() && unit.top_level_types.empty() && !is_descriptor_file(unit.path)) return Validity::StructInvalid;
    if (extract_names(tokens).duplicate_types) return Validity::StructInvalid;
    return Validity::Valid;
}

/// Decodes UTF-8, replacing each invalid sequence with U+FFFD. Returns true in
/// `.second` when anything was replaced.
inline std::pair<std::string, bool> decode_utf8_lossy(std::string_view in) {
    std::string out;
    out.reserve(in.size());
    bool replaced = false;
    std::size_t i = 0;
    while (i < in.size()) {
        auto c = static_cast<unsigned char>(in[i]);
        std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
        bool ok = len != 0 && i + len <= in.size();
        std::uint32_t cp = len == 1 ? c : len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
        for (std::size_t k = 1; ok && k < len; ++k) {
            auto cc = static_cast<unsigned char>(in[i + k]);
            if ((cc & 0xC0) != 0x80) ok = false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (ok) {
            static constexpr std::uint32_t min_cp[] = {0, 0, 0x80, 0x800, 0x10000};
            ok = cp >= min_cp[len] && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
        }
        if (ok) {
            out.append(in.substr(i, len));
            i += len;
        } else {
            out += "\xEF\xBF\xBD";
            replaced = true;
            ++i;
        }
    }
    return {std::move(out), replaced};
}

/// Lexes and analyzes one file. Never throws on malformed Java; problems are
/// reflected in `validity`.
inline SourceUnit analyze_unit(std::string path, std::string text) {
    SourceUnit unit;
    unit.path = std::move(path);
    unit.text = std::move(text);
    try {
        unit.stream = tokenize(unit.text);
    } catch (const LexError& e) {
        unit.lex_error = e;
        unit.validity = Validity::LexInvalid;
        return unit;
    }
    NameInfo names = extract_names(unit.stream);
    unit.package_name = std::move(names.package_name);
    unit.top_level_types = std::move(names.top_level_types);
    unit.validity = check_validity(unit);
    return unit;
}

inline SourceUnit analyze_bytes(std::string path, std::string_view bytes) {
    auto [text, replaced] = decode_utf8_lossy(bytes);
    SourceUnit unit = analyze_unit(std::move(path), std::move(text));
    if (replaced) unit.warnings.push_back(unit.path + ": invalid UTF-8 replaced with U+FFFD");
    return unit;
}

/// Glob filter over relative '/'-separated paths. A pattern without '/'
/// matches any single path component; otherwise it matches the whole path.
class PathFilter {
public:
    PathFilter() = default;
    explicit PathFilter(std::vector<std::string> patterns) : patterns_(std::move(patterns)) {}

    static std::vector<std::string> default_repo_excludes() { return {".git", ".svn", "target", "build", "out"}; }

    bool excluded(std::string_view relative) const {
        std::string path(relative);
        for (const auto& p : patterns_) {
            if (p.find('/') != std::string::npos) {
                if (fnmatch(p.c_str(), path.c_str(), 0) == 0) return true;
                continue;
            }
            std::size_t start = 0;
            while (start <= path.size()) {
                std::size_t slash = path.find('/', start);
                std::string comp = path.substr(start, slash == std::string::npos ? std::string::npos : slash - start);
                if (fnmatch(p.c_str(), comp.c_str(), 0) == 0) return true;
                if (slash == std::string::npos) break;
                start = slash + 1;
            }
        }
        return false;
    }

    const std::vector<std::string>& patterns() const { return patterns_; }

private:
    std::vector<std::string> patterns_;
};

struct SourceArchive {
    std::string origin;
    std::string label;
    std::map<std::string, SourceUnit> units; // keyed by '/'-separated path
    std::vector<std::string> warnings;

    const SourceUnit* find(std::string_view path) const {
        auto it = units.find(std::string(path));
        return it == units.end() ? nullptr : &it->second;
    }
};

inline void add_unit(SourceArchive& archive, SourceUnit unit) {
    for (const auto& w : unit.warnings) archive.warnings.push_back(w);
    std::string key = unit.path;
    archive.units.insert_or_assign(std::move(key), std::move(unit));
}

inline SourceArchive load_directory(const std::filesystem::path& root, std::string label, const PathFilter& filter = {}) {
    namespace fs = std::filesystem;
    SourceArchive archive;
    archive.origin = root.string();
    archive.label = std::move(label);
    std::error_code ec;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw IoError("cannot read directory " + root.string() + ": " + ec.message());
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) throw IoError("error walking " + root.string() + ": " + ec.message());
        std::string rel = fs::relative(it->path(), root).generic_string();
        if (filter.excluded(rel)) {
            if (it->is_directory()) it.disable_recursion_pending();
            continue;
        }
        if (!it->is_regular_file() || !rel.ends_with(".java")) continue;
        add_unit(archive, analyze_bytes(rel, read_file(it->path())));
    }
    return archive;
}

inline SourceArchive load_zip(const std::filesystem::path& path, std::string label) {
    SourceArchive archive;
    archive.origin = path.string();
    archive.label = std::move(label);
    ZipReader zip = ZipReader::open(path);
    for (const ZipEntry& e : zip.entries()) {
        if (e.is_directory() || !e.name.ends_with(".java")) continue;
        std::string name = e.name;
        std::replace(name.begin(), name.end(), '\\', '/');
        while (name.starts_with("/")) name.erase(0, 1);
        while (name.starts_with("./")) name.erase(0, 2);
        if (archive.units.contains(name)) archive.warnings.push_back(name + ": duplicate zip entry, last one wins");
        add_unit(archive, analyze_bytes(name, zip.extract(e)));
    }
    return archive;
}

/// Loads a zip archive (source jar) or a directory tree.
inline SourceArchive load_archive(const std::filesystem::path& origin, std::string label, const PathFilter& filter = {}) {
    namespace fs = std::filesystem;
    std::error_code ec;
    auto status = fs::status(origin, ec);
    if (ec || !fs::exists(status)) throw IoError("no such file or directory: " + origin.string());
    if (fs::is_directory(status)) return load_directory(origin, std::move(label), filter);
    return load_zip(origin, std::move(label));
}

struct ClassEntry {
    std::string path;
    bool is_template = false;
};

struct ClassIndex {
    std::map<QualifiedName, std::vector<ClassEntry>> entries;
    std::vector<std::string> warnings;

    std::size_t size() const { return entries.size(); }
    bool contains(const QualifiedName& q) const { return entries.contains(q); }

    std::set<QualifiedName> names() const {
        std::set<QualifiedName> out;
        for (const auto& [q, _] : entries) out.insert(q);
        return out;
    }
};

/// Qualified top-level names of every Valid or Template unit.
inline ClassIndex class_index(const SourceArchive& archive) {
    ClassIndex index;
    for (const auto& [path, unit] : archive.units) {
        if (unit.validity != Validity::Valid && unit.validity != Validity::Template) continue;
        for (const QualifiedName& q : unit.qualified_names()) {
            auto& bucket = index.entries[q];
            bucket.push_back({path, unit.validity == Validity::Template});
            if (bucket.size() == 2) index.warnings.push_back("DuplicateName: " + q.str() + " declared in " + bucket[0].path + " and " + path);
            else if (bucket.size() > 2) index.warnings.push_back("DuplicateName: " + q.str() + " also declared in " + path);
        }
    }
    return index;
}

} // namespace srceq
