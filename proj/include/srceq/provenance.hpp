// SPDX-License-Identifier: Apache-2.0
//
// Generator identities, @Generated extraction and per-file provenance
// manifests.
//
//   gen:<kind>/<name>@<version>[?config=<hex>]

#pragma once

#include <fnmatch.h>
#include <openssl/evp.h>

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "srceq/repo_trace.hpp"
#include "srceq/source_model.hpp"
#include "srceq/structure.hpp"

namespace srceq {

class FormatError : public std::runtime_error {
public:
    FormatError(std::size_t position, const std::string& reason)
        : std::runtime_error("at " + std::to_string(position) + ": " + reason), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class ConflictError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class GeneratorKind { AnnotationProcessor, BuildPlugin, ExternalTool, TemplateEngine };

inline std::string_view to_string(GeneratorKind k) {
    switch (k) {
    case GeneratorKind::AnnotationProcessor: return "annotation-processor";
    case GeneratorKind::BuildPlugin: return "build-plugin";
    case GeneratorKind::ExternalTool: return "external-tool";
    case GeneratorKind::TemplateEngine: return "template-engine";
    }
    return "?";
}

inline std::optional<GeneratorKind> generator_kind_from(std::string_view s) {
    for (auto k : {GeneratorKind::AnnotationProcessor, GeneratorKind::BuildPlugin, GeneratorKind::ExternalTool,
                   GeneratorKind::TemplateEngine})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

struct GeneratorId {
    GeneratorKind kind = GeneratorKind::ExternalTool;
    std::string name;
    std::string version;
    std::optional<std::string> config_digest;

    friend bool operator==(const GeneratorId&, const GeneratorId&) = default;
};

namespace detail {

inline bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == ':' || c == '/' || c == '+' || c == '-';
}
inline bool is_version_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '+' || c == '-';
}
inline bool is_lower_hex(char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); }

} // namespace detail

inline bool valid_generator_name(std::string_view name) {
    return !name.empty() && name.front() != '/' && name.back() != '/' &&
           std::all_of(name.begin(), name.end(), detail::is_name_char);
}

inline std::string format_generator_id(const GeneratorId& id) {
    std::string out = "gen:";
    out += to_string(id.kind);
    out += '/';
    out += id.name;
    out += '@';
    out += id.version;
    if (id.config_digest) out += "?config=" + *id.config_digest;
    return out;
}

inline GeneratorId parse_generator_id(std::string_view text) {
    if (!text.starts_with("gen:")) throw FormatError(0, "expected 'gen:' scheme");
    std::size_t pos = 4;
    std::size_t slash = text.find('/', pos);
    if (slash == std::string_view::npos) throw FormatError(pos, "expected '<kind>/'");
    auto kind = generator_kind_from(text.substr(pos, slash - pos));
    if (!kind) throw FormatError(pos, "unknown generator kind '" + std::string(text.substr(pos, slash - pos)) + "'");
    GeneratorId id;
    id.kind = *kind;
    pos = slash + 1;

    std::size_t at = text.find('@', pos);
    if (at == std::string_view::npos) throw FormatError(text.size(), "missing '@<version>'");
    id.name = std::string(text.substr(pos, at - pos));
    if (id.name.empty()) throw FormatError(pos, "empty generator name");
    for (std::size_t i = 0; i < id.name.size(); ++i)
        if (!detail::is_name_char(id.name[i])) throw FormatError(pos + i, "invalid character in generator name");
    if (id.name.front() == '/' || id.name.back() == '/') throw FormatError(pos, "generator name must not start or end with '/'");
    pos = at + 1;

    std::size_t q = text.find('?', pos);
    std::string_view version = text.substr(pos, q == std::string_view::npos ? std::string_view::npos : q - pos);
    if (version.empty()) throw FormatError(pos, "empty version");
    for (std::size_t i = 0; i < version.size(); ++i)
        if (!detail::is_version_char(version[i])) throw FormatError(pos + i, "invalid character in version");
    id.version = std::string(version);
    if (q == std::string_view::npos) return id;

    pos = q + 1;
    constexpr std::string_view key = "config=";
    if (text.substr(pos, key.size()) != key) throw FormatError(pos, "expected 'config='");
    pos += key.size();
    std::string_view digest = text.substr(pos);
    if (digest.empty()) throw FormatError(pos, "empty config digest");
    for (std::size_t i = 0; i < digest.size(); ++i)
        if (!detail::is_lower_hex(digest[i])) throw FormatError(pos + i, "config digest must be lowercase hex");
    id.config_digest = std::string(digest);
    return id;
}

// ---------------------------------------------------------------------------
// Hashing
// ---------------------------------------------------------------------------

inline std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

/// SHA-256 of the comment-free tokens joined by single spaces. Units that do
/// not lex are hashed over their raw text.
inline std::string source_digest(const SourceUnit& unit) {
    if (unit.lex_error) return sha256_hex(unit.text);
    return sha256_hex(join_tokens(unit.stream));
}

// ---------------------------------------------------------------------------
// @Generated extraction
// ---------------------------------------------------------------------------

struct GeneratedAnnotationInfo {
    std::string annotation_package; // empty when unresolved
    std::vector<std::string> value;
    std::optional<std::string> date;
    std::optional<std::string> comments;
    std::size_t line = 0;

    friend bool operator==(const GeneratedAnnotationInfo&, const GeneratedAnnotationInfo&) = default;
};

/// Decodes the escapes of a string literal token (quotes included).
inline std::string unquote_java_string(std::string_view literal) {
    if (literal.starts_with("\"\"\"")) {
        literal.remove_prefix(3);
        if (literal.ends_with("\"\"\"")) literal.remove_suffix(3);
        std::size_t nl = literal.find('\n');
        if (nl != std::string_view::npos) literal.remove_prefix(nl + 1);
    } else if (literal.size() >= 2) {
        literal = literal.substr(1, literal.size() - 2);
    }
    std::string out;
    for (std::size_t i = 0; i < literal.size(); ++i) {
        char c = literal[i];
        if (c != '\\' || i + 1 == literal.size()) {
            out += c;
            continue;
        }
        char e = literal[++i];
        switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case 's': out += ' '; break;
        case '\n': break;
        default:
            if (e >= '0' && e <= '7') {
                int v = e - '0';
                int max_digits = e <= '3' ? 3 : 2;
                for (int d = 1; d < max_digits && i + 1 < literal.size() && literal[i + 1] >= '0' && literal[i + 1] <= '7'; ++d)
                    v = v * 8 + (literal[++i] - '0');
                detail::append_utf8(out, static_cast<std::uint32_t>(v));
            } else {
                out += e;
            }
        }
    }
    return out;
}

namespace detail {

/// Concatenated string constants of an attribute expression, e.g.
/// `"a" + "b"`. Non-string tokens are skipped.
inline std::string string_value(std::span<const Token> t, TokenRange r) {
    std::string out;
    for (std::size_t i = r.begin; i < r.end; ++i)
        if (t[i].kind == TokenKind::StringLiteral || t[i].kind == TokenKind::TextBlockLiteral) out += unquote_java_string(t[i].text);
    return out;
}

inline std::vector<std::string> string_values(std::span<const Token> t, const BracketMatch& match, TokenRange r) {
    if (!r.empty() && t[r.begin].is_sep("{") && match.partner[r.begin] != npos) {
        std::vector<std::string> out;
        for (TokenRange e : split_elements(t, {r.begin + 1, match.partner[r.begin]})) {
            TokenRange inner = e;
            if (!inner.empty() && t[inner.end - 1].is_sep(",")) --inner.end;
            if (!inner.empty()) out.push_back(string_value(t, inner));
        }
        return out;
    }
    if (r.empty()) return {};
    return {string_value(t, r)};
}

} // namespace detail

inline std::vector<GeneratedAnnotationInfo> extract_generated_annotations(const SourceUnit& unit,
                                                                          const std::vector<std::string>& names = {"Generated"}) {
    std::vector<GeneratedAnnotationInfo> out;
    if (unit.lex_error) return out;
    std::span<const Token> t(unit.stream.tokens);
    auto match = match_brackets(t);
    auto is_name = [&](const std::string& s) { return std::find(names.begin(), names.end(), s) != names.end(); };

    std::map<std::string, std::string> imported; // simple name -> package
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!t[i].is_kw("import")) continue;
        std::size_t j = i + 1;
        if (j < t.size() && t[j].is_kw("static")) continue;
        std::string dotted;
        while (j < t.size() && (t[j].is_ident() || t[j].is_sep("."))) dotted += t[j++].text;
        if (j < t.size() && t[j].is_sep(";")) {
            auto q = QualifiedName::parse(dotted);
            if (q && is_name(q->simple_name)) imported[q->simple_name] = q->package_name;
        }
    }

    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        if (!t[i].is_sep("@") || !t[i + 1].is_ident()) continue;
        std::size_t j = i + 1;
        std::string dotted = t[j].text;
        while (j + 2 < t.size() && t[j + 1].is_sep(".") && t[j + 2].is_ident()) {
            j += 2;
            dotted += "." + t[j].text;
        }
        if (!is_name(t[j].text)) continue;
        GeneratedAnnotationInfo info;
        info.line = t[i].line;
        if (j > i + 1) info.annotation_package = dotted.substr(0, dotted.rfind('.'));
        else if (auto it = imported.find(t[j].text); it != imported.end()) info.annotation_package = it->second;

        std::size_t open = j + 1;
        if (open < t.size() && t[open].is_sep("(") && match.partner[open] != npos) {
            TokenRange args{open + 1, match.partner[open]};
            bool named = args.size() >= 2 && t[args.begin].is_ident() && t[args.begin + 1].is_op("=");
            if (!named) {
                info.value = detail::string_values(t, match, args);
            } else {
                for (TokenRange e : split_elements(t, args)) {
                    if (e.size() < 2 || !t[e.begin].is_ident() || !t[e.begin + 1].is_op("=")) continue;
                    TokenRange v{e.begin + 2, e.end};
                    if (!v.empty() && t[v.end - 1].is_sep(",")) --v.end;
                    const std::string& key = t[e.begin].text;
                    if (key == "value") info.value = detail::string_values(t, match, v);
                    else if (key == "date") info.date = detail::string_value(t, v);
                    else if (key == "comments") info.comments = detail::string_value(t, v);
                }
            }
        }
        out.push_back(std::move(info));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hints
// ---------------------------------------------------------------------------

struct GeneratorHint {
    std::string glob;
    GeneratorId generator;
};

/// True when `glob` matches `path`; a glob without '/' is matched against the
/// file name only.
inline bool hint_matches(const std::string& glob, const std::string& path) {
    if (glob.find('/') != std::string::npos) return fnmatch(glob.c_str(), path.c_str(), 0) == 0;
    auto slash = path.rfind('/');
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    return fnmatch(glob.c_str(), name.c_str(), 0) == 0;
}

/// Hints file: `<glob> <generator-id> [configuration payload]` per line. A
/// payload is hashed into the id's config digest.
inline std::vector<GeneratorHint> parse_hints(std::string_view text) {
    std::vector<GeneratorHint> out;
    std::stringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::stringstream fields(line);
        std::string glob, id_text;
        if (!(fields >> glob) || glob.starts_with("#")) continue;
        if (!(fields >> id_text)) throw FormatError(lineno, "hint line " + std::to_string(lineno) + ": missing generator id");
        GeneratorHint hint{glob, {}};
        try {
            hint.generator = parse_generator_id(id_text);
        } catch (const FormatError& e) {
            throw FormatError(lineno, "hint line " + std::to_string(lineno) + ": " + e.what());
        }
        std::string payload;
        std::getline(fields, payload);
        auto b = payload.find_first_not_of(" \t");
        payload = b == std::string::npos ? "" : payload.substr(b);
        if (!payload.empty()) {
            if (hint.generator.config_digest)
                throw FormatError(lineno, "hint line " + std::to_string(lineno) + ": both config digest and payload given");
            hint.generator.config_digest = sha256_hex(payload);
        }
        out.push_back(std::move(hint));
    }
    return out;
}

inline std::vector<GeneratorHint> load_hints(const std::filesystem::path& path) { return parse_hints(read_file(path)); }

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

enum class ProvenanceStatus { Handwritten, Generated, Template };

inline std::string_view to_string(ProvenanceStatus s) {
    switch (s) {
    case ProvenanceStatus::Handwritten: return "Handwritten";
    case ProvenanceStatus::Generated: return "Generated";
    case ProvenanceStatus::Template: return "Template";
    }
    return "?";
}

struct ProvenanceRecord {
    std::string path;
    std::vector<std::string> qualified_names;
    ProvenanceStatus status = ProvenanceStatus::Handwritten;
    std::optional<GeneratorId> generator;
    std::string source_digest;

    friend bool operator==(const ProvenanceRecord&, const ProvenanceRecord&) = default;
};

inline constexpr std::string_view manifest_format = "srceq-provenance";
inline constexpr int manifest_version = 1;

struct Manifest {
    std::string label;
    std::string digest_algorithm = "sha256";
    std::vector<ProvenanceRecord> records; // ordered by path
};

inline const GeneratorId unknown_generator{GeneratorKind::ExternalTool, "unknown", "unspecified", std::nullopt};

inline Manifest emit_manifest(const SourceArchive& archive, const TraceResult* trace = nullptr,
                              const std::vector<GeneratorHint>& hints = {}) {
    Manifest m;
    m.label = archive.label;
    for (const auto& [path, unit] : archive.units) {
        ProvenanceRecord r;
        r.path = path;
        for (const auto& q : unit.qualified_names()) r.qualified_names.push_back(q.str());
        r.source_digest = source_digest(unit);

        bool repo_template = false, repo_missing = false;
        if (trace) {
            for (const auto& q : unit.qualified_names()) {
                if (const TraceStatus* s = trace->find(q)) {
                    repo_template |= *s == TraceStatus::RepoTemplate;
                    repo_missing |= *s == TraceStatus::MissingInRepo;
                }
            }
        }
        auto annotations = extract_generated_annotations(unit);
        const GeneratorHint* hint = nullptr;
        for (const auto& h : hints) {
            if (hint_matches(h.glob, path)) {
                hint = &h;
                break;
            }
        }
        std::optional<std::string> annotated;
        for (const auto& a : annotations) {
            if (!a.value.empty()) {
                annotated = a.value.front();
                break;
            }
        }
        if (hint && annotated && hint->generator.name != *annotated)
            throw ConflictError(path + ": hint names generator '" + hint->generator.name + "' but @Generated names '" + *annotated + "'");

        if (repo_template) {
            r.status = ProvenanceStatus::Template;
        } else if (repo_missing || !annotations.empty() || hint) {
            r.status = ProvenanceStatus::Generated;
            if (hint) r.generator = hint->generator;
            else if (annotated && valid_generator_name(*annotated))
                r.generator = GeneratorId{GeneratorKind::AnnotationProcessor, *annotated, "unspecified", std::nullopt};
            else r.generator = unknown_generator;
        }
        m.records.push_back(std::move(r));
    }
    return m;
}

inline nlohmann::json manifest_to_json(const Manifest& m) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : m.records) {
        nlohmann::json j;
        j["path"] = r.path;
        j["qualified_names"] = r.qualified_names;
        j["status"] = to_string(r.status);
        j["source_digest"] = r.source_digest;
        if (r.generator) j["generator"] = format_generator_id(*r.generator);
        records.push_back(std::move(j));
    }
    return {{"format", manifest_format},
            {"version", manifest_version},
            {"digest_algorithm", m.digest_algorithm},
            {"label", m.label},
            {"records", std::move(records)}};
}

inline std::string write_manifest(const Manifest& m) { return manifest_to_json(m).dump(2) + "\n"; }

inline Manifest parse_manifest(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(e.byte, "manifest is not valid JSON");
    }
    auto fail = [](const std::string& why) { return FormatError(0, "manifest: " + why); };
    if (!j.is_object() || j.value("format", "") != manifest_format) throw fail("unknown format");
    if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != manifest_version)
        throw fail("unsupported version");
    Manifest m;
    if (!j.contains("digest_algorithm") || !j["digest_algorithm"].is_string()) throw fail("missing digest_algorithm");
    m.digest_algorithm = j["digest_algorithm"].get<std::string>();
    if (m.digest_algorithm != "sha256") throw fail("unsupported digest algorithm " + m.digest_algorithm);
    if (j.contains("label") && j["label"].is_string()) m.label = j["label"].get<std::string>();
    if (!j.contains("records") || !j["records"].is_array()) throw fail("missing records");
    for (const auto& rec : j["records"]) {
        if (!rec.is_object() || !rec.contains("path") || !rec["path"].is_string() || !rec.contains("status") ||
            !rec["status"].is_string() || !rec.contains("source_digest") || !rec["source_digest"].is_string())
            throw fail("malformed record");
        ProvenanceRecord r;
        r.path = rec["path"].get<std::string>();
        r.source_digest = rec["source_digest"].get<std::string>();
        std::string status = rec["status"].get<std::string>();
        if (status == "Handwritten") r.status = ProvenanceStatus::Handwritten;
        else if (status == "Generated") r.status = ProvenanceStatus::Generated;
        else if (status == "Template") r.status = ProvenanceStatus::Template;
        else throw fail("unknown status " + status);
        if (rec.contains("qualified_names")) {
            if (!rec["qualified_names"].is_array()) throw fail("malformed qualified_names");
            for (const auto& q : rec["qualified_names"]) {
                if (!q.is_string()) throw fail("malformed qualified_names");
                r.qualified_names.push_back(q.get<std::string>());
            }
        }
        if (rec.contains("generator")) {
            if (!rec["generator"].is_string()) throw fail("malformed generator");
            r.generator = parse_generator_id(rec["generator"].get<std::string>());
        }
        if (r.generator.has_value() != (r.status == ProvenanceStatus::Generated))
            throw fail(r.path + ": generator must be present exactly for Generated records");
        m.records.push_back(std::move(r));
    }
    return m;
}

enum class CheckStatus { OK, DigestMismatch, MissingFromArchive, NotInManifest };

inline std::string_view to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::OK: return "OK";
    case CheckStatus::DigestMismatch: return "DigestMismatch";
    case CheckStatus::MissingFromArchive: return "MissingFromArchive";
    case CheckStatus::NotInManifest: return "NotInManifest";
    }
    return "?";
}

struct CheckEntry {
    std::string path;
    CheckStatus status = CheckStatus::OK;
};

struct CheckReport {
    std::vector<CheckEntry> entries; // ordered by path

    bool passed() const {
        return std::all_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.status == CheckStatus::OK; });
    }
};

inline CheckReport check_manifest(const SourceArchive& archive, const Manifest& manifest) {
    std::map<std::string, CheckStatus> status;
    for (const auto& r : manifest.records) {
        const SourceUnit* u = archive.find(r.path);
        if (!u) status[r.path] = CheckStatus::MissingFromArchive;
        else status[r.path] = source_digest(*u) == r.source_digest ? CheckStatus::OK : CheckStatus::DigestMismatch;
    }
    for (const auto& [path, unit] : archive.units)
        if (!status.contains(path)) status[path] = CheckStatus::NotInManifest;
    CheckReport report;
    for (const auto& [path, s] : status) report.entries.push_back({path, s});
    return report;
}

} // namespace srceq
