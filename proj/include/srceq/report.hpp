// SPDX-License-Identifier: Apache-2.0
//
// Report assembly and serialization. JSON output is deterministic: object
// keys are sorted, paths are ordered, and no clock is read unless a stamp is
// supplied by the caller.

#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "srceq/classifier.hpp"
#include "srceq/equivalence.hpp"
#include "srceq/provenance.hpp"
#include "srceq/repo_trace.hpp"

#ifndef SRCEQ_VERSION
#define SRCEQ_VERSION "0.0.0"
#endif

namespace srceq {

struct ReportInput {
    std::string label;
    std::string origin;
};

struct Report {
    std::string command;
    std::vector<ReportInput> inputs;
    std::optional<ArchiveVerdict> archive_verdict;
    std::optional<ArchiveClassification> classification;
    std::optional<TraceResult> trace;
    std::optional<CheckReport> provenance_check;
    std::optional<Manifest> provenance_manifest;
    std::vector<std::string> warnings;
    std::optional<std::string> stamp;
};

namespace detail {

inline nlohmann::json range_json(std::span<const Token> tokens, TokenRange r) {
    nlohmann::json j{{"begin", r.begin}, {"end", r.end}};
    if (!r.empty()) {
        j["line"] = tokens[r.begin].line;
        j["col"] = tokens[r.begin].col;
    }
    return j;
}

inline nlohmann::json hunk_json(const DiffHunk& h) {
    auto side = [](const std::vector<Token>& toks, TokenRange r) {
        nlohmann::json j{{"begin", r.begin}, {"end", r.end}, {"text", join_tokens(toks)}};
        if (!toks.empty()) {
            j["line"] = toks.front().line;
            j["col"] = toks.front().col;
        }
        return j;
    };
    return {{"a", side(h.a_tokens, h.a)}, {"b", side(h.b_tokens, h.b)}, {"edits", h.edits.size()}};
}

inline nlohmann::json evidence_json(const EvidenceSnippet& e) {
    return {{"side", std::string(1, e.side)}, {"line", e.line}, {"col", e.col}, {"offset", e.offset}, {"text", e.text}};
}

} // namespace detail

inline nlohmann::json to_json(const ArchiveVerdict& av) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const PairVerdict& v : av.pair_verdicts) {
        nlohmann::json p{{"path", v.path}, {"status", to_string(v.status)}};
        if (!v.b_path.empty() && v.b_path != v.path) p["b_path"] = v.b_path;
        if (v.status == PairStatus::NonEquivalent) {
            nlohmann::json hunks = nlohmann::json::array();
            for (const DiffHunk& h : v.diff_hunks) hunks.push_back(detail::hunk_json(h));
            p["hunks"] = std::move(hunks);
            if (v.raw_only) p["raw_only"] = true;
        }
        pairs.push_back(std::move(p));
    }
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [s, n] : av.counts) counts[std::string(to_string(s))] = n;
    return {{"equivalent", av.equivalent}, {"counts", counts}, {"pairs", pairs}};
}

inline nlohmann::json to_json(const CauseVerdict& cv) {
    nlohmann::json labels = nlohmann::json::array();
    for (const LabelEvidence& l : cv.labels) {
        nlohmann::json e = nlohmann::json::array();
        for (const auto& s : l.evidence) e.push_back(detail::evidence_json(s));
        nlohmann::json j{{"label", to_string(l.label)}, {"confidence", l.confidence}, {"evidence", e}};
        if (l.shading) {
            nlohmann::json pairs = nlohmann::json::array();
            for (const auto& [from, to] : l.shading->prefix_pairs) pairs.push_back({{"from", from}, {"to", to}});
            j["shading_map"] = pairs;
        }
        labels.push_back(std::move(j));
    }
    return {{"path", cv.path}, {"labels", labels}};
}

inline nlohmann::json to_json(const TraceResult& t) {
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& [q, s] : t.per_class) classes.push_back({{"name", q.str()}, {"status", to_string(s)}});
    nlohmann::json warnings = t.warnings;
    return {{"repo_root", t.repo_root}, {"missing_count", t.missing_count}, {"classes", classes}, {"warnings", warnings}};
}

inline nlohmann::json to_json(const CheckReport& c) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : c.entries) entries.push_back({{"path", e.path}, {"status", to_string(e.status)}});
    return {{"passed", c.passed()}, {"entries", entries}};
}

inline nlohmann::json to_json(const Report& r) {
    nlohmann::json j;
    j["tool_version"] = SRCEQ_VERSION;
    j["command"] = r.command;
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& in : r.inputs) inputs.push_back({{"label", in.label}, {"origin", in.origin}});
    j["inputs"] = inputs;
    if (r.archive_verdict) j["archive_verdict"] = to_json(*r.archive_verdict);
    if (r.classification) {
        nlohmann::json verdicts = nlohmann::json::array();
        for (const auto& cv : r.classification->verdicts) verdicts.push_back(to_json(cv));
        j["cause_verdicts"] = verdicts;
        nlohmann::json summary = nlohmann::json::object();
        for (const auto& [label, n] : r.classification->summary) summary[std::string(to_string(label))] = n;
        j["cause_summary"] = summary;
    }
    if (r.trace) j["trace_result"] = to_json(*r.trace);
    if (r.provenance_check || r.provenance_manifest) {
        nlohmann::json p = nlohmann::json::object();
        if (r.provenance_check) p["check"] = to_json(*r.provenance_check);
        if (r.provenance_manifest) {
            std::map<std::string, std::size_t> by_status;
            for (const auto& rec : r.provenance_manifest->records) by_status[std::string(to_string(rec.status))]++;
            p["records"] = r.provenance_manifest->records.size();
            p["by_status"] = by_status;
        }
        j["provenance"] = p;
    }
    j["warnings"] = r.warnings;
    if (r.stamp) j["generated_at"] = *r.stamp;
    return j;
}

inline std::string render_json(const Report& r) { return to_json(r).dump(2) + "\n"; }

namespace detail {

inline std::string clip(std::string s, std::size_t max = 100) {
    if (s.size() > max) s = s.substr(0, max - 3) + "...";
    return s;
}

} // namespace detail

/// Human-readable report: one line per differing file, its hunks, and its
/// cause labels.
inline std::string render_text(const Report& r) {
    std::ostringstream out;
    for (const auto& in : r.inputs) out << in.label << ": " << in.origin << "\n";
    if (r.archive_verdict) {
        const ArchiveVerdict& av = *r.archive_verdict;
        std::map<std::string, const CauseVerdict*> causes;
        if (r.classification)
            for (const auto& cv : r.classification->verdicts) causes[cv.path] = &cv;
        for (const PairVerdict& v : av.pair_verdicts) {
            if (v.status == PairStatus::Identical || v.status == PairStatus::EquivalentModuloFormat) continue;
            out << to_string(v.status) << "  " << v.path;
            if (!v.b_path.empty() && v.b_path != v.path) out << " <-> " << v.b_path;
            out << "\n";
            for (const DiffHunk& h : v.diff_hunks) {
                std::uint32_t la = h.a_tokens.empty() ? 0 : h.a_tokens.front().line;
                std::uint32_t lb = h.b_tokens.empty() ? 0 : h.b_tokens.front().line;
                out << "  @@ a:" << la << " b:" << lb << "\n";
                if (!h.a_tokens.empty()) out << "  - " << detail::clip(join_tokens(h.a_tokens)) << "\n";
                if (!h.b_tokens.empty()) out << "  + " << detail::clip(join_tokens(h.b_tokens)) << "\n";
            }
            if (auto it = causes.find(v.path); it != causes.end()) {
                for (const LabelEvidence& l : it->second->labels) {
                    char conf[16];
                    std::snprintf(conf, sizeof conf, "%.2f", l.confidence);
                    out << "  => " << to_string(l.label) << " (" << conf << ")";
                    if (l.shading)
                        for (const auto& [from, to] : l.shading->prefix_pairs) out << " [" << from << " -> " << to << "]";
                    out << "\n";
                }
            }
        }
        out << "verdict: " << (av.equivalent ? "equivalent" : "not equivalent");
        for (const auto& [s, n] : av.counts) out << "  " << to_string(s) << "=" << n;
        out << "\n";
    }
    if (r.classification && !r.classification->summary.empty()) {
        out << "causes:";
        for (const auto& [label, n] : r.classification->summary) out << "  " << to_string(label) << "=" << n;
        out << "\n";
    }
    if (r.trace) {
        for (const auto& [q, s] : r.trace->per_class) out << to_string(s) << "  " << q.str() << "\n";
        out << "missing: " << r.trace->missing_count << "\n";
    }
    if (r.provenance_check) {
        for (const auto& e : r.provenance_check->entries) out << to_string(e.status) << "  " << e.path << "\n";
        out << "manifest check: " << (r.provenance_check->passed() ? "passed" : "failed") << "\n";
    }
    if (r.provenance_manifest) out << "manifest records: " << r.provenance_manifest->records.size() << "\n";
    for (const auto& w : r.warnings) out << "warning: " << w << "\n";
    if (r.stamp) out << "generated at " << *r.stamp << "\n";
    return out.str();
}

} // namespace srceq
