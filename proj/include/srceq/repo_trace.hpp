// SPDX-License-Identifier: Apache-2.0
//
// Tracing distributed classes back to a repository checkout. A class is
// backed when a valid committed source declares it; classes whose only
// repository source is a template, or that have no source at all, were
// produced at build time.

#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "srceq/equivalence.hpp"
#include "srceq/source_model.hpp"

namespace srceq {

enum class TraceStatus { RepoBackedIdentical, RepoBackedEquivalent, RepoBackedDiffers, RepoTemplate, MissingInRepo };

inline std::string_view to_string(TraceStatus s) {
    switch (s) {
    case TraceStatus::RepoBackedIdentical: return "RepoBackedIdentical";
    case TraceStatus::RepoBackedEquivalent: return "RepoBackedEquivalent";
    case TraceStatus::RepoBackedDiffers: return "RepoBackedDiffers";
    case TraceStatus::RepoTemplate: return "RepoTemplate";
    case TraceStatus::MissingInRepo: return "MissingInRepo";
    }
    return "?";
}

inline bool counts_as_missing(TraceStatus s) {
    return s == TraceStatus::RepoTemplate || s == TraceStatus::MissingInRepo;
}

struct TraceResult {
    std::map<QualifiedName, TraceStatus> per_class;
    std::size_t missing_count = 0;
    std::string repo_root;
    std::vector<std::string> warnings;

    std::set<QualifiedName> missing() const {
        std::set<QualifiedName> out;
        for (const auto& [q, s] : per_class)
            if (counts_as_missing(s)) out.insert(q);
        return out;
    }

    const TraceStatus* find(const QualifiedName& q) const {
        auto it = per_class.find(q);
        return it == per_class.end() ? nullptr : &it->second;
    }
};

struct TraceOptions {
    PathFilter excludes{PathFilter::default_repo_excludes()};
};

/// Traces every class of `archive` against an already loaded repository tree.
inline TraceResult trace_against(const SourceArchive& archive, const SourceArchive& repo) {
    TraceResult result;
    result.repo_root = repo.origin;
    ClassIndex repo_index = class_index(repo);
    ClassIndex archive_index = class_index(archive);
    for (const auto& w : repo_index.warnings) result.warnings.push_back("repo: " + w);
    for (const auto& w : archive_index.warnings) result.warnings.push_back("archive: " + w);

    for (const auto& [name, archive_entries] : archive_index.entries) {
        auto it = repo_index.entries.find(name);
        TraceStatus status = TraceStatus::MissingInRepo;
        if (it != repo_index.entries.end()) {
            const SourceUnit& declaring = archive.units.at(archive_entries.front().path);
            bool any_valid = false;
            TraceStatus best = TraceStatus::RepoBackedDiffers;
            for (const ClassEntry& entry : it->second) {
                if (entry.is_template) continue;
                any_valid = true;
                PairVerdict v = compare_pair(declaring, repo.units.at(entry.path));
                TraceStatus s = v.status == PairStatus::Identical                ? TraceStatus::RepoBackedIdentical
                                : v.status == PairStatus::EquivalentModuloFormat ? TraceStatus::RepoBackedEquivalent
                                                                                 : TraceStatus::RepoBackedDiffers;
                if (static_cast<int>(s) < static_cast<int>(best)) best = s;
            }
            status = any_valid ? best : TraceStatus::RepoTemplate;
        }
        result.per_class.emplace(name, status);
        if (counts_as_missing(status)) ++result.missing_count;
    }
    return result;
}

inline TraceResult trace(const SourceArchive& archive, const std::filesystem::path& repo_root,
                         const TraceOptions& options = {}) {
    std::error_code ec;
    if (!std::filesystem::is_directory(repo_root, ec)) throw IoError("repository root is not a readable directory: " + repo_root.string());
    SourceArchive repo = load_directory(repo_root, "repo", options.excludes);
    return trace_against(archive, repo);
}

struct MissingSummary {
    std::set<QualifiedName> names;
    std::size_t count = 0;
};

/// Missing classes across several releases of one package; a name missing in
/// more than one release is counted once.
inline MissingSummary summarize_trace(const std::vector<TraceResult>& results) {
    MissingSummary out;
    for (const TraceResult& r : results) {
        auto missing = r.missing();
        out.names.insert(missing.begin(), missing.end());
    }
    out.count = out.names.size();
    return out;
}

} // namespace srceq
