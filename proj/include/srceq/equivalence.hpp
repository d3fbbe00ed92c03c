// SPDX-License-Identifier: Apache-2.0
//
// File- and archive-level source equivalence: two sources are equivalent when
// their comment-free token streams are equal.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "srceq/source_model.hpp"
#include "srceq/token_diff.hpp"

namespace srceq {

enum class PairStatus { Identical, EquivalentModuloFormat, NonEquivalent, OnlyInA, OnlyInB };

inline std::string_view to_string(PairStatus s) {
    switch (s) {
    case PairStatus::Identical: return "Identical";
    case PairStatus::EquivalentModuloFormat: return "EquivalentModuloFormat";
    case PairStatus::NonEquivalent: return "NonEquivalent";
    case PairStatus::OnlyInA: return "OnlyInA";
    case PairStatus::OnlyInB: return "OnlyInB";
    }
    return "?";
}

struct PairVerdict {
    std::string path;   // path in A (in B for OnlyInB)
    std::string b_path; // differs from `path` only for pairs matched by qualified name
    PairStatus status = PairStatus::Identical;
    std::vector<DiffHunk> diff_hunks;
    bool raw_only = false; // a side failed to lex; decided on bytes alone
};

struct ArchiveVerdict {
    bool equivalent = true;
    std::vector<PairVerdict> pair_verdicts;
    std::map<PairStatus, std::size_t> counts;
};

struct FilePair {
    std::string path;
    const SourceUnit* a = nullptr;
    const SourceUnit* b = nullptr;
};

/// Pairs units by path, then pairs leftovers whose qualified top-level names
/// coincide. Ordered by path.
inline std::vector<FilePair> pair_files(const SourceArchive& a, const SourceArchive& b) {
    std::vector<FilePair> pairs;
    std::vector<const SourceUnit*> only_a;
    std::set<std::string> matched_b;
    for (const auto& [path, ua] : a.units) {
        if (const SourceUnit* ub = b.find(path)) {
            pairs.push_back({path, &ua, ub});
            matched_b.insert(path);
        } else {
            only_a.push_back(&ua);
        }
    }
    auto names_key = [](const SourceUnit& u) {
        std::vector<std::string> names;
        for (const auto& q : u.qualified_names()) names.push_back(q.str());
        std::sort(names.begin(), names.end());
        std::string key;
        for (const auto& n : names) key += n + ";";
        return key;
    };
    std::multimap<std::string, const SourceUnit*> candidates; // ordered by key, then insertion (path) order
    for (const auto& [path, ub] : b.units) {
        if (matched_b.contains(path) || ub.top_level_types.empty()) continue;
        candidates.emplace(names_key(ub), &ub);
    }
    for (const SourceUnit* ua : only_a) {
        const SourceUnit* partner = nullptr;
        if (!ua->top_level_types.empty()) {
            auto it = candidates.find(names_key(*ua));
            if (it != candidates.end()) {
                partner = it->second;
                candidates.erase(it);
                matched_b.insert(partner->path);
            }
        }
        pairs.push_back({ua->path, ua, partner});
    }
    for (const auto& [path, ub] : b.units) {
        if (!matched_b.contains(path)) pairs.push_back({path, nullptr, &ub});
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const FilePair& x, const FilePair& y) { return x.path < y.path; });
    return pairs;
}

inline PairVerdict compare_pair(const SourceUnit& ua, const SourceUnit& ub, std::size_t merge_gap = default_merge_gap) {
    PairVerdict v;
    v.path = ua.path;
    v.b_path = ub.path;
    if (ua.text == ub.text) {
        v.status = PairStatus::Identical;
        return v;
    }
    if (ua.lex_error || ub.lex_error) {
        // No token diff: a single hunk over whatever tokens exist marks the pair.
        v.status = PairStatus::NonEquivalent;
        v.raw_only = true;
        std::span<const Token> ta(ua.stream.tokens), tb(ub.stream.tokens);
        DiffHunk h{{0, ta.size()}, {0, tb.size()}, {{{0, ta.size()}, {0, tb.size()}}}, {ta.begin(), ta.end()}, {tb.begin(), tb.end()}};
        v.diff_hunks.push_back(std::move(h));
        return v;
    }
    if (normalized_equal(ua.stream, ub.stream)) {
        v.status = PairStatus::EquivalentModuloFormat;
        return v;
    }
    v.status = PairStatus::NonEquivalent;
    v.diff_hunks = token_diff(ua.stream.tokens, ub.stream.tokens, merge_gap);
    return v;
}

inline ArchiveVerdict compare_archives(const SourceArchive& a, const SourceArchive& b,
                                       std::size_t merge_gap = default_merge_gap) {
    ArchiveVerdict av;
    for (const FilePair& p : pair_files(a, b)) {
        PairVerdict v;
        if (p.a && p.b) {
            v = compare_pair(*p.a, *p.b, merge_gap);
        } else {
            v.path = p.path;
            v.b_path = p.b ? p.b->path : "";
            v.status = p.a ? PairStatus::OnlyInA : PairStatus::OnlyInB;
            if (p.a) v.path = p.a->path;
        }
        av.counts[v.status]++;
        if (v.status != PairStatus::Identical && v.status != PairStatus::EquivalentModuloFormat) av.equivalent = false;
        av.pair_verdicts.push_back(std::move(v));
    }
    return av;
}

} // namespace srceq
