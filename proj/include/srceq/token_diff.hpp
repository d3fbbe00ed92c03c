// SPDX-License-Identifier: Apache-2.0
//
// Minimal token-level diff (Myers, linear-space divide and conquer over the
// middle snake), grouped into hunks.

#pragma once

#include <algorithm>
#include <cstdlib>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "srceq/lexer.hpp"
#include "srceq/structure.hpp"

namespace srceq {

/// One maximal run of changed tokens: a[a.begin, a.end) is replaced by
/// b[b.begin, b.end). At least one side is nonempty.
struct Edit {
    TokenRange a;
    TokenRange b;
    friend bool operator==(const Edit&, const Edit&) = default;
};

/// Edits separated by fewer than the merge gap of unchanged tokens, together
/// with the unchanged tokens between them.
struct DiffHunk {
    TokenRange a;
    TokenRange b;
    std::vector<Edit> edits;
    std::vector<Token> a_tokens;
    std::vector<Token> b_tokens;
};

inline constexpr std::size_t default_merge_gap = 3;

namespace detail {

class MyersDiff {
public:
    MyersDiff(std::span<const int> a, std::span<const int> b) : a_(a), b_(b) {}

    std::vector<Edit> run() {
        solve(0, a_.size(), 0, b_.size());
        // Coalesce touching edits produced by adjacent sub-problems.
        std::vector<Edit> merged;
        for (const Edit& e : edits_) {
            if (!merged.empty() && merged.back().a.end == e.a.begin && merged.back().b.end == e.b.begin) {
                merged.back().a.end = e.a.end;
                merged.back().b.end = e.b.end;
            } else {
                merged.push_back(e);
            }
        }
        return merged;
    }

private:
    void solve(std::size_t a_lo, std::size_t a_hi, std::size_t b_lo, std::size_t b_hi) {
        while (a_lo < a_hi && b_lo < b_hi && a_[a_lo] == b_[b_lo]) ++a_lo, ++b_lo;
        while (a_lo < a_hi && b_lo < b_hi && a_[a_hi - 1] == b_[b_hi - 1]) --a_hi, --b_hi;
        if (a_lo == a_hi && b_lo == b_hi) return;
        if (a_lo == a_hi || b_lo == b_hi) {
            edits_.push_back({{a_lo, a_hi}, {b_lo, b_hi}});
            return;
        }
        auto [x, y] = middle_snake(a_lo, a_hi, b_lo, b_hi);
        if (x == npos) {
            edits_.push_back({{a_lo, a_hi}, {b_lo, b_hi}});
            return;
        }
        solve(a_lo, x, b_lo, y);
        solve(x, a_hi, y, b_hi);
    }

    // Returns an absolute split point on an optimal path.
    std::pair<std::size_t, std::size_t> middle_snake(std::size_t a_lo, std::size_t a_hi, std::size_t b_lo,
                                                     std::size_t b_hi) {
        const long n = static_cast<long>(a_hi - a_lo);
        const long m = static_cast<long>(b_hi - b_lo);
        const long max_d = (n + m + 1) / 2;
        const long offset = max_d;
        const long width = 2 * max_d + 2;
        std::vector<long> fwd(static_cast<std::size_t>(width), -1);
        std::vector<long> rev(static_cast<std::size_t>(width), -1);
        fwd[static_cast<std::size_t>(offset + 1)] = 0;
        rev[static_cast<std::size_t>(offset + 1)] = 0;
        const long delta = n - m;
        const bool front = (delta % 2 != 0);
        long k1_start = 0, k1_end = 0, k2_start = 0, k2_end = 0;
        auto A = [&](long i) { return a_[a_lo + static_cast<std::size_t>(i)]; };
        auto B = [&](long j) { return b_[b_lo + static_cast<std::size_t>(j)]; };
        auto at = [](std::vector<long>& v, long idx) -> long& { return v[static_cast<std::size_t>(idx)]; };

        for (long d = 0; d < max_d; ++d) {
            for (long k1 = -d + k1_start; k1 <= d - k1_end; k1 += 2) {
                long k1_off = offset + k1;
                long x1 = (k1 == -d || (k1 != d && at(fwd, k1_off - 1) < at(fwd, k1_off + 1))) ? at(fwd, k1_off + 1)
                                                                                                : at(fwd, k1_off - 1) + 1;
                long y1 = x1 - k1;
                while (x1 < n && y1 < m && A(x1) == B(y1)) ++x1, ++y1;
                at(fwd, k1_off) = x1;
                if (x1 > n) {
                    k1_end += 2;
                } else if (y1 > m) {
                    k1_start += 2;
                } else if (front) {
                    long k2_off = offset + delta - k1;
                    if (k2_off >= 0 && k2_off < width && at(rev, k2_off) != -1) {
                        long x2 = n - at(rev, k2_off);
                        if (x1 >= x2) return {a_lo + static_cast<std::size_t>(x1), b_lo + static_cast<std::size_t>(y1)};
                    }
                }
            }
            for (long k2 = -d + k2_start; k2 <= d - k2_end; k2 += 2) {
                long k2_off = offset + k2;
                long x2 = (k2 == -d || (k2 != d && at(rev, k2_off - 1) < at(rev, k2_off + 1))) ? at(rev, k2_off + 1)
                                                                                                : at(rev, k2_off - 1) + 1;
                long y2 = x2 - k2;
                while (x2 < n && y2 < m && A(n - x2 - 1) == B(m - y2 - 1)) ++x2, ++y2;
                at(rev, k2_off) = x2;
                if (x2 > n) {
                    k2_end += 2;
                } else if (y2 > m) {
                    k2_start += 2;
                } else if (!front) {
                    long k1_off = offset + delta - k2;
                    if (k1_off >= 0 && k1_off < width && at(fwd, k1_off) != -1) {
                        long x1 = at(fwd, k1_off);
                        long y1 = offset + x1 - k1_off;
                        if (x1 >= n - x2) return {a_lo + static_cast<std::size_t>(x1), b_lo + static_cast<std::size_t>(y1)};
                    }
                }
            }
        }
        return {npos, npos};
    }

    std::span<const int> a_;
    std::span<const int> b_;
    std::vector<Edit> edits_;
};

/// Interns (kind, text) pairs so the diff compares integers.
class TokenInterner {
public:
    std::vector<int> intern(std::span<const Token> tokens) {
        std::vector<int> ids;
        ids.reserve(tokens.size());
        std::string key;
        for (const Token& t : tokens) {
            key.assign(1, static_cast<char>('0' + static_cast<int>(t.kind)));
            key += t.text;
            auto [it, inserted] = ids_.try_emplace(key, static_cast<int>(ids_.size()));
            ids.push_back(it->second);
        }
        return ids;
    }

private:
    std::unordered_map<std::string, int> ids_;
};

} // namespace detail

/// Minimal edit script between two token sequences (compared on kind+text).
inline std::vector<Edit> diff_edits(std::span<const Token> a, std::span<const Token> b) {
    detail::TokenInterner interner;
    std::vector<int> ia = interner.intern(a);
    std::vector<int> ib = interner.intern(b);
    return detail::MyersDiff(ia, ib).run();
}

inline std::vector<DiffHunk> group_hunks(const std::vector<Edit>& edits, std::span<const Token> a,
                                         std::span<const Token> b, std::size_t merge_gap = default_merge_gap) {
    std::vector<DiffHunk> hunks;
    for (const Edit& e : edits) {
        if (!hunks.empty() && e.a.begin - hunks.back().a.end < merge_gap) {
            hunks.back().a.end = e.a.end;
            hunks.back().b.end = e.b.end;
            hunks.back().edits.push_back(e);
        } else {
            hunks.push_back({e.a, e.b, {e}, {}, {}});
        }
    }
    for (DiffHunk& h : hunks) {
        h.a_tokens.assign(a.begin() + static_cast<std::ptrdiff_t>(h.a.begin), a.begin() + static_cast<std::ptrdiff_t>(h.a.end));
        h.b_tokens.assign(b.begin() + static_cast<std::ptrdiff_t>(h.b.begin), b.begin() + static_cast<std::ptrdiff_t>(h.b.end));
    }
    return hunks;
}

inline std::vector<DiffHunk> token_diff(std::span<const Token> a, std::span<const Token> b,
                                        std::size_t merge_gap = default_merge_gap) {
    return group_hunks(diff_edits(a, b), a, b, merge_gap);
}

/// Replays hunks over `a`, yielding the edited sequence (equal to `b` for
/// hunks produced by token_diff(a, b)).
inline std::vector<Token> apply_hunks(std::span<const Token> a, const std::vector<DiffHunk>& hunks) {
    std::vector<Token> out;
    std::size_t pos = 0;
    for (const DiffHunk& h : hunks) {
        out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(pos), a.begin() + static_cast<std::ptrdiff_t>(h.a.begin));
        out.insert(out.end(), h.b_tokens.begin(), h.b_tokens.end());
        pos = h.a.end;
    }
    out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(pos), a.end());
    return out;
}

} // namespace srceq
