#include "ccbench/simetrics.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "ccbench/utf8.hpp"

namespace ccbench {

namespace {

struct Range {
    std::size_t alo, ahi, blo, bhi;
};

// Longest common contiguous block inside the range: maximal length, ties
// resolved toward the smallest start in a, then the smallest start in b.
void find_longest_block(std::u32string_view a, std::u32string_view b, const Range& r,
                        std::size_t& bi, std::size_t& bj, std::size_t& bk) {
    const std::size_t width = r.bhi - r.blo;
    std::vector<std::size_t> prev(width + 1, 0), cur(width + 1, 0);
    bi = r.alo;
    bj = r.blo;
    bk = 0;
    for (std::size_t i = r.alo; i < r.ahi; ++i) {
        std::fill(cur.begin(), cur.end(), 0);
        for (std::size_t j = r.blo; j < r.bhi; ++j) {
            if (a[i] != b[j]) continue;
            std::size_t k = prev[j - r.blo] + 1;
            cur[j - r.blo + 1] = k;
            if (k > bk) {
                bk = k;
                bi = i - k + 1;
                bj = j - k + 1;
            }
        }
        std::swap(prev, cur);
    }
}

}  // namespace

double ratcliff_obershelp(std::u32string_view a, std::u32string_view b) {
    if (a.empty() && b.empty()) return 1.0;
    // The greedy block recursion is orientation dependent, so order the
    // operands canonically to make the measure symmetric.
    if (b < a) std::swap(a, b);
    std::size_t matched = 0;
    std::vector<Range> pending{{0, a.size(), 0, b.size()}};
    while (!pending.empty()) {
        Range r = pending.back();
        pending.pop_back();
        if (r.alo >= r.ahi || r.blo >= r.bhi) continue;
        std::size_t bi = 0, bj = 0, bk = 0;
        find_longest_block(a, b, r, bi, bj, bk);
        if (bk == 0) continue;
        matched += bk;
        pending.push_back({r.alo, bi, r.blo, bj});
        pending.push_back({bi + bk, r.ahi, bj + bk, r.bhi});
    }
    return 2.0 * static_cast<double>(matched) / static_cast<double>(a.size() + b.size());
}

double jaro(std::u32string_view a, std::u32string_view b) {
    if (a.empty() && b.empty()) return 1.0;
    if (a.empty() || b.empty()) return 0.0;
    const std::size_t la = a.size(), lb = b.size();
    const std::size_t maxlen = std::max(la, lb);
    const std::size_t window = maxlen / 2 >= 1 ? maxlen / 2 - 1 : 0;
    std::vector<std::uint8_t> amatch(la, 0), bmatch(lb, 0);
    std::size_t matches = 0;
    for (std::size_t i = 0; i < la; ++i) {
        std::size_t lo = i > window ? i - window : 0;
        std::size_t hi = std::min(lb, i + window + 1);
        for (std::size_t j = lo; j < hi; ++j) {
            if (!bmatch[j] && a[i] == b[j]) {
                amatch[i] = 1;
                bmatch[j] = 1;
                ++matches;
                break;
            }
        }
    }
    if (matches == 0) return 0.0;
    std::vector<char32_t> sa, sb;
    sa.reserve(matches);
    sb.reserve(matches);
    for (std::size_t i = 0; i < la; ++i)
        if (amatch[i]) sa.push_back(a[i]);
    for (std::size_t j = 0; j < lb; ++j)
        if (bmatch[j]) sb.push_back(b[j]);
    std::size_t mismatched = 0;
    for (std::size_t k = 0; k < sa.size(); ++k)
        if (sa[k] != sb[k]) ++mismatched;
    const double t = static_cast<double>(mismatched) / 2.0;
    const double m = static_cast<double>(matches);
    return (m / static_cast<double>(la) + m / static_cast<double>(lb) + (m - t) / m) / 3.0;
}

double jaro_winkler(std::u32string_view a, std::u32string_view b,
                    double scaling, int max_prefix) {
    if (max_prefix < 0) max_prefix = 0;
    if (scaling * static_cast<double>(max_prefix) > 1.0 + 1e-12) {
        throw std::invalid_argument("jaro_winkler: scaling * max_prefix must not exceed 1");
    }
    const double j = jaro(a, b);
    const std::size_t limit =
        std::min({a.size(), b.size(), static_cast<std::size_t>(max_prefix)});
    std::size_t l = 0;
    while (l < limit && a[l] == b[l]) ++l;
    return j + static_cast<double>(l) * scaling * (1.0 - j);
}

long long hamming(std::u32string_view a, std::u32string_view b) {
    const std::size_t shared = std::min(a.size(), b.size());
    long long d = 0;
    for (std::size_t i = 0; i < shared; ++i)
        if (a[i] != b[i]) ++d;
    d += static_cast<long long>(std::max(a.size(), b.size()) - shared);
    return d;
}

long long damerau_levenshtein(std::u32string_view a, std::u32string_view b) {
    const std::size_t n = a.size(), m = b.size();
    if (n == 0) return static_cast<long long>(m);
    if (m == 0) return static_cast<long long>(n);
    const std::uint32_t INF = static_cast<std::uint32_t>(n + m);

    // Full distance matrix d[i][j] = distance(a[0..i), b[0..j)), stored as
    // per-row arrays with a leading INF sentinel for column -1. Only the
    // current row, the previous row, and the rows pinned as "last occurrence
    // of some character of a" stay allocated, which bounds memory by the
    // alphabet size instead of n.
    std::vector<std::unique_ptr<std::uint32_t[]>> rows(n + 1);
    std::vector<std::uint8_t> pinned(n + 1, 0);
    std::size_t cur = 0;

    auto alloc_row = [&](std::size_t i) { rows[i] = std::make_unique<std::uint32_t[]>(m + 2); };
    auto try_free = [&](std::size_t r) {
        if (!pinned[r] && rows[r] && r + 1 < cur) rows[r].reset();
    };

    alloc_row(0);
    rows[0][0] = INF;
    for (std::size_t j = 0; j <= m; ++j) rows[0][j + 1] = static_cast<std::uint32_t>(j);

    std::unordered_map<char32_t, std::size_t> last_row;  // char -> 1-based row index

    for (std::size_t i = 1; i <= n; ++i) {
        cur = i;
        alloc_row(i);
        rows[i][0] = INF;
        rows[i][1] = static_cast<std::uint32_t>(i);
        std::size_t db = 0;  // 1-based column of the last match within this row
        for (std::size_t j = 1; j <= m; ++j) {
            auto it = last_row.find(b[j - 1]);
            const std::size_t k = (it == last_row.end()) ? 0 : it->second;
            const std::size_t l = db;
            std::uint32_t cost = 1;
            if (a[i - 1] == b[j - 1]) {
                cost = 0;
                db = j;
            }
            std::uint32_t best = rows[i - 1][j] + cost;              // substitution / match
            best = std::min(best, rows[i][j] + 1);                   // insertion
            best = std::min(best, rows[i - 1][j + 1] + 1);           // deletion
            if (k >= 1 && l >= 1) {
                // transposition of a[k-1]..a[i-1] against b[l-1]..b[j-1];
                // row k-1 is alive because it is pinned for b[j-1]
                const std::uint32_t base = rows[k - 1][l];           // d[k-1][l-1]
                const std::uint32_t tra = base + static_cast<std::uint32_t>(i - k - 1) +
                                          static_cast<std::uint32_t>(j - l - 1) + 1;
                best = std::min(best, tra);
            }
            rows[i][j + 1] = best;
        }
        const char32_t ca = a[i - 1];
        auto it = last_row.find(ca);
        if (it != last_row.end()) {
            const std::size_t old = it->second - 1;
            pinned[old] = 0;
            try_free(old);
        }
        last_row[ca] = i;
        pinned[i - 1] = 1;
        if (i >= 2) try_free(i - 2);
    }
    return static_cast<long long>(rows[n][m + 1]);
}

double normalize_distance(long long d, std::size_t ref_len, std::size_t cand_len) {
    const std::size_t mx = std::max(ref_len, cand_len);
    if (mx == 0) return 0.0;
    const double v = static_cast<double>(d) / static_cast<double>(mx);
    return std::clamp(v, 0.0, 1.0);
}

std::u32string reference_fragment(std::u32string_view original, std::size_t boundary,
                                  std::size_t generated_length, bool truncate) {
    if (boundary > original.size()) boundary = original.size();
    std::u32string_view rem = original.substr(boundary);
    if (truncate && rem.size() > generated_length) rem = rem.substr(0, generated_length);
    return std::u32string(rem);
}

SimilarityScores compare(const SourceSample& original, const DuplicateProgram& dup,
                         CompareMode mode, const CompareOptions& opts) {
    SimilarityScores s;
    s.mode = mode;
    std::u32string ref, cand;
    if (mode == CompareMode::whole_file) {
        ref = utf8::decode(original.content).text;
        cand = utf8::decode(dup.content).text;
    } else {
        std::u32string gen = utf8::decode(dup.generated).text;
        const std::size_t prefix_bytes = dup.content.size() >= dup.generated.size()
                                             ? dup.content.size() - dup.generated.size()
                                             : 0;
        const std::size_t boundary =
            utf8::count_scalars(std::string_view(dup.content).substr(0, prefix_bytes))
                .value_or(0);
        std::u32string orig = utf8::decode(original.content).text;
        ref = reference_fragment(orig, boundary, gen.size(), opts.fragment_truncation);
        cand = std::move(gen);
    }
    const std::uint64_t cells =
        static_cast<std::uint64_t>(ref.size()) * static_cast<std::uint64_t>(cand.size());
    if (cells > opts.cell_budget) {
        s.oversize = true;
        return s;
    }
    s.ratcliff_obershelp = ratcliff_obershelp(ref, cand);
    s.jaro_winkler = jaro_winkler(ref, cand, opts.jw_scaling, opts.jw_max_prefix);
    s.hamming = hamming(ref, cand);
    s.damerau_levenshtein = damerau_levenshtein(ref, cand);
    return s;
}

}  // namespace ccbench
