#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "ccbench/corpus.hpp"
#include "ccbench/prefixer.hpp"

namespace ccbench {

enum class CompareMode { whole_file, fragment };

struct SimilarityScores {
    double ratcliff_obershelp = 0.0;  // in [0, 1]
    double jaro_winkler = 0.0;        // in [0, 1]
    long long hamming = 0;            // distance, unbounded
    long long damerau_levenshtein = 0;
    CompareMode mode = CompareMode::whole_file;
    bool oversize = false;  // pair exceeded the cell budget, scores not computed
};

struct CompareOptions {
    bool fragment_truncation = true;
    std::uint64_t cell_budget = 1000000000;  // max |a|*|b| for the quadratic passes
    double jw_scaling = 0.1;
    int jw_max_prefix = 4;
};

// --- raw algorithms on scalar-value sequences ---

// 2M / (|a|+|b|); 1.0 when both sides are empty. Symmetric: operands are
// ordered canonically before the longest-common-block recursion, since the
// greedy recursion itself is orientation dependent.
double ratcliff_obershelp(std::u32string_view a, std::u32string_view b);

// Plain Jaro similarity; 1.0 when both empty, 0.0 when exactly one is empty.
double jaro(std::u32string_view a, std::u32string_view b);

// Jaro-Winkler with prefix bonus applied unconditionally (no boost
// threshold). Throws std::invalid_argument when scaling * max_prefix > 1.
double jaro_winkler(std::u32string_view a, std::u32string_view b,
                    double scaling = 0.1, int max_prefix = 4);

// Mismatches at shared positions plus the length difference.
long long hamming(std::u32string_view a, std::u32string_view b);

// Unrestricted Damerau-Levenshtein (a true metric): transposed blocks may
// be edited again, unlike the optimal-string-alignment variant.
long long damerau_levenshtein(std::u32string_view a, std::u32string_view b);

// Normalized distance for heatmaps: d / max(ref_len, cand_len), 0 when both
// lengths are 0.
double normalize_distance(long long d, std::size_t ref_len, std::size_t cand_len);

// --- comparison-pair plumbing ---

// Original text a fragment candidate is scored against: the remainder after
// boundary, truncated to generated_length scalars when truncate is set.
std::u32string reference_fragment(std::u32string_view original, std::size_t boundary,
                                  std::size_t generated_length, bool truncate);

// Scores one duplicate against its original in the given mode. The fragment
// boundary is recovered from the duplicate itself (content minus generated).
SimilarityScores compare(const SourceSample& original, const DuplicateProgram& dup,
                         CompareMode mode, const CompareOptions& opts = {});

}  // namespace ccbench
