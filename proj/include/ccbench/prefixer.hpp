#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ccbench/corpus.hpp"

namespace ccbench {

struct PrefixCase {
    std::string sample_id;
    int ratio_tenths = 0;       // 1..9, ratio = ratio_tenths / 10
    std::size_t boundary = 0;   // prefix length in scalar values
    std::string prefix;         // UTF-8 slice of the original
};

struct DuplicateProgram {
    std::string sample_id;
    int ratio_tenths = 0;
    std::string content;    // prefix + generated completion
    std::string generated;  // completion text alone
};

struct PrefixGenResult {
    std::vector<PrefixCase> cases;
    bool too_short = false;  // sample under 10 chars, no cases emitted
};

// Boundary in scalar values for a sample of char_count chars at
// ratio_tenths/10, using pure integer arithmetic.
std::size_t prefix_boundary(std::size_t char_count, int ratio_tenths);

// One case per requested ratio. Samples shorter than 10 chars yield no
// cases and set too_short.
PrefixGenResult generate_prefix_cases(const SourceSample& sample,
                                      const std::vector<int>& ratio_tenths);

// The part of the original after the prefix boundary.
std::string original_remainder(const SourceSample& sample, const PrefixCase& pc);

// Joins a prefix case with the server completion.
DuplicateProgram merge_completion(const PrefixCase& pc, const std::string& completion);

}  // namespace ccbench
