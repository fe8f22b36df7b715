#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ccbench/corpus.hpp"
#include "ccbench/prefixer.hpp"

namespace ccbench {

enum class TokenClass { Operator, Operand };

struct PyToken {
    std::string lexeme;
    TokenClass cls = TokenClass::Operator;
    int line = 0;   // 1-based physical line of the token start
    int depth = 0;  // bracket nesting depth at the token start
};

// One statement: physical lines joined across brackets and backslash
// continuations. indent is the literal leading whitespace.
struct PyLogicalLine {
    std::vector<PyToken> tokens;
    std::string indent;
    int line = 0;
};

struct TokenizeResult {
    std::vector<PyLogicalLine> lines;
    bool dirty = false;  // unterminated string or un-tokenizable character
    std::string dirty_reason;
    bool eof_open_brackets = false;
};

// Line-oriented Python lexer. Keywords are operators except the constants
// True/False/None; identifiers, numbers, strings and '...' are operands.
// Comments vanish. It never throws: broken input marks the stream dirty.
TokenizeResult tokenize_python(std::string_view code);

struct HalsteadMetrics {
    std::size_t distinct_operators = 0;  // n1
    std::size_t distinct_operands = 0;   // n2
    std::size_t total_operators = 0;     // N1
    std::size_t total_operands = 0;      // N2
    std::size_t vocabulary = 0;
    std::size_t length = 0;
    double volume = 0.0;      // length * log2(vocabulary), 0 when vocabulary < 2
    double difficulty = 0.0;  // (n1/2) * (N2/n2), 0 when n2 == 0
    double effort = 0.0;
    double bugs = 0.0;  // volume / 3000
};

HalsteadMetrics halstead_from_tokens(const TokenizeResult& tokens);
HalsteadMetrics halstead(std::string_view code);

struct BlockComplexity {
    std::string name;  // dotted qualified name; "<module>" for module-level code
    long long complexity = 0;
};

struct CyclomaticResult {
    bool ok = false;
    std::string error;
    std::vector<BlockComplexity> blocks;  // functions in source order, module last
    double average = 0.0;
    long long total = 0;
};

// Decision counting: +1 per if/elif token (ternaries and comprehension
// filters included), per statement-head for/while, per except clause, and
// per and/or. else/finally and comprehension-for add nothing. Every block
// starts at 1. Blocks are functions plus a module entry when module-level
// statements or decisions exist.
CyclomaticResult cyclomatic_from_tokens(const TokenizeResult& tokens);
CyclomaticResult cyclomatic_complexity(std::string_view code);

enum class Provenance { computed, inherited_from_original };

struct StaticMetrics {
    double cyclomatic_avg = 0.0;
    long long cyclomatic_total = 0;
    std::vector<BlockComplexity> blocks;
    HalsteadMetrics halstead;
    double length_ratio = 1.0;  // chars(duplicate) / chars(original)
    Provenance provenance = Provenance::computed;
    bool analysis_clean = true;
};

// Analyzes a standalone source (used for originals).
StaticMetrics compute_static(std::string_view code);

// Analyzes a completed program. When the analysis fails (dirty token stream
// or complexity error, the usual fate of truncated generations) the
// original's metrics are inherited; length_ratio is always recomputed from
// the actual lengths.
StaticMetrics analyze_with_fallback(const DuplicateProgram& dup,
                                    const SourceSample& original,
                                    const StaticMetrics& original_metrics);

const char* provenance_name(Provenance p);

}  // namespace ccbench
