#include "ccbench/codemetrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include "ccbench/utf8.hpp"

namespace ccbench {

namespace {

const std::set<std::string>& python_keywords() {
    static const std::set<std::string> kw = {
        "False", "None",   "True",  "and",    "as",       "assert", "async",
        "await", "break",  "class", "continue", "def",    "del",    "elif",
        "else",  "except", "finally", "for",  "from",     "global", "if",
        "import", "in",    "is",    "lambda", "nonlocal", "not",    "or",
        "pass",  "raise",  "return", "try",   "while",    "with",   "yield"};
    return kw;
}

bool is_ident_start(unsigned char c) {
    return c == '_' || std::isalpha(c) || c >= 0x80;
}

bool is_ident_cont(unsigned char c) {
    return c == '_' || std::isalnum(c) || c >= 0x80;
}

bool is_string_prefix(const std::string& s) {
    if (s.empty() || s.size() > 2) return false;
    for (char c : s) {
        char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (l != 'r' && l != 'b' && l != 'u' && l != 'f') return false;
    }
    return true;
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : s_(src) {
        // tolerate a UTF-8 byte order mark
        if (s_.size() >= 3 && s_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    }

    TokenizeResult run() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (!logical_open_ && (c == ' ' || c == '\t')) {
                pending_indent_.push_back(c);
                ++pos_;
                continue;
            }
            if (c == '\f' || c == '\r' || c == ' ' || c == '\t') {
                ++pos_;
                continue;
            }
            if (c == '\n') {
                ++pos_;
                ++line_;
                if (depth_ == 0) flush_line();
                if (depth_ == 0) pending_indent_.clear();
                continue;
            }
            if (c == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
                continue;
            }
            if (c == '\\' && pos_ + 1 < s_.size() &&
                (s_[pos_ + 1] == '\n' ||
                 (s_[pos_ + 1] == '\r' && pos_ + 2 < s_.size() && s_[pos_ + 2] == '\n'))) {
                pos_ += (s_[pos_ + 1] == '\n') ? 2 : 3;
                ++line_;
                open_line();  // a continuation keeps the logical line alive
                continue;
            }
            open_line();
            lex_token();
        }
        flush_line();
        if (depth_ > 0) result_.eof_open_brackets = true;
        return std::move(result_);
    }

private:
    void open_line() {
        if (logical_open_) return;
        logical_open_ = true;
        cur_.tokens.clear();
        cur_.indent = pending_indent_;
        cur_.line = line_;
    }

    void flush_line() {
        if (logical_open_ && !cur_.tokens.empty()) result_.lines.push_back(cur_);
        logical_open_ = false;
    }

    void push(std::string lexeme, TokenClass cls, int tok_line, int tok_depth) {
        cur_.tokens.push_back({std::move(lexeme), cls, tok_line, tok_depth});
    }

    void mark_dirty(const std::string& why) {
        if (!result_.dirty) {
            result_.dirty = true;
            result_.dirty_reason = why + " at line " + std::to_string(line_);
        }
    }

    void lex_token() {
        const int tok_line = line_;
        const int tok_depth = depth_;
        unsigned char c = static_cast<unsigned char>(s_[pos_]);

        if (is_ident_start(c)) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && is_ident_cont(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            std::string word(s_.substr(start, pos_ - start));
            if (pos_ < s_.size() && (s_[pos_] == '\'' || s_[pos_] == '"') &&
                is_string_prefix(word)) {
                lex_string(start, tok_line, tok_depth);
                return;
            }
            if (word == "True" || word == "False" || word == "None") {
                push(std::move(word), TokenClass::Operand, tok_line, tok_depth);
            } else if (python_keywords().count(word) > 0) {
                push(std::move(word), TokenClass::Operator, tok_line, tok_depth);
            } else {
                push(std::move(word), TokenClass::Operand, tok_line, tok_depth);
            }
            return;
        }

        if (std::isdigit(c) ||
            (c == '.' && pos_ + 1 < s_.size() &&
             std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
            lex_number(tok_line, tok_depth);
            return;
        }

        if (c == '\'' || c == '"') {
            lex_string(pos_, tok_line, tok_depth);
            return;
        }

        if (c == '.') {
            if (pos_ + 2 < s_.size() && s_[pos_ + 1] == '.' && s_[pos_ + 2] == '.') {
                pos_ += 3;
                push("...", TokenClass::Operand, tok_line, tok_depth);  // Ellipsis constant
            } else {
                ++pos_;
                push(".", TokenClass::Operator, tok_line, tok_depth);
            }
            return;
        }

        static const char* three[] = {"**=", "//=", ">>=", "<<="};
        static const char* two[] = {"**", "//", ">>", "<<", "<=", ">=", "==", "!=",
                                    "+=", "-=", "*=", "/=", "%=", "@=", "&=", "|=",
                                    "^=", ":=", "->"};
        for (const char* op : three) {
            if (s_.compare(pos_, 3, op) == 0) {
                pos_ += 3;
                push(op, TokenClass::Operator, tok_line, tok_depth);
                return;
            }
        }
        for (const char* op : two) {
            if (s_.compare(pos_, 2, op) == 0) {
                pos_ += 2;
                push(op, TokenClass::Operator, tok_line, tok_depth);
                return;
            }
        }
        static const std::string singles = "+-*/%@&|^~<>=()[]{},:;";
        if (singles.find(static_cast<char>(c)) != std::string::npos) {
            if (c == '(' || c == '[' || c == '{') ++depth_;
            if ((c == ')' || c == ']' || c == '}') && depth_ > 0) --depth_;
            ++pos_;
            push(std::string(1, static_cast<char>(c)), TokenClass::Operator, tok_line, tok_depth);
            return;
        }

        mark_dirty(std::string("unexpected character '") + static_cast<char>(c) + "'");
        ++pos_;
    }

    void lex_number(int tok_line, int tok_depth) {
        std::size_t start = pos_;
        while (pos_ < s_.size()) {
            unsigned char c = static_cast<unsigned char>(s_[pos_]);
            if (std::isalnum(c) || c == '_' || c == '.') {
                ++pos_;
                continue;
            }
            if ((c == '+' || c == '-') && pos_ > start) {
                char prev = s_[pos_ - 1];
                if (prev == 'e' || prev == 'E') {
                    ++pos_;
                    continue;
                }
            }
            break;
        }
        push(std::string(s_.substr(start, pos_ - start)), TokenClass::Operand, tok_line, tok_depth);
    }

    // start points at the prefix (if any) or the opening quote.
    void lex_string(std::size_t start, int tok_line, int tok_depth) {
        const char q = s_[pos_];
        bool triple = pos_ + 2 < s_.size() && s_[pos_ + 1] == q && s_[pos_ + 2] == q;
        pos_ += triple ? 3 : 1;
        bool closed = false;
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '\\') {
                if (pos_ + 1 < s_.size()) {
                    if (s_[pos_ + 1] == '\n') ++line_;
                    pos_ += 2;
                } else {
                    ++pos_;
                }
                continue;
            }
            if (c == '\n') {
                if (!triple) break;  // unterminated single-quoted string
                ++line_;
                ++pos_;
                continue;
            }
            if (c == q) {
                if (!triple) {
                    ++pos_;
                    closed = true;
                    break;
                }
                if (pos_ + 2 < s_.size() && s_[pos_ + 1] == q && s_[pos_ + 2] == q) {
                    pos_ += 3;
                    closed = true;
                    break;
                }
                ++pos_;
                continue;
            }
            ++pos_;
        }
        if (!closed) mark_dirty("unterminated string literal");
        push(std::string(s_.substr(start, pos_ - start)), TokenClass::Operand, tok_line, tok_depth);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int depth_ = 0;
    bool logical_open_ = false;
    std::string pending_indent_;
    PyLogicalLine cur_;
    TokenizeResult result_;
};

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.size() >= prefix.size() && s.compare(0, prefix.size(), prefix) == 0;
}

}  // namespace

TokenizeResult tokenize_python(std::string_view code) {
    return Lexer(code).run();
}

HalsteadMetrics halstead_from_tokens(const TokenizeResult& tokens) {
    std::map<std::string, std::size_t> ops, operands;
    for (const auto& line : tokens.lines) {
        for (const auto& t : line.tokens) {
            if (t.cls == TokenClass::Operator) ++ops[t.lexeme];
            else ++operands[t.lexeme];
        }
    }
    HalsteadMetrics h;
    h.distinct_operators = ops.size();
    h.distinct_operands = operands.size();
    for (const auto& [k, v] : ops) h.total_operators += v;
    for (const auto& [k, v] : operands) h.total_operands += v;
    h.vocabulary = h.distinct_operators + h.distinct_operands;
    h.length = h.total_operators + h.total_operands;
    h.volume = h.vocabulary >= 2
                   ? static_cast<double>(h.length) * std::log2(static_cast<double>(h.vocabulary))
                   : 0.0;
    h.difficulty = h.distinct_operands > 0
                       ? (static_cast<double>(h.distinct_operators) / 2.0) *
                             (static_cast<double>(h.total_operands) /
                              static_cast<double>(h.distinct_operands))
                       : 0.0;
    h.effort = h.difficulty * h.volume;
    h.bugs = h.volume / 3000.0;
    return h;
}

HalsteadMetrics halstead(std::string_view code) {
    return halstead_from_tokens(tokenize_python(code));
}

namespace {

struct ScopeFrame {
    bool is_func = false;
    std::string qual;
    long long decisions = 0;
    int block_index = -1;  // into CyclomaticResult::blocks, functions only
};

class CyclomaticParser {
public:
    explicit CyclomaticParser(const TokenizeResult& toks) : toks_(toks) {}

    CyclomaticResult run() {
        if (toks_.eof_open_brackets) return fail("unterminated bracket at end of file", 0);
        scopes_.push_back({false, "<module>", 0, -1});
        suites_.push_back({"", false});
        for (const auto& line : toks_.lines) {
            if (!handle_line(line)) return std::move(result_);
        }
        if (waiting_) return fail("expected an indented block at end of file", 0);
        while (suites_.size() > 1) pop_suite();
        if (module_has_statements_ || scopes_[0].decisions > 0) {
            result_.blocks.push_back({"<module>", 1 + scopes_[0].decisions});
        }
        finish();
        return std::move(result_);
    }

private:
    struct SuiteFrame {
        std::string indent;
        bool owns_scope = false;
    };

    CyclomaticResult fail(const std::string& msg, int line) {
        result_ = CyclomaticResult{};
        result_.ok = false;
        result_.error = line > 0 ? msg + " at line " + std::to_string(line) : msg;
        return result_;
    }

    void finish() {
        result_.ok = true;
        result_.total = 0;
        for (const auto& b : result_.blocks) result_.total += b.complexity;
        result_.average = result_.blocks.empty()
                              ? 0.0
                              : static_cast<double>(result_.total) /
                                    static_cast<double>(result_.blocks.size());
    }

    void close_scope() {
        ScopeFrame f = scopes_.back();
        scopes_.pop_back();
        if (f.is_func && f.block_index >= 0) {
            result_.blocks[static_cast<std::size_t>(f.block_index)].complexity =
                1 + f.decisions;
        }
    }

    void pop_suite() {
        if (suites_.back().owns_scope) close_scope();
        suites_.pop_back();
    }

    ScopeFrame& routing_frame() {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            if (it->is_func) return *it;
        }
        return scopes_[0];
    }

    bool handle_line(const PyLogicalLine& line) {
        const std::string& indent = line.indent;
        if (waiting_) {
            if (indent.size() > suites_.back().indent.size() &&
                starts_with(indent, suites_.back().indent)) {
                suites_.push_back({indent, pending_owns_scope_});
                waiting_ = false;
                pending_owns_scope_ = false;
            } else {
                fail("expected an indented block", line.line);
                return false;
            }
        } else if (indent != suites_.back().indent) {
            if (starts_with(indent, suites_.back().indent)) {
                fail("unexpected indent", line.line);
                return false;
            }
            while (suites_.size() > 1 && suites_.back().indent != indent) pop_suite();
            if (suites_.back().indent != indent) {
                fail("inconsistent dedent", line.line);
                return false;
            }
        }
        return handle_statement(line);
    }

    bool handle_statement(const PyLogicalLine& line) {
        const auto& toks = line.tokens;
        const bool head_async = toks[0].lexeme == "async" &&
                                toks[0].cls == TokenClass::Operator && toks.size() > 1;
        const std::string& eff = head_async ? toks[1].lexeme : toks[0].lexeme;
        const bool eff_is_op = (head_async ? toks[1].cls : toks[0].cls) == TokenClass::Operator;

        static const std::set<std::string> compound = {"if",    "elif",  "else",
                                                       "for",   "while", "try",
                                                       "except", "finally", "with",
                                                       "def",   "class"};
        const bool is_compound = eff_is_op && compound.count(eff) > 0;
        const bool is_def = eff_is_op && eff == "def";
        const bool is_class = eff_is_op && eff == "class";

        int colon = -1;
        for (int t = static_cast<int>(toks.size()) - 1; t >= 0; --t) {
            if (toks[static_cast<std::size_t>(t)].cls == TokenClass::Operator &&
                toks[static_cast<std::size_t>(t)].lexeme == ":" &&
                toks[static_cast<std::size_t>(t)].depth == 0) {
                colon = t;
                break;
            }
        }
        if (is_compound && colon < 0) {
            fail("compound statement header without ':'", line.line);
            return false;
        }
        const bool opens_suite = colon >= 0 && colon == static_cast<int>(toks.size()) - 1;

        long long d = 0;
        for (std::size_t t = 0; t < toks.size(); ++t) {
            if (toks[t].cls != TokenClass::Operator) continue;
            const std::string& lx = toks[t].lexeme;
            const bool at_head = t == 0 || (t == 1 && head_async);
            if (lx == "if" || lx == "elif") ++d;
            else if (lx == "and" || lx == "or") ++d;
            else if ((lx == "for" || lx == "while") && at_head) ++d;
            else if (lx == "except" && at_head) ++d;
        }

        if (is_def) {
            const std::size_t name_idx = head_async ? 2 : 1;
            if (name_idx >= toks.size() || toks[name_idx].cls != TokenClass::Operand ||
                toks[name_idx].lexeme.empty() ||
                !is_ident_start(static_cast<unsigned char>(toks[name_idx].lexeme[0]))) {
                fail("malformed def header", line.line);
                return false;
            }
            const std::string& parent = scopes_.back().qual;
            std::string qual = parent == "<module>" ? toks[name_idx].lexeme
                                                    : parent + "." + toks[name_idx].lexeme;
            ScopeFrame f{true, qual, d, static_cast<int>(result_.blocks.size())};
            result_.blocks.push_back({qual, 0});
            scopes_.push_back(f);
            if (opens_suite) {
                waiting_ = true;
                pending_owns_scope_ = true;
            } else {
                close_scope();  // inline body: "def f(): return 1"
            }
            return true;
        }

        if (is_class) {
            routing_frame().decisions += d;  // header expressions run in the parent scope
            const std::size_t name_idx = 1;
            if (name_idx >= toks.size() || toks[name_idx].cls != TokenClass::Operand ||
                toks[name_idx].lexeme.empty() ||
                !is_ident_start(static_cast<unsigned char>(toks[name_idx].lexeme[0]))) {
                fail("malformed class header", line.line);
                return false;
            }
            const std::string& parent = scopes_.back().qual;
            std::string qual = parent == "<module>" ? toks[name_idx].lexeme
                                                    : parent + "." + toks[name_idx].lexeme;
            scopes_.push_back({false, qual, 0, -1});
            if (opens_suite) {
                waiting_ = true;
                pending_owns_scope_ = true;
            } else {
                close_scope();
            }
            return true;
        }

        routing_frame().decisions += d;
        if (suites_.size() == 1 && toks[0].lexeme != "@") module_has_statements_ = true;
        if (opens_suite) {
            waiting_ = true;
            pending_owns_scope_ = false;
        }
        return true;
    }

    const TokenizeResult& toks_;
    CyclomaticResult result_;
    std::vector<ScopeFrame> scopes_;
    std::vector<SuiteFrame> suites_;
    bool waiting_ = false;
    bool pending_owns_scope_ = false;
    bool module_has_statements_ = false;
};

}  // namespace

CyclomaticResult cyclomatic_from_tokens(const TokenizeResult& tokens) {
    return CyclomaticParser(tokens).run();
}

CyclomaticResult cyclomatic_complexity(std::string_view code) {
    return cyclomatic_from_tokens(tokenize_python(code));
}

StaticMetrics compute_static(std::string_view code) {
    StaticMetrics m;
    TokenizeResult toks = tokenize_python(code);
    CyclomaticResult cc = cyclomatic_from_tokens(toks);
    m.halstead = halstead_from_tokens(toks);
    if (cc.ok) {
        m.cyclomatic_avg = cc.average;
        m.cyclomatic_total = cc.total;
        m.blocks = cc.blocks;
    }
    m.analysis_clean = !toks.dirty && cc.ok;
    m.length_ratio = 1.0;
    m.provenance = Provenance::computed;
    return m;
}

StaticMetrics analyze_with_fallback(const DuplicateProgram& dup,
                                    const SourceSample& original,
                                    const StaticMetrics& original_metrics) {
    StaticMetrics m;
    TokenizeResult toks = tokenize_python(dup.content);
    CyclomaticResult cc = cyclomatic_from_tokens(toks);
    if (toks.dirty || !cc.ok) {
        m = original_metrics;
        m.provenance = Provenance::inherited_from_original;
        m.analysis_clean = false;
    } else {
        m.halstead = halstead_from_tokens(toks);
        m.cyclomatic_avg = cc.average;
        m.cyclomatic_total = cc.total;
        m.blocks = cc.blocks;
        m.provenance = Provenance::computed;
        m.analysis_clean = true;
    }
    auto n = utf8::count_scalars(dup.content);
    m.length_ratio = (original.char_count > 0 && n.has_value())
                         ? static_cast<double>(*n) / static_cast<double>(original.char_count)
                         : 0.0;
    return m;
}

const char* provenance_name(Provenance p) {
    return p == Provenance::computed ? "computed" : "inherited_from_original";
}

}  // namespace ccbench
