#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace ccbench {

struct SourceSample {
    std::string id;        // path relative to the corpus root, '/' separated
    std::string category;  // directory component at category_depth, or "uncategorized"
    std::string content;   // UTF-8 file content
    std::size_t char_count = 0;  // Unicode scalar values, not bytes
};

struct CorpusConfig {
    std::filesystem::path root;
    std::string include_extension = ".py";
    std::size_t min_chars = 1;
    std::size_t max_chars = 0;  // 0 means unlimited
    std::size_t category_depth = 1;
};

struct ScanResult {
    std::vector<SourceSample> samples;  // sorted by id
    std::size_t skipped_invalid_utf8 = 0;
    std::size_t skipped_size = 0;
};

// Walks the corpus tree and loads every matching file. Throws
// std::runtime_error when the root is missing or no file qualifies.
ScanResult scan_corpus(const CorpusConfig& config);

// Category of a relative id under the given depth.
std::string categorize(const std::string& id, std::size_t category_depth);

// SHA-256 over the ordered (id, content) stream; identifies the corpus
// snapshot in reports.
std::string corpus_digest(const std::vector<SourceSample>& samples);

// Writes "id,category,char_count" rows sorted by id.
void write_manifest(const std::vector<SourceSample>& samples,
                    const std::filesystem::path& path);

}  // namespace ccbench
