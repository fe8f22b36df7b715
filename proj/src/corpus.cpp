#include "ccbench/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ccbench/csvutil.hpp"
#include "ccbench/digest.hpp"
#include "ccbench/utf8.hpp"

namespace ccbench {

namespace {

bool has_extension(const std::string& name, const std::string& ext) {
    if (ext.empty()) return true;
    if (name.size() < ext.size()) return false;
    return name.compare(name.size() - ext.size(), ext.size(), ext) == 0;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::string categorize(const std::string& id, std::size_t category_depth) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : id) {
        if (c == '/') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);  // last component is the file name
    // parts.size() - 1 directory components are available
    if (category_depth == 0 || parts.size() <= category_depth) return "uncategorized";
    return parts[category_depth - 1];
}

ScanResult scan_corpus(const CorpusConfig& config) {
    namespace fs = std::filesystem;
    if (!fs::exists(config.root) || !fs::is_directory(config.root)) {
        throw std::runtime_error("corpus root does not exist: " + config.root.string());
    }
    ScanResult result;
    for (const auto& entry : fs::recursive_directory_iterator(config.root)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (!has_extension(name, config.include_extension)) continue;
        std::string content = read_file(entry.path());
        auto count = utf8::count_scalars(content);
        if (!count.has_value()) {
            ++result.skipped_invalid_utf8;
            continue;
        }
        if (*count < config.min_chars ||
            (config.max_chars > 0 && *count > config.max_chars)) {
            ++result.skipped_size;
            continue;
        }
        SourceSample sample;
        sample.id = fs::relative(entry.path(), config.root).generic_string();
        sample.category = categorize(sample.id, config.category_depth);
        sample.content = std::move(content);
        sample.char_count = *count;
        result.samples.push_back(std::move(sample));
    }
    if (result.samples.empty()) {
        throw std::runtime_error("corpus is empty: no file under " + config.root.string() +
                                 " matches extension '" + config.include_extension +
                                 "' and the size filters");
    }
    std::sort(result.samples.begin(), result.samples.end(),
              [](const SourceSample& a, const SourceSample& b) { return a.id < b.id; });
    return result;
}

std::string corpus_digest(const std::vector<SourceSample>& samples) {
    std::string stream;
    for (const auto& s : samples) {
        stream += s.id;
        stream.push_back('\n');
        stream += s.content;
        stream.push_back('\0');
    }
    return sha256_hex(stream);
}

void write_manifest(const std::vector<SourceSample>& samples,
                    const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest: " + path.string());
    out << "id,category,char_count\n";
    for (const auto& s : samples) {
        out << csv::escape(s.id) << ',' << csv::escape(s.category) << ','
            << s.char_count << '\n';
    }
}

}  // namespace ccbench
