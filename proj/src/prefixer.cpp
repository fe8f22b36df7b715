#include "ccbench/prefixer.hpp"

#include <stdexcept>

#include "ccbench/utf8.hpp"

namespace ccbench {

std::size_t prefix_boundary(std::size_t char_count, int ratio_tenths) {
    if (ratio_tenths < 1 || ratio_tenths > 9) {
        throw std::runtime_error("ratio out of range: " + std::to_string(ratio_tenths) + "/10");
    }
    return char_count * static_cast<std::size_t>(ratio_tenths) / 10;
}

PrefixGenResult generate_prefix_cases(const SourceSample& sample,
                                      const std::vector<int>& ratio_tenths) {
    PrefixGenResult result;
    if (sample.char_count < 10) {
        result.too_short = true;
        return result;
    }
    result.cases.reserve(ratio_tenths.size());
    for (int rt : ratio_tenths) {
        PrefixCase pc;
        pc.sample_id = sample.id;
        pc.ratio_tenths = rt;
        pc.boundary = prefix_boundary(sample.char_count, rt);
        std::size_t byte_end = utf8::byte_offset_of_scalar(sample.content, pc.boundary);
        pc.prefix = sample.content.substr(0, byte_end);
        result.cases.push_back(std::move(pc));
    }
    return result;
}

std::string original_remainder(const SourceSample& sample, const PrefixCase& pc) {
    std::size_t byte_start = utf8::byte_offset_of_scalar(sample.content, pc.boundary);
    return sample.content.substr(byte_start);
}

DuplicateProgram merge_completion(const PrefixCase& pc, const std::string& completion) {
    DuplicateProgram dup;
    dup.sample_id = pc.sample_id;
    dup.ratio_tenths = pc.ratio_tenths;
    dup.content = pc.prefix + completion;
    dup.generated = completion;
    return dup;
}

}  // namespace ccbench
