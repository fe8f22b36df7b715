#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace ccbench::utf8 {

struct DecodeResult {
    std::u32string text;
    bool valid = false;
    std::size_t error_offset = 0;  // byte offset of the first invalid sequence
};

// Strict UTF-8 decode: rejects overlong forms, surrogates, and values
// above U+10FFFF. On failure, text holds everything before the defect.
DecodeResult decode(std::string_view bytes);

std::string encode(std::u32string_view text);

// Number of Unicode scalar values, or nullopt for invalid UTF-8.
std::optional<std::size_t> count_scalars(std::string_view bytes);

// Byte offset just past the first n scalar values (clamped to the end).
// Input must be valid UTF-8.
std::size_t byte_offset_of_scalar(std::string_view bytes, std::size_t n);

}  // namespace ccbench::utf8
