#include "ccbench/utf8.hpp"

namespace ccbench::utf8 {

namespace {

// Decodes one scalar starting at pos. Returns false on malformed input.
bool decode_one(std::string_view s, std::size_t pos, char32_t& out, std::size_t& len) {
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    unsigned char b0 = byte(pos);
    if (b0 < 0x80) {
        out = b0;
        len = 1;
        return true;
    }
    if (b0 < 0xC2) return false;  // continuation byte or overlong 2-byte lead
    std::size_t need;
    char32_t cp;
    if (b0 < 0xE0) {
        need = 1;
        cp = b0 & 0x1F;
    } else if (b0 < 0xF0) {
        need = 2;
        cp = b0 & 0x0F;
    } else if (b0 < 0xF5) {
        need = 3;
        cp = b0 & 0x07;
    } else {
        return false;
    }
    if (pos + need >= s.size()) return false;  // truncated sequence
    for (std::size_t i = 1; i <= need; ++i) {
        unsigned char bc = byte(pos + i);
        if ((bc & 0xC0) != 0x80) return false;
        cp = (cp << 6) | (bc & 0x3F);
    }
    // Overlong, surrogate and range checks.
    if (need == 2 && cp < 0x800) return false;
    if (need == 3 && cp < 0x10000) return false;
    if (cp >= 0xD800 && cp <= 0xDFFF) return false;
    if (cp > 0x10FFFF) return false;
    out = cp;
    len = need + 1;
    return true;
}

}  // namespace

DecodeResult decode(std::string_view bytes) {
    DecodeResult r;
    r.text.reserve(bytes.size());
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        char32_t cp = 0;
        std::size_t len = 0;
        if (!decode_one(bytes, pos, cp, len)) {
            r.valid = false;
            r.error_offset = pos;
            return r;
        }
        r.text.push_back(cp);
        pos += len;
    }
    r.valid = true;
    r.error_offset = bytes.size();
    return r;
}

std::string encode(std::u32string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t cp : text) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

std::optional<std::size_t> count_scalars(std::string_view bytes) {
    std::size_t count = 0;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        char32_t cp = 0;
        std::size_t len = 0;
        if (!decode_one(bytes, pos, cp, len)) return std::nullopt;
        ++count;
        pos += len;
    }
    return count;
}

std::size_t byte_offset_of_scalar(std::string_view bytes, std::size_t n) {
    std::size_t count = 0;
    std::size_t pos = 0;
    while (pos < bytes.size() && count < n) {
        char32_t cp = 0;
        std::size_t len = 0;
        if (!decode_one(bytes, pos, cp, len)) return pos;
        ++count;
        pos += len;
    }
    return pos;
}

}  // namespace ccbench::utf8
